#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace entrolab {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchemaVersion = "1";

/// Requested capability does not exist for the given map (e.g. homology of a
/// planar map). The CLI maps this to its own exit code.
class unavailable_error : public std::runtime_error {
public:
    explicit unavailable_error(const std::string& what) : std::runtime_error(what) {}
};

/// An orbit left the domain box of a planar map and cannot be iterated further.
class escape_error : public std::runtime_error {
public:
    explicit escape_error(const std::string& what) : std::runtime_error(what) {}
};

// Reduce to [0,1). floor() can round the result up to exactly 1.0 when the
// input is a tiny negative number, so guard that case.
inline double wrap01(double t) {
    double r = t - std::floor(t);
    if (r >= 1.0) r -= 1.0;
    if (r < 0.0) r += 1.0;
    return r;
}

// Distance between two angles on the unit circle R/Z.
inline double circle_dist(double a, double b) {
    double d = std::fabs(a - b);
    return d <= 0.5 ? d : 1.0 - d;
}

/// Deterministic, implementation-independent uniform doubles in [0,1).
/// std::uniform_real_distribution is not pinned down by the standard, so we
/// draw the 53-bit mantissa ourselves.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    double next() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_u64() {
        // splitmix64: tiny, seedable, stable across platforms
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) {
        return n ? next_u64() % n : 0;
    }

private:
    std::uint64_t state_;
};

}  // namespace entrolab
