#pragma once

// Deterministic parallel helpers: work is split by index into contiguous
// chunks and every reduction happens in index order, so results are identical
// for any worker count.

#include <thread>
#include <vector>

namespace entrolab {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

template <typename Fn>
void parallel_chunks(size_t count, int workers, Fn&& fn) {
    workers = resolve_workers(workers);
    if (workers <= 1 || count < 2) {
        fn(static_cast<size_t>(0), count);
        return;
    }
    size_t nw = std::min<size_t>(static_cast<size_t>(workers), count);
    std::vector<std::thread> threads;
    threads.reserve(nw);
    size_t base = count / nw, rem = count % nw, lo = 0;
    for (size_t w = 0; w < nw; ++w) {
        size_t len = base + (w < rem ? 1 : 0);
        threads.emplace_back([&fn, lo, len] { fn(lo, lo + len); });
        lo += len;
    }
    for (auto& t : threads) t.join();
}

/// Apply fn to every index and collect results positionally.
template <typename T, typename Fn>
std::vector<T> parallel_map(size_t count, int workers, Fn&& fn) {
    std::vector<T> out(count);
    parallel_chunks(count, workers, [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) out[i] = fn(i);
    });
    return out;
}

}  // namespace entrolab
