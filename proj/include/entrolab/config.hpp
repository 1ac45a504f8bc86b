#pragma once

// Flat key = value experiment configs: diffable, seedable, typed. Keys carry
// units in their names (epsilon_schedule is in metric units, *_iterates are
// iterate counts). Unknown keys are config errors so typos cannot silently
// change an experiment.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace entrolab {

class config_error : public std::runtime_error {
public:
    config_error(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class ConfigFile {
public:
    static ConfigFile parse(const std::string& text) {
        ConfigFile cfg;
        std::istringstream in(text);
        std::string raw;
        int lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            std::string line = raw;
            size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error("expected 'key = value'", lineno);
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw config_error("empty key", lineno);
            if (cfg.entries_.count(key)) throw config_error("duplicate key '" + key + "'", lineno);
            cfg.entries_[key] = {value, lineno};
            cfg.order_.push_back(key);
        }
        return cfg;
    }

    static ConfigFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string get_string(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw config_error("missing required key '" + key + "'");
        touched_.insert(key);
        return it->second.value;
    }

    std::string get_string_or(const std::string& key, const std::string& dflt) const {
        if (!has(key)) return dflt;
        return get_string(key);
    }

    double get_double(const std::string& key) const {
        return parse_double(get_string(key), key, line_of(key));
    }
    double get_double_or(const std::string& key, double dflt) const {
        return has(key) ? get_double(key) : dflt;
    }

    long long get_int(const std::string& key) const {
        const std::string s = get_string(key);
        try {
            size_t pos = 0;
            long long v = std::stoll(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw config_error("key '" + key + "' is not an integer: '" + s + "'", line_of(key));
        }
    }
    long long get_int_or(const std::string& key, long long dflt) const {
        return has(key) ? get_int(key) : dflt;
    }

    std::vector<double> get_double_list(const std::string& key) const {
        std::istringstream in(get_string(key));
        std::vector<double> out;
        std::string tok;
        while (in >> tok) out.push_back(parse_double(tok, key, line_of(key)));
        if (out.empty())
            throw config_error("key '" + key + "' needs at least one value", line_of(key));
        return out;
    }

    std::vector<long long> get_int_list(const std::string& key) const {
        std::istringstream in(get_string(key));
        std::vector<long long> out;
        std::string tok;
        while (in >> tok) {
            try {
                size_t pos = 0;
                long long v = std::stoll(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument("");
                out.push_back(v);
            } catch (...) {
                throw config_error("key '" + key + "' has a non-integer entry: '" + tok + "'",
                                   line_of(key));
            }
        }
        if (out.empty())
            throw config_error("key '" + key + "' needs at least one value", line_of(key));
        return out;
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    /// Call after reading everything an experiment understands: any key never
    /// touched is unknown and rejected with its line number.
    void reject_unknown_keys() const {
        for (const auto& key : order_)
            if (!touched_.count(key))
                throw config_error("unknown key '" + key + "'", line_of(key));
    }

    const std::vector<std::string>& keys_in_order() const { return order_; }
    std::string raw_value(const std::string& key) const { return entries_.at(key).value; }

private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static std::string trim(const std::string& s) {
        size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return s.substr(a, b - a);
    }

    static double parse_double(const std::string& s, const std::string& key, int line) {
        try {
            size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw config_error("key '" + key + "' is not a number: '" + s + "'", line);
        }
    }

    std::map<std::string, Entry> entries_;
    std::vector<std::string> order_;
    mutable std::set<std::string> touched_;
};

}  // namespace entrolab
