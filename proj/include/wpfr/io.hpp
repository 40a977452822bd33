#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wpfr/errors.hpp"

namespace wpfr {

// Exit codes shared by the CLI and the verification suites.
enum ExitCode {
    kExitOk = 0,
    kExitCheckFailure = 2,
    kExitInputError = 3,
    kExitNumericFailure = 4,
};

// Line-oriented `key = value` configuration. CLI flags override file values.
class Config {
public:
    void set(const std::string& key, const std::string& value) {
        values_[key] = value;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key,
                           const std::string& fallback = "") const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("trail");
            return v;
        } catch (const std::exception&) {
            throw domain_error("config: bad numeric value for '" + key + "': " +
                               it->second);
        }
    }

    long get_int(const std::string& key, long fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t used = 0;
            const long v = std::stol(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("trail");
            return v;
        } catch (const std::exception&) {
            throw domain_error("config: bad integer value for '" + key + "': " +
                               it->second);
        }
    }

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw domain_error("config: cannot open " + path);
        Config cfg;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto strip = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                if (a == std::string::npos) return std::string();
                const auto b = s.find_last_not_of(" \t\r");
                return s.substr(a, b - a + 1);
            };
            if (strip(line).empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw domain_error("config: " + path + ":" +
                                   std::to_string(lineno) + ": expected key = value");
            cfg.set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
        }
        return cfg;
    }

private:
    std::map<std::string, std::string> values_;
};

// CSV with a header row and '#'-prefixed metadata lines. Numeric formatting
// is fixed (%.17g) so identical runs produce byte-identical files.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void metadata(const std::string& line) { os_ << "# " << line << "\n"; }

    void header(const std::vector<std::string>& cols) {
        write_row_strings(cols);
    }

    void row(const std::vector<double>& vals) {
        bool first = true;
        for (double v : vals) {
            if (!first) os_ << ",";
            first = false;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os_ << buf;
        }
        os_ << "\n";
    }

    void mixed_row(const std::vector<std::string>& vals) {
        write_row_strings(vals);
    }

    static std::string num(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

private:
    void write_row_strings(const std::vector<std::string>& cols) {
        bool first = true;
        for (const auto& c : cols) {
            if (!first) os_ << ",";
            first = false;
            os_ << c;
        }
        os_ << "\n";
    }
    std::ostream& os_;
};

inline std::optional<std::string> env_volume_table_path() {
    const char* p = std::getenv("WPFR_VOLUME_TABLE");
    if (p == nullptr || *p == '\0') return std::nullopt;
    return std::string(p);
}

}  // namespace wpfr
