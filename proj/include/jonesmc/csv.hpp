#pragma once

// Deterministic CSV emission: '#'-prefixed metadata header (config hash,
// seed, version), then one header row and data rows.  Number formatting is
// fixed so reruns are byte-identical.

#include <cinttypes>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace jonesmc {

inline constexpr const char* kVersion = "1.0.0";

class CsvWriter {
public:
    void meta(const std::string& key, const std::string& value) {
        body_ += "# " + key + "=" + value + "\n";
    }
    void meta_u64(const std::string& key, uint64_t value) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%" PRIu64, value);
        meta(key, buf);
    }
    void meta_hash(const std::string& key, uint64_t value) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016" PRIx64, value);
        meta(key, buf);
    }

    void header(const std::vector<std::string>& cols) { row_strings(cols); }

    void row_strings(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) body_ += ',';
            body_ += cells[i];
        }
        body_ += '\n';
    }

    static std::string num(double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }
    static std::string num(size_t x) { return std::to_string(x); }
    static std::string num(int x) { return std::to_string(x); }

    const std::string& str() const { return body_; }

    void write_file(const std::string& path) const {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        if (!f) throw std::runtime_error("cannot open output file " + path);
        std::fwrite(body_.data(), 1, body_.size(), f);
        std::fclose(f);
    }

private:
    std::string body_;
};

} // namespace jonesmc
