#pragma once

// Internal CSV helpers shared by the loaders and writers. Comma-separated,
// header row, no quoting (none of the supported formats needs it).

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "exhawkes/errors.hpp"

namespace exhawkes::csv {

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open file: " + path.string());
    return in;
}

/// Writes through a temp file and renames so readers never see partial output.
class AtomicWriter {
public:
    explicit AtomicWriter(const std::filesystem::path& path)
        : target_(path), temp_(path.string() + ".tmp"), out_(temp_, std::ios::trunc) {
        if (!out_) throw data_error("cannot write file: " + path.string());
    }
    std::ofstream& stream() { return out_; }
    void commit() {
        out_.flush();
        if (!out_) throw data_error("write failed: " + target_.string());
        out_.close();
        std::filesystem::rename(temp_, target_);
        committed_ = true;
    }
    ~AtomicWriter() {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            std::filesystem::remove(temp_, ec);
        }
    }

private:
    std::filesystem::path target_;
    std::filesystem::path temp_;
    std::ofstream out_;
    bool committed_ = false;
};

} // namespace exhawkes::csv
