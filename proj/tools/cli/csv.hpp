#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "lindblad_kit/errors.hpp"

namespace lk::cli {

// Round-trippable formatting: 17 significant digits, '.' decimal separator.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_bool(bool v) { return v ? "1" : "0"; }

// Comma-separated, header row, LF line endings.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path)
        : out_(path, std::ios::binary) {
        if (!out_) throw Error("cannot open output file " + path);
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path);
    out << text;
}

}  // namespace lk::cli
