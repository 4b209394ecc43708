#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "gamow/error.hpp"

namespace gamow {

/// 17 significant digits, so a value survives a text round trip unchanged.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Comma-separated writer with a fixed header and LF line endings.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
        : out_(path, std::ios::binary), columns_(header.size()) {
        if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
        write_row(header);
    }

    void row(std::initializer_list<double> values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format_number(v));
        write_row(cells);
    }

    void write_row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_) throw DomainError("csv row width differs from header");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace gamow
