// SPDX-License-Identifier: Apache-2.0

#include "fplab/csv.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "fplab/errors.hpp"

namespace fplab {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format_index(std::size_t v) {
    return std::to_string(v);
}

std::string format_u64(std::uint64_t v) {
    return std::to_string(v);
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c > 0) out += ',';
        out += header[c];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += ',';
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& bytes) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) {
            throw config_error("cannot create directory '" + p.parent_path().string() +
                               "': " + ec.message());
        }
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw config_error("cannot open '" + path + "' for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw config_error("write to '" + path + "' failed");
    }
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace fplab
