// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fplab {

// Locale-independent decimal rendering with 17 significant digits, enough
// to round-trip any double exactly. All CSV and summary numbers go
// through this so output bytes depend only on the computed values.
std::string format_double(double v);
std::string format_index(std::size_t v);
std::string format_u64(std::uint64_t v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const;
};

// Writes bytes to path, creating parent directories. Throws config_error
// on I/O failure.
void write_file(const std::string& path, const std::string& bytes);

// FNV-1a 64-bit digest as fixed-width hex; used to fingerprint config
// bytes in summaries and manifests.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace fplab
