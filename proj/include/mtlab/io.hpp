#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mtlab {

// Fixed 17-significant-digit float formatting; reruns must produce
// byte-identical artifacts, so all CSV floats go through this.
std::string fmt_g17(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string csv_to_string(const CsvTable& table);
void write_file(const std::filesystem::path& path, const std::string& content);
CsvTable read_csv(const std::filesystem::path& path);

// FNV-1a over the canonical config dump; keys runs to their configuration.
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

}  // namespace mtlab
