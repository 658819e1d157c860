#pragma once

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace znd::io {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

// 17 significant digits; nan, inf, -inf spelled out.
std::string format_double(double v);

// Comma separated, header row, LF endings.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);
    void close();
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // throws DomainError when missing
    std::vector<double> numbers(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

// Keys sorted (nlohmann's default object map), 2-space indent, trailing newline.
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct OutputRecord {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string subcommand;
    std::string status = "ok";  // ok, warn, error
    json config = json::object();
    json counts = json::object();
    std::vector<std::string> warnings;
    double wall_time = 0.0;
    int threads = 1;
    std::vector<OutputRecord> outputs;

    // Hashes the file (path relative to dir) and records it.
    void add_output(const std::filesystem::path& dir, const std::string& relative);
    json to_json() const;
};

// Writes manifest.json into dir; the manifest does not list itself.
void write_manifest(const std::filesystem::path& dir, const RunManifest& m);

}  // namespace znd::io
