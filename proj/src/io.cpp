#include "zndstab/io.hpp"

#include "zndstab/errors.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <memory>
#include <sstream>

namespace znd::io {

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size())
{
    if (!out_) throw DomainError("cannot open " + path.string() + " for writing");
    row(header);
}

void CsvWriter::row(const std::vector<double>& values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_) throw DomainError("CSV row width does not match the header of " + path_.string());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].find_first_of(",\n\"") != std::string::npos)
            throw DomainError("CSV cell needs quoting, not supported: " + cells[i]);
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void CsvWriter::close()
{
    out_.close();
    if (out_.fail()) throw NumericalError("write failed for " + path_.string());
}

int CsvTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return int(i);
    throw DomainError("CSV column missing: " + name);
}

std::vector<double> CsvTable::numbers(const std::string& name) const
{
    const int c = column(name);
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(std::stod(r.at(c)));
    return v;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

void write_json(const std::filesystem::path& path, const json& j)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    out.close();
    if (out.fail()) throw NumericalError("write failed for " + path.string());
}

json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DomainError(path.string() + ": " + e.what());
    }
}

namespace {

void digest(const void* data, std::size_t n, EVP_MD_CTX* ctx)
{
    if (n && EVP_DigestUpdate(ctx, data, n) != 1) throw NumericalError("sha256 update failed");
}

std::string finish(EVP_MD_CTX* ctx)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx, md, &len) != 1) throw NumericalError("sha256 final failed");
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

using CtxPtr = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

CtxPtr new_ctx()
{
    CtxPtr ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw NumericalError("sha256 init failed");
    return ctx;
}

}  // namespace

std::string sha256_hex(const std::string& bytes)
{
    auto ctx = new_ctx();
    digest(bytes.data(), bytes.size(), ctx.get());
    return finish(ctx.get());
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path.string());
    auto ctx = new_ctx();
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), std::streamsize(buf.size()));
        digest(buf.data(), std::size_t(in.gcount()), ctx.get());
    }
    return finish(ctx.get());
}

void RunManifest::add_output(const std::filesystem::path& dir, const std::string& relative)
{
    const auto p = dir / relative;
    outputs.push_back({relative, sha256_file(p), std::filesystem::file_size(p)});
}

json RunManifest::to_json() const
{
    json j;
    j["subcommand"] = subcommand;
    j["status"] = status;
    j["tool"] = "zndstab";
    j["version"] = kVersion;
    j["config"] = config;
    j["counts"] = counts;
    j["warnings"] = warnings;
    j["wall_time_s"] = wall_time;
    j["threads"] = threads;
    json outs = json::array();
    for (const auto& o : outputs) outs.push_back({{"path", o.path}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    j["outputs"] = outs;
    return j;
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& m)
{
    write_json(dir / "manifest.json", m.to_json());
}

}  // namespace znd::io
