#pragma once

#include "zndstab/evans_value.hpp"
#include "zndstab/io.hpp"
#include "zndstab/profile.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace zcli {

using json = znd::io::json;
using znd::cplx;

// JSON run configuration. Every value read goes into resolved(), defaults included, so the
// manifest echo reproduces the run. Keys never read are rejected by check_unknown().
class Config {
public:
    Config() : raw_(json::object()) {}
    explicit Config(json raw);
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& block, const std::string& key) const;
    bool has_block(const std::string& block) const;

    double number(const std::string& block, const std::string& key, double def);
    double positive(const std::string& block, const std::string& key, double def);
    int integer(const std::string& block, const std::string& key, int def, int min = 0);
    bool flag(const std::string& block, const std::string& key, bool def);
    std::string text(const std::string& block, const std::string& key, const std::string& def);
    std::vector<double> numbers(const std::string& block, const std::string& key, const std::vector<double>& def);
    // [[re, im], ...]
    std::vector<cplx> complexes(const std::string& block, const std::string& key, const std::vector<cplx>& def);
    cplx complex(const std::string& block, const std::string& key, cplx def);

    // Exactly one of the "params" and "classical" blocks.
    znd::ChemParams chem_params();

    void check_unknown() const;
    const json& resolved() const { return resolved_; }

private:
    const json* find(const std::string& block, const std::string& key) const;
    void record(const std::string& block, const std::string& key, const json& v);

    json raw_;
    json resolved_ = json::object();
    std::set<std::string> used_;
};

}  // namespace zcli
