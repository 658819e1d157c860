#include "config.hpp"

#include "zndstab/errors.hpp"

#include <cmath>

namespace zcli {

using znd::DomainError;

namespace {

std::string where(const std::string& block, const std::string& key)
{
    return block.empty() ? key : block + "." + key;
}

}  // namespace

Config::Config(json raw) : raw_(std::move(raw))
{
    if (!raw_.is_object()) throw DomainError("config must be a JSON object");
    for (auto it = raw_.begin(); it != raw_.end(); ++it)
        if (it.value().is_object() && it.value().empty()) used_.insert(it.key());
}

Config Config::load(const std::filesystem::path& path)
{
    return Config(znd::io::read_json(path));
}

bool Config::has_block(const std::string& block) const
{
    return raw_.contains(block) && raw_[block].is_object();
}

const json* Config::find(const std::string& block, const std::string& key) const
{
    if (block.empty()) return raw_.contains(key) ? &raw_[key] : nullptr;
    if (!raw_.contains(block)) return nullptr;
    const json& b = raw_[block];
    if (!b.is_object()) throw DomainError("config block '" + block + "' must be an object");
    return b.contains(key) ? &b[key] : nullptr;
}

bool Config::has(const std::string& block, const std::string& key) const { return find(block, key) != nullptr; }

void Config::record(const std::string& block, const std::string& key, const json& v)
{
    used_.insert(where(block, key));
    if (block.empty()) resolved_[key] = v;
    else resolved_[block][key] = v;
}

double Config::number(const std::string& block, const std::string& key, double def)
{
    double v = def;
    if (const json* j = find(block, key)) {
        if (!j->is_number()) throw DomainError(where(block, key) + " must be a number");
        v = j->get<double>();
    }
    if (!std::isfinite(v)) throw DomainError(where(block, key) + " must be finite");
    record(block, key, v);
    return v;
}

double Config::positive(const std::string& block, const std::string& key, double def)
{
    const double v = number(block, key, def);
    if (!(v > 0.0)) throw DomainError(where(block, key) + " must be positive");
    return v;
}

int Config::integer(const std::string& block, const std::string& key, int def, int min)
{
    int v = def;
    if (const json* j = find(block, key)) {
        if (!j->is_number_integer()) throw DomainError(where(block, key) + " must be an integer");
        v = j->get<int>();
    }
    if (v < min) throw DomainError(where(block, key) + " must be at least " + std::to_string(min));
    record(block, key, v);
    return v;
}

bool Config::flag(const std::string& block, const std::string& key, bool def)
{
    bool v = def;
    if (const json* j = find(block, key)) {
        if (!j->is_boolean()) throw DomainError(where(block, key) + " must be true or false");
        v = j->get<bool>();
    }
    record(block, key, v);
    return v;
}

std::string Config::text(const std::string& block, const std::string& key, const std::string& def)
{
    std::string v = def;
    if (const json* j = find(block, key)) {
        if (!j->is_string()) throw DomainError(where(block, key) + " must be a string");
        v = j->get<std::string>();
    }
    record(block, key, v);
    return v;
}

std::vector<double> Config::numbers(const std::string& block, const std::string& key, const std::vector<double>& def)
{
    std::vector<double> v = def;
    if (const json* j = find(block, key)) {
        if (!j->is_array()) throw DomainError(where(block, key) + " must be an array of numbers");
        v.clear();
        for (const auto& e : *j) {
            if (!e.is_number()) throw DomainError(where(block, key) + " must be an array of numbers");
            v.push_back(e.get<double>());
        }
    }
    for (double x : v)
        if (!std::isfinite(x)) throw DomainError(where(block, key) + " entries must be finite");
    record(block, key, v);
    return v;
}

std::vector<cplx> Config::complexes(const std::string& block, const std::string& key, const std::vector<cplx>& def)
{
    std::vector<cplx> v = def;
    if (const json* j = find(block, key)) {
        if (!j->is_array()) throw DomainError(where(block, key) + " must be an array of [re, im] pairs");
        v.clear();
        for (const auto& e : *j) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw DomainError(where(block, key) + " must be an array of [re, im] pairs");
            v.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
    }
    json out = json::array();
    for (const cplx& z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError(where(block, key) + " entries must be finite");
        out.push_back({z.real(), z.imag()});
    }
    used_.insert(where(block, key));
    if (block.empty()) resolved_[key] = out;
    else resolved_[block][key] = out;
    return v;
}

cplx Config::complex(const std::string& block, const std::string& key, cplx def)
{
    cplx v = def;
    if (const json* j = find(block, key)) {
        if (!j->is_array() || j->size() != 2 || !(*j)[0].is_number() || !(*j)[1].is_number())
            throw DomainError(where(block, key) + " must be [re, im]");
        v = {(*j)[0].get<double>(), (*j)[1].get<double>()};
    }
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError(where(block, key) + " must be finite");
    used_.insert(where(block, key));
    if (block.empty()) resolved_[key] = {v.real(), v.imag()};
    else resolved_[block][key] = {v.real(), v.imag()};
    return v;
}

znd::ChemParams Config::chem_params()
{
    const bool a = has_block("params"), b = has_block("classical");
    if (a == b) throw DomainError("config needs exactly one of the 'params' and 'classical' blocks");
    znd::ChemParams p;
    if (a) {
        p.gamma = positive("params", "gamma", 0.2);
        p.e_plus = number("params", "e_plus", 0.0);
        p.heat_release = number("params", "heat_release", 0.0);
        p.activation = number("params", "activation", 0.0);
        p.rate = positive("params", "rate", 1.0);
        p.specific_heat = positive("params", "specific_heat", 1.0);
    } else {
        znd::ScalingClassical c;
        c.overdrive = positive("classical", "overdrive", 1.0);
        c.activation_classical = number("classical", "activation_classical", 0.0);
        c.heat_classical = number("classical", "heat_classical", 0.0);
        c.gamma = positive("classical", "gamma", 0.2);
        c.validate();
        p = znd::from_classical_scaling(c, positive("classical", "rate", 1.0), positive("classical", "specific_heat", 1.0));
    }
    p.validate();
    return p;
}

void Config::check_unknown() const
{
    // A shared config may carry blocks for other subcommands. Those are skipped when this run
    // read nothing from them; anything else that was never read is a typo.
    static const std::set<std::string> blocks = {"params", "classical", "evans",   "evans1d", "roots", "verdict",
                                                 "boundary", "evans2d", "hifreq", "oscint",  "riccati"};
    static const std::set<std::string> scalars = {"z_min", "grid_points", "unit_half_length"};
    std::string bad;
    for (auto it = raw_.begin(); it != raw_.end(); ++it) {
        const std::string& k = it.key();
        if (it.value().is_object() && blocks.count(k)) {
            bool touched = false;
            for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
                touched = touched || used_.count(k + "." + jt.key());
            if (!touched) continue;
            for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
                if (!used_.count(k + "." + jt.key())) bad += " " + k + "." + jt.key();
        } else if (!used_.count(k) && !scalars.count(k)) {
            bad += " " + k;
        }
    }
    if (!bad.empty()) throw DomainError("unknown config keys:" + bad);
}

}  // namespace zcli
