#include "zndstab/profile.hpp"

#include "zndstab/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace znd {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double integrate_gk(const auto& f, double a, double b, double tol)
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate(f, a, b, 10, tol);
}

// w = f e_plus solving Q0 w = q_cj(gamma, w).
double cj_scaled_energy(double gamma, double heat_classical)
{
    const double w_max = 1.0 / (gamma * (gamma + 1.0));
    auto h = [&](double w) { return q_cj(gamma, w) - heat_classical * w; };
    if (heat_classical == 0.0) return w_max;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(std::abs(a), 1e-300); };
    auto r = boost::math::tools::bisect(h, 0.0, w_max, tol);
    return 0.5 * (r.first + r.second);
}

}  // namespace

void ChemParams::validate() const
{
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive, got " + fmt(gamma));
    if (!(activation >= 0.0) || !std::isfinite(activation))
        throw DomainError("activation energy must be >= 0, got " + fmt(activation));
    if (!(heat_release >= 0.0) || !std::isfinite(heat_release))
        throw DomainError("heat release must be >= 0, got " + fmt(heat_release));
    if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("rate k must be positive, got " + fmt(rate));
    if (!(specific_heat > 0.0)) throw DomainError("specific heat must be positive, got " + fmt(specific_heat));
    if (speed != 1.0) throw DomainError("wave speed is fixed to 1 in this scaling");
    const double e_max = 1.0 / (gamma * (gamma + 1.0));
    if (!(e_plus >= 0.0) || e_plus > e_max)
        throw DomainError("e_plus must lie in [0, 1/(gamma(gamma+1))] = [0, " + fmt(e_max) + "], got " + fmt(e_plus));
    const double qmax = q_cj(gamma, e_plus);
    if (heat_release > qmax)
        throw DomainError("heat release q = " + fmt(heat_release) + " violates q <= q_cj = " + fmt(qmax));
}

void ScalingClassical::validate() const
{
    if (!(overdrive > 1.0)) throw DomainError("overdrive f must exceed 1, got " + fmt(overdrive));
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive, got " + fmt(gamma));
    if (!(activation_classical >= 0.0)) throw DomainError("classical activation must be >= 0");
    if (!(heat_classical >= 0.0)) throw DomainError("classical heat release must be >= 0");
}

double q_cj(double gamma, double e_plus)
{
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive, got " + fmt(gamma));
    const double e_max = 1.0 / (gamma * (gamma + 1.0));
    if (!(e_plus >= 0.0) || e_plus > e_max * (1.0 + 1e-15))
        throw DomainError("e_plus outside [0, 1/(gamma(gamma+1))]: " + fmt(e_plus));
    const double g1 = gamma + 1.0;
    const double a = gamma * e_plus + 1.0;
    const double num = g1 * g1 * a * a - gamma * (gamma + 2.0) * (1.0 + 2.0 * g1 * e_plus);
    return num / (2.0 * gamma * (gamma + 2.0));
}

GasState algebraic_state(double z, const ChemParams& params)
{
    if (!(z >= 0.0 && z <= 1.0)) throw DomainError("reaction progress z must lie in [0,1], got " + fmt(z));
    const double g = params.gamma;
    const double g1 = g + 1.0;
    const double a = g * params.e_plus + 1.0;
    const double lead = g1 * g1 * a * a;
    double disc = lead - g * (g + 2.0) * (1.0 + 2.0 * g1 * params.e_plus - 2.0 * params.heat_release * (z - 1.0));
    if (disc < 0.0) {
        if (disc < -64.0 * std::numeric_limits<double>::epsilon() * lead)
            throw DomainError("negative discriminant: heat release q = " + fmt(params.heat_release) +
                              " violates q <= q_cj = " + fmt(q_cj(g, params.e_plus)));
        disc = 0.0;
    }
    GasState s{};
    s.tau = (g1 * a - std::sqrt(disc)) / (g + 2.0);
    s.u = 1.0 - s.tau;
    s.e = s.tau * (a - s.tau) / g;
    return s;
}

double temperature(const GasState& g, const ChemParams& params) { return g.e / params.specific_heat; }

double ignition(const GasState& g, const ChemParams& params)
{
    if (params.activation == 0.0) return 1.0;
    return std::exp(-params.activation / temperature(g, params));
}

double reaction_rhs(double z, const ChemParams& params)
{
    const GasState g = algebraic_state(z, params);
    return params.rate * ignition(g, params) * z;
}

ProfilePoint profile_point(double z, double x, const ChemParams& params)
{
    const GasState g = algebraic_state(z, params);
    return {x, g.tau, g.u, g.e, z, params.gamma * g.e / g.tau, temperature(g, params)};
}

Vec4 lagrangian_state(const GasState& g, double z) { return {g.tau, g.u, g.e + 0.5 * g.u * g.u, z}; }

Vec4 lagrangian_flux(const Vec4& w, const ChemParams& params)
{
    const double tau = w[0], u = w[1], E = w[2], z = w[3];
    const double p = params.gamma * (E - 0.5 * u * u) / tau;
    const double s = params.speed;
    return {-u - s * tau, p - s * u, p * u - s * E, -s * z};
}

Vec4 lagrangian_source(const Vec4& w, const ChemParams& params)
{
    const double e = w[2] - 0.5 * w[1] * w[1];
    const double T = e / params.specific_heat;
    const double phi = params.activation == 0.0 ? 1.0 : std::exp(-params.activation / T);
    const double r = params.rate * phi * w[3];
    return {0.0, 0.0, params.heat_release * r, -r};
}

ZNDProfile::ZNDProfile(const ChemParams& params, double z_min, const GridControl& grid)
    : params_(params), z_min_(z_min), control_(grid)
{
    params_.validate();
    if (params_.heat_release >= q_cj(params_.gamma, params_.e_plus))
        throw DomainError("q = q_cj gives an algebraically decaying profile, which is not supported");
    if (!(z_min > 0.0 && z_min < 1.0)) throw DomainError("z_min must lie in (0,1), got " + fmt(z_min));
    if (grid.points < 2) throw DomainError("profile grid needs at least 2 points");

    const int n = grid.points;
    const double s0 = std::log(z_min);
    s_.resize(n);
    for (int i = 0; i < n; ++i) s_[i] = s0 * (1.0 - double(i) / double(n - 1));
    s_[n - 1] = 0.0;

    const ChemParams& p = params_;
    auto g = [&p](double s) { return 1.0 / reaction_rhs(std::exp(s), p) * std::exp(s); };

    std::vector<double> x(n, 0.0);
    for (int i = n - 2; i >= 0; --i) x[i] = x[i + 1] - integrate_gk(g, s_[i], s_[i + 1], control_.quad_tolerance);
    grid_.reserve(n);
    for (int i = 0; i < n; ++i) grid_.push_back(profile_point(i == n - 1 ? 1.0 : std::exp(s_[i]), x[i], p));

    neumann_ = grid_.back();
    const double ep = p.e_plus;
    quiescent_ = {0.0, 1.0, 0.0, ep, 1.0, p.gamma * ep, ep / p.specific_heat};
    half_length_ = -x_of_z(0.5);
}

double ZNDProfile::x_of_s_from(double s, std::size_t node) const
{
    const ChemParams& p = params_;
    auto g = [&p](double t) { return std::exp(t) / reaction_rhs(std::exp(t), p); };
    if (s == s_[node]) return grid_[node].x;
    const double d = integrate_gk(g, std::min(s, s_[node]), std::max(s, s_[node]), control_.quad_tolerance);
    return s < s_[node] ? grid_[node].x - d : grid_[node].x + d;
}

double ZNDProfile::x_of_z(double z) const
{
    if (!(z > 0.0 && z <= 1.0)) throw DomainError("x_of_z needs z in (0,1], got " + fmt(z));
    const double s = std::log(z);
    auto it = std::lower_bound(s_.begin(), s_.end(), s);
    std::size_t j = it == s_.end() ? s_.size() - 1 : std::size_t(it - s_.begin());
    return x_of_s_from(s, j);
}

double ZNDProfile::z_of_x(double x) const
{
    const double x0 = grid_.front().x;
    if (!(x <= 0.0 && x >= x0)) throw DomainError("z_of_x needs x in [" + fmt(x0) + ", 0], got " + fmt(x));
    auto it = std::lower_bound(grid_.begin(), grid_.end(), x, [](const ProfilePoint& a, double v) { return a.x < v; });
    std::size_t j = std::size_t(it - grid_.begin());
    if (j == 0) return grid_.front().z;
    const double xa = grid_[j - 1].x, xb = grid_[j].x;
    double lo = s_[j - 1], hi = s_[j];
    double s = lo + (hi - lo) * (x - xa) / (xb - xa);
    for (int it_n = 0; it_n < 60; ++it_n) {
        const double fx = x_of_s_from(s, j) - x;
        if (fx > 0.0) hi = s; else lo = s;
        if (std::abs(fx) <= 1e-15 * (1.0 + std::abs(x))) break;
        // dx/ds = 1 / (k phi)
        const double z = std::exp(s);
        double next = s - fx * reaction_rhs(z, params_) / z;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == s) break;
        s = next;
    }
    return std::exp(s);
}

Vec4 ZNDProfile::rankine_hugoniot_residual() const
{
    const GasState gm{neumann_.tau, neumann_.u, neumann_.e};
    const GasState gp{1.0, 0.0, params_.e_plus};
    const Vec4 fm = lagrangian_flux(lagrangian_state(gm, 1.0), params_);
    const Vec4 fp = lagrangian_flux(lagrangian_state(gp, 1.0), params_);
    return {fm[0] - fp[0], fm[1] - fp[1], fm[2] - fp[2], fm[3] - fp[3]};
}

ChemParams from_classical_scaling(const ScalingClassical& classical, double rate, double specific_heat)
{
    classical.validate();
    const double w = cj_scaled_energy(classical.gamma, classical.heat_classical);
    ChemParams p;
    p.gamma = classical.gamma;
    p.e_plus = w / classical.overdrive;
    p.activation = classical.activation_classical * p.e_plus;
    p.heat_release = classical.heat_classical * p.e_plus;
    p.rate = rate;
    p.specific_heat = specific_heat;
    p.validate();
    return p;
}

ScalingClassical to_classical_scaling(const ChemParams& params)
{
    params.validate();
    if (!(params.e_plus > 0.0)) throw DomainError("classical scaling needs e_plus > 0");
    ScalingClassical c;
    c.gamma = params.gamma;
    c.heat_classical = params.heat_release / params.e_plus;
    c.activation_classical = params.activation / params.e_plus;
    c.overdrive = cj_scaled_energy(params.gamma, c.heat_classical) / params.e_plus;
    if (!(c.overdrive > 1.0)) throw DomainError("parameters are at or beyond the CJ point, overdrive " + fmt(c.overdrive));
    return c;
}

ChemParams with_half_reaction_length(const ChemParams& params, double length)
{
    params.validate();
    if (!(length > 0.0)) throw DomainError("half-reaction length must be positive");
    ChemParams unit = params;
    unit.rate = 1.0;
    auto g = [&unit](double s) { return std::exp(s) / reaction_rhs(std::exp(s), unit); };
    const double base = integrate_gk(g, std::log(0.5), 0.0, 1e-12);
    ChemParams out = params;
    out.rate = base / length;
    return out;
}

}  // namespace znd
