#include "zndstab/hifreq.hpp"

#include "zndstab/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace znd {

namespace {

double arrhenius(double e, const ChemParams& p)
{
    return p.activation == 0.0 ? 1.0 : std::exp(-p.activation * p.specific_heat / e);
}

double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

SymbolPoint symbol_eigs(const EulerState& st, double gamma, cplx zeta, double x)
{
    SymbolPoint sp;
    sp.x = x;
    sp.c0 = st.sound_speed(gamma);
    sp.u1 = st.u1;
    if (sp.u1 == 0.0) throw DomainError("symbol eigenvalues need u1 != 0");
    sp.kappa = sp.u1 / sp.c0;
    sp.eta = 1.0 - sp.kappa * sp.kappa;
    sp.zeta = zeta;
    sp.s_val = acoustic_root(zeta, 1.0, sp.c0, sp.u1);
    // s^2 vanishes only to rounding at an exact glancing zeta, so compare s^2 with its terms
    const double gap = sp.c0 * sp.c0 - sp.u1 * sp.u1;
    sp.glancing = std::norm(sp.s_val) <= 1e-12 * (std::norm(zeta) + gap);
    const double k = sp.kappa, den = sp.eta * sp.u1;
    sp.mu[0] = -k * (k * zeta + sp.s_val) / den;
    sp.mu[1] = -k * (k * zeta - sp.s_val) / den;
    sp.mu[2] = sp.mu[3] = sp.mu[4] = zeta / sp.u1;
    return sp;
}

SymbolPoint symbol_eigs(double x, cplx zeta, const MultiDProfile& profile)
{
    return symbol_eigs(profile.state_at(x), profile.params().gamma, zeta, x);
}

Mat5c principal_symbol(cplx zeta, const EulerState& state, double gamma)
{
    ChemParams inert;
    inert.gamma = gamma;
    const MultiDCoeffs c = multid_jacobians(state, inert);
    const Mat5 AinvT = c.A1.inverse().transpose();
    return AinvT.cast<cplx>() * (zeta * Mat5c::Identity() + cplx(0.0, 1.0) * c.A2.transpose().cast<cplx>());
}

std::vector<GlancingPoint> glancing_locus(const MultiDProfile& profile)
{
    const double G = profile.params().gamma;
    std::vector<GlancingPoint> out;
    out.reserve(profile.grid().size());
    for (const auto& pt : profile.grid()) {
        const double c0 = pt.state.sound_speed(G);
        const double gap = c0 * c0 - pt.state.u1 * pt.state.u1;
        if (!(gap > 0.0)) throw DomainError("Lax condition c0^2 - u1^2 > 0 fails at x = " + std::to_string(pt.x));
        out.push_back({pt.x, gap, std::sqrt(gap)});
    }
    return out;
}

SonicGap sonic_gap(const MultiDProfile& profile)
{
    SonicGap g;
    const double G = profile.params().gamma;
    g.gap = [&profile, G](double x) {
        const EulerState st = profile.state_at(x);
        const double c0 = st.sound_speed(G);
        return c0 * c0 - st.u1 * st.u1;
    };
    g.x0 = 0.0;
    g.x1 = profile.domain_length();
    return g;
}

std::string to_string(DetonationType t)
{
    switch (t) {
    case DetonationType::increasing: return "I";
    case DetonationType::decreasing: return "D";
    default: return "neither";
    }
}

namespace {

DetonationType classify_values(const std::vector<double>& v, double rel_tol)
{
    double scale = 0.0;
    for (double a : v) scale = std::max(scale, std::abs(a));
    const double band = rel_tol * std::max(scale, 1e-300);
    bool up = false, down = false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double d = v[i + 1] - v[i];
        if (d > band) up = true;
        if (d < -band) down = true;
    }
    if (up && !down) return DetonationType::increasing;
    if (down && !up) return DetonationType::decreasing;
    return DetonationType::neither;
}

}  // namespace

DetonationType classify_type(const SonicGap& gap, int samples, double rel_tol)
{
    if (samples < 2) throw DomainError("classification needs at least 2 samples");
    std::vector<double> v(samples);
    for (int i = 0; i < samples; ++i) v[i] = gap.gap(gap.x0 + (gap.x1 - gap.x0) * double(i) / double(samples - 1));
    return classify_values(v, rel_tol);
}

DetonationType classify_type(const MultiDProfile& profile, double rel_tol)
{
    const auto locus = glancing_locus(profile);
    std::vector<double> v;
    v.reserve(locus.size());
    for (const auto& g : locus) v.push_back(g.gap);
    return classify_values(v, rel_tol);
}

std::vector<TurningPoint> turning_points(cplx zeta, const SonicGap& gap, int samples)
{
    if (samples < 3) throw DomainError("turning-point search needs at least 3 samples");
    const double z2 = (zeta * zeta).real();
    auto g = [&](double x) { return z2 + gap.gap(x); };
    const double a = gap.x0, b = gap.x1, dx = (b - a) / double(samples - 1);
    std::vector<double> xs(samples), gs(samples);
    double scale = 0.0;
    for (int i = 0; i < samples; ++i) {
        xs[i] = i + 1 == samples ? b : a + dx * i;
        gs[i] = g(xs[i]);
        scale = std::max(scale, std::abs(gap.gap(xs[i])));
    }
    const double zero_tol = 1e-10 * std::max(scale, 1e-300);

    std::vector<double> roots;
    for (int i = 0; i + 1 < samples; ++i) {
        if (gs[i] == 0.0) {
            roots.push_back(xs[i]);
            continue;
        }
        if (gs[i] * gs[i + 1] < 0.0) {
            boost::uintmax_t iters = 200;
            auto tol = boost::math::tools::eps_tolerance<double>(50);
            const auto r = boost::math::tools::toms748_solve(g, xs[i], xs[i + 1], gs[i], gs[i + 1], tol, iters);
            roots.push_back(0.5 * (r.first + r.second));
        }
    }
    if (gs.back() == 0.0) roots.push_back(xs.back());
    // tangential zeros: interior local minima of |g| that reach zero without a sign change
    for (int i = 1; i + 1 < samples; ++i) {
        const double m = std::abs(gs[i]);
        if (!(m <= std::abs(gs[i - 1]) && m <= std::abs(gs[i + 1]))) continue;
        if (gs[i - 1] * gs[i] < 0.0 || gs[i] * gs[i + 1] < 0.0 || gs[i] == 0.0) continue;
        const auto r = boost::math::tools::brent_find_minima([&](double x) { return std::abs(g(x)); }, xs[i - 1], xs[i + 1],
                                                             std::numeric_limits<double>::digits / 2);
        if (r.second <= zero_tol) roots.push_back(r.first);
    }
    std::sort(roots.begin(), roots.end());

    std::vector<TurningPoint> out;
    const double hd = 1e-6 * (b - a);
    for (double x : roots) {
        const double xl = std::max(a, x - hd), xr = std::min(b, x + hd);
        const double d = (gap.gap(xr) - gap.gap(xl)) / (xr - xl);
        TurningPoint tp;
        tp.x_star = x;
        tp.zeta_star = cplx(0.0, std::sqrt(std::max(gap.gap(x), 0.0)) * (zeta.imag() < 0.0 ? -1.0 : 1.0));
        tp.nondegeneracy = d;
        tp.nondegenerate = std::abs(d) * (b - a) > 1e-6 * std::max(scale, 1e-300);
        out.push_back(tp);
    }
    return out;
}

NeumannLopatinski neumann_lopatinski(cplx zeta, const MultiDProfile& profile)
{
    const double G = profile.params().gamma;
    const EulerState& wm = profile.unburned();
    const EulerState& wp = profile.neumann_plus();
    const SymbolPoint sp = symbol_eigs(wp, G, zeta);
    if (sp.glancing) throw NumericalError("zeta is glancing at the front, the decaying mode is not defined");
    NeumannLopatinski n;
    n.ell0 = zeta * (wm.conserved() - wp.conserved()).cast<cplx>() +
             cplx(0.0, 1.0) * (euler_flux(wm, 2, G) - euler_flux(wp, 2, G)).cast<cplx>();
    n.R1 = acoustic_left_vector(zeta, 1.0, wp, G);
    n.value = n.ell0.cwiseProduct(n.R1).sum();
    return n;
}

cplx wkb_transport_exponent(cplx zeta, const MultiDProfile& profile)
{
    const ChemParams& p = profile.params();
    const double G = p.gamma;
    auto R_at = [&](double s) { return acoustic_left_vector(zeta, 1.0, eulerian_state(std::exp(s), p), G); };
    auto f = [&](double s) {
        const double z = std::exp(s);
        const EulerState st = eulerian_state(z, p);
        const MultiDCoeffs c = multid_jacobians(st, p);
        const Mat5 AinvT = c.A1.inverse().transpose();
        const Mat5c M1 = -(AinvT * c.Emat.transpose()).cast<cplx>();
        const Vec5c R = R_at(s);
        const double hs = 1e-5;
        const double dxds = -st.u1 / (p.rate * arrhenius(st.e, p));
        const Vec5c dR = (R_at(std::min(s + hs, 0.0)) - R_at(s - hs)) / ((std::min(s + hs, 0.0) - (s - hs)) * dxds);
        const Vec5c w = acoustic_right_vector(zeta, 1.0, st, G);
        const Vec5c l = c.A1.cast<cplx>() * w;
        const cplx beta = l.transpose() * (M1 * R - dR);
        const cplx norm = l.transpose() * R;
        return beta / norm * (-dxds);  // dx = -dxds ds over s in (-inf, 0)
    };
    const double s0 = std::log(profile.z_min());
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate(f, s0, 0.0, 12, 1e-10);
}

HfReport hf_ratio(cplx zeta, const std::vector<double>& h_grid, const MultiDProfile& profile, const EvansControls& ctl)
{
    if (!(zeta.real() > 0.0)) throw DomainError("hf_ratio needs Re zeta > 0 (glancing-free)");
    for (double h : h_grid)
        if (!(h > 0.0)) throw DomainError("hf_ratio needs positive h");
    const NeumannLopatinski dn = neumann_lopatinski(zeta, profile);
    const cplx amp = wkb_transport_exponent(zeta, profile);
    const EvansMultiD ev(profile);

    HfReport rep;
    rep.zeta = zeta;
    rep.rows.resize(h_grid.size());
    std::exception_ptr error;
    const long n = long(h_grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < n; ++i) {
        try {
            const double h = h_grid[i];
            const cplx lambda = zeta / h;
            const double xi = 1.0 / h;
            const EvansValue v = ev(lambda, xi, ctl);
            const cplx removed = ev.removed_exponent(lambda, xi);
            // log of h * core / (exp(-amp) D_N), core = D exp(+removed)
            const cplx logr = cplx(v.log_magnitude, v.phase) + removed + std::log(h) + amp - std::log(dn.value);
            HfRow row;
            row.h = h;
            row.ratio = std::exp(logr);
            row.deviation = std::abs(row.ratio - 1.0);
            rep.rows[i] = row;
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    std::vector<double> lx, ly;
    rep.monotone = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        lx.push_back(std::log(rep.rows[i].h));
        ly.push_back(std::log(rep.rows[i].deviation));
        if (i > 0) {
            const bool finer = rep.rows[i].h < rep.rows[i - 1].h;
            const bool smaller = rep.rows[i].deviation < rep.rows[i - 1].deviation;
            if (finer != smaller) rep.monotone = false;
        }
    }
    if (rep.rows.size() >= 2) rep.order = slope(lx, ly);
    return rep;
}

}  // namespace znd
