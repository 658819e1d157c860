#pragma once

#include "zndstab/evans_value.hpp"
#include "zndstab/multid.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace znd {

// Frozen principal symbol at one profile point, semiclassical variables (zeta, xi = 1).
struct SymbolPoint {
    double x = 0.0;
    double c0 = 0.0;
    double u1 = 0.0;
    double kappa = 0.0;  // u1 / c0
    double eta = 0.0;    // 1 - kappa^2
    cplx zeta{};
    cplx s_val{};        // sqrt(zeta^2 + c0^2 - u1^2)
    std::array<cplx, 5> mu{};
    bool glancing = false;  // |s|^2 <= 1e-12 (|zeta|^2 + c0^2 - u1^2), branch ambiguous
};

SymbolPoint symbol_eigs(const EulerState& state, double gamma, cplx zeta, double x = 0.0);
SymbolPoint symbol_eigs(double x, cplx zeta, const MultiDProfile& profile);

// Principal dual coefficient A1^{-T}(zeta + i A2^T); its spectrum is the mu's above.
Mat5c principal_symbol(cplx zeta, const EulerState& state, double gamma);

struct GlancingPoint {
    double x;
    double gap;     // c0^2 - u1^2
    double height;  // zeta* = +- i height
};

std::vector<GlancingPoint> glancing_locus(const MultiDProfile& profile);

// The function x -> c0^2 - u1^2 on [x0, x1].
struct SonicGap {
    std::function<double(double)> gap;
    double x0 = 0.0;
    double x1 = 1.0;
};

SonicGap sonic_gap(const MultiDProfile& profile);

enum class DetonationType { increasing, decreasing, neither };
std::string to_string(DetonationType t);  // "I", "D", "neither"

DetonationType classify_type(const SonicGap& gap, int samples = 2001, double rel_tol = 1e-12);
// Uses the profile's own grid.
DetonationType classify_type(const MultiDProfile& profile, double rel_tol = 1e-12);

struct TurningPoint {
    double x_star = 0.0;
    cplx zeta_star{};
    double nondegeneracy = 0.0;  // d/dx of s^2 at x_star
    bool nondegenerate = true;
};

// Real zeros of Re(zeta^2) + c0^2 - u1^2 on the gap's interval, including tangential ones.
std::vector<TurningPoint> turning_points(cplx zeta, const SonicGap& gap, int samples = 2001);

struct NeumannLopatinski {
    Vec5c ell0;  // zeta [W] + i [F2], [h] = h(0-) - h(0+)
    Vec5c R1;    // decaying dual mode at 0+
    cplx value;  // ell0 . R1
};

NeumannLopatinski neumann_lopatinski(cplx zeta, const MultiDProfile& profile);

struct HfRow {
    double h = 0.0;
    cplx ratio{};
    double deviation = 0.0;  // |ratio - 1|
};

struct HfReport {
    cplx zeta{};
    std::vector<HfRow> rows;
    double order = 0.0;  // least-squares slope of log deviation against log h
    bool monotone = false;
};

// int_0^inf l (M1 R - R') / (l R) dx: transport exponent of the decaying WKB mode.
cplx wkb_transport_exponent(cplx zeta, const MultiDProfile& profile);

// h D(zeta/h, 1/h), with the WKB phase and amplitude divided out, over D_N.
HfReport hf_ratio(cplx zeta, const std::vector<double>& h_grid, const MultiDProfile& profile,
                  const EvansControls& ctl = {});

}  // namespace znd
