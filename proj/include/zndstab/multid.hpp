#pragma once

#include "zndstab/evans_value.hpp"
#include "zndstab/profile.hpp"

#include <Eigen/Dense>

#include <vector>

namespace znd {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec5c = Eigen::Matrix<cplx, 5, 1>;
using Mat5c = Eigen::Matrix<cplx, 5, 5>;

// Primitive Eulerian state; conserved variables are (rho, rho u1, rho u2, rho E, rho z)
// with E = e + |u|^2/2.
struct EulerState {
    double rho = 1.0;
    double u1 = 0.0;
    double u2 = 0.0;
    double e = 0.0;
    double z = 1.0;

    Vec5 conserved() const;
    double pressure(double gamma) const { return gamma * rho * e; }
    double sound_speed(double gamma) const;  // c0^2 = gamma (gamma + 1) e
};

EulerState euler_from_conserved(const Vec5& w);

Vec5 euler_flux(const EulerState& s, int direction, double gamma);  // direction 1 or 2
Vec5 euler_source(const EulerState& s, const ChemParams& params);

struct MultiDCoeffs {
    Mat5 A1;
    Mat5 A2;
    Mat5 Emat;
};

MultiDCoeffs multid_jacobians(const EulerState& s, const ChemParams& params);

// Steady state at reaction progress z in the shock frame, flow in +x1, front at x1 = 0.
EulerState eulerian_state(double z, const ChemParams& params);

struct EulerPoint {
    double x;
    EulerState state;
};

class MultiDProfile {
public:
    MultiDProfile(const ChemParams& params, double z_min, const GridControl& grid = {});

    const ChemParams& params() const { return params_; }
    const std::vector<EulerPoint>& grid() const { return grid_; }  // x increasing, z decreasing
    const EulerState& unburned() const { return unburned_; }      // x1 < 0
    const EulerState& neumann_plus() const { return grid_.front().state; }
    double z_min() const { return z_min_; }
    double domain_length() const { return grid_.back().x; }

    // x1(z) = int_z^1 tau / (k phi zeta) dzeta.
    double x_of_z(double z) const;
    double z_of_x(double x) const;
    EulerState state_at(double x) const { return eulerian_state(z_of_x(x), params_); }

private:
    double x_of_s_from(double s, std::size_t node) const;

    ChemParams params_;
    double z_min_;
    GridControl control_;
    std::vector<double> s_;  // s = ln z at the nodes, decreasing
    std::vector<EulerPoint> grid_;
    EulerState unburned_;
};

// S = sqrt(lambda^2 + (c0^2 - u1^2) xi^2) with Re S >= 0, continued onto the imaginary
// axis from Re lambda > 0; S = lambda when xi = 0.
cplx acoustic_root(cplx lambda, double xi, double c0, double u1);

// Exponent of the decaying dual mode -(lambda u1 + c0 S) / (c0^2 - u1^2).
cplx decaying_dual_exponent(cplx lambda, double xi, const EulerState& s, double gamma);

// Left null vector of lambda + i xi A2 - mu A1 for the decaying acoustic mode, analytic in
// lambda; the reaction component is zero.
Vec5c acoustic_left_vector(cplx lambda, double xi, const EulerState& s, double gamma);

// Right null vector w of the same pencil (principal part only). (A1 w)^T is a left eigenvector of
// the dual principal matrix for the same exponent.
Vec5c acoustic_right_vector(cplx lambda, double xi, const EulerState& s, double gamma);

// Dual coefficient A1^{-T}(lambda + i xi A2^T - E^T).
Mat5c multid_dual_matrix(cplx lambda, double xi, const MultiDCoeffs& c);

struct DualMode5 {
    cplx mode;
    Vec5c vector;
};

// Decaying dual mode at x1 = +infinity; throws when the decaying mode count is not one.
DualMode5 multid_dual_init(cplx lambda, double xi, const ChemParams& params);

class EvansMultiD {
public:
    explicit EvansMultiD(const MultiDProfile& profile);

    EvansValue operator()(cplx lambda, double xi, const EvansControls& ctl = {},
                          IntegrationStats* stats = nullptr) const;

    // lambda [W] + i xi [F2] + R(0+), [h] = h(0-) - h(0+).
    Vec5c boundary_vector(cplx lambda, double xi) const;

    // int_0^inf (mu(x) - mu(inf)) dx for the decaying dual exponent.
    cplx removed_exponent(cplx lambda, double xi) const;

    const ChemParams& params() const { return params_; }
    double z_min() const { return z_min_; }

private:
    ChemParams params_;
    double z_min_;
    Vec5 jump_w_;
    Vec5 jump_f2_;
    Vec5 source_plus_;
};

EvansValue evans_multid(cplx lambda, double xi, const MultiDProfile& profile, const EvansControls& ctl = {});

}  // namespace znd
