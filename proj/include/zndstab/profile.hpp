#pragma once

#include <array>
#include <vector>

namespace znd {

// Physical parameters of one detonation in the scaling tau_+ = 1, u_+ = 0, s = 1.
struct ChemParams {
    double gamma = 0.2;          // Gruneisen constant
    double activation = 0.0;     // Arrhenius activation energy
    double heat_release = 0.0;   // q
    double rate = 1.0;           // k
    double specific_heat = 1.0;  // c in T = e / c
    double e_plus = 0.0;         // unburned internal energy
    double speed = 1.0;

    void validate() const;
};

// Classical overdrive parametrization. Energies are in units of e_plus.
struct ScalingClassical {
    double overdrive = 1.0;             // f = (s / s_cj)^2
    double activation_classical = 0.0;  // E0
    double heat_classical = 0.0;        // Q0
    double gamma = 0.2;

    void validate() const;
};

struct GasState {
    double tau;
    double u;
    double e;
};

struct ProfilePoint {
    double x;
    double tau;
    double u;
    double e;
    double z;
    double p;
    double T;
};

double q_cj(double gamma, double e_plus);

// Closed-form gas state at reaction progress z (strong-detonation branch).
GasState algebraic_state(double z, const ChemParams& params);

double temperature(const GasState& g, const ChemParams& params);
double ignition(const GasState& g, const ChemParams& params);  // exp(-E/T)

// dz/dx = k phi z on the reaction zone x < 0.
double reaction_rhs(double z, const ChemParams& params);

ProfilePoint profile_point(double z, double x, const ChemParams& params);

// Conserved Lagrangian state (tau, u, E_total, z) and its flux and source.
using Vec4 = std::array<double, 4>;
Vec4 lagrangian_state(const GasState& g, double z);
Vec4 lagrangian_flux(const Vec4& w, const ChemParams& params);
Vec4 lagrangian_source(const Vec4& w, const ChemParams& params);

struct GridControl {
    int points = 401;               // uniform in ln z between ln z_min and 0
    double quad_tolerance = 1e-12;  // relative, per grid interval
};

class ZNDProfile {
public:
    ZNDProfile(const ChemParams& params, double z_min, const GridControl& grid = {});

    const ChemParams& params() const { return params_; }
    const std::vector<ProfilePoint>& grid() const { return grid_; }
    const ProfilePoint& neumann_minus() const { return neumann_; }
    const ProfilePoint& quiescent_plus() const { return quiescent_; }
    double half_reaction_length() const { return half_length_; }
    double z_min() const { return z_min_; }
    double domain_length() const { return -grid_.front().x; }  // M = |x(z_min)|

    // x(z) = -int_z^1 dzeta / (k phi zeta), computed in s = ln z.
    double x_of_z(double z) const;
    // Inverse of x_of_z on [x(z_min), 0].
    double z_of_x(double x) const;

    // Flux jump F(0-) - F(0+) across the Neumann shock.
    Vec4 rankine_hugoniot_residual() const;

private:
    double x_of_s_from(double s, std::size_t node) const;

    ChemParams params_;
    double z_min_;
    GridControl control_;
    std::vector<double> s_;
    std::vector<ProfilePoint> grid_;
    ProfilePoint neumann_{};
    ProfilePoint quiescent_{};
    double half_length_ = 0.0;
};

// Either map is the exact inverse of the other.
ChemParams from_classical_scaling(const ScalingClassical& classical, double rate = 1.0,
                                  double specific_heat = 1.0);
ScalingClassical to_classical_scaling(const ChemParams& params);

// Copy of params with k chosen so that the half-reaction length equals length.
ChemParams with_half_reaction_length(const ChemParams& params, double length = 1.0);

}  // namespace znd
