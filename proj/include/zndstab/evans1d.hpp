#pragma once

#include "zndstab/evans_value.hpp"
#include "zndstab/profile.hpp"

#include <Eigen/Dense>

namespace znd {

using Mat4 = Eigen::Matrix4d;
using Vec4d = Eigen::Vector4d;
using Vec4c = Eigen::Vector4cd;
using Mat4c = Eigen::Matrix4cd;

// Flux and source Jacobians in the conserved variables (tau, u, E_total, z).
struct LinearizedCoeffs {
    Mat4 A;
    Mat4 Emat;
};

LinearizedCoeffs jacobians(const ProfilePoint& point, const ChemParams& params);

struct BoundaryData {
    Vec4d jump;             // W(0+) - W(0-)
    Vec4d source_at_front;  // R(W(0-))
};

BoundaryData boundary_data(const ZNDProfile& profile);

struct DualMode {
    cplx mode;      // eigenvalue of -G^T at the burned state with Re > 0
    Vec4c vector;   // analytic in lambda
};

// Decaying dual mode at x = -infinity. For Re lambda > 0 throws NumericalError when the number of
// eigenvalues with positive real part is not one; for Re lambda <= 0 the mode is continued and the
// throw happens once another mode rises r/2 above it (r = k phi at the burned state).
DualMode dual_init(cplx lambda, const ChemParams& params);

// Matrix -G^T = lambda A^{-T} - A^{-T} E^T at a profile point.
Mat4c dual_matrix(cplx lambda, const LinearizedCoeffs& c);

// Evaluator bound to one profile. Thread-safe; all state is immutable.
class Evans1D {
public:
    explicit Evans1D(const ZNDProfile& profile);

    EvansValue operator()(cplx lambda, const EvansControls& ctl = {}, IntegrationStats* stats = nullptr) const;

    const ChemParams& params() const { return params_; }
    double z_min() const { return z_min_; }
    const BoundaryData& boundary() const { return boundary_; }
    // int_{-inf}^0 (1/a(x) - 1/a(-inf)) dx, a = sigma - 1 the positive gas characteristic speed.
    double removed_rate_integral() const { return rate_integral_; }

private:
    ChemParams params_;
    double z_min_;
    BoundaryData boundary_;
    double rate_integral_ = 0.0;
};

EvansValue evans_1d(cplx lambda, const ZNDProfile& profile, const EvansControls& ctl = {});

// Positive Lagrangian characteristic speed sigma - 1 of the gas block at reaction progress z.
double lagrangian_plus_speed(double z, const ChemParams& params);

}  // namespace znd
