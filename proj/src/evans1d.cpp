#include "zndstab/evans1d.hpp"

#include "zndstab/dual_ode.hpp"
#include "zndstab/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <sstream>

namespace znd {

namespace {

std::string cplx_text(cplx v)
{
    std::ostringstream os;
    os.precision(10);
    os << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i";
    return os.str();
}

std::string spectrum_text(const Eigen::Vector4cd& ev)
{
    std::string out;
    for (int i = 0; i < ev.size(); ++i) out += (i ? ", " : "") + cplx_text(ev[i]);
    return out;
}

// Unit left eigenvector of the gas block for its positive eigenvalue; sign fixed.
Eigen::Vector3d gas_left_vector(const Mat4& A, double a_plus)
{
    const Eigen::Matrix3d Ag = A.topLeftCorner<3, 3>();
    Eigen::EigenSolver<Eigen::Matrix3d> es(Ag.transpose());
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(es.eigenvalues()[i] - a_plus) < std::abs(es.eigenvalues()[k] - a_plus)) k = i;
    Eigen::Vector3d v = es.eigenvectors().col(k).real();
    v.normalize();
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    return v;
}

}  // namespace

double lagrangian_plus_speed(double z, const ChemParams& params)
{
    const GasState g = algebraic_state(z, params);
    const double p = params.gamma * g.e / g.tau;
    return std::sqrt((params.gamma + 1.0) * p / g.tau) - 1.0;
}

LinearizedCoeffs jacobians(const ProfilePoint& pt, const ChemParams& params)
{
    const double G = params.gamma;
    const double tau = pt.tau, u = pt.u, p = G * pt.e / pt.tau;
    LinearizedCoeffs c;
    c.A << -1.0, -1.0, 0.0, 0.0,
        -p / tau, -G * u / tau - 1.0, G / tau, 0.0,
        -p * u / tau, p - G * u * u / tau, G * u / tau - 1.0, 0.0,
        0.0, 0.0, 0.0, -1.0;
    const double sigma2 = (G + 1.0) * p / tau;
    if (!(std::abs(std::sqrt(sigma2) - 1.0) > 1e-12))
        throw NumericalError("flux Jacobian is singular: front is characteristic");

    const double T = pt.e / params.specific_heat;
    const double phi = params.activation == 0.0 ? 1.0 : std::exp(-params.activation / T);
    const double k = params.rate;
    // d(k phi z)/dW; e = E - u^2/2 and phi depends on e through T.
    Eigen::RowVector4d r(0.0, 0.0, 0.0, k * phi);
    if (params.activation != 0.0) {
        const double dphi_de = phi * params.activation * params.specific_heat / (pt.e * pt.e);
        r += k * pt.z * dphi_de * Eigen::RowVector4d(0.0, -u, 1.0, 0.0);
    }
    c.Emat.setZero();
    c.Emat.row(2) = params.heat_release * r;
    c.Emat.row(3) = -r;
    return c;
}

Mat4c dual_matrix(cplx lambda, const LinearizedCoeffs& c)
{
    const Mat4 AinvT = c.A.inverse().transpose();
    const Mat4 Q = AinvT * c.Emat.transpose();
    return lambda * AinvT.cast<cplx>() - Q.cast<cplx>();
}

BoundaryData boundary_data(const ZNDProfile& profile)
{
    const ChemParams& p = profile.params();
    const ProfilePoint& n = profile.neumann_minus();
    const Vec4 wm = lagrangian_state({n.tau, n.u, n.e}, 1.0);
    const Vec4 wp = lagrangian_state({1.0, 0.0, p.e_plus}, 1.0);
    const Vec4 r = lagrangian_source(wm, p);
    BoundaryData b;
    for (int i = 0; i < 4; ++i) {
        b.jump[i] = wp[i] - wm[i];
        b.source_at_front[i] = r[i];
    }
    return b;
}

DualMode dual_init(cplx lambda, const ChemParams& params)
{
    const ProfilePoint burned = profile_point(0.0, 0.0, params);
    const LinearizedCoeffs c = jacobians(burned, params);
    const Mat4c M = dual_matrix(lambda, c);
    const double a_plus = lagrangian_plus_speed(0.0, params);

    DualMode m;
    m.mode = lambda / a_plus;
    const Eigen::Vector3d vg = gas_left_vector(c.A, a_plus);
    cplx tail = 0.0;
    for (int j = 0; j < 3; ++j) tail += M(3, j) * vg[j];
    m.vector << vg[0], vg[1], vg[2], tail / (m.mode - M(3, 3));

    const double scale = M.cwiseAbs().maxCoeff() + std::abs(m.mode);
    const double res = ((M - m.mode * Mat4c::Identity()) * m.vector).cwiseAbs().maxCoeff();
    if (!(res <= 1e-10 * scale * m.vector.cwiseAbs().maxCoeff()))
        throw NumericalError("dual mode residual too large: " + std::to_string(res));

    Eigen::ComplexEigenSolver<Mat4c> es(M, false);
    const Eigen::Vector4cd ev = es.eigenvalues();
    const double tol = 1e-12 * scale;
    if (lambda.real() > tol) {
        int positive = 0;
        for (int i = 0; i < 4; ++i)
            if (ev[i].real() > tol) ++positive;
        if (positive != 1)
            throw NumericalError("expected exactly one decaying dual mode at the burned state, lambda = " +
                                 cplx_text(lambda) + ", spectrum: " + spectrum_text(ev));
    } else {
        // Continuation into Re lambda <= 0 (gap lemma): the mode stays defined while every mode above it
        // sits within half the profile's exponential convergence rate.
        const double r = params.rate * ignition(algebraic_state(0.0, params), params);
        int self = 0;
        for (int i = 1; i < 4; ++i)
            if (std::abs(ev[i] - m.mode) < std::abs(ev[self] - m.mode)) self = i;
        for (int i = 0; i < 4; ++i)
            if (i != self && ev[i].real() - m.mode.real() >= 0.5 * r)
                throw NumericalError("lambda = " + cplx_text(lambda) +
                                     " is outside the continuation region of the decaying dual mode, spectrum: " +
                                     spectrum_text(ev));
    }
    return m;
}

Evans1D::Evans1D(const ZNDProfile& profile)
    : params_(profile.params()), z_min_(profile.z_min()), boundary_(boundary_data(profile))
{
    const ChemParams& p = params_;
    const double inv_inf = 1.0 / lagrangian_plus_speed(0.0, p);
    auto f = [&p, inv_inf](double s) {
        const double z = std::exp(s);
        return (1.0 / lagrangian_plus_speed(z, p) - inv_inf) * z / reaction_rhs(z, p);
    };
    const double s0 = std::log(z_min_);
    using boost::math::quadrature::gauss_kronrod;
    rate_integral_ = gauss_kronrod<double, 31>::integrate(f, s0, 0.0, 12, 1e-12) + f(s0);
}

EvansValue Evans1D::operator()(cplx lambda, const EvansControls& ctl, IntegrationStats* stats) const
{
    const ChemParams& p = params_;
    const DualMode init = dual_init(lambda, p);
    const double s0 = std::log(z_min_);

    // First-order tail series y = exp(mu x)(v + z a1 + O(z^2)) with z ~ exp(r x),
    // r = k phi at the burned state: (M_inf - (mu + r)) a1 = -M_1 v.
    Vec4c y0 = init.vector;
    if (ctl.tail_correction) {
        const double r = p.rate * ignition(algebraic_state(0.0, p), p);
        const double hz = 1e-4;
        auto M_at = [&](double z) { return dual_matrix(lambda, jacobians(profile_point(z, 0.0, p), p)); };
        const Mat4c M0 = M_at(0.0);
        const Mat4c M1 = (-3.0 * M0 + 4.0 * M_at(hz) - M_at(2.0 * hz)) / (2.0 * hz);
        const Mat4c K = M0 - (init.mode + r) * Mat4c::Identity();
        Eigen::PartialPivLU<Mat4c> lu(K);
        const Vec4c a1 = lu.solve(-M1 * init.vector);
        if (a1.allFinite()) y0 += z_min_ * a1;
        const cplx mu_hat = lambda / lagrangian_plus_speed(z_min_, p);
        y0 *= std::exp(-(mu_hat - init.mode) / r);
    }

    using State = std::array<cplx, 4>;
    State y{y0[0], y0[1], y0[2], y0[3]};
    auto rhs = [&p, lambda](double s, const State& yv, State& dy) {
        const double z = std::exp(s);
        const GasState g = algebraic_state(std::min(z, 1.0), p);
        const double T = g.e / p.specific_heat;
        const double phi = p.activation == 0.0 ? 1.0 : std::exp(-p.activation / T);
        const ProfilePoint pt{0.0, g.tau, g.u, g.e, std::min(z, 1.0), p.gamma * g.e / g.tau, T};
        const LinearizedCoeffs c = jacobians(pt, p);
        const Mat4 AinvT = c.A.inverse().transpose();
        const Mat4 Q = AinvT * c.Emat.transpose();
        const double dxds = 1.0 / (p.rate * phi);
        const double sigma = std::sqrt((p.gamma + 1.0) * pt.p / g.tau);
        const cplx mu_hat = lambda / (sigma - 1.0);
        for (int i = 0; i < 4; ++i) {
            cplx acc = -mu_hat * yv[i];
            for (int j = 0; j < 4; ++j) acc += (lambda * AinvT(i, j) - Q(i, j)) * yv[j];
            dy[i] = dxds * acc;
        }
    };
    const auto res = detail::integrate_dual<4>(rhs, y, s0, 0.0, ctl);
    if (stats) {
        stats->accepted += res.stats.accepted;
        stats->rejected += res.stats.rejected;
    }

    const Vec4c b = lambda * boundary_.jump.cast<cplx>() + boundary_.source_at_front.cast<cplx>();
    cplx d = 0.0;
    for (int i = 0; i < 4; ++i) d += res.y[i] * b[i];
    return EvansValue::from_complex(d, res.log_scale, lambda * rate_integral_);
}

EvansValue evans_1d(cplx lambda, const ZNDProfile& profile, const EvansControls& ctl)
{
    return Evans1D(profile)(lambda, ctl);
}

}  // namespace znd
