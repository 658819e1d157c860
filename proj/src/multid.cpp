#include "zndstab/multid.hpp"

#include "zndstab/dual_ode.hpp"
#include "zndstab/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
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

template <class F>
auto integrate_gk(const F& f, double a, double b, double tol, unsigned depth = 10)
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate(f, a, b, depth, tol);
}

double arrhenius(double e, const ChemParams& p)
{
    return p.activation == 0.0 ? 1.0 : std::exp(-p.activation * p.specific_heat / e);
}

// dV/dW for the gas variables V = (rho, u1, u2, p), W = (rho, m1, m2, rho E).
Eigen::Matrix4d primitive_jacobian(const EulerState& s, double gamma)
{
    const double r = s.rho, k = 0.5 * (s.u1 * s.u1 + s.u2 * s.u2);
    Eigen::Matrix4d J;
    J << 1.0, 0.0, 0.0, 0.0,
        -s.u1 / r, 1.0 / r, 0.0, 0.0,
        -s.u2 / r, 0.0, 1.0 / r, 0.0,
        gamma * k, -gamma * s.u1, -gamma * s.u2, gamma;
    return J;
}

}  // namespace

Vec5 EulerState::conserved() const
{
    Vec5 w;
    w << rho, rho * u1, rho * u2, rho * (e + 0.5 * (u1 * u1 + u2 * u2)), rho * z;
    return w;
}

double EulerState::sound_speed(double gamma) const { return std::sqrt(gamma * (gamma + 1.0) * e); }

EulerState euler_from_conserved(const Vec5& w)
{
    EulerState s;
    s.rho = w[0];
    s.u1 = w[1] / w[0];
    s.u2 = w[2] / w[0];
    s.e = w[3] / w[0] - 0.5 * (s.u1 * s.u1 + s.u2 * s.u2);
    s.z = w[4] / w[0];
    return s;
}

Vec5 euler_flux(const EulerState& s, int direction, double gamma)
{
    const double p = s.pressure(gamma);
    const double un = direction == 1 ? s.u1 : s.u2;
    const double E = s.e + 0.5 * (s.u1 * s.u1 + s.u2 * s.u2);
    Vec5 f;
    f << s.rho * un, s.rho * s.u1 * un, s.rho * s.u2 * un, (s.rho * E + p) * un, s.rho * s.z * un;
    f[direction] += p;
    return f;
}

Vec5 euler_source(const EulerState& s, const ChemParams& params)
{
    const double w = params.rate * arrhenius(s.e, params) * s.rho * s.z;
    Vec5 r;
    r << 0.0, 0.0, 0.0, params.heat_release * w, -w;
    return r;
}

MultiDCoeffs multid_jacobians(const EulerState& s, const ChemParams& params)
{
    const double G = params.gamma;
    const double u = s.u1, v = s.u2, z = s.z;
    const double k = 0.5 * (u * u + v * v);
    const double H = s.e + k + G * s.e;  // (rho E + p) / rho
    MultiDCoeffs c;
    c.A1 << 0.0, 1.0, 0.0, 0.0, 0.0,
        -u * u + G * k, (2.0 - G) * u, -G * v, G, 0.0,
        -u * v, v, u, 0.0, 0.0,
        u * (G * k - H), H - G * u * u, -G * u * v, (1.0 + G) * u, 0.0,
        -z * u, z, 0.0, 0.0, u;
    c.A2 << 0.0, 0.0, 1.0, 0.0, 0.0,
        -u * v, v, u, 0.0, 0.0,
        -v * v + G * k, -G * u, (2.0 - G) * v, G, 0.0,
        v * (G * k - H), -G * u * v, H - G * v * v, (1.0 + G) * v, 0.0,
        -z * v, 0.0, z, 0.0, v;
    if (!(std::abs(s.sound_speed(G) - std::abs(u)) > 1e-12 * s.sound_speed(G)))
        throw NumericalError("A1 is singular: the front is characteristic");

    const double phi = arrhenius(s.e, params);
    Eigen::Matrix<double, 1, 5> dw;  // d(k phi rho z)/dW
    dw << 0.0, 0.0, 0.0, 0.0, params.rate * phi;
    if (params.activation != 0.0) {
        const double dphi_de = phi * params.activation * params.specific_heat / (s.e * s.e);
        Eigen::Matrix<double, 1, 5> de;
        de << (k - s.e) / s.rho, -u / s.rho, -v / s.rho, 1.0 / s.rho, 0.0;
        dw += params.rate * s.rho * z * dphi_de * de;
    }
    c.Emat.setZero();
    c.Emat.row(3) = params.heat_release * dw;
    c.Emat.row(4) = -dw;
    return c;
}

EulerState eulerian_state(double z, const ChemParams& params)
{
    const GasState g = algebraic_state(z, params);
    EulerState s;
    s.rho = 1.0 / g.tau;
    s.u1 = g.tau;
    s.u2 = 0.0;
    s.e = g.e;
    s.z = z;
    return s;
}

MultiDProfile::MultiDProfile(const ChemParams& params, double z_min, const GridControl& grid)
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
    for (int i = 0; i < n; ++i) s_[i] = s0 * double(i) / double(n - 1);

    const ChemParams& p = params_;
    auto g = [&p](double s) {
        const double z = std::exp(s);
        return algebraic_state(z, p).tau * z / reaction_rhs(z, p);
    };
    grid_.resize(n);
    double x = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i > 0) x += integrate_gk(g, s_[i], s_[i - 1], control_.quad_tolerance);
        grid_[i] = {x, eulerian_state(i == 0 ? 1.0 : std::exp(s_[i]), p)};
    }
    unburned_ = {1.0, 1.0, 0.0, p.e_plus, 1.0};
    for (const auto& pt : grid_) {
        const double c0 = pt.state.sound_speed(p.gamma);
        if (!(c0 * c0 - pt.state.u1 * pt.state.u1 > 0.0))
            throw DomainError("Lax condition c0^2 - u1^2 > 0 fails on the reaction tail");
    }
}

double MultiDProfile::x_of_s_from(double s, std::size_t node) const
{
    const ChemParams& p = params_;
    auto g = [&p](double t) {
        const double z = std::exp(t);
        return algebraic_state(z, p).tau * z / reaction_rhs(z, p);
    };
    if (s == s_[node]) return grid_[node].x;
    const double d = integrate_gk(g, std::min(s, s_[node]), std::max(s, s_[node]), control_.quad_tolerance);
    return s < s_[node] ? grid_[node].x + d : grid_[node].x - d;
}

double MultiDProfile::x_of_z(double z) const
{
    if (!(z > 0.0 && z <= 1.0)) throw DomainError("x_of_z needs z in (0,1], got " + fmt(z));
    const double s = std::log(z);
    std::size_t j = 0;
    while (j + 1 < s_.size() && s_[j + 1] >= s) ++j;
    return x_of_s_from(s, j);
}

double MultiDProfile::z_of_x(double x) const
{
    const double xm = grid_.back().x;
    if (!(x >= 0.0 && x <= xm)) throw DomainError("z_of_x needs x in [0, " + fmt(xm) + "], got " + fmt(x));
    auto it = std::lower_bound(grid_.begin(), grid_.end(), x, [](const EulerPoint& a, double v) { return a.x < v; });
    const std::size_t j = std::size_t(it - grid_.begin());
    if (j == 0) return 1.0;
    const double xa = grid_[j - 1].x, xb = grid_[j].x;
    double hi = s_[j - 1], lo = s_[j];
    double s = hi + (lo - hi) * (x - xa) / (xb - xa);
    for (int n = 0; n < 60; ++n) {
        const double fx = x_of_s_from(s, j) - x;  // decreasing in s
        if (fx > 0.0) lo = s; else hi = s;
        if (std::abs(fx) <= 1e-15 * (1.0 + std::abs(x))) break;
        const double z = std::exp(s);
        const double dxds = -algebraic_state(z, params_).tau * z / reaction_rhs(z, params_);
        double next = s - fx / dxds;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == s) break;
        s = next;
    }
    return std::exp(s);
}

cplx acoustic_root(cplx lambda, double xi, double c0, double u1)
{
    if (xi == 0.0) return lambda;
    const cplx a = lambda * lambda + (c0 * c0 - u1 * u1) * xi * xi;
    if (a.imag() == 0.0 && a.real() < 0.0) {
        // on the imaginary axis beyond glancing: limit from Re lambda > 0
        const double sgn = lambda.imag() == 0.0 ? 1.0 : std::copysign(1.0, lambda.imag());
        return {0.0, sgn * std::sqrt(-a.real())};
    }
    return std::sqrt(a);
}

cplx decaying_dual_exponent(cplx lambda, double xi, const EulerState& s, double gamma)
{
    const double c0 = s.sound_speed(gamma);
    const cplx S = acoustic_root(lambda, xi, c0, s.u1);
    return -(lambda * s.u1 + c0 * S) / (c0 * c0 - s.u1 * s.u1);
}

Vec5c acoustic_left_vector(cplx lambda, double xi, const EulerState& s, double gamma)
{
    const double c0 = s.sound_speed(gamma), u = s.u1, r = s.rho;
    Eigen::Matrix<cplx, 1, 4> lv;  // left null vector of the primitive pencil
    if (xi == 0.0) {
        lv << 0.0, -0.5 * r * c0 * (u + c0), 0.0, 0.5 * (c0 + u);
    } else {
        const cplx S = acoustic_root(lambda, xi, c0, u);
        const cplx d = lambda + S;
        lv << 0.0, -r * c0 * (lambda * u + c0 * S) / d, cplx(0.0, -xi * r * c0 * (c0 * c0 - u * u)) / d,
            (lambda * c0 + u * S) / d;
    }
    const Eigen::Matrix<cplx, 1, 4> lw = lv * primitive_jacobian(s, gamma).cast<cplx>();
    Vec5c out;
    out << lw[0], lw[1], lw[2], lw[3], 0.0;
    return out;
}

Vec5c acoustic_right_vector(cplx lambda, double xi, const EulerState& s, double gamma)
{
    const double c0 = s.sound_speed(gamma), u = s.u1, r = s.rho;
    const cplx mu = decaying_dual_exponent(lambda, xi, s, gamma);
    const cplx a = lambda - mu * u;
    // primitive (rho, u1, u2, p) components, then dW/dV
    const cplx drho = r * a / (c0 * c0), du1 = mu, du2 = cplx(0.0, -xi), dp = r * a;
    const double k = 0.5 * (s.u1 * s.u1 + s.u2 * s.u2);
    Vec5c w;
    w << drho, s.u1 * drho + r * du1, s.u2 * drho + r * du2, k * drho + r * s.u1 * du1 + r * s.u2 * du2 + dp / gamma,
        s.z * drho;
    return w;
}

Mat5c multid_dual_matrix(cplx lambda, double xi, const MultiDCoeffs& c)
{
    const Mat5 AinvT = c.A1.inverse().transpose();
    const Mat5c inner = lambda * Mat5c::Identity() + cplx(0.0, xi) * c.A2.transpose().cast<cplx>() -
                        c.Emat.transpose().cast<cplx>();
    return AinvT.cast<cplx>() * inner;
}

DualMode5 multid_dual_init(cplx lambda, double xi, const ChemParams& params)
{
    const EulerState b = eulerian_state(0.0, params);
    const MultiDCoeffs c = multid_jacobians(b, params);
    const Mat5c M = multid_dual_matrix(lambda, xi, c);

    DualMode5 m;
    m.mode = decaying_dual_exponent(lambda, xi, b, params.gamma);
    m.vector = acoustic_left_vector(lambda, xi, b, params.gamma);
    // Reaction component from the last column of the pencil at the burned state.
    const double kphi = params.rate * arrhenius(b.e, params);
    m.vector[4] = params.heat_release * kphi * m.vector[3] / (lambda + kphi - m.mode * b.u1);

    const double scale = M.cwiseAbs().maxCoeff() + std::abs(m.mode);
    const double res = ((M - m.mode * Mat5c::Identity()) * m.vector).cwiseAbs().maxCoeff();
    if (!(res <= 1e-10 * scale * m.vector.cwiseAbs().maxCoeff()))
        throw NumericalError("multi-d dual mode residual too large: " + fmt(res));

    Eigen::ComplexEigenSolver<Mat5c> es(M, false);
    const double tol = 1e-12 * scale;
    int negative = 0;
    for (int i = 0; i < 5; ++i)
        if (es.eigenvalues()[i].real() < -tol) ++negative;
    if (negative > 1 || (m.mode.real() < -tol && negative != 1))
        throw NumericalError("expected exactly one decaying multi-d dual mode at the burned state (glancing query?), found " +
                             std::to_string(negative));
    return m;
}

EvansMultiD::EvansMultiD(const MultiDProfile& profile) : params_(profile.params()), z_min_(profile.z_min())
{
    const EulerState& wm = profile.unburned();
    const EulerState& wp = profile.neumann_plus();
    jump_w_ = wm.conserved() - wp.conserved();
    jump_f2_ = euler_flux(wm, 2, params_.gamma) - euler_flux(wp, 2, params_.gamma);
    source_plus_ = euler_source(wp, params_);
}

Vec5c EvansMultiD::boundary_vector(cplx lambda, double xi) const
{
    return lambda * jump_w_.cast<cplx>() + cplx(0.0, xi) * jump_f2_.cast<cplx>() + source_plus_.cast<cplx>();
}

cplx EvansMultiD::removed_exponent(cplx lambda, double xi) const
{
    const ChemParams& p = params_;
    const cplx mu_inf = decaying_dual_exponent(lambda, xi, eulerian_state(0.0, p), p.gamma);
    // dx1 = -tau / (k phi) ds
    auto f = [&](double s) {
        const double z = std::exp(s);
        const EulerState st = eulerian_state(z, p);
        return (decaying_dual_exponent(lambda, xi, st, p.gamma) - mu_inf) * (st.u1 * z / reaction_rhs(z, p));
    };
    const double s0 = std::log(z_min_);
    return integrate_gk(f, s0, 0.0, 1e-12, 12) + f(s0);
}

EvansValue EvansMultiD::operator()(cplx lambda, double xi, const EvansControls& ctl, IntegrationStats* stats) const
{
    const ChemParams& p = params_;
    const DualMode5 init = multid_dual_init(lambda, xi, p);
    const double s0 = std::log(z_min_);
    const double G = p.gamma;

    Vec5c y0 = init.vector;
    if (ctl.tail_correction) {
        const EulerState b = eulerian_state(0.0, p);
        const double r = -p.rate * arrhenius(b.e, p) / b.u1;  // z ~ exp(r x1)
        const double hz = 1e-4;
        auto M_at = [&](double z) { return multid_dual_matrix(lambda, xi, multid_jacobians(eulerian_state(z, p), p)); };
        const Mat5c M0 = M_at(0.0);
        const Mat5c M1 = (-3.0 * M0 + 4.0 * M_at(hz) - M_at(2.0 * hz)) / (2.0 * hz);
        const Mat5c K = M0 - (init.mode + r) * Mat5c::Identity();
        Eigen::PartialPivLU<Mat5c> lu(K);
        const Vec5c a1 = lu.solve(-M1 * init.vector);
        if (a1.allFinite()) y0 += z_min_ * a1;
        const cplx mu_min = decaying_dual_exponent(lambda, xi, eulerian_state(z_min_, p), G);
        y0 *= std::exp(-(mu_min - init.mode) / r);
    }

    using State = std::array<cplx, 5>;
    State y;
    for (int i = 0; i < 5; ++i) y[i] = y0[i];
    auto rhs = [&p, lambda, xi, G](double s, const State& yv, State& dy) {
        const double z = std::min(std::exp(s), 1.0);
        const EulerState st = eulerian_state(z, p);
        const MultiDCoeffs c = multid_jacobians(st, p);
        const Mat5c M = multid_dual_matrix(lambda, xi, c);
        const cplx mu = decaying_dual_exponent(lambda, xi, st, G);
        const double dxds = -st.u1 / (p.rate * arrhenius(st.e, p));
        for (int i = 0; i < 5; ++i) {
            cplx acc = -mu * yv[i];
            for (int j = 0; j < 5; ++j) acc += M(i, j) * yv[j];
            dy[i] = dxds * acc;
        }
    };
    const auto res = detail::integrate_dual<5>(rhs, y, s0, 0.0, ctl);
    if (stats) {
        stats->accepted += res.stats.accepted;
        stats->rejected += res.stats.rejected;
    }
    const Vec5c bv = boundary_vector(lambda, xi);
    cplx d = 0.0;
    for (int i = 0; i < 5; ++i) d += res.y[i] * bv[i];
    return EvansValue::from_complex(d, res.log_scale, -removed_exponent(lambda, xi));
}

EvansValue evans_multid(cplx lambda, double xi, const MultiDProfile& profile, const EvansControls& ctl)
{
    return EvansMultiD(profile)(lambda, xi, ctl);
}

}  // namespace znd
