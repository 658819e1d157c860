#include "zndstab/oscint.hpp"

#include "zndstab/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace znd {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
const cplx I1(0.0, 1.0);

// Kernel exponent -(y^2 + 2iy)/h.
cplx kernel(cplx y, double h) { return -(y * y + 2.0 * I1 * y) / h; }

struct Seg {
    cplx y0, y1;
    int panels;
};

struct PathSum {
    double ref = -kInf;
    cplx value{};
    double err = 0.0;
};

// Integrates exp(E(y)) m(y) dy along the polyline. Everything is scaled by exp(-ref), ref the
// largest sampled log-magnitude; panels more than `skip` e-folds below ref are dropped.
template <class E, class M>
PathSum integrate_path(const std::vector<Seg>& segs, const E& expo, const M& mult, const QuadControl& q,
                       double skip = 60.0)
{
    auto logmag = [&](cplx y) {
        const cplx m = mult(y);
        const double am = std::abs(m);
        if (am == 0.0) return -kInf;
        return expo(y).real() + std::log(am);
    };
    PathSum out;
    std::vector<std::vector<double>> pmax(segs.size());
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const Seg& s = segs[k];
        pmax[k].assign(s.panels, -kInf);
        for (int i = 0; i < s.panels; ++i) {
            for (double f : {0.0, 0.5, 1.0}) {
                const double t = (i + f) / s.panels;
                if (t == 0.0 && s.y0 == 0.0) continue;  // Gevrey start, value 0
                const double v = logmag(s.y0 + (s.y1 - s.y0) * t);
                if (!std::isnan(v)) pmax[k][i] = std::max(pmax[k][i], v);
            }
            out.ref = std::max(out.ref, pmax[k][i]);
        }
    }
    if (!std::isfinite(out.ref)) {
        out.ref = -kInf;
        return out;
    }
    using boost::math::quadrature::gauss_kronrod;
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const Seg& s = segs[k];
        const cplx dy = s.y1 - s.y0;
        auto f = [&](double t) {
            const cplx y = s.y0 + dy * t;
            const cplx m = mult(y);
            if (m == 0.0) return cplx(0.0);
            return std::exp(expo(y) - out.ref) * m * dy;
        };
        for (int i = 0; i < s.panels; ++i) {
            const bool keep = pmax[k][i] >= out.ref - skip || (i > 0 && pmax[k][i - 1] >= out.ref - skip) ||
                              (i + 1 < s.panels && pmax[k][i + 1] >= out.ref - skip);
            if (!keep) continue;
            double e = 0.0;
            out.value += gauss_kronrod<double, 31>::integrate(f, double(i) / s.panels, double(i + 1) / s.panels,
                                                             q.max_depth, q.rel_tol, &e);
            out.err += e;
        }
    }
    return out;
}

int panels_for(double length, double width)
{
    const double n = std::ceil(length / width);
    if (!(n < 5e7)) throw DomainError("oscillatory integral needs too many panels, h too small");
    return std::max(1, int(n));
}

OscResult finish(const PathSum& p, double sign, const QuadControl& q)
{
    OscResult r;
    if (!std::isfinite(p.ref) || p.value == 0.0) {
        r.log_abs = -kInf;
        r.log_error = std::isfinite(p.ref) && p.err > 0.0 ? p.ref + std::log(p.err) : -kInf;
        return r;
    }
    const cplx v = sign * p.value;
    r.log_abs = p.ref + std::log(std::abs(v));
    r.arg = std::arg(v);
    r.log_error = p.err > 0.0 ? p.ref + std::log(p.err) : -kInf;
    r.precision_warning = !(p.err <= q.abs_tol + q.rel_tol * std::abs(v));
    return r;
}

PathSum analytic_path(const Symbol& a, double lo, double hi, double h, const QuadControl& q)
{
    // -(y^2+2iy)/h = -(y+i)^2/h - 1/h; on Im y = -1 the kernel is the real Gaussian e^{-t^2/h - 1/h}
    const double reach = std::sqrt(800.0 * h);
    const double t0 = std::isfinite(lo) ? lo : std::min(hi, 0.0) - reach;
    const double t1 = std::isfinite(hi) ? hi : std::max(lo, 0.0) + reach;
    std::vector<Seg> segs;
    auto vwidth = [&](double b) { return std::min(kPi * h / (8.0 * (std::abs(b) + 1.0)), 0.5 * h); };
    if (std::isfinite(lo)) segs.push_back({lo, cplx(lo, -1.0), panels_for(1.0, vwidth(lo))});
    segs.push_back({cplx(t0, -1.0), cplx(t1, -1.0), panels_for(t1 - t0, 0.5 * std::sqrt(h))});
    if (std::isfinite(hi)) segs.push_back({cplx(hi, -1.0), hi, panels_for(1.0, vwidth(hi))});
    return integrate_path(segs, [h](cplx y) { return kernel(y, h); }, a.complex_fn, q);
}

PathSum real_path(const std::function<double(double)>& a, double lo, double hi, double h, const QuadControl& q)
{
    std::vector<Seg> segs{{lo, hi, panels_for(hi - lo, 0.25 * kPi * h)}};
    return integrate_path(segs, [h](cplx y) { return kernel(y, h); }, [&a](cplx y) { return cplx(a(y.real())); }, q);
}

cplx gevrey_saddle(double h, double p)
{
    // -2(y+i)/h + p y^{-p-1} = 0, started from the balance of the last two terms
    cplx y = std::pow(cplx(p * h / 2.0, 0.0), 1.0 / (p + 1.0)) * std::exp(cplx(0.0, -0.5 * kPi / (p + 1.0)));
    for (int it = 0; it < 100; ++it) {
        const cplx g = -2.0 * (y + I1) / h + p * std::pow(y, -p - 1.0);
        const cplx dg = -2.0 / h - p * (p + 1.0) * std::pow(y, -p - 2.0);
        const cplx step = g / dg;
        y -= step;
        if (std::abs(step) < 1e-15 * std::abs(y)) break;
    }
    if (!(y.real() > 0.0)) throw NumericalError("Gevrey saddle left the right half-plane");
    return y;
}

PathSum gevrey_path(double s, double hi, double h, const QuadControl& q)
{
    const double p = 1.0 / (s - 1.0);
    const cplx ys = gevrey_saddle(h, p);
    const double top = std::min(hi, 1.0);
    const cplx P = top * cplx(1.0, -0.5);
    auto width = [&](cplx a, cplx b) { return kPi * h / (8.0 * (std::max(std::abs(a), std::abs(b)) + 1.0)); };
    std::vector<Seg> segs;
    segs.push_back({0.0, ys, 64});
    segs.push_back({ys, P, panels_for(std::abs(P - ys), width(ys, P))});
    if (hi > top || P.imag() != 0.0) segs.push_back({P, hi, panels_for(std::abs(hi - P), width(P, hi))});
    auto expo = [h, p](cplx y) { return kernel(y, h) - std::pow(y, -p); };
    return integrate_path(segs, expo, [](cplx) { return cplx(1.0); }, q);
}

double gevrey_real(double y, double s)
{
    return y > 0.0 ? std::exp(-std::pow(y, -1.0 / (s - 1.0))) : 0.0;
}

void check_h(double h)
{
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("oscillatory integral needs h > 0");
}

}  // namespace

Symbol Symbol::constant(double c)
{
    Symbol s;
    s.kind = SymbolClass::analytic;
    s.complex_fn = [c](cplx) { return cplx(c); };
    s.name = "constant";
    return s;
}

Symbol Symbol::analytic(std::function<cplx(cplx)> f, std::string name)
{
    Symbol s;
    s.kind = SymbolClass::analytic;
    s.complex_fn = std::move(f);
    s.name = std::move(name);
    return s;
}

Symbol Symbol::gevrey(double index)
{
    if (!(index > 1.0)) throw DomainError("Gevrey index must exceed 1");
    Symbol s;
    s.kind = SymbolClass::gevrey;
    s.gevrey_s = index;
    s.name = "gevrey";
    return s;
}

Symbol Symbol::real(std::function<double(double)> f, std::string name)
{
    Symbol s;
    s.kind = SymbolClass::real;
    s.real_fn = std::move(f);
    s.name = std::move(name);
    return s;
}

cplx Symbol::operator()(double y) const
{
    switch (kind) {
    case SymbolClass::analytic: return complex_fn(cplx(y, 0.0));
    case SymbolClass::gevrey: return gevrey_real(y, gevrey_s);
    default: return real_fn(y);
    }
}

cplx OscResult::value() const
{
    if (!std::isfinite(log_abs)) return 0.0;
    if (!representable()) throw NumericalError("oscillatory integral too large for a raw value");
    return std::polar(std::exp(log_abs), arg);
}

OscResult osc_integral_ab(const Symbol& a, double lo, double hi, double h, const QuadControl& q)
{
    check_h(h);
    if (std::isnan(lo) || std::isnan(hi)) throw DomainError("oscillatory integral limits are NaN");
    if (lo == hi) return {};
    double sign = 1.0;
    if (lo > hi) {
        std::swap(lo, hi);
        sign = -1.0;
    }
    if ((!std::isfinite(lo) || !std::isfinite(hi)) && a.kind != SymbolClass::analytic)
        throw DomainError("infinite limits need an analytic symbol");
    switch (a.kind) {
    case SymbolClass::analytic: return finish(analytic_path(a, lo, hi, h, q), sign, q);
    case SymbolClass::gevrey:
        if (hi <= 0.0) return {};
        if (lo <= 0.0) return finish(gevrey_path(a.gevrey_s, hi, h, q), sign, q);
        {
            const double s = a.gevrey_s;
            return finish(real_path([s](double y) { return gevrey_real(y, s); }, lo, hi, h, q), sign, q);
        }
    default: return finish(real_path(a.real_fn, lo, hi, h, q), sign, q);
    }
}

OscResult osc_integral(const Symbol& a, double x, double h, const QuadControl& q)
{
    if (!(x >= 0.0)) throw DomainError("osc_integral needs x >= 0");
    return osc_integral_ab(a, -x, x, h, q);
}

namespace {

// Least squares of y on the given columns; returns coefficients, rms residual and condition number.
struct LinFit {
    Eigen::VectorXd c;
    double rms;
    double cond;
};

LinFit linfit(const Eigen::MatrixXd& A, const Eigen::VectorXd& y)
{
    // column scaling keeps the condition number meaningful across h ranges
    Eigen::VectorXd scale = A.colwise().norm().transpose();
    for (int j = 0; j < scale.size(); ++j)
        if (scale[j] == 0.0) scale[j] = 1.0;
    const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
    LinFit f;
    f.c = svd.solve(y).cwiseQuotient(scale);
    f.rms = std::sqrt((A * f.c - y).squaredNorm() / double(y.size()));
    const auto sv = svd.singularValues();
    f.cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : kInf;
    return f;
}

}  // namespace

AnalyticDecayReport analytic_decay_check(const Symbol& a, const std::vector<double>& xs, const std::vector<double>& h_grid,
                                         const QuadControl& q)
{
    if (h_grid.size() < 4) throw DomainError("rate fit needs at least 4 h values");
    AnalyticDecayReport rep;
    rep.h_grid = h_grid;
    rep.table.assign(xs.size(), std::vector<OscResult>(h_grid.size()));
    const long n = long(xs.size() * h_grid.size());
    std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long k = 0; k < n; ++k) {
        try {
            const std::size_t i = std::size_t(k) / h_grid.size(), j = std::size_t(k) % h_grid.size();
            rep.table[i][j] = osc_integral(a, xs[i], h_grid[j], q);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    rep.regime_split = true;
    const int m = int(h_grid.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Eigen::MatrixXd A(m, 3);
        Eigen::VectorXd y(m);
        RateFit f;
        f.x = xs[i];
        for (int j = 0; j < m; ++j) {
            A(j, 0) = 1.0;
            A(j, 1) = std::log(h_grid[j]);
            A(j, 2) = -1.0 / h_grid[j];
            y[j] = rep.table[i][j].log_abs;
            if (y[j] < -700.0) f.underflow = true;
            if (!std::isfinite(y[j])) throw NumericalError("rate fit hit a zero integral at x = " + std::to_string(xs[i]));
        }
        const LinFit lf = linfit(A, y);
        f.offset = lf.c[0];
        f.power = lf.c[1];
        f.rate = lf.c[2];
        f.rms = lf.rms;
        rep.fits.push_back(f);
        const double expect = std::min(xs[i] * xs[i], 1.0);
        if (!(std::abs(f.rate - expect) <= 0.1 * expect)) rep.regime_split = false;
    }
    return rep;
}

std::vector<double> default_gevrey_h_grid()
{
    std::vector<double> h(21);
    for (int i = 0; i < 21; ++i) h[i] = std::pow(10.0, -5.0 + 4.0 * i / 20.0);
    return h;
}

GevreyFit gevrey_decay_check(double s, double x, const std::vector<double>& h_grid, const QuadControl& q)
{
    if (!(s > 1.0)) throw DomainError("Gevrey index must exceed 1");
    if (!(x > 0.0)) throw DomainError("Gevrey check needs x > 0");
    if (h_grid.size() < 5) throw DomainError("Gevrey fit needs at least 5 h values");
    GevreyFit g;
    g.s = s;
    g.x = x;
    g.h_grid = h_grid;
    g.log_abs.resize(h_grid.size());
    const Symbol a = Symbol::gevrey(s);
    std::exception_ptr error;
    const long n = long(h_grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long j = 0; j < n; ++j) {
        try {
            const OscResult r = osc_integral(a, x, h_grid[j], q);
            if (!std::isfinite(r.log_abs)) throw NumericalError("Gevrey integral vanished");
            g.log_abs[j] = r.log_abs;
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    const int m = int(h_grid.size());
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(g.log_abs.data(), m);
    auto design = [&](double beta) {
        Eigen::MatrixXd A(m, 3);
        for (int j = 0; j < m; ++j) {
            A(j, 0) = 1.0;
            A(j, 1) = std::log(h_grid[j]);
            A(j, 2) = -std::pow(h_grid[j], -beta);
        }
        return A;
    };
    const auto best = boost::math::tools::brent_find_minima([&](double beta) { return linfit(design(beta), y).rms; },
                                                            0.02, 2.0, 40);
    const LinFit lf = linfit(design(best.first), y);
    g.beta = best.first;
    g.offset = lf.c[0];
    g.power = lf.c[1];
    g.c = lf.c[2];
    g.rms = lf.rms;
    g.condition = lf.cond;
    return g;
}

cplx optimal_alpha0(const Symbol& theta, double h, double L, const QuadControl& q)
{
    const OscResult r = osc_integral_ab(theta, 0.0, L, h, q);
    if (!std::isfinite(r.log_abs)) return 0.0;
    return -std::polar(std::exp(r.log_abs - std::log(h)), r.arg);
}

RiccatiScalar riccati_scalar(const Symbol& theta, cplx alpha0, double h, double L, const std::vector<double>& xs,
                             const QuadControl& q)
{
    check_h(h);
    if (!(L > 0.0)) throw DomainError("riccati_scalar needs L > 0");
    RiccatiScalar r;
    r.h = h;
    r.L = L;
    r.alpha0 = alpha0;
    // with the optimal alpha0 the bracket is -h^{-1} int_x^L, evaluated directly to avoid cancellation
    const cplx opt = optimal_alpha0(theta, h, L, q);
    const bool use_tail = std::abs(alpha0 - opt) <= 1e-12 * std::max(std::abs(opt), 1e-300) && opt != 0.0;
    for (double x : xs) {
        if (!(std::abs(x) <= L * (1.0 + 1e-15))) throw DomainError("riccati_scalar point outside [-L, L]");
        double lb;  // log|bracket|
        double ab;  // arg bracket
        if (use_tail) {
            const OscResult t = osc_integral_ab(theta, x, L, h, q);
            r.precision_warning = r.precision_warning || t.precision_warning;
            lb = t.log_abs - std::log(h);
            ab = t.arg + kPi;
        } else {
            const OscResult j = osc_integral_ab(theta, 0.0, x, h, q);
            r.precision_warning = r.precision_warning || j.precision_warning;
            // alpha0 + e^{lj} e^{i arg}, summed at a common scale
            const double lj = j.log_abs - std::log(h);
            const double l0 = alpha0 == 0.0 ? -kInf : std::log(std::abs(alpha0));
            const double ref = std::max(lj, l0);
            if (!std::isfinite(ref)) {
                lb = -kInf;
                ab = 0.0;
            } else {
                const cplx sum = (alpha0 == 0.0 ? cplx(0.0) : alpha0 * std::exp(-ref)) +
                                 (std::isfinite(lj) ? std::polar(std::exp(lj - ref), j.arg) : cplx(0.0));
                lb = sum == 0.0 ? -kInf : ref + std::log(std::abs(sum));
                ab = std::arg(sum);
            }
        }
        r.x.push_back(x);
        r.log_abs.push_back(lb + x * x / h);
        r.arg.push_back(std::remainder(ab + 2.0 * x / h, 2.0 * kPi));
    }
    return r;
}

std::string to_string(ConjugatorVerdict v)
{
    switch (v) {
    case ConjugatorVerdict::bounded: return "bounded";
    case ConjugatorVerdict::unbounded: return "unbounded";
    default: return "inconclusive";
    }
}

std::vector<double> dyadic_h_grid(int from, int to)
{
    std::vector<double> h;
    for (int k = from; k <= to; ++k) h.push_back(std::ldexp(1.0, -k));
    return h;
}

ConjugatorReport conjugator_verdict(const Symbol& theta, double L, const std::vector<double>& h_grid, int nx,
                                    const QuadControl& q)
{
    if (!(L > 0.0)) throw DomainError("conjugator_verdict needs L > 0");
    if (h_grid.size() < 2) throw DomainError("conjugator_verdict needs at least 2 h values");
    if (nx < 1) throw DomainError("conjugator_verdict needs nx >= 1");
    ConjugatorReport rep;
    rep.L = L;
    rep.h_grid = h_grid;
    const std::size_t nh = h_grid.size();
    std::vector<std::vector<double>> ratio(nh, std::vector<double>(nx, -kInf));
    std::exception_ptr error;
    const long n = long(nh) * nx;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long k = 0; k < n; ++k) {
        try {
            const std::size_t i = std::size_t(k) / nx;
            const int j = int(k % nx);
            const double h = h_grid[i], x = L * (j + 1) / nx;
            const OscResult r = osc_integral(theta, x, h, q);
            ratio[i][j] = r.log_abs - std::log(h) + x * x / h;
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    for (std::size_t i = 0; i < nh; ++i) {
        const auto it = std::max_element(ratio[i].begin(), ratio[i].end());
        rep.log_sup.push_back(*it);
        rep.x_at_sup.push_back(L * double(it - ratio[i].begin() + 1) / nx);
    }
    const double lm = std::log(rep.margin);
    const double first = rep.log_sup.front();
    const double top = *std::max_element(rep.log_sup.begin(), rep.log_sup.end());
    bool nondecreasing = true;
    for (std::size_t i = 1; i < nh; ++i)
        if (rep.log_sup[i] < rep.log_sup[i - 1] - 1e-9) nondecreasing = false;
    if (top <= first + lm) {
        rep.verdict = ConjugatorVerdict::bounded;
    } else if (nondecreasing && rep.log_sup.back() > first + lm) {
        rep.verdict = ConjugatorVerdict::unbounded;
    } else {
        rep.verdict = ConjugatorVerdict::inconclusive;
    }
    const std::size_t a = nh - 2, b = nh - 1;
    rep.evidence_rate = (rep.log_sup[b] - rep.log_sup[a]) / (1.0 / h_grid[b] - 1.0 / h_grid[a]);
    rep.note = "grid-based numerical evidence over the sampled (x, h) grid, not a proof";
    return rep;
}

}  // namespace znd
