#pragma once

#include "zndstab/evans_value.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace znd {

// Symbol a in I = int e^{-(y^2 + 2iy)/h} a(y) dy. The class picks the contour.
enum class SymbolClass {
    analytic,  // entire on the strip -1 <= Im y <= 0; contour pushed down to Im y = -1
    gevrey,    // a(y) = exp(-y^{-1/(s-1)}) for y > 0, 0 otherwise; contour through the saddle
    real       // only known on the real axis; panel quadrature on the axis
};

struct Symbol {
    SymbolClass kind = SymbolClass::analytic;
    std::function<cplx(cplx)> complex_fn;  // analytic
    std::function<double(double)> real_fn; // real
    double gevrey_s = 2.0;
    std::string name;

    static Symbol constant(double c);
    static Symbol analytic(std::function<cplx(cplx)> f, std::string name = "analytic");
    static Symbol gevrey(double s);
    static Symbol real(std::function<double(double)> f, std::string name = "real");

    cplx operator()(double y) const;  // value on the real axis
};

struct QuadControl {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;  // relative to the largest integrand magnitude on the contour
    int max_depth = 4;
};

// Values that over- or underflow are kept as log-magnitude and phase.
struct OscResult {
    double log_abs = -std::numeric_limits<double>::infinity();
    double arg = 0.0;
    double log_error = -std::numeric_limits<double>::infinity();  // log of the absolute error estimate
    bool precision_warning = false;

    bool representable() const { return log_abs <= 300.0; }
    cplx value() const;  // zero when log_abs = -inf
};

// int_a^b; a > b gives minus the reversed integral. b may be +inf and a -inf for analytic symbols.
OscResult osc_integral_ab(const Symbol& a, double lo, double hi, double h, const QuadControl& q = {});
// int_{-x}^{x}
OscResult osc_integral(const Symbol& a, double x, double h, const QuadControl& q = {});

// Least-squares fit log|I| = c0 + c1 log h - rate / h.
struct RateFit {
    double x = 0.0;
    double rate = 0.0;
    double power = 0.0;  // c1
    double offset = 0.0;
    double rms = 0.0;
    bool underflow = false;  // some |I| below the double range; carried in log form
};

struct AnalyticDecayReport {
    std::vector<double> h_grid;
    std::vector<RateFit> fits;                // one per x
    std::vector<std::vector<OscResult>> table;  // [x][h]
    bool regime_split = false;  // rates within 10% of min(x^2, 1) on both sides of x = 1
};

AnalyticDecayReport analytic_decay_check(const Symbol& a, const std::vector<double>& xs,
                                         const std::vector<double>& h_grid, const QuadControl& q = {});

// log|I| = c0 + c1 log h - c h^{-beta}; beta by a bracketed 1D search, the rest linear.
struct GevreyFit {
    double s = 0.0;
    double x = 0.0;
    double beta = 0.0;
    double c = 0.0;
    double power = 0.0;
    double offset = 0.0;
    double rms = 0.0;
    double condition = 0.0;  // of the linear design at the optimum
    std::vector<double> h_grid;
    std::vector<double> log_abs;
};

std::vector<double> default_gevrey_h_grid();  // 21 log-spaced points on [1e-5, 1e-1]

GevreyFit gevrey_decay_check(double s, double x = 2.0, const std::vector<double>& h_grid = default_gevrey_h_grid(),
                             const QuadControl& q = {});

// h alpha' = 2 (x + i) alpha + theta on [-L, L], alpha(0) = alpha0.
struct RiccatiScalar {
    double h = 0.0;
    double L = 0.0;
    cplx alpha0{};
    std::vector<double> x;
    std::vector<double> log_abs;
    std::vector<double> arg;
    bool precision_warning = false;
};

// alpha0 that keeps alpha bounded at x = L: -h^{-1} int_0^L e^{-(y^2 + 2iy)/h} theta.
cplx optimal_alpha0(const Symbol& theta, double h, double L, const QuadControl& q = {});

RiccatiScalar riccati_scalar(const Symbol& theta, cplx alpha0, double h, double L, const std::vector<double>& xs,
                             const QuadControl& q = {});

enum class ConjugatorVerdict { bounded, unbounded, inconclusive };
std::string to_string(ConjugatorVerdict v);

struct ConjugatorReport {
    ConjugatorVerdict verdict = ConjugatorVerdict::inconclusive;
    double L = 0.0;
    std::vector<double> h_grid;
    std::vector<double> log_sup;   // per h: log sup_x |I(x,h)| / (h e^{-x^2/h})
    std::vector<double> x_at_sup;
    double evidence_rate = 0.0;  // slope of log_sup against 1/h over the last two h
    double margin = 10.0;
    std::string note;  // grid-based numerical evidence, not a proof
};

std::vector<double> dyadic_h_grid(int from, int to);  // 2^-from .. 2^-to

ConjugatorReport conjugator_verdict(const Symbol& theta, double L, const std::vector<double>& h_grid, int nx = 200,
                                    const QuadControl& q = {});

}  // namespace znd
