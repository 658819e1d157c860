#include "zndstab/errors.hpp"
#include "zndstab/stability.hpp"
#include "zndstab/winding.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace znd {

namespace {

struct Box {
    double x0, x1, y0, y1;
    int count;
    double size() const { return std::max(x1 - x0, y1 - y0); }
    bool on_boundary(cplx z) const
    {
        const bool in_x = z.real() >= x0 && z.real() <= x1;
        const bool in_y = z.imag() >= y0 && z.imag() <= y1;
        return in_x && in_y && (z.real() == x0 || z.real() == x1 || z.imag() == y0 || z.imag() == y1);
    }
    bool contains(cplx z, double slack) const
    {
        return z.real() >= x0 - slack && z.real() <= x1 + slack && z.imag() >= y0 - slack && z.imag() <= y1 + slack;
    }
};

int box_count(const Evaluator& f, const Box& b, double exclusion, const RefineControl& ref)
{
    const double ex = b.on_boundary(0.0) ? exclusion : 0.0;
    return winding(f, Contour::box(b.x0, b.x1, b.y0, b.y1, ex), ref).count;
}

// Newton on D with a central difference for D'; m is the multiplicity. Differencing
// log D instead breaks down once the iterate is closer to the root than the step h.
bool newton_polish(const Evaluator& f, cplx& z, int m, const Box& b, double tol, double exclusion)
{
    for (int it = 0; it < 60; ++it) {
        const double h = 1e-6 * std::max(1.0, std::abs(z));
        EvansValue vz, va, vc;
        try {
            vz = f(z);
            va = f(z + h);
            vc = f(z - h);
        } catch (const NumericalError&) {
            return false;  // stepped outside the region where the evaluator is defined
        }
        const double shift = std::max({vz.log_magnitude, va.log_magnitude, vc.log_magnitude});
        const cplx d = (va.scaled(shift) - vc.scaled(shift)) / (2.0 * h);
        if (!(std::abs(d) > 0.0)) return false;
        const cplx step = double(m) * vz.scaled(shift) / d;
        z -= step;
        if (!b.contains(z, 0.25 * b.size())) return false;
        // the excluded disk is not counted by the contour, so a zero there is not ours
        if (std::abs(step) < tol * std::max(1.0, std::abs(z)))
            return b.contains(z, 1e-9 * b.size()) && std::abs(z) >= exclusion;
    }
    return false;
}

}  // namespace

RootReport locate_roots(const Evaluator& f0, double x0, double x1, double y0, double y1, double exclusion,
                        const RootSearchControl& ctl)
{
    CachedEvaluator cached(f0);
    const Evaluator f = cached.as_function();
    RootReport rep;
    Box top{x0, x1, y0, y1, 0};
    top.count = box_count(f, top, exclusion, ctl.refine);
    rep.region_count = top.count;

    std::deque<Box> work;
    if (top.count > 0) work.push_back(top);
    int processed = 0;
    const double ratios[] = {0.5, 0.4875, 0.5125, 0.475};
    while (!work.empty()) {
        const Box b = work.front();
        work.pop_front();
        if (++processed > ctl.max_boxes) {
            rep.unresolved.emplace_back(cplx(b.x0, b.y0), cplx(b.x1, b.y1));
            continue;
        }
        const cplx centre(0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1));
        if (b.count == 1 || b.size() <= ctl.target_box) {
            cplx z = centre;
            if (newton_polish(f, z, 1, b, ctl.newton_tol, exclusion)) {
                int mult = 1;
                if (b.count > 1) {
                    const double rho = 0.25 * b.size();
                    mult = winding(f, Contour::circle(z, rho), ctl.refine).count;
                    if (mult == b.count && mult > 1) newton_polish(f, z, mult, b, ctl.newton_tol, exclusion);
                }
                if (mult == b.count) {
                    const EvansValue v = f(z);
                    rep.roots.push_back({z, mult, v.log_magnitude});
                    continue;
                }
            }
            if (b.size() < 1e-8 || (b.on_boundary(0.0) && b.size() < 4.0 * exclusion)) {
                rep.unresolved.emplace_back(cplx(b.x0, b.y0), cplx(b.x1, b.y1));
                continue;
            }
        }
        // Quadrisect; shift the split lines when a child contour meets a zero.
        bool done = false;
        std::exception_ptr last;
        for (double r : ratios) {
            const double mx = b.x0 + r * (b.x1 - b.x0);
            const double my = b.y0 + r * (b.y1 - b.y0);
            Box kids[4] = {{b.x0, mx, b.y0, my, 0}, {mx, b.x1, b.y0, my, 0}, {b.x0, mx, my, b.y1, 0}, {mx, b.x1, my, b.y1, 0}};
            try {
                int sum = 0;
                for (auto& k : kids) sum += (k.count = box_count(f, k, exclusion, ctl.refine));
                if (sum != b.count) {
                    RefineControl fine = ctl.refine;
                    fine.max_phase_step *= 0.5;
                    sum = 0;
                    for (auto& k : kids) sum += (k.count = box_count(f, k, exclusion, fine));
                }
                if (sum != b.count) continue;
            } catch (const NumericalError&) {
                last = std::current_exception();
                continue;
            }
            for (auto& k : kids)
                if (k.count > 0) work.push_back(k);
            done = true;
            break;
        }
        if (!done) rep.unresolved.emplace_back(cplx(b.x0, b.y0), cplx(b.x1, b.y1));
    }
    std::sort(rep.roots.begin(), rep.roots.end(), [](const Root& a, const Root& b) {
        return a.lambda.imag() < b.lambda.imag() || (a.lambda.imag() == b.lambda.imag() && a.lambda.real() < b.lambda.real());
    });
    rep.evaluations = long(cached.evaluations());
    return rep;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    default: return "inconclusive";
    }
}

CachedEvaluator make_evans1d_evaluator(const ZNDProfile& profile, const EvansControls& ctl)
{
    auto ev = std::make_shared<Evans1D>(profile);
    return CachedEvaluator([ev, ctl](cplx l) { return (*ev)(l, ctl); }, true);
}

VerdictReport verdict(const ChemParams& params, const VerdictControl& ctl)
{
    const ChemParams p = ctl.unit_half_length ? with_half_reaction_length(params, 1.0) : params;
    const ZNDProfile prof(p, ctl.z_min);
    const CachedEvaluator f = make_evans1d_evaluator(prof, ctl.evans);
    const Evaluator fn = f.as_function();

    VerdictReport rep;
    rep.radius = ctl.radius;
    rep.rate_used = p.rate;
    const WindingReport w1 = winding(fn, Contour::half_disk(ctl.radius, ctl.exclusion), ctl.refine);
    rep.count = w1.count;
    rep.count_doubled = w1.count;
    rep.max_phase_step = w1.max_phase_step;
    if (ctl.confirm_doubling) {
        const WindingReport w2 = winding(fn, Contour::half_disk(2.0 * ctl.radius, ctl.exclusion), ctl.refine);
        rep.count_doubled = w2.count;
        rep.max_phase_step = std::max(rep.max_phase_step, w2.max_phase_step);
    }
    if (rep.count != rep.count_doubled) rep.verdict = Verdict::inconclusive;
    else rep.verdict = rep.count == 0 ? Verdict::stable : Verdict::unstable;
    rep.evaluations = long(f.evaluations());
    return rep;
}

std::vector<BoundaryPoint> trace_boundary(const ChemParams& base, const std::vector<double>& q_grid, double e_lo,
                                          double e_hi, double tol, const VerdictControl& ctl)
{
    if (!(e_hi > e_lo && tol > 0.0)) throw DomainError("boundary bracket needs e_hi > e_lo and tol > 0");
    std::vector<BoundaryPoint> out(q_grid.size());
    std::exception_ptr error;
    const long n = long(q_grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < n; ++i) {
        try {
            BoundaryPoint bp;
            bp.q = q_grid[i];
            ChemParams p = base;
            p.heat_release = bp.q;
            auto at = [&](double e) {
                p.activation = e;
                return verdict(p, ctl);
            };
            // Roots inside the first radius already settle instability; only a zero count
            // that changes under doubling leaves the side undecided.
            auto side = [](const VerdictReport& v) {
                if (v.verdict == Verdict::stable) return 0;
                return v.count > 0 ? 1 : -1;
            };
            VerdictReport lo = at(e_lo), hi = at(e_hi);
            double a = e_lo, b = e_hi;
            if (side(lo) != 0 || side(hi) != 1) {
                bp.note = "no stable-to-unstable transition in the bracket (" + to_string(lo.verdict) + " at lower end, " +
                          to_string(hi.verdict) + " at upper end)";
            } else {
                bp.found = true;
                while (b - a > tol) {
                    const double m = 0.5 * (a + b);
                    const VerdictReport vm = at(m);
                    const int sm = side(vm);
                    if (sm == 0) {
                        a = m;
                        lo = vm;
                    } else if (sm == 1) {
                        b = m;
                        hi = vm;
                    } else {
                        bp.found = false;
                        bp.note = "inconclusive verdict at activation " + std::to_string(m);
                        break;
                    }
                }
            }
            bp.e_lo = a;
            bp.e_hi = b;
            bp.count_below = lo.count;
            bp.count_above = hi.count;
            out[i] = bp;
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

PolyFit fit_boundary_loglog(const std::vector<BoundaryPoint>& points, int degree)
{
    std::vector<double> lx, ly;
    for (const auto& p : points)
        if (p.found && p.q > 0.0) {
            lx.push_back(std::log(p.q));
            ly.push_back(std::log(p.activation()));
        }
    const int n = int(lx.size());
    if (n <= degree) throw DomainError("polynomial fit needs more boundary points than the degree");
    Eigen::MatrixXd V(n, degree + 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        double t = 1.0;
        for (int j = 0; j <= degree; ++j, t *= lx[i]) V(i, j) = t;
        y[i] = ly[i];
    }
    const Eigen::VectorXd c = V.colPivHouseholderQr().solve(y);
    PolyFit fit;
    fit.coeffs.assign(c.data(), c.data() + c.size());
    for (int i = 0; i < n; ++i) {
        const double e = std::exp(ly[i]);
        const double pred = std::exp((V.row(i) * c)(0));
        const double r = std::abs(pred - e) / e;
        fit.mean_relative_error += r / n;
        fit.max_relative_error = std::max(fit.max_relative_error, r);
    }
    return fit;
}

}  // namespace znd
