#include "zndstab/winding.hpp"

#include "zndstab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace znd {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap(double d) { return d - two_pi * std::nearbyint(d / two_pi); }

bool lex_less(cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); }

std::string point_text(cplx z)
{
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

}  // namespace

double phase_step(const EvansValue& a, const EvansValue& b)
{
    const double exact = b.phase_exact - a.phase_exact;
    return exact + wrap((b.phase - b.phase_exact) - (a.phase - a.phase_exact));
}

Segment Segment::line(cplx from, cplx to)
{
    Segment s;
    s.kind = Kind::line;
    s.a = from;
    s.b = to;
    return s;
}

Segment Segment::arc(cplx center, double radius, double theta0, double theta1)
{
    Segment s;
    s.kind = Kind::arc;
    s.center = center;
    s.radius = radius;
    s.theta0 = theta0;
    s.theta1 = theta1;
    s.a = center + std::polar(radius, theta0);
    s.b = center + std::polar(radius, theta1);
    return s;
}

cplx Segment::point(double t) const
{
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    if (kind == Kind::arc) return center + std::polar(radius, theta0 + t * (theta1 - theta0));
    // Canonical orientation so that shared edges produce identical sample points.
    if (lex_less(a, b)) return a + t * (b - a);
    return b + (1.0 - t) * (a - b);
}

Contour Contour::circle(cplx center, double radius)
{
    Contour c;
    c.kind = "circle";
    c.segments.push_back(Segment::arc(center, radius, -std::numbers::pi, std::numbers::pi));
    return c;
}

Contour Contour::half_disk(double radius, double exclusion)
{
    if (!(radius > exclusion && exclusion > 0.0)) throw DomainError("half-disk needs radius > exclusion > 0");
    const double h = std::numbers::pi / 2.0;
    Contour c;
    c.kind = "half-disk";
    c.exclusion = exclusion;
    c.segments.push_back(Segment::arc(0.0, radius, -h, h));
    c.segments.push_back(Segment::line(cplx(0.0, radius), cplx(0.0, exclusion)));
    c.segments.push_back(Segment::arc(0.0, exclusion, h, -h));
    c.segments.push_back(Segment::line(cplx(0.0, -exclusion), cplx(0.0, -radius)));
    return c;
}

Contour Contour::box(double x0, double x1, double y0, double y1, double exclusion)
{
    if (!(x1 > x0 && y1 > y0)) throw DomainError("box needs x1 > x0 and y1 > y0");
    const cplx v[4] = {cplx(x0, y0), cplx(x1, y0), cplx(x1, y1), cplx(x0, y1)};
    Contour c;
    c.kind = "box";
    c.exclusion = exclusion;
    const bool inside = x0 < 0.0 && 0.0 < x1 && y0 < 0.0 && 0.0 < y1;
    if (exclusion > 0.0 && inside) throw DomainError("origin strictly inside the box cannot be excluded");
    for (int k = 0; k < 4; ++k) {
        const cplx p = v[k], q = v[(k + 1) % 4];
        const cplx d = (q - p) / std::abs(q - p);
        if (exclusion > 0.0 && q == 0.0) {
            // corner at the origin: quarter arc through the interior
            const cplx dn = (v[(k + 2) % 4] - q) / std::abs(v[(k + 2) % 4] - q);
            c.segments.push_back(Segment::line(p, -exclusion * d));
            const double ts = std::arg(-d);
            double te = std::arg(dn);
            while (te > ts) te -= two_pi;
            c.segments.push_back(Segment::arc(0.0, exclusion, ts, te));
            continue;
        }
        const cplx start = (exclusion > 0.0 && p == 0.0) ? exclusion * d : p;
        // origin strictly inside this edge: half arc through the interior
        const double cross = (0.0 - p.real()) * d.imag() - (0.0 - p.imag()) * d.real();
        const double along = -(p.real() * d.real() + p.imag() * d.imag());
        if (exclusion > 0.0 && p != 0.0 && q != 0.0 && cross == 0.0 && along > 0.0 && along < std::abs(q - p)) {
            c.segments.push_back(Segment::line(start, -exclusion * d));
            const double ts = std::arg(-d);
            c.segments.push_back(Segment::arc(0.0, exclusion, ts, ts - std::numbers::pi));
            c.segments.push_back(Segment::line(exclusion * d, q));
            continue;
        }
        c.segments.push_back(Segment::line(start, q));
    }
    return c;
}

Contour Contour::polyline(const std::vector<cplx>& v)
{
    if (v.size() < 3) throw DomainError("polyline contour needs at least 3 vertices");
    Contour c;
    c.kind = "polyline";
    for (std::size_t k = 0; k < v.size(); ++k) c.segments.push_back(Segment::line(v[k], v[(k + 1) % v.size()]));
    return c;
}

struct CachedEvaluator::State {
    Evaluator f;
    bool conj = false;
    mutable std::mutex mu;
    std::map<std::pair<double, double>, EvansValue> table;
    std::size_t calls = 0;
};

CachedEvaluator::CachedEvaluator(Evaluator f, bool conjugate_symmetric) : state_(std::make_shared<State>())
{
    state_->f = std::move(f);
    state_->conj = conjugate_symmetric;
}

EvansValue CachedEvaluator::operator()(cplx lambda) const
{
    State& s = *state_;
    {
        std::lock_guard<std::mutex> lock(s.mu);
        auto it = s.table.find({lambda.real(), lambda.imag()});
        if (it != s.table.end()) return it->second;
        if (s.conj) {
            auto jt = s.table.find({lambda.real(), -lambda.imag()});
            if (jt != s.table.end()) return {jt->second.log_magnitude, -jt->second.phase, -jt->second.phase_exact};
        }
    }
    const EvansValue v = s.f(lambda);
    std::lock_guard<std::mutex> lock(s.mu);
    ++s.calls;
    s.table.emplace(std::make_pair(lambda.real(), lambda.imag()), v);
    return v;
}

std::size_t CachedEvaluator::evaluations() const
{
    std::lock_guard<std::mutex> lock(state_->mu);
    return state_->calls;
}

Evaluator CachedEvaluator::as_function() const
{
    CachedEvaluator self = *this;
    return [self](cplx l) { return self(l); };
}

std::vector<EvansValue> evaluate_batch(const Evaluator& f, const std::vector<cplx>& points, int threads)
{
    std::vector<EvansValue> out(points.size());
    std::exception_ptr error;
    const long n = long(points.size());
#ifdef _OPENMP
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
    for (long i = 0; i < n; ++i) {
        try {
            out[i] = f(points[i]);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!error) error = std::current_exception();
        }
    }
    (void)threads;
    if (error) std::rethrow_exception(error);
    return out;
}

WindingReport winding(const Evaluator& f, const Contour& contour, const RefineControl& ctl)
{
    struct Node {
        double t;
        cplx lambda;
        EvansValue v;
    };
    const std::size_t ns = contour.segments.size();
    std::vector<std::vector<Node>> nodes(ns);

    std::vector<cplx> pts;
    std::vector<std::pair<std::size_t, double>> where;
    const int n0 = std::max(2, ctl.initial_per_segment);
    for (std::size_t k = 0; k < ns; ++k)
        for (int j = 0; j <= n0; ++j) {
            const double t = double(j) / double(n0);
            pts.push_back(contour.segments[k].point(t));
            where.emplace_back(k, t);
        }

    const double min_dt = std::ldexp(1.0, -ctl.max_depth);
    for (;;) {
        const auto vals = evaluate_batch(f, pts, ctl.threads);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!std::isfinite(vals[i].log_magnitude) || !std::isfinite(vals[i].phase))
                throw NumericalError("evaluator returned a non-finite value at " + point_text(pts[i]) +
                                     " (zero on the contour?)");
            nodes[where[i].first].push_back({where[i].second, pts[i], vals[i]});
        }
        for (auto& seg : nodes)
            std::sort(seg.begin(), seg.end(), [](const Node& a, const Node& b) { return a.t < b.t; });

        pts.clear();
        where.clear();
        for (std::size_t k = 0; k < ns; ++k) {
            const auto& seg = nodes[k];
            for (std::size_t j = 0; j + 1 < seg.size(); ++j) {
                const double dphi = std::abs(phase_step(seg[j].v, seg[j + 1].v));
                const double dlog = std::abs(seg[j + 1].v.log_magnitude - seg[j].v.log_magnitude);
                const double dz = std::abs(seg[j + 1].lambda - seg[j].lambda);
                const bool long_step = ctl.max_step > 0.0 && dz > ctl.max_step;
                if (dphi < ctl.max_phase_step && dlog < ctl.max_log_step && !long_step) continue;
                const double dt = seg[j + 1].t - seg[j].t;
                if (dt <= min_dt)
                    throw NumericalError("phase step does not shrink under refinement near " + point_text(seg[j].lambda) +
                                         ": the determinant is (nearly) zero on the contour");
                const double tm = 0.5 * (seg[j].t + seg[j + 1].t);
                pts.push_back(contour.segments[k].point(tm));
                where.emplace_back(k, tm);
            }
        }
        if (pts.empty()) break;
    }

    WindingReport rep;
    rep.contour = contour;
    for (const auto& seg : nodes)
        for (const auto& n : seg) rep.samples.push_back({n.lambda, n.v});
    double total = 0.0;
    const std::size_t m = rep.samples.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double d = phase_step(rep.samples[i].value, rep.samples[(i + 1) % m].value);
        rep.max_phase_step = std::max(rep.max_phase_step, std::abs(d));
        total += d;
    }
    const double turns = total / two_pi;
    rep.count = int(std::lround(turns));
    rep.residual = std::abs(turns - rep.count);
    if (rep.max_phase_step >= ctl.max_phase_step)
        throw NumericalError("contour junction phase step exceeds the refinement threshold");
    return rep;
}

}  // namespace znd
