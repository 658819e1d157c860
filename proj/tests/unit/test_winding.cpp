#include "doctest.h"

#include "zndstab/stability.hpp"
#include "zndstab/winding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

using namespace znd;

namespace {

// Product of (lambda - r) over the given roots, in EvansValue form.
Evaluator poly(std::vector<cplx> roots, double growth = 0.0)
{
    return [roots, growth](cplx l) {
        cplx v = 1.0;
        for (cplx r : roots) v *= (l - r);
        return EvansValue::from_complex(v, 0.0, growth * l);
    };
}

}  // namespace

TEST_CASE("contours close up")
{
    for (const Contour& c : {Contour::circle({0.5, -0.2}, 2.0), Contour::half_disk(10.0, 1e-2),
                             Contour::box(0.0, 3.0, -2.0, 2.0, 1e-2), Contour::box(-1.0, 1.0, -1.0, 1.0)}) {
        REQUIRE(!c.segments.empty());
        for (std::size_t i = 0; i < c.segments.size(); ++i) {
            const cplx end = c.segments[i].point(1.0);
            const cplx next = c.segments[(i + 1) % c.segments.size()].point(0.0);
            CHECK(std::abs(end - next) <= 1e-12);
        }
    }
}

TEST_CASE("winding counts polynomial zeros")
{
    const Evaluator f = poly({{1.0, 1.0}, {1.0, -1.0}, {3.0, 0.5}, {-2.0, 0.0}, {0.0, 0.0}});
    CHECK(winding(f, Contour::circle(0.0, 1e-2)).count == 1);
    CHECK(winding(f, Contour::half_disk(10.0, 1e-2)).count == 3);
    CHECK(winding(f, Contour::half_disk(2.0, 1e-2)).count == 2);
    CHECK(winding(f, Contour::box(0.0, 4.0, -4.0, 4.0, 1e-2)).count == 3);
    const WindingReport w = winding(f, Contour::circle(0.0, 5.0));
    CHECK(w.count == 5);
    CHECK(w.residual < 1e-8);
    CHECK(w.max_phase_step <= RefineControl{}.max_phase_step);
}

TEST_CASE("winding with an oscillating exponential factor")
{
    // e^{2 lambda} adds no zeros but spins the phase along the imaginary axis
    const Evaluator f = poly({{0.5, 7.0}, {0.5, -7.0}}, 2.0);
    CHECK(winding(f, Contour::half_disk(20.0, 1e-2)).count == 2);
}

TEST_CASE("roots are located and polished")
{
    const std::vector<cplx> truth = {{0.3, 4.0}, {0.3, -4.0}, {1.5, 0.0}, {2.0, 2.0}, {2.0, -2.0}};
    std::vector<cplx> all = truth;
    all.push_back(0.0);
    all.push_back({-1.0, 3.0});
    const RootReport r = locate_roots(poly(all), 0.0, 5.0, -5.0, 5.0, 1e-2);
    CHECK(r.unresolved.empty());
    REQUIRE(r.roots.size() == truth.size());
    for (cplx t : truth) {
        double best = 1e300;
        for (const Root& x : r.roots) best = std::min(best, std::abs(x.lambda - t));
        CHECK(best <= 1e-10);
    }
}

TEST_CASE("newton may not settle on the excluded zero")
{
    // boxes touching the origin start Newton close to the excluded zero
    const RootReport r = locate_roots(poly({0.0, {0.05, 0.85}, {0.05, -0.85}}), 0.0, 1.0, -1.0, 1.0, 1e-2);
    CHECK(r.unresolved.empty());
    REQUIRE(r.roots.size() == 2);
    for (const Root& x : r.roots) CHECK(std::abs(x.lambda - cplx(0.05, std::copysign(0.85, x.lambda.imag()))) <= 1e-10);
}

TEST_CASE("double root reported with multiplicity")
{
    const RootReport r = locate_roots(poly({{1.0, 1.0}, {1.0, 1.0}, {1.0, -1.0}, {1.0, -1.0}}), 0.0, 3.0, -3.0, 3.0, 0.0);
    int total = 0;
    for (const Root& x : r.roots) total += x.multiplicity;
    CHECK(total == 4);
}

TEST_CASE("cache reuses conjugates")
{
    std::atomic<int> calls{0};
    CachedEvaluator c(
        [&calls](cplx l) {
            ++calls;
            return EvansValue::from_complex(l * l + 1.0);
        },
        true);
    const EvansValue a = c({0.5, 2.0});
    const EvansValue b = c({0.5, -2.0});
    (void)c({0.5, 2.0});
    CHECK(calls.load() == 1);
    CHECK(std::abs(b.value() - std::conj(a.value())) <= 1e-14);
    CHECK(c.evaluations() == 1);
}

TEST_CASE("batch evaluation keeps the input order")
{
    std::vector<cplx> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({0.1 * i, -0.2 * i});
    const auto v = evaluate_batch([](cplx l) { return EvansValue::from_complex(l + 1.0); }, pts);
    REQUIRE(v.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(v[i].value() - (pts[i] + 1.0)) <= 1e-14);
}

TEST_CASE("log-log polynomial fit is exact on polynomial data")
{
    std::vector<BoundaryPoint> pts;
    for (double q : {0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) {
        const double lq = std::log(q);
        const double e = std::exp(1.0 - 0.4 * lq + 0.05 * lq * lq);
        BoundaryPoint b;
        b.q = q;
        b.e_lo = b.e_hi = e;
        b.found = true;
        pts.push_back(b);
    }
    const PolyFit f = fit_boundary_loglog(pts, 2);
    REQUIRE(f.coeffs.size() == 3);
    CHECK(f.coeffs[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f.coeffs[1] == doctest::Approx(-0.4).epsilon(1e-10));
    CHECK(f.coeffs[2] == doctest::Approx(0.05).epsilon(1e-8));
    CHECK(f.mean_relative_error < 1e-12);
}

TEST_CASE("small heat release is stable")
{
    ChemParams p;
    p.gamma = 0.2;
    p.e_plus = 6.23e-2;
    p.heat_release = 1e-3 * q_cj(p.gamma, p.e_plus);
    p.activation = 6.0;
    VerdictControl ctl;
    ctl.radius = 5.0;
    const VerdictReport r = verdict(p, ctl);
    CHECK(r.verdict == Verdict::stable);
    CHECK(r.count == 0);
    CHECK(r.count_doubled == 0);
}
