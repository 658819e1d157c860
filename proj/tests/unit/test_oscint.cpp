#include "doctest.h"

#include "zndstab/oscint.hpp"

#include <cmath>
#include <limits>

using namespace znd;

TEST_CASE("zero symbol")
{
    const OscResult r = osc_integral(Symbol::constant(0.0), 1.0, 0.1);
    CHECK(std::isinf(r.log_abs));
    CHECK(r.value() == cplx(0.0));
}

TEST_CASE("gaussian identity on the whole line")
{
    const double inf = std::numeric_limits<double>::infinity();
    for (double h : {0.05, 0.1, 0.2, 0.01}) {
        const OscResult r = osc_integral_ab(Symbol::constant(1.0), -inf, inf, h);
        CHECK(r.log_abs == doctest::Approx(0.5 * std::log(M_PI * h) - 1.0 / h).epsilon(1e-13));
        CHECK(std::abs(std::remainder(r.arg, 2 * M_PI)) <= 1e-10);
    }
}

TEST_CASE("contour and real-axis quadrature agree")
{
    const Symbol a = Symbol::analytic([](cplx y) { return std::cos(y) + 0.5 * y; }, "cos");
    const Symbol b = Symbol::real([](double y) { return std::cos(y) + 0.5 * y; }, "cos");
    for (double h : {0.3, 0.1}) {
        for (double x : {0.5, 2.0}) {
            const cplx u = osc_integral(a, x, h).value(), v = osc_integral(b, x, h).value();
            CHECK(std::abs(u - v) <= 1e-9 * std::abs(u));
        }
    }
}

TEST_CASE("even real symbol gives a real integral")
{
    const Symbol a = Symbol::real([](double y) { return 1.0 / (1.0 + y * y); });
    const cplx v = osc_integral(a, 1.5, 0.1).value();
    CHECK(std::abs(v.imag()) <= 1e-12 * std::abs(v));
}

TEST_CASE("linearity and orientation")
{
    const Symbol a = Symbol::analytic([](cplx y) { return std::exp(y); });
    const Symbol b = Symbol::analytic([](cplx y) { return y * y; });
    const Symbol c = Symbol::analytic([](cplx y) { return 2.0 * std::exp(y) + y * y; });
    const double h = 0.15;
    const cplx ia = osc_integral_ab(a, -0.3, 1.2, h).value(), ib = osc_integral_ab(b, -0.3, 1.2, h).value();
    const cplx ic = osc_integral_ab(c, -0.3, 1.2, h).value();
    CHECK(std::abs(ic - (2.0 * ia + ib)) <= 1e-11 * std::abs(ic));
    const cplx r = osc_integral_ab(a, 1.2, -0.3, h).value();
    CHECK(std::abs(r + ia) <= 1e-12 * std::abs(ia));
}

TEST_CASE("decay rates of the constant symbol")
{
    // |I| at x = 0.5 carries a |cos(1/h + phase)| factor, so the fit needs many h values
    std::vector<double> hs;
    for (int i = 0; i < 12; ++i) hs.push_back(3e-3 * std::pow(0.1 / 3e-3, i / 11.0));
    const AnalyticDecayReport r = analytic_decay_check(Symbol::constant(1.0), {0.5, 2.0}, hs);
    REQUIRE(r.fits.size() == 2);
    CHECK(r.fits[0].rate == doctest::Approx(0.25).epsilon(0.1));
    CHECK(r.fits[1].rate == doctest::Approx(1.0).epsilon(0.1));
    CHECK(r.regime_split);
}

TEST_CASE("gevrey symbol vanishes on the negative axis")
{
    const Symbol g = Symbol::gevrey(2.0);
    CHECK(g(-0.5) == cplx(0.0));
    CHECK(g(1.0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    // s = 2: a(y) = exp(-1/y)
    CHECK(g(0.25).real() == doctest::Approx(std::exp(-4.0)).epsilon(1e-14));
    const OscResult r = osc_integral(g, 2.0, 0.05);
    CHECK(std::isfinite(r.log_abs));
}

TEST_CASE("scalar riccati")
{
    const std::vector<double> xs = {-0.5, -0.1, 0.0, 0.3, 0.7};
    SUBCASE("no forcing")
    {
        const cplx a0(0.3, -0.4);
        const double h = 0.1;
        const RiccatiScalar r = riccati_scalar(Symbol::constant(0.0), a0, h, 1.0, xs);
        for (std::size_t i = 0; i < xs.size(); ++i)
            CHECK(r.log_abs[i] == doctest::Approx(xs[i] * xs[i] / h + std::log(std::abs(a0))).epsilon(1e-13));
    }
    SUBCASE("differential equation holds")
    {
        const double h = 0.2, d = 1e-4;
        const Symbol theta = Symbol::constant(1.0);
        const cplx a0(0.1, 0.2);
        for (double x : {-0.4, 0.25, 0.6}) {
            const RiccatiScalar r = riccati_scalar(theta, a0, h, 1.0, {x - d, x, x + d});
            auto val = [&](int i) { return std::polar(std::exp(r.log_abs[i]), r.arg[i]); };
            const cplx lhs = h * (val(2) - val(0)) / (2 * d);
            const cplx rhs = 2.0 * cplx(x, 1.0) * val(1) + 1.0;
            CHECK(std::abs(lhs - rhs) <= 1e-6 * std::max(1.0, std::abs(rhs)));
        }
    }
    SUBCASE("optimal initial value keeps the end bounded")
    {
        const double h = 1.0 / 64, L = 1.0;
        const Symbol theta = Symbol::constant(1.0);
        const cplx a0 = optimal_alpha0(theta, h, L);
        const RiccatiScalar good = riccati_scalar(theta, a0, h, L, {L});
        const RiccatiScalar bad = riccati_scalar(theta, a0 + 1e-3, h, L, {L});
        CHECK(good.log_abs[0] < 5.0);
        CHECK(bad.log_abs[0] > 10.0);
    }
}

TEST_CASE("conjugator verdict on a short interval")
{
    const auto hs = dyadic_h_grid(4, 7);
    REQUIRE(hs.size() == 4);
    CHECK(hs.front() == 1.0 / 16);
    CHECK(hs.back() == 1.0 / 128);
    const ConjugatorReport r = conjugator_verdict(Symbol::constant(1.0), 0.5, hs, 50);
    CHECK(r.verdict == ConjugatorVerdict::bounded);
    CHECK(to_string(ConjugatorVerdict::unbounded) == "unbounded");
}
