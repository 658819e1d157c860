#include "doctest.h"

#include "zndstab/errors.hpp"
#include "zndstab/profile.hpp"

#include <cmath>

using namespace znd;

namespace {

ChemParams benchmark()
{
    ChemParams p;
    p.gamma = 0.2;
    p.e_plus = 6.23e-2;
    p.heat_release = 6.23e-1;
    p.activation = 6.0;
    p.rate = 1.53e4;
    p.specific_heat = 1.0;
    return p;
}

// Written out again from the closed form, long double, so it shares no code with the library.
long double tau_closed_form(long double z, const ChemParams& p)
{
    const long double g = p.gamma, e = p.e_plus, q = p.heat_release;
    const long double a = (g + 1) * (g * e + 1) / (g + 2);
    const long double d = (g + 1) * (g + 1) * (g * e + 1) * (g * e + 1) - g * (g + 2) * (1 + 2 * (g + 1) * e - 2 * q * (z - 1));
    return a - std::sqrt(d) / (g + 2);
}

}  // namespace

TEST_CASE("q_cj closed-form values")
{
    for (double g : {0.2, 1.2, 3.0}) {
        CHECK(q_cj(g, 0.0) == doctest::Approx(1.0 / (2.0 * g * (g + 2.0))).epsilon(1e-14));
        CHECK(std::abs(q_cj(g, 1.0 / (g * (g + 1.0)))) < 1e-14);
    }
    const double v = q_cj(0.2, 6.23e-2);
    const double g = 0.2, e = 6.23e-2;
    const double direct = ((g + 1) * (g + 1) * (g * e + 1) * (g * e + 1) - g * (g + 2) * (1 + 2 * (g + 1) * e)) / (2 * g * (g + 2));
    CHECK(v == doctest::Approx(direct).epsilon(1e-14));
    CHECK(v > 6.23e-1);
    CHECK_THROWS_AS(q_cj(0.2, -1e-3), DomainError);
    CHECK_THROWS_AS(q_cj(0.2, 4.2), DomainError);
}

TEST_CASE("q_cj decreases in e_plus")
{
    for (double g : {0.2, 1.2}) {
        const double emax = 1.0 / (g * (g + 1.0));
        double prev = q_cj(g, 0.0);
        for (int i = 1; i <= 2000; ++i) {
            const double v = q_cj(g, emax * i / 2000.0);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("algebraic state")
{
    ChemParams p = benchmark();
    SUBCASE("independent evaluation at z = 0.5")
    {
        const GasState s = algebraic_state(0.5, p);
        const long double tau = tau_closed_form(0.5L, p);
        CHECK(std::abs(s.tau - double(tau)) < 1e-14);
        CHECK(std::abs(s.u - (1.0 - s.tau)) < 1e-15);
        CHECK(std::abs(s.e - s.tau * (p.gamma * p.e_plus + 1.0 - s.tau) / p.gamma) < 1e-15);
    }
    SUBCASE("z = 1 does not see q")
    {
        ChemParams p0 = p;
        p0.heat_release = 0.0;
        const GasState a = algebraic_state(1.0, p), b = algebraic_state(1.0, p0);
        CHECK(a.tau == doctest::Approx(b.tau).epsilon(1e-15));
        CHECK(a.e == doctest::Approx(b.e).epsilon(1e-15));
    }
    SUBCASE("q = q_cj at z = 0 is the double root")
    {
        p.heat_release = q_cj(p.gamma, p.e_plus);
        const GasState s = algebraic_state(0.0, p);
        CHECK(s.tau == doctest::Approx((p.gamma + 1) * (p.gamma * p.e_plus + 1) / (p.gamma + 2)).epsilon(1e-7));
    }
    SUBCASE("steady conservation across the reaction zone")
    {
        // F(W(z)) - F(W+) = (0, 0, q (z - 1), 0) up to the z flux, since F' = R and R_E = -q R_z.
        const Vec4 fp = lagrangian_flux(lagrangian_state({1.0, 0.0, p.e_plus}, 1.0), p);
        for (double z : {0.0, 0.1, 0.5, 0.9, 1.0}) {
            const Vec4 f = lagrangian_flux(lagrangian_state(algebraic_state(z, p), z), p);
            CHECK(std::abs(f[0] - fp[0]) < 1e-14);
            CHECK(std::abs(f[1] - fp[1]) < 1e-14);
            CHECK(std::abs(f[2] - fp[2] - p.heat_release * (z - 1.0)) < 1e-14);
        }
    }
    SUBCASE("negative discriminant names the bound")
    {
        p.heat_release = 2.0;
        try {
            (void)algebraic_state(0.0, p);
            FAIL("expected DomainError");
        } catch (const DomainError& e) {
            CHECK(std::string(e.what()).find("q_cj") != std::string::npos);
        }
    }
}

TEST_CASE("reaction rate")
{
    ChemParams p = benchmark();
    const GasState s = algebraic_state(1.0, p);
    CHECK(reaction_rhs(1.0, p) == doctest::Approx(p.rate * std::exp(-p.activation / (s.e / p.specific_heat))).epsilon(1e-14));
    CHECK(std::abs(reaction_rhs(1e-300, p)) < 1e-290);
    p.activation = 0.0;
    for (double z : {0.01, 0.3, 1.0}) CHECK(reaction_rhs(z, p) == doctest::Approx(p.rate * z).epsilon(1e-15));
}

TEST_CASE("profile on the benchmark parameters")
{
    const ChemParams p = benchmark();
    const ZNDProfile prof(p, 1e-8);
    const auto& g = prof.grid();
    REQUIRE(g.size() > 10);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& pt = g[i];
        CHECK(std::abs(pt.u - (1.0 - pt.tau)) <= 1e-12);
        CHECK(std::abs(pt.e - pt.tau * (p.gamma * p.e_plus + 1.0 - pt.tau) / p.gamma) <= 1e-12);
        CHECK(pt.p == doctest::Approx(p.gamma * pt.e / pt.tau).epsilon(1e-14));
        CHECK(pt.tau > 0.0);
        CHECK(pt.tau <= 1.0);
        if (i) {
            CHECK(pt.z > g[i - 1].z);
            CHECK(pt.x > g[i - 1].x);
        }
    }
    CHECK(g.back().x == 0.0);
    const GasState s1 = algebraic_state(1.0, p);
    CHECK(prof.neumann_minus().tau == doctest::Approx(s1.tau).epsilon(1e-15));
    CHECK(prof.neumann_minus().e == doctest::Approx(s1.e).epsilon(1e-15));
    for (double r : prof.rankine_hugoniot_residual()) CHECK(std::abs(r) <= 1e-10);
    CHECK(prof.z_of_x(-prof.half_reaction_length()) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(prof.domain_length() == doctest::Approx(-prof.x_of_z(1e-8)).epsilon(1e-12));
}

TEST_CASE("zero activation has the closed antiderivative x = ln z / k")
{
    ChemParams p = benchmark();
    p.activation = 0.0;
    p.rate = 2.5;
    const ZNDProfile prof(p, 1e-8);
    for (double z : {1e-7, 1e-3, 0.2, 0.5, 0.99})
        CHECK(prof.x_of_z(z) == doctest::Approx(std::log(z) / p.rate).epsilon(1e-11));
    CHECK(prof.half_reaction_length() == doctest::Approx(std::log(2.0) / p.rate).epsilon(1e-11));
}

TEST_CASE("rescaling to unit half-reaction length")
{
    const ChemParams p = with_half_reaction_length(benchmark(), 1.0);
    const ZNDProfile prof(p, 1e-8);
    CHECK(prof.half_reaction_length() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("q = q_cj is rejected")
{
    ChemParams p = benchmark();
    p.heat_release = q_cj(p.gamma, p.e_plus);
    CHECK_THROWS_AS(ZNDProfile(p, 1e-8), DomainError);
}

TEST_CASE("classical scaling")
{
    ScalingClassical c;
    c.gamma = 0.2;
    c.overdrive = 1.4;
    c.activation_classical = 50.0;
    c.heat_classical = 10.0;
    const ChemParams p = from_classical_scaling(c);
    CHECK(p.heat_release == doctest::Approx(10.0 * p.e_plus).epsilon(1e-15));
    CHECK(p.activation == doctest::Approx(50.0 * p.e_plus).epsilon(1e-15));
    // CJ reference: f e_plus solves Q0 w = q_cj(gamma, w)
    const double w = c.overdrive * p.e_plus;
    CHECK(c.heat_classical * w == doctest::Approx(q_cj(c.gamma, w)).epsilon(1e-12));

    const ScalingClassical back = to_classical_scaling(p);
    CHECK(back.overdrive == doctest::Approx(c.overdrive).epsilon(1e-12));
    CHECK(back.activation_classical == doctest::Approx(c.activation_classical).epsilon(1e-12));
    CHECK(back.heat_classical == doctest::Approx(c.heat_classical).epsilon(1e-12));

    c.activation_classical = 0.0;
    CHECK(from_classical_scaling(c).activation == 0.0);
    c.overdrive = 1.0;
    CHECK_THROWS_AS(from_classical_scaling(c), DomainError);
    c.overdrive = 0.5;
    CHECK_THROWS_AS(from_classical_scaling(c), DomainError);
}
