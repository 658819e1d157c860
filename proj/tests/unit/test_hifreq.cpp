#include "doctest.h"

#include "zndstab/errors.hpp"
#include "zndstab/hifreq.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

using namespace znd;

namespace {

ChemParams benchmark()
{
    ChemParams p;
    p.gamma = 0.2;
    p.e_plus = 6.23e-2;
    p.heat_release = 6.23e-1;
    p.activation = 6.0;
    return with_half_reaction_length(p);
}

// Greedy matching of two 5-element multisets, largest mismatch relative to the entry size.
double multiset_distance(std::array<cplx, 5> a, std::vector<cplx> b)
{
    double worst = 0.0;
    for (cplx x : a) {
        auto it = std::min_element(b.begin(), b.end(), [x](cplx u, cplx v) { return std::abs(u - x) < std::abs(v - x); });
        worst = std::max(worst, std::abs(*it - x) / std::max(1.0, std::abs(x)));
        b.erase(it);
    }
    return worst;
}

}  // namespace

TEST_CASE("symbol eigenvalues match the dense spectrum")
{
    const MultiDProfile prof(benchmark(), 1e-8);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(0.0, prof.domain_length()), ur(0.05, 3.0), ui(-3.0, 3.0);
    for (int k = 0; k < 40; ++k) {
        const double x = ux(rng);
        const cplx zeta(ur(rng), ui(rng));
        const SymbolPoint sp = symbol_eigs(x, zeta, prof);
        const Mat5c G = principal_symbol(zeta, prof.state_at(x), prof.params().gamma);
        Eigen::ComplexEigenSolver<Mat5c> es(G);
        std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + 5);
        CHECK(multiset_distance(sp.mu, ev) <= 1e-10);
        CHECK_FALSE(sp.glancing);
    }
}

TEST_CASE("glancing points sit on the imaginary axis at the sonic gap")
{
    const MultiDProfile prof(benchmark(), 1e-8);
    const auto locus = glancing_locus(prof);
    REQUIRE(!locus.empty());
    for (const auto& g : locus) {
        CHECK(g.gap > 0.0);
        const SymbolPoint sp = symbol_eigs(g.x, cplx(0.0, g.height), prof);
        CHECK(sp.glancing);
        CHECK(std::abs(sp.s_val) <= 1e-6);
    }
}

TEST_CASE("type classification")
{
    CHECK(classify_type(SonicGap{[](double) { return 0.7; }, 0.0, 2.0}) == DetonationType::neither);
    CHECK(classify_type(SonicGap{[](double x) { return 1.0 + x; }, 0.0, 2.0}) == DetonationType::increasing);
    CHECK(classify_type(SonicGap{[](double x) { return 3.0 - x; }, 0.0, 2.0}) == DetonationType::decreasing);
    CHECK(classify_type(SonicGap{[](double x) { return 1.0 + (x - 1.0) * (x - 1.0); }, 0.0, 2.0}) ==
          DetonationType::neither);
    const SonicGap g{[](double x) { return 1.0 + 0.3 * std::sin(x); }, 0.0, 1.4};
    CHECK(classify_type(g, 501) == classify_type(g, 2001));
    CHECK(to_string(DetonationType::increasing) == "I");
    CHECK(to_string(DetonationType::decreasing) == "D");

    const MultiDProfile prof(benchmark(), 1e-8);
    const SonicGap sg = sonic_gap(prof);
    CHECK(classify_type(prof) == classify_type(sg, 8001));
}

TEST_CASE("turning points")
{
    SUBCASE("transversal crossing")
    {
        const SonicGap g{[](double x) { return 1.0 + x; }, 0.0, 2.0};
        const auto tp = turning_points(cplx(0.0, 1.5), g);
        REQUIRE(tp.size() == 1);
        CHECK(tp[0].x_star == doctest::Approx(1.25).epsilon(1e-10));
        CHECK(tp[0].nondegeneracy == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(tp[0].nondegenerate);
    }
    SUBCASE("tangential minimum")
    {
        const SonicGap g{[](double x) { return 1.0 + (x - 1.0) * (x - 1.0); }, 0.0, 2.0};
        const auto tp = turning_points(cplx(0.0, 1.0), g);
        REQUIRE(tp.size() == 1);
        CHECK(tp[0].x_star == doctest::Approx(1.0).epsilon(1e-6));
        CHECK_FALSE(tp[0].nondegenerate);
    }
    SUBCASE("strictly unstable zeta has none")
    {
        const SonicGap g{[](double x) { return 1.0 + x; }, 0.0, 2.0};
        CHECK(turning_points(cplx(1.0, 0.5), g).empty());
    }
}

TEST_CASE("neumann-lopatinski determinant")
{
    const MultiDProfile prof(benchmark(), 1e-8);
    const cplx zeta(1.0, 0.5);
    const NeumannLopatinski n = neumann_lopatinski(zeta, prof);
    CHECK(std::abs(n.value - n.ell0.cwiseProduct(n.R1).sum()) <= 1e-14 * std::abs(n.value));
    CHECK(std::abs(n.value) > 0.0);

    // h times the full boundary vector at (zeta/h, 1/h) tends to ell0 at rate h
    const EvansMultiD D(prof);
    double prev = 1e300;
    for (double h : {1e-1, 1e-2, 1e-3}) {
        const double d = (h * D.boundary_vector(zeta / h, 1.0 / h) - n.ell0).norm();
        CHECK(d < prev);
        CHECK(d <= 10.0 * h * n.ell0.norm());
        prev = d;
    }

    const EulerState& s0 = prof.neumann_plus();
    const double c0 = s0.sound_speed(prof.params().gamma);
    CHECK_THROWS_AS(neumann_lopatinski(cplx(0.0, std::sqrt(c0 * c0 - s0.u1 * s0.u1)), prof), NumericalError);
}

TEST_CASE("WKB ratio improves as h shrinks")
{
    const MultiDProfile prof(benchmark(), 1e-8);
    const HfReport r = hf_ratio(cplx(1.0, 0.5), {0.2, 0.1}, prof);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[1].deviation < r.rows[0].deviation);
    CHECK(r.rows[1].deviation < 0.1);
}
