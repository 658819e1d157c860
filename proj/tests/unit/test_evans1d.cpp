#include "doctest.h"

#include "zndstab/errors.hpp"
#include "zndstab/evans1d.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace znd;

namespace {

ChemParams benchmark(double activation = 6.0, double q = 6.23e-1)
{
    ChemParams p;
    p.gamma = 0.2;
    p.e_plus = 6.23e-2;
    p.heat_release = q;
    p.activation = activation;
    p.rate = 1.0;
    return with_half_reaction_length(p);
}

Vec4 plus(Vec4 a, int i, double h)
{
    a[i] += h;
    return a;
}

}  // namespace

TEST_CASE("jacobians against central differences")
{
    const ChemParams p = benchmark();
    for (double z : {1e-4, 0.3, 0.8, 1.0}) {
        const ProfilePoint pt = profile_point(z, 0.0, p);
        const LinearizedCoeffs c = jacobians(pt, p);
        const Vec4 w = lagrangian_state({pt.tau, pt.u, pt.e}, z);
        Mat4 A, E;
        for (int j = 0; j < 4; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(w[j]));
            const Vec4 fp = lagrangian_flux(plus(w, j, h), p), fm = lagrangian_flux(plus(w, j, -h), p);
            const Vec4 rp = lagrangian_source(plus(w, j, h), p), rm = lagrangian_source(plus(w, j, -h), p);
            for (int i = 0; i < 4; ++i) {
                A(i, j) = (fp[i] - fm[i]) / (2 * h);
                E(i, j) = (rp[i] - rm[i]) / (2 * h);
            }
        }
        CHECK((c.A - A).cwiseAbs().maxCoeff() <= 1e-7 * A.cwiseAbs().maxCoeff());
        CHECK((c.Emat - E).cwiseAbs().maxCoeff() <= 1e-7 * std::max(E.cwiseAbs().maxCoeff(), 1e-300));
        Eigen::FullPivLU<Mat4> lu(c.Emat);
        CHECK(lu.rank() <= 2);
    }
}

TEST_CASE("source jacobian special cases")
{
    SUBCASE("q = 0 leaves the gas rows source free")
    {
        ChemParams p = benchmark(6.0, 0.0);
        const LinearizedCoeffs c = jacobians(profile_point(0.5, 0.0, p), p);
        CHECK(c.Emat.topRows(3).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("zero activation: only the z column is nonzero")
    {
        ChemParams p = benchmark(0.0);
        const LinearizedCoeffs c = jacobians(profile_point(0.5, 0.0, p), p);
        CHECK(c.Emat.leftCols(3).cwiseAbs().maxCoeff() == 0.0);
        CHECK(c.Emat(3, 3) == doctest::Approx(-p.rate).epsilon(1e-14));
    }
}

TEST_CASE("dual mode at the burned end")
{
    const ChemParams p = benchmark();
    const LinearizedCoeffs c = jacobians(profile_point(0.0, 0.0, p), p);
    for (cplx lambda : {cplx(1.0, 0.3), cplx(1.0, -2.0), cplx(1.0, 7.5), cplx(0.2, 0.0), cplx(3.0, 0.0)}) {
        const DualMode m = dual_init(lambda, p);
        const Mat4c M = dual_matrix(lambda, c);
        CHECK((M * m.vector - m.mode * m.vector).norm() <= 1e-10 * m.vector.norm() * std::max(1.0, std::abs(m.mode)));
        CHECK(m.mode.real() > 0.0);

        // spectrum of -G^T is minus the spectrum of G = (-lambda + E) A^{-1}
        const Mat4c G = (-lambda * Mat4c::Identity() + c.Emat.cast<cplx>()) * c.A.inverse().cast<cplx>();
        Eigen::ComplexEigenSolver<Mat4c> es(G), ed(M);
        for (int i = 0; i < 4; ++i) {
            double best = 1e300;
            for (int j = 0; j < 4; ++j) best = std::min(best, std::abs(ed.eigenvalues()(i) + es.eigenvalues()(j)));
            CHECK(best <= 1e-10 * std::max(1.0, std::abs(ed.eigenvalues()(i))));
        }
        int positive = 0;
        for (int i = 0; i < 4; ++i) positive += ed.eigenvalues()(i).real() > 0.0;
        CHECK(positive == 1);

        if (lambda.imag() == 0.0) {
            CHECK(std::abs(m.mode.imag()) <= 1e-12 * std::abs(m.mode));
            const int k = [&] {
                int b = 0;
                for (int i = 1; i < 4; ++i)
                    if (std::abs(m.vector(i)) > std::abs(m.vector(b))) b = i;
                return b;
            }();
            const Vec4c v = m.vector / m.vector(k);
            CHECK(v.imag().norm() <= 1e-12);
        }
    }
}

TEST_CASE("determinant symmetries and the translational zero")
{
    const ChemParams p = benchmark(6.0, 1e-3 * q_cj(0.2, 6.23e-2));
    const ZNDProfile prof(p, 1e-8);
    const Evans1D D(prof);

    // scale from the closed right half of the unit circle; the dual mode is not unique far to the left
    double scale = 0.0;
    for (int k = 0; k <= 16; ++k) scale = std::max(scale, std::abs(D(std::polar(1.0, M_PI * (k / 16.0 - 0.5))).value()));
    CHECK(std::abs(D(0.0).value()) <= 1e-6 * scale);

    for (cplx l : {cplx(0.7, 2.3), cplx(0.05, 11.0), cplx(2.0, 0.5)}) {
        const cplx a = D(l).value(), b = D(std::conj(l)).value();
        CHECK(std::abs(a - std::conj(b)) <= 1e-10 * std::abs(a));
    }

    SUBCASE("Cauchy-Riemann")
    {
        const cplx l(0.6, 1.7);
        const double h = 1e-4;
        const cplx dx = (D(l + h).value() - D(l - h).value()) / (2 * h);
        const cplx dy = (D(l + cplx(0, h)).value() - D(l - cplx(0, h)).value()) / (2 * h);
        CHECK(std::abs(dx - dy / cplx(0, 1)) <= 1e-6 * std::abs(dx));
    }
}

TEST_CASE("longer reaction zone does not move the determinant")
{
    const ChemParams p = benchmark();
    const Evans1D a(ZNDProfile(p, 1e-8)), b(ZNDProfile(p, 1e-16));
    for (cplx l : {cplx(0.3, 0.8), cplx(1.0, 4.0)}) {
        const EvansValue va = a(l), vb = b(l);
        CHECK(std::abs(va.log_magnitude - vb.log_magnitude) <= 1e-8);
        CHECK(std::abs(std::remainder(va.phase - vb.phase, 2 * M_PI)) <= 1e-8);
    }
}
