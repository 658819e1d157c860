#include "doctest.h"

#include "zndstab/riccati.hpp"

#include <cmath>

using namespace znd;

TEST_CASE("chebyshev differentiation is exact on cubics")
{
    std::vector<double> x;
    Eigen::MatrixXd D;
    chebyshev(12, -1.0, 2.0, x, D);
    REQUIRE(x.size() == 13);
    CHECK(x.front() == doctest::Approx(2.0));
    CHECK(x.back() == doctest::Approx(-1.0));
    Eigen::VectorXd f(13), df(13);
    for (int i = 0; i < 13; ++i) {
        f(i) = x[i] * x[i] * x[i] - 2.0 * x[i];
        df(i) = 3.0 * x[i] * x[i] - 2.0;
    }
    CHECK((D * f - df).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("block diagonal input stays block diagonal")
{
    RiccatiBlocks b = synthetic_blocks();
    const auto full = b.theta;
    b.theta = [full](double x) {
        Mat4c t = full(x);
        t.topRightCorner<2, 2>().setZero();
        t.bottomLeftCorner<2, 2>().setZero();
        return t;
    };
    const RiccatiRun r = riccati_block_iterate(b, 0.05, 2, 24);
    REQUIRE(r.residual.size() == 3);
    for (double v : r.residual) CHECK(v == 0.0);
}

TEST_CASE("iteration bookkeeping")
{
    const RiccatiBlocks b = synthetic_blocks();
    const double h = 1.0 / 32;
    const RiccatiRun r = riccati_block_iterate(b, h, 2, 32);
    REQUIRE(r.coefficient.size() == r.nodes.size());
    REQUIRE(r.conjugator.size() == r.nodes.size());
    // step 0 residual is the off-diagonal part of h Theta
    double r0 = 0.0;
    for (double x : r.nodes) {
        const Mat4c t = h * b.theta(x);
        r0 = std::max(r0, std::hypot(t.topRightCorner<2, 2>().norm(), t.bottomLeftCorner<2, 2>().norm()));
    }
    CHECK(r.residual[0] == doctest::Approx(r0).epsilon(1e-12));
    double last = 0.0;
    for (const Mat4c& c : r.coefficient)
        last = std::max(last, std::hypot(c.topRightCorner<2, 2>().norm(), c.bottomLeftCorner<2, 2>().norm()));
    CHECK(r.residual.back() == doctest::Approx(last).epsilon(1e-12));
    CHECK(r.residual[1] < r.residual[0]);
    CHECK(r.residual[2] < r.residual[1]);

    // W = T V: T close to identity, within O(h)
    for (const Mat4c& T : r.conjugator) CHECK((T - Mat4c::Identity()).norm() <= 10.0 * h);
}

TEST_CASE("first step gains an order of h")
{
    const RiccatiOrderReport r = riccati_order_study(synthetic_blocks(), {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}, 1, 32);
    REQUIRE(r.order.size() == 2);
    CHECK(r.order[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.gain[0] == doctest::Approx(1.0).epsilon(0.15));
}
