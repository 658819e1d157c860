#include "zndstab/riccati.hpp"

#include "zndstab/errors.hpp"

#include <cmath>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace znd {

void chebyshev(int n, double a, double b, std::vector<double>& x, Eigen::MatrixXd& D)
{
    if (n < 1) throw DomainError("Chebyshev grid needs n >= 1");
    const double pi = 3.14159265358979323846;
    std::vector<double> t(n + 1), c(n + 1);
    for (int j = 0; j <= n; ++j) {
        t[j] = std::cos(pi * j / n);
        c[j] = (j == 0 || j == n ? 2.0 : 1.0) * (j % 2 ? -1.0 : 1.0);
    }
    D.resize(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        double row = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            D(i, j) = c[i] / c[j] / (t[i] - t[j]);
            row += D(i, j);
        }
        D(i, i) = -row;  // negative sum trick
    }
    const double half = 0.5 * (b - a);
    D /= half;
    x.resize(n + 1);
    for (int j = 0; j <= n; ++j) x[j] = 0.5 * (a + b) + half * t[j];
}

RiccatiBlocks synthetic_blocks()
{
    RiccatiBlocks r;
    r.A11 = [](double x) {
        Mat2c m;
        m << 2.0 + 0.5 * x, 0.5, 0.3 * std::sin(x), 3.0;
        return m;
    };
    r.A22 = [](double x) {
        Mat2c m;
        m << -2.0, 0.4 * std::cos(x), 0.2 * x, -3.0 + 0.5 * x * x;
        return m;
    };
    r.theta = [](double x) {
        Mat4c m;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                m(i, j) = std::exp(cplx(0.0, (i - j) * x)) / double(1 + i + j) + 0.1 * x;
        return m;
    };
    return r;
}

namespace {

// D1 X - X D2 = C through the Kronecker form.
Mat2c sylvester(const Mat2c& D1, const Mat2c& D2, const Mat2c& C, double x)
{
    Mat4c K;
    const Mat2c I = Mat2c::Identity();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    // vec column-major: (I kron D1 - D2^T kron I)
                    K(2 * j + i, 2 * l + k) = I(j, l) * D1(i, k) - D2(l, j) * I(i, k);
    Eigen::JacobiSVD<Mat4c> svd(K);
    const auto sv = svd.singularValues();
    if (!(sv[3] > 1e-12 * sv[0]))
        throw NumericalError("Sylvester equation singular (block spectra touch) at x = " + std::to_string(x));
    Eigen::Matrix<cplx, 4, 1> c;
    c << C(0, 0), C(1, 0), C(0, 1), C(1, 1);
    const Eigen::Matrix<cplx, 4, 1> v = Eigen::PartialPivLU<Mat4c>(K).solve(c);
    Mat2c X;
    X << v[0], v[2], v[1], v[3];
    return X;
}

double offdiag_norm(const Mat4c& A)
{
    return std::sqrt(A.block<2, 2>(0, 2).squaredNorm() + A.block<2, 2>(2, 0).squaredNorm());
}

}  // namespace

RiccatiRun riccati_block_iterate(const RiccatiBlocks& blocks, double h, int iterations, int nodes)
{
    if (!(h > 0.0)) throw DomainError("riccati_block_iterate needs h > 0");
    if (iterations < 0) throw DomainError("riccati_block_iterate needs iterations >= 0");
    RiccatiRun run;
    run.h = h;
    Eigen::MatrixXd Dm;
    chebyshev(nodes, blocks.a, blocks.b, run.nodes, Dm);
    const int m = nodes + 1;
    std::vector<Mat4c> A(m), T(m, Mat4c::Identity());
    for (int j = 0; j < m; ++j) {
        const double x = run.nodes[j];
        A[j].setZero();
        A[j].block<2, 2>(0, 0) = blocks.A11(x);
        A[j].block<2, 2>(2, 2) = blocks.A22(x);
        A[j] += h * blocks.theta(x);
    }
    auto residual = [&] {
        double r = 0.0;
        for (const auto& a : A) r = std::max(r, offdiag_norm(a));
        return r;
    };
    run.residual.push_back(residual());
    for (int it = 0; it < iterations; ++it) {
        std::vector<Mat4c> S(m);
        for (int j = 0; j < m; ++j) {
            const Mat4c& a = A[j];
            S[j].setIdentity();
            S[j].block<2, 2>(0, 2) = sylvester(a.block<2, 2>(0, 0), a.block<2, 2>(2, 2), -a.block<2, 2>(0, 2), run.nodes[j]);
            S[j].block<2, 2>(2, 0) = sylvester(a.block<2, 2>(2, 2), a.block<2, 2>(0, 0), -a.block<2, 2>(2, 0), run.nodes[j]);
        }
        // spectral derivative entrywise
        std::vector<Mat4c> dS(m, Mat4c::Zero());
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                Eigen::VectorXcd v(m);
                for (int j = 0; j < m; ++j) v[j] = S[j](r, c);
                const Eigen::VectorXcd dv = Dm.cast<cplx>() * v;
                for (int j = 0; j < m; ++j) dS[j](r, c) = dv[j];
            }
        for (int j = 0; j < m; ++j) {
            Eigen::PartialPivLU<Mat4c> lu(S[j]);
            A[j] = lu.solve(A[j] * S[j] - h * dS[j]);
            T[j] = T[j] * S[j];
        }
        run.residual.push_back(residual());
    }
    run.coefficient = std::move(A);
    run.conjugator = std::move(T);
    return run;
}

RiccatiOrderReport riccati_order_study(const RiccatiBlocks& blocks, const std::vector<double>& h_grid, int iterations,
                                       int nodes)
{
    if (h_grid.size() < 2) throw DomainError("order study needs at least 2 h values");
    RiccatiOrderReport rep;
    rep.h_grid = h_grid;
    rep.residual.assign(iterations + 1, std::vector<double>(h_grid.size()));
    std::exception_ptr error;
    const long n = long(h_grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < n; ++i) {
        try {
            const RiccatiRun r = riccati_block_iterate(blocks, h_grid[i], iterations, nodes);
            for (int k = 0; k <= iterations; ++k) rep.residual[k][i] = r.residual[k];
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    for (int k = 0; k <= iterations; ++k) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = double(h_grid.size());
        for (std::size_t i = 0; i < h_grid.size(); ++i) {
            const double x = std::log(h_grid[i]), y = std::log(rep.residual[k][i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        rep.order.push_back((m * sxy - sx * sy) / (m * sxx - sx * sx));
    }
    for (int k = 0; k < iterations; ++k) rep.gain.push_back(rep.order[k + 1] - rep.order[k]);
    return rep;
}

}  // namespace znd
