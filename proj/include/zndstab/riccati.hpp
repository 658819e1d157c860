#pragma once

#include "zndstab/evans_value.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace znd {

using Mat2c = Eigen::Matrix<cplx, 2, 2>;
using Mat4c = Eigen::Matrix<cplx, 4, 4>;

// h W' = (blockdiag(A11, A22) + h Theta) W on [a, b].
struct RiccatiBlocks {
    std::function<Mat2c(double)> A11;
    std::function<Mat2c(double)> A22;
    std::function<Mat4c(double)> theta;
    double a = -1.0;
    double b = 1.0;
};

// Separated smooth 2+2 test system.
RiccatiBlocks synthetic_blocks();

struct RiccatiRun {
    double h = 0.0;
    std::vector<double> nodes;           // Chebyshev points on [a, b]
    std::vector<double> residual;        // max over nodes of the off-diagonal Frobenius norm, after 0..iterations steps
    std::vector<Mat4c> coefficient;      // final conjugated coefficient at the nodes
    std::vector<Mat4c> conjugator;       // accumulated T, W = T V
};

// Each step: solve D11 X - X D22 = -B12 and D22 Y - Y D11 = -B21 at every node,
// T = [[I, X], [Y, I]], new coefficient T^{-1} (A T - h T').
RiccatiRun riccati_block_iterate(const RiccatiBlocks& blocks, double h, int iterations, int nodes = 48);

struct RiccatiOrderReport {
    std::vector<double> h_grid;
    std::vector<std::vector<double>> residual;  // [iteration][h]
    std::vector<double> order;                  // fitted slope of log residual against log h
    std::vector<double> gain;                   // order[k+1] - order[k]
};

RiccatiOrderReport riccati_order_study(const RiccatiBlocks& blocks, const std::vector<double>& h_grid, int iterations,
                                       int nodes = 48);

// Chebyshev points and differentiation matrix on [a, b] (n + 1 points, decreasing).
void chebyshev(int n, double a, double b, std::vector<double>& x, Eigen::MatrixXd& D);

}  // namespace znd
