#pragma once

#include "zndstab/evans1d.hpp"
#include "zndstab/profile.hpp"
#include "zndstab/winding.hpp"

#include <string>
#include <vector>

namespace znd {

enum class Verdict { stable, unstable, inconclusive };

std::string to_string(Verdict v);

struct VerdictControl {
    double radius = 10.0;
    double exclusion = 1e-2;
    bool confirm_doubling = true;
    // Rescale k so the half-reaction length is 1 before counting. The count is
    // invariant under k up to the matching rescaling of the radius.
    bool unit_half_length = true;
    double z_min = 1e-8;
    EvansControls evans;
    RefineControl refine{1.5707963267948966, 2.0, 0.5};
};

struct VerdictReport {
    Verdict verdict = Verdict::inconclusive;
    int count = 0;           // unstable roots in the half-disk of the given radius
    int count_doubled = 0;   // same at twice the radius (equals count when not confirmed)
    double radius = 0.0;
    double rate_used = 0.0;  // k actually used
    long evaluations = 0;
    double max_phase_step = 0.0;
};

VerdictReport verdict(const ChemParams& params, const VerdictControl& ctl = {});

struct BoundaryPoint {
    double q = 0.0;
    double e_lo = 0.0;  // stable side
    double e_hi = 0.0;  // unstable side
    int count_below = 0;
    int count_above = 0;
    bool found = false;
    std::string note;

    double activation() const { return 0.5 * (e_lo + e_hi); }
};

// Neutral curve in the (q, activation) plane by bisection of the verdict at each q.
std::vector<BoundaryPoint> trace_boundary(const ChemParams& base, const std::vector<double>& q_grid, double e_lo,
                                          double e_hi, double tol, const VerdictControl& ctl = {});

struct PolyFit {
    std::vector<double> coeffs;  // lowest degree first
    double mean_relative_error = 0.0;
    double max_relative_error = 0.0;
};

// Least-squares fit log E = P(log q) over the found boundary points.
PolyFit fit_boundary_loglog(const std::vector<BoundaryPoint>& points, int degree);

// Evaluator of the 1D determinant with memoization and conjugate reuse.
CachedEvaluator make_evans1d_evaluator(const ZNDProfile& profile, const EvansControls& ctl = {});

}  // namespace znd
