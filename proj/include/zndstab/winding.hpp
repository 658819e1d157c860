#pragma once

#include "zndstab/evans_value.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace znd {

using Evaluator = std::function<EvansValue(cplx)>;

// A straight segment or a circular arc, parametrized by t in [0, 1].
struct Segment {
    enum class Kind { line, arc } kind = Kind::line;
    cplx a{}, b{};          // line endpoints
    cplx center{};          // arc
    double radius = 0.0;
    double theta0 = 0.0, theta1 = 0.0;

    static Segment line(cplx from, cplx to);
    static Segment arc(cplx center, double radius, double theta0, double theta1);
    cplx point(double t) const;
};

struct Contour {
    std::string kind;  // "circle", "half-disk", "box", "polyline"
    std::vector<Segment> segments;
    double exclusion = 0.0;  // radius of the indentation about the origin, 0 if none

    static Contour circle(cplx center, double radius);
    // Boundary of {Re >= 0, exclusion < |lambda| < radius}.
    static Contour half_disk(double radius, double exclusion);
    // Boundary of [x0,x1] x [y0,y1]; a corner at the origin is replaced by an arc of radius exclusion.
    static Contour box(double x0, double x1, double y0, double y1, double exclusion = 0.0);
    static Contour polyline(const std::vector<cplx>& closed_vertices);
};

struct RefineControl {
    double max_phase_step = 1.5707963267948966;  // consecutive samples must differ by less than this
    double max_log_step = 2.0;                   // refine also where |D| changes by more than e^2
    double max_step = 0.0;                       // largest allowed |delta lambda| between samples, 0: no limit
    int initial_per_segment = 16;
    int max_depth = 40;
    int threads = 0;  // 0: use the OpenMP default
};

struct Sample {
    cplx lambda;
    EvansValue value;
};

struct WindingReport {
    Contour contour;
    std::vector<Sample> samples;  // closed loop, first sample not repeated
    int count = 0;
    double max_phase_step = 0.0;
    double residual = 0.0;  // |total/2pi - count|
};

// Thread-safe memoizing wrapper. With conjugate symmetry D(conj l) = conj D(l) is reused.
class CachedEvaluator {
public:
    explicit CachedEvaluator(Evaluator f, bool conjugate_symmetric = false);
    EvansValue operator()(cplx lambda) const;
    std::size_t evaluations() const;
    Evaluator as_function() const;

private:
    struct State;
    std::shared_ptr<State> state_;
};

// Evaluates f at every point, in parallel, results in input order.
std::vector<EvansValue> evaluate_batch(const Evaluator& f, const std::vector<cplx>& points, int threads = 0);

WindingReport winding(const Evaluator& f, const Contour& contour, const RefineControl& ctl = {});

struct Root {
    cplx lambda;
    int multiplicity = 1;
    double log_residual = 0.0;  // log|D| at the polished point
};

struct RootSearchControl {
    double target_box = 1e-1;
    double newton_tol = 1e-10;
    int max_boxes = 20000;
    RefineControl refine;
};

struct RootReport {
    std::vector<Root> roots;
    int region_count = 0;
    std::vector<std::pair<cplx, cplx>> unresolved;  // box corners left over when the budget runs out
    long evaluations = 0;
};

// Roots in [x0,x1] x [y0,y1] (origin excluded by region.exclusion when it lies on the box).
RootReport locate_roots(const Evaluator& f, double x0, double x1, double y0, double y1, double exclusion,
                        const RootSearchControl& ctl = {});

}  // namespace znd
