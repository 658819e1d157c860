#pragma once

#include "zndstab/errors.hpp"
#include "zndstab/evans_value.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace znd::detail {

template <std::size_t N>
struct DualResult {
    std::array<cplx, N> y{};
    double log_scale = 0.0;
    IntegrationStats stats;
};

// Integrates dy/ds = rhs(s, y) from s0 to s1 with an embedded 7(8) pair.
// The solution is kept O(1) by power-of-two rescaling recorded in log_scale.
template <std::size_t N, class Rhs>
DualResult<N> integrate_dual(Rhs&& rhs, const std::array<cplx, N>& y0, double s0, double s1,
                             const EvansControls& ctl)
{
    namespace ode = boost::numeric::odeint;
    using State = std::array<cplx, N>;
    using Stepper = ode::runge_kutta_fehlberg78<State, double, State, double>;
    auto stepper = ode::make_controlled(ctl.atol, ctl.rtol, Stepper());

    DualResult<N> out;
    out.y = y0;
    auto sys = [&rhs](const State& y, State& dy, double s) { rhs(s, y, dy); };

    const double span = s1 - s0;
    const double max_dt = std::abs(span) / 8.0;
    double s = s0;
    double dt = std::copysign(std::min(ctl.initial_step, max_dt), span);
    while ((span > 0.0 && s < s1) || (span < 0.0 && s > s1)) {
        if ((span > 0.0 && s + dt > s1) || (span < 0.0 && s + dt < s1)) dt = s1 - s;
        const double before = s;
        const auto res = stepper.try_step(sys, out.y, s, dt);
        if (res == ode::success) {
            ++out.stats.accepted;
            if (std::abs(dt) > max_dt) dt = std::copysign(max_dt, dt);
            double m = 0.0;
            for (const auto& c : out.y) m = std::max(m, std::abs(c.real()) + std::abs(c.imag()));
            if (!(m > 0.0) || !std::isfinite(m)) throw NumericalError("dual ODE solution lost (zero or non-finite)");
            if (m > 16.0 || m < 1.0 / 16.0) {
                int e = 0;
                std::frexp(m, &e);
                for (auto& c : out.y) c = {std::ldexp(c.real(), -e), std::ldexp(c.imag(), -e)};
                out.log_scale += e * std::log(2.0);
            }
        } else {
            ++out.stats.rejected;
            if (std::abs(dt) < 1e-14 * (1.0 + std::abs(before)))
                throw NumericalError("integrator step size underflow at s = " + std::to_string(before));
        }
        if (out.stats.accepted + out.stats.rejected > ctl.max_steps)
            throw NumericalError("integrator step budget exhausted at s = " + std::to_string(s));
    }
    return out;
}

}  // namespace znd::detail
