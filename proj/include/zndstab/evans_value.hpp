#pragma once

#include <cmath>
#include <complex>

namespace znd {

using cplx = std::complex<double>;

// D = exp(log_magnitude + i phase). The phase is not reduced modulo 2 pi.
// phase_exact is the part of phase that is known to vary continuously with
// lambda (it comes from a removed exponential factor); phase steps between
// nearby samples are taken as the exact difference of that part plus the
// principal difference of the rest.
struct EvansValue {
    double log_magnitude = 0.0;
    double phase = 0.0;
    double phase_exact = 0.0;

    cplx value() const { return std::polar(std::exp(log_magnitude), phase); }
    // D / exp(shift); avoids overflow when comparing against a common scale.
    cplx scaled(double shift) const { return std::polar(std::exp(log_magnitude - shift), phase); }

    static EvansValue from_complex(cplx v, double extra_log = 0.0, cplx extra_exp = 0.0)
    {
        return {std::log(std::abs(v)) + extra_log + extra_exp.real(), std::arg(v) + extra_exp.imag(), extra_exp.imag()};
    }
};

struct EvansControls {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 1e-2;  // in s = ln z
    long max_steps = 2000000;
    bool tail_correction = true;
};

// Continuous phase change from a to b (b - a), assuming the residual part moved less than pi.
double phase_step(const EvansValue& a, const EvansValue& b);

struct IntegrationStats {
    long accepted = 0;
    long rejected = 0;
};

}  // namespace znd
