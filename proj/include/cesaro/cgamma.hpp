#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>

#include "errors.hpp"

namespace cesaro {

using cplx = std::complex<double>;

// log Gamma split into log-magnitude and argument; the argument follows the
// branch that is continuous along the right half-plane evaluation path.
// Downstream zero-sum formulas only exponentiate differences of these values,
// so no global branch bookkeeping is required.
struct log_gamma_value {
    double logmod = 0.0;
    double arg = 0.0;

    cplx as_complex() const { return {logmod, arg}; }
    bool overflows() const;
};

inline constexpr double log_overflow_threshold = 700.0;

inline bool log_gamma_value::overflows() const { return logmod > log_overflow_threshold; }

namespace detail {

// Lanczos, g = 7, 9-term partial-fraction form.  Relative error of the
// reconstructed Gamma stays below 1e-12 across the supported domain.
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_p[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};
inline constexpr double log_sqrt_two_pi = 0.91893853320467274178;

// valid for Re z >= 0.5
inline cplx lanczos_log_gamma(cplx z) {
    const cplx w = z - 1.0;
    cplx s(lanczos_p[0], 0.0);
    for (int i = 1; i < 9; ++i)
        s += lanczos_p[i] / (w + static_cast<double>(i));
    const cplx t = w + (lanczos_g + 0.5);
    return log_sqrt_two_pi + (w + 0.5) * std::log(t) - t + std::log(s);
}

// log sin(pi z) for Im z >= 0 without overflowing exp(pi Im z):
// sin(pi z) = -exp(-i pi z) (1 - exp(2 i pi z)) / (2 i)
inline cplx log_sin_pi_upper(cplx z) {
    const cplx ipz = cplx(0.0, M_PI) * z;
    return -ipz + std::log(-(1.0 - std::exp(2.0 * ipz)) / cplx(0.0, 2.0));
}

inline cplx log_gamma_upper(cplx z) {
    if (z.real() >= 0.5)
        return lanczos_log_gamma(z);
    return std::log(M_PI) - log_sin_pi_upper(z) - lanczos_log_gamma(1.0 - z);
}

} // namespace detail

// Throws pole_error at z = 0, -1, -2, ...  Conjugate symmetry holds exactly:
// the lower half-plane is evaluated as the conjugate of the upper.
inline log_gamma_value log_gamma(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw pole_error("log_gamma pole at nonpositive integer " +
                         std::to_string(static_cast<long long>(z.real())));
    cplx r;
    if (z.imag() < 0.0) {
        r = std::conj(detail::log_gamma_upper(std::conj(z)));
    } else {
        r = detail::log_gamma_upper(z);
    }
    return {r.real(), r.imag()};
}

inline cplx log_gamma_c(cplx z) {
    const log_gamma_value v = log_gamma(z);
    return v.as_complex();
}

// exp of a log-space value with explicit under/overflow accounting
struct gamma_ratio_result {
    cplx value{0.0, 0.0};
    bool underflow = false;   // rounded to exact zero
    bool overflow = false;    // magnitude beyond exp(700); value is +inf marker
};

inline constexpr double log_underflow_threshold = -745.0;

// exp( sum log Gamma(numerators) - log Gamma(denominator) + log_shift ).
// The shift lets callers fold factors like N^rho into the same
// exponentiation, so no overflowing intermediate is ever materialized.
inline gamma_ratio_result gamma_ratio(std::span<const cplx> numerators, cplx denominator,
                                      cplx log_shift = cplx(0.0, 0.0)) {
    cplx acc = log_shift;
    for (const cplx& z : numerators)
        acc += log_gamma_c(z);
    acc -= log_gamma_c(denominator);

    gamma_ratio_result r;
    if (acc.real() > log_overflow_threshold) {
        r.overflow = true;
        r.value = cplx(std::numeric_limits<double>::infinity(), 0.0);
        return r;
    }
    if (acc.real() < log_underflow_threshold) {
        r.underflow = true;
        r.value = cplx(0.0, 0.0);
        return r;
    }
    r.value = std::exp(acc);
    return r;
}

// |Gamma(x + iy)| ~ sqrt(2 pi) e^{-pi |y| / 2} |y|^{x - 1/2} for large |y|
inline double stirling_magnitude(double x, double y) {
    if (y == 0.0)
        throw config_error("stirling_magnitude needs y != 0");
    const double ay = std::abs(y);
    return std::exp(detail::log_sqrt_two_pi - M_PI * ay / 2.0 + (x - 0.5) * std::log(ay));
}

} // namespace cesaro
