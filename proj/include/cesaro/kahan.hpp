#pragma once

#include <cmath>
#include <complex>

namespace cesaro {

// Kahan-Babuska (Neumaier) compensated accumulator.  Adding exact zeros is a
// no-op, so summation loops may skip zero terms without changing the result.
struct kahan_sum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }

    double value() const { return s + c; }
};

struct kahan_csum {
    kahan_sum re, im;

    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }

    std::complex<double> value() const { return {re.value(), im.value()}; }
};

} // namespace cesaro
