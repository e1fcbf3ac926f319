#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "errors.hpp"
#include "kahan.hpp"
#include "lambda_sieve.hpp"

namespace cesaro {

// Cesaro weight parameters: sum_{n <= N} r(n) (N - n)^k / Gamma(k+1).
struct cesaro_params {
    std::uint64_t N = 0;
    double k = 0.0;
};

inline void validate_params(const cesaro_params& p) {
    if (p.N < 1)
        throw config_error("N must be positive");
    if (!(p.k >= 0.0))
        throw config_error("k must be nonnegative");
    if (p.k * std::log(static_cast<double>(p.N)) > 700.0)
        throw cesaro::overflow_error("k log N exceeds exp range");
}

namespace detail {

// von Mangoldt by trial division; independent of any sieve table.
inline double lambda_trial(std::uint64_t n) {
    if (n < 2)
        return 0.0;
    std::uint64_t p = 0, m = n;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (m % d == 0) {
            p = d;
            break;
        }
    }
    if (p == 0)
        return std::log(static_cast<double>(n));   // n prime
    while (m % p == 0)
        m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

// (N - n)^k table for n = 0..N, indexed by the difference r = N - n.
// r^k = exp(k log r); r = 0 gives 0 for k > 0 and 1 for k = 0.
inline std::vector<double> cesaro_weight_table(std::uint64_t N, double k) {
    std::vector<double> w(static_cast<std::size_t>(N) + 1);
    w[0] = (k == 0.0) ? 1.0 : 0.0;
    for (std::uint64_t r = 1; r <= N; ++r)
        w[r] = std::exp(k * std::log(static_cast<double>(r)));
    return w;
}

} // namespace detail

// r(n) = sum over ordered triples m1 + m2^2 + m3^2 = n of the product of
// von Mangoldt weights.  Enumerates ordered square pairs with trial-division
// weights; this is the reference the table construction is tested against.
inline double rsp_bruteforce(std::uint64_t n) {
    kahan_sum acc;
    for (std::uint64_t m2 = 2; m2 * m2 < n; ++m2) {
        const double w2 = detail::lambda_trial(m2);
        if (w2 == 0.0)
            continue;
        for (std::uint64_t m3 = 2; m2 * m2 + m3 * m3 < n; ++m3) {
            const double w3 = detail::lambda_trial(m3);
            if (w3 == 0.0)
                continue;
            const std::uint64_t m1 = n - m2 * m2 - m3 * m3;
            const double w1 = detail::lambda_trial(m1);
            if (w1 != 0.0)
                acc.add(w1 * w2 * w3);
        }
    }
    return acc.value();
}

struct rsp_table {
    std::uint64_t limit = 0;
    std::vector<double> values;   // size limit + 1
};

// Scatter accumulation in fixed order (ascending m2, then m3, then m1) with
// a per-cell compensation array, so the table is reproducible bit-for-bit.
inline rsp_table build_rsp_table(const lambda_table& t, std::uint64_t limit) {
    if (t.limit < limit)
        throw capacity_error("lambda table covers " + std::to_string(t.limit) +
                             " but rsp table needs " + std::to_string(limit));
    const auto support = square_support(t, limit);
    rsp_table r;
    r.limit = limit;
    r.values.assign(static_cast<std::size_t>(limit) + 1, 0.0);
    std::vector<double> comp(r.values.size(), 0.0);

    std::vector<std::uint64_t> powers;   // prime powers up to limit, ascending
    for (std::uint64_t m = 2; m <= limit; ++m)
        if (t.weights[m] != 0.0)
            powers.push_back(m);

    for (const auto& e2 : support) {
        for (const auto& e3 : support) {
            const std::uint64_t s = e2.msq + e3.msq;
            if (s + 2 > limit)
                continue;
            const double w23 = e2.weight * e3.weight;
            for (std::uint64_t m1 : powers) {
                const std::uint64_t n = s + m1;
                if (n > limit)
                    break;
                const double x = w23 * t.weights[m1];
                double& sum = r.values[n];
                double& c = comp[n];
                const double v = sum + x;
                if (std::abs(sum) >= std::abs(x))
                    c += (sum - v) + x;
                else
                    c += (x - v) + sum;
                sum = v;
            }
        }
    }
    for (std::size_t i = 0; i < r.values.size(); ++i)
        r.values[i] += comp[i];
    return r;
}

enum class lhs_method { direct, binomial, bruteforce };

// Direct evaluation: ordered square pairs outer, prime powers m1 inner,
// ascending everywhere, one compensated accumulator.
inline double cesaro_lhs_direct(const cesaro_params& p, const lambda_table& t,
                                const std::vector<square_support_entry>& support) {
    const std::uint64_t N = p.N;
    if (t.limit < N)
        throw capacity_error("lambda table covers " + std::to_string(t.limit) +
                             " but the direct sum needs " + std::to_string(N));
    const auto w = detail::cesaro_weight_table(N, p.k);
    std::vector<std::uint64_t> powers;
    std::vector<double> pw;
    for (std::uint64_t m = 2; m <= std::min(t.limit, N); ++m)
        if (t.weights[m] != 0.0) {
            powers.push_back(m);
            pw.push_back(t.weights[m]);
        }
    kahan_sum acc;
    for (const auto& e2 : support) {
        if (e2.msq >= N)
            break;
        for (const auto& e3 : support) {
            const std::uint64_t s = e2.msq + e3.msq;
            if (s >= N)
                break;
            const std::uint64_t budget = N - s;   // m1 <= budget
            const double w23 = e2.weight * e3.weight;
            for (std::size_t i = 0; i < powers.size() && powers[i] <= budget; ++i)
                acc.add(w23 * pw[i] * w[budget - powers[i]]);
        }
    }
    return acc.value() / std::tgamma(p.k + 1.0);
}

// Binomial expansion for integer k <= 12: per square pair with M = N - s,
// sum_{m} L(m) (M - m)^k = sum_j C(k,j) (-1)^j M^{k-j} prefix_j[M].
inline double cesaro_lhs_binomial(const cesaro_params& p, const lambda_table& t,
                                  const std::vector<square_support_entry>& support) {
    const double kr = p.k;
    if (kr != std::floor(kr) || kr < 0.0 || kr > 12.0)
        throw config_error("binomial method needs integer k in [0, 12]");
    const unsigned k = static_cast<unsigned>(kr);
    const std::uint64_t N = p.N;
    if (t.limit < N)
        throw capacity_error("lambda table too small for binomial prefix sums");

    std::vector<std::vector<double>> prefix;
    prefix.reserve(k + 1);
    for (unsigned j = 0; j <= k; ++j)
        prefix.push_back(weighted_power_prefix(t, j));

    double binom[13];
    binom[0] = 1.0;
    for (unsigned j = 1; j <= k; ++j)
        binom[j] = binom[j - 1] * static_cast<double>(k - j + 1) / static_cast<double>(j);

    kahan_sum acc;
    for (const auto& e2 : support) {
        if (e2.msq >= N)
            break;
        for (const auto& e3 : support) {
            const std::uint64_t s = e2.msq + e3.msq;
            if (s >= N)
                break;
            const std::uint64_t M = N - s;
            const double Md = static_cast<double>(M);
            double mpow = 1.0;   // M^{k-j} built from j = k downwards
            double sign = (k % 2 == 0) ? 1.0 : -1.0;
            kahan_sum cell;
            for (int j = static_cast<int>(k); j >= 0; --j) {
                cell.add(sign * binom[j] * mpow * prefix[static_cast<unsigned>(j)][M]);
                mpow *= Md;
                sign = -sign;
            }
            acc.add(e2.weight * e3.weight * cell.value());
        }
    }
    return acc.value() / std::tgamma(kr + 1.0);
}

inline double cesaro_lhs_bruteforce(const cesaro_params& p) {
    const std::uint64_t N = p.N;
    const auto w = detail::cesaro_weight_table(N, p.k);
    kahan_sum acc;
    for (std::uint64_t n = 10; n <= N; ++n) {
        const double r = rsp_bruteforce(n);
        if (r != 0.0)
            acc.add(r * w[N - n]);
    }
    return acc.value() / std::tgamma(p.k + 1.0);
}

inline double cesaro_lhs(const cesaro_params& p, const lambda_table& t,
                         const std::vector<square_support_entry>& support,
                         lhs_method method = lhs_method::direct) {
    validate_params(p);
    switch (method) {
    case lhs_method::direct:
        return cesaro_lhs_direct(p, t, support);
    case lhs_method::binomial:
        return cesaro_lhs_binomial(p, t, support);
    case lhs_method::bruteforce:
        return cesaro_lhs_bruteforce(p);
    }
    throw config_error("unknown lhs method");
}

// CSV, LF line endings, 17 significant digits.
inline void write_rsp_csv(const rsp_table& r, std::ostream& out) {
    out << "n,rsp\n";
    char buf[64];
    for (std::uint64_t n = 0; n <= r.limit; ++n) {
        std::snprintf(buf, sizeof buf, "%llu,%.17g\n",
                      static_cast<unsigned long long>(n), r.values[n]);
        out << buf;
    }
}

} // namespace cesaro
