#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "cgamma.hpp"
#include "errors.hpp"
#include "kahan.hpp"
#include "parallel.hpp"
#include "rsp.hpp"
#include "zeros.hpp"

namespace cesaro {

// reduced: enumerate zeros with positive ordinate and take twice the real
// part, which equals the full conjugate enumeration exactly.  full: walk the
// conjugate-expanded set and realify at the end, keeping the discarded
// imaginary part as a diagnostic.
enum class zero_sum_mode { reduced, full };

struct explicit_options {
    double truncation = 100.0;
    zero_sum_mode mode = zero_sum_mode::reduced;
    std::uint64_t term_budget = 1'000'000'000;
    unsigned threads = 0;
    lhs_method method = lhs_method::direct;
};

struct term_counts {
    std::uint64_t singles = 0;
    std::uint64_t doubles = 0;
    std::uint64_t triples = 0;
};

struct explicit_terms {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    double truncation = 0.0;
    std::size_t zeros_used = 0;
    double imag_residue = 0.0;
    term_counts counts;
};

namespace detail {

// map an index to the outer-loop zero: positive ordinates only in reduced
// mode, full conjugate-expanded list otherwise
inline cplx outer_rho(const zero_set& zs, const std::vector<cplx>& expanded,
                      zero_sum_mode mode, std::size_t i) {
    return mode == zero_sum_mode::full ? expanded[i] : zs.rho(i);
}

inline double realify(cplx total, zero_sum_mode mode, double& imag_out) {
    if (mode == zero_sum_mode::reduced) {
        imag_out = 0.0;
        return 2.0 * total.real();
    }
    imag_out = std::abs(total.imag());
    return total.real();
}

} // namespace detail

// N^{k+2} pi / (4 Gamma(k+3)), evaluated in log space
inline double m1(std::uint64_t N, double k) {
    if (!(k >= 0.0))
        throw config_error("m1 needs k >= 0");
    const double lnN = std::log(static_cast<double>(N));
    const double e = (k + 2.0) * lnN + std::log(M_PI) - std::log(4.0) - std::lgamma(k + 3.0);
    if (e > log_overflow_threshold)
        return std::numeric_limits<double>::infinity();
    return std::exp(e);
}

// -(pi/4) N^{k+1} sum_rho N^rho G(rho)/G(k+2+rho)
// -(sqrt(pi)/2) N^{k+3/2} sum_rho N^{rho/2} G(rho/2)/G(k+5/2+rho/2)
// Every power of N rides inside the gamma_ratio exponentiation.
inline double m2(std::uint64_t N, double k, const zero_set& zs,
                 zero_sum_mode mode = zero_sum_mode::reduced,
                 double* imag_out = nullptr, std::uint64_t* terms_out = nullptr) {
    const double lnN = std::log(static_cast<double>(N));
    const std::vector<cplx> ex = conjugate_expand(zs);
    const std::size_t outer = mode == zero_sum_mode::full ? ex.size() : zs.count();

    kahan_csum s1, s2;
    for (std::size_t i = 0; i < outer; ++i) {
        const cplx rho = detail::outer_rho(zs, ex, mode, i);
        const cplx full[1] = {rho};
        s1.add(gamma_ratio(full, k + 2.0 + rho, (rho + (k + 1.0)) * lnN).value);
        const cplx half[1] = {rho / 2.0};
        s2.add(gamma_ratio(half, k + 2.5 + rho / 2.0, (rho / 2.0 + (k + 1.5)) * lnN).value);
    }
    const cplx total = -(M_PI / 4.0) * s1.value() - (std::sqrt(M_PI) / 2.0) * s2.value();
    if (terms_out)
        *terms_out = 2 * outer;
    double im = 0.0;
    const double re = detail::realify(total, mode, im);
    if (imag_out)
        *imag_out = im;
    return re;
}

// (sqrt(pi)/2) N^{k+1/2} sum sum N^{rho1+rho2/2} G(rho1)G(rho2/2)/G(k+3/2+rho1+rho2/2)
// + (1/4) N^{k+1} sum sum N^{(rho1+rho2)/2} G(rho1/2)G(rho2/2)/G(k+2+(rho1+rho2)/2)
inline double m3(std::uint64_t N, double k, const zero_set& zs,
                 zero_sum_mode mode = zero_sum_mode::reduced, unsigned threads = 0,
                 double* imag_out = nullptr, std::uint64_t* terms_out = nullptr) {
    const double lnN = std::log(static_cast<double>(N));
    const std::vector<cplx> ex = conjugate_expand(zs);
    const std::size_t outer = mode == zero_sum_mode::full ? ex.size() : zs.count();

    const cplx t1 = indexed_sum<cplx>(outer, threads, [&](std::size_t i) {
        const cplx r1 = detail::outer_rho(zs, ex, mode, i);
        kahan_csum in;
        for (const cplx& r2 : ex) {
            const cplx nums[2] = {r1, r2 / 2.0};
            in.add(gamma_ratio(nums, k + 1.5 + r1 + r2 / 2.0,
                               (r1 + r2 / 2.0 + (k + 0.5)) * lnN)
                       .value);
        }
        return in.value();
    });
    const cplx t2 = indexed_sum<cplx>(outer, threads, [&](std::size_t i) {
        const cplx r1 = detail::outer_rho(zs, ex, mode, i);
        kahan_csum in;
        for (const cplx& r2 : ex) {
            const cplx nums[2] = {r1 / 2.0, r2 / 2.0};
            in.add(gamma_ratio(nums, k + 2.0 + (r1 + r2) / 2.0,
                               ((r1 + r2) / 2.0 + (k + 1.0)) * lnN)
                       .value);
        }
        return in.value();
    });
    const cplx total = (std::sqrt(M_PI) / 2.0) * t1 + 0.25 * t2;
    if (terms_out)
        *terms_out = 2 * static_cast<std::uint64_t>(outer) * ex.size();
    double im = 0.0;
    const double re = detail::realify(total, mode, im);
    if (imag_out)
        *imag_out = im;
    return re;
}

// -(1/4) N^k sum sum sum N^{rho1+rho2/2+rho3/2}
//                      G(rho1)G(rho2/2)G(rho3/2)/G(k+1+rho1+rho2/2+rho3/2)
inline double m4(std::uint64_t N, double k, const zero_set& zs,
                 zero_sum_mode mode = zero_sum_mode::reduced, unsigned threads = 0,
                 std::uint64_t term_budget = 1'000'000'000, double* imag_out = nullptr,
                 std::uint64_t* terms_out = nullptr) {
    const double lnN = std::log(static_cast<double>(N));
    const std::vector<cplx> ex = conjugate_expand(zs);
    const std::size_t outer = mode == zero_sum_mode::full ? ex.size() : zs.count();
    const std::uint64_t need =
        static_cast<std::uint64_t>(outer) * ex.size() * ex.size();
    if (need > term_budget)
        throw budget_error("m4 needs " + std::to_string(need) + " terms, budget is " +
                           std::to_string(term_budget));

    const cplx total = indexed_sum<cplx>(outer, threads, [&](std::size_t i) {
        const cplx r1 = detail::outer_rho(zs, ex, mode, i);
        kahan_csum in;
        for (const cplx& r2 : ex) {
            for (const cplx& r3 : ex) {
                const cplx nums[3] = {r1, r2 / 2.0, r3 / 2.0};
                in.add(gamma_ratio(nums, k + 1.0 + r1 + r2 / 2.0 + r3 / 2.0,
                                   (r1 + r2 / 2.0 + r3 / 2.0 + k) * lnN)
                           .value);
            }
        }
        return in.value();
    });
    if (terms_out)
        *terms_out = need;
    double im = 0.0;
    const double re = detail::realify(-0.25 * total, mode, im);
    if (imag_out)
        *imag_out = im;
    return re;
}

inline explicit_terms evaluate_terms(std::uint64_t N, double k, const zero_set& zeros,
                                     const explicit_options& opts = {}) {
    const zero_set zt = truncate_zeros(zeros, opts.truncation);
    explicit_terms t;
    t.truncation = zt.truncation;
    t.zeros_used = zt.count();
    t.m1 = m1(N, k);
    double i2 = 0.0, i3 = 0.0, i4 = 0.0;
    t.m2 = m2(N, k, zt, opts.mode, &i2, &t.counts.singles);
    t.m3 = m3(N, k, zt, opts.mode, opts.threads, &i3, &t.counts.doubles);
    t.m4 = m4(N, k, zt, opts.mode, opts.threads, opts.term_budget, &i4, &t.counts.triples);
    t.imag_residue = std::max({i2, i3, i4});
    return t;
}

struct comparison_report {
    cesaro_params params;
    double lhs = 0.0;
    explicit_terms terms;
    double residual = 0.0;
    double normalized_residual = 0.0;
    std::vector<std::string> warnings;
};

inline comparison_report compare(const cesaro_params& p, const lambda_table& table,
                                 const std::vector<square_support_entry>& support,
                                 const zero_set& zeros, const explicit_options& opts = {}) {
    validate_params(p);
    comparison_report rep;
    rep.params = p;
    rep.lhs = cesaro_lhs(p, table, support, opts.method);
    rep.terms = evaluate_terms(p.N, p.k, zeros, opts);
    rep.residual =
        rep.lhs - (rep.terms.m1 + rep.terms.m2 + rep.terms.m3 + rep.terms.m4);
    rep.normalized_residual =
        rep.residual * std::exp(-(p.k + 1.0) * std::log(static_cast<double>(p.N)));
    if (p.k <= 1.5)
        rep.warnings.push_back("k <= 3/2: outside theorem range");
    return rep;
}

// 17 significant digits round-trip a double exactly; non-finite values have
// no JSON spelling, so they serialize as null and callers flag the run.
inline std::string json_number(double x) {
    if (!std::isfinite(x))
        return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_report_json(std::ostream& os, const comparison_report& rep) {
    os << "{\n";
    os << "  \"N\": " << rep.params.N << ",\n";
    os << "  \"k\": " << json_number(rep.params.k) << ",\n";
    os << "  \"T\": " << json_number(rep.terms.truncation) << ",\n";
    os << "  \"zeros_used\": " << rep.terms.zeros_used << ",\n";
    os << "  \"lhs\": " << json_number(rep.lhs) << ",\n";
    os << "  \"m1\": " << json_number(rep.terms.m1) << ",\n";
    os << "  \"m2\": " << json_number(rep.terms.m2) << ",\n";
    os << "  \"m3\": " << json_number(rep.terms.m3) << ",\n";
    os << "  \"m4\": " << json_number(rep.terms.m4) << ",\n";
    os << "  \"residual\": " << json_number(rep.residual) << ",\n";
    os << "  \"normalized_residual\": " << json_number(rep.normalized_residual) << ",\n";
    os << "  \"imag_residue\": " << json_number(rep.terms.imag_residue) << ",\n";
    os << "  \"warnings\": [";
    for (std::size_t i = 0; i < rep.warnings.size(); ++i) {
        if (i)
            os << ", ";
        os << '"' << rep.warnings[i] << '"';
    }
    os << "]\n}\n";
}

inline void write_report_text(std::ostream& os, const comparison_report& rep) {
    os << "N                   = " << rep.params.N << "\n";
    os << "k                   = " << json_number(rep.params.k) << "\n";
    os << "T                   = " << json_number(rep.terms.truncation) << "\n";
    os << "zeros used          = " << rep.terms.zeros_used << "\n";
    os << "lhs                 = " << json_number(rep.lhs) << "\n";
    os << "m1                  = " << json_number(rep.terms.m1) << "\n";
    os << "m2                  = " << json_number(rep.terms.m2) << "\n";
    os << "m3                  = " << json_number(rep.terms.m3) << "\n";
    os << "m4                  = " << json_number(rep.terms.m4) << "\n";
    os << "residual            = " << json_number(rep.residual) << "\n";
    os << "normalized residual = " << json_number(rep.normalized_residual) << "\n";
    os << "imag residue        = " << json_number(rep.terms.imag_residue) << "\n";
    for (const auto& w : rep.warnings)
        os << "warning: " << w << "\n";
}

inline bool report_is_finite(const comparison_report& rep) {
    return std::isfinite(rep.lhs) && std::isfinite(rep.terms.m1) &&
           std::isfinite(rep.terms.m2) && std::isfinite(rep.terms.m3) &&
           std::isfinite(rep.terms.m4) && std::isfinite(rep.residual);
}

inline const char* scan_csv_header() {
    return "N,k,T,lhs,m1,m2,m3,m4,residual,normalized_residual";
}

inline void write_scan_row(std::ostream& os, const comparison_report& rep) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<unsigned long long>(rep.params.N), rep.params.k,
                  rep.terms.truncation, rep.lhs, rep.terms.m1, rep.terms.m2, rep.terms.m3,
                  rep.terms.m4, rep.residual, rep.normalized_residual);
    os << buf;
}

} // namespace cesaro
