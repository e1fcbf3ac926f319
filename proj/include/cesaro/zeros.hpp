#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace cesaro {

// Ordinates of nontrivial zeta zeros in the upper half-plane, strictly
// ascending.  betas is empty when every zero sits on the critical line.
struct zero_set {
    std::vector<double> gammas;
    std::vector<double> betas;     // empty => beta = 1/2 throughout
    std::string source;
    double truncation = std::numeric_limits<double>::infinity();

    std::size_t count() const { return gammas.size(); }
    double beta(std::size_t i) const { return betas.empty() ? 0.5 : betas[i]; }
    std::complex<double> rho(std::size_t i) const { return {beta(i), gammas[i]}; }
};

// Text format: '#' starts a comment, blank lines skipped.  A data line is
// either "gamma" (beta implied 1/2) or "beta gamma".  Ordinates must be
// finite, positive, and strictly increasing.
inline zero_set parse_zeros(std::istream& in, const std::string& source) {
    zero_set zs;
    zs.source = source;
    std::string line;
    std::size_t lineno = 0;
    bool any_explicit_beta = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t)
            tok.push_back(t);
        if (tok.empty())
            continue;   // blank or comment-only
        if (tok.size() > 2)
            throw parse_error("expected one or two columns in " + source, lineno);
        double vals[2];
        for (std::size_t i = 0; i < tok.size(); ++i) {
            try {
                std::size_t used = 0;
                vals[i] = std::stod(tok[i], &used);
                if (used != tok[i].size())
                    throw std::invalid_argument(tok[i]);
            } catch (const std::exception&) {
                throw parse_error("not a number: '" + tok[i] + "' in " + source, lineno);
            }
        }
        double beta = 0.5, gamma;
        if (tok.size() == 2) {
            beta = vals[0];
            gamma = vals[1];
            any_explicit_beta = true;
        } else {
            gamma = vals[0];
        }
        if (!std::isfinite(gamma) || !std::isfinite(beta))
            throw parse_error("non-finite value in " + source, lineno);
        if (gamma <= 0.0)
            throw parse_error("ordinate must be positive in " + source, lineno);
        if (beta <= 0.0 || beta >= 1.0)
            throw parse_error("beta outside (0,1) in " + source, lineno);
        if (!zs.gammas.empty() && gamma <= zs.gammas.back())
            throw parse_error("ordinates must be strictly increasing in " + source, lineno);
        zs.gammas.push_back(gamma);
        zs.betas.push_back(beta);
    }
    if (!any_explicit_beta)
        zs.betas.clear();
    else {
        bool all_half = true;
        for (double b : zs.betas)
            if (b != 0.5) {
                all_half = false;
                break;
            }
        if (all_half)
            zs.betas.clear();
    }
    return zs;
}

inline zero_set load_zeros(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open zero table: " + path.string());
    return parse_zeros(in, path.string());
}

// 17 significant digits per value; save/load round-trips bit-identically.
inline void save_zeros(const zero_set& zs, std::ostream& out) {
    char buf[64];
    for (std::size_t i = 0; i < zs.count(); ++i) {
        if (zs.betas.empty()) {
            std::snprintf(buf, sizeof buf, "%.17g\n", zs.gammas[i]);
            out << buf;
        } else {
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", zs.betas[i], zs.gammas[i]);
            out << buf;
        }
    }
}

inline void save_zeros(const zero_set& zs, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw parse_error("cannot open zero table for writing: " + path.string());
    save_zeros(zs, out);
}

// Keeps gammas <= height.  +infinity is the no-op sentinel.
inline zero_set truncate_zeros(const zero_set& zs, double height) {
    zero_set out;
    out.source = zs.source;
    out.truncation = height;
    if (height == std::numeric_limits<double>::infinity())
        out.truncation = zs.truncation;
    for (std::size_t i = 0; i < zs.count(); ++i) {
        if (zs.gammas[i] > height)
            break;
        out.gammas.push_back(zs.gammas[i]);
        if (!zs.betas.empty())
            out.betas.push_back(zs.betas[i]);
    }
    return out;
}

// Both members of each conjugate pair, ascending ordinate, rho before its
// conjugate.  Full zero-sum enumerations iterate exactly this order.
inline std::vector<std::complex<double>> conjugate_expand(const zero_set& zs) {
    std::vector<std::complex<double>> out;
    out.reserve(2 * zs.count());
    for (std::size_t i = 0; i < zs.count(); ++i) {
        const auto r = zs.rho(i);
        out.push_back(r);
        out.push_back(std::conj(r));
    }
    return out;
}

inline std::vector<std::pair<std::complex<double>, std::complex<double>>>
conjugate_pairs(const zero_set& zs) {
    std::vector<std::pair<std::complex<double>, std::complex<double>>> out;
    out.reserve(zs.count());
    for (std::size_t i = 0; i < zs.count(); ++i) {
        const auto r = zs.rho(i);
        out.emplace_back(r, std::conj(r));
    }
    return out;
}

} // namespace cesaro
