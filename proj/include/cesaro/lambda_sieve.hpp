#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kahan.hpp"

namespace cesaro {

// weights[n] = log p when n = p^a, 0 otherwise.  weights[p^a] is the same
// double as weights[p] for every exponent: the marking loop stores one value.
struct lambda_table {
    std::uint64_t limit = 0;        // inclusive
    std::vector<double> weights;    // size limit + 1
};

// Budget for the sieve in table entries (12 bytes per entry transiently).
inline constexpr std::uint64_t sieve_entry_budget = 200'000'000;

inline lambda_table build_lambda_table(std::uint64_t limit,
                                       std::uint64_t entry_budget = sieve_entry_budget) {
    if (limit < 1)
        throw config_error("sieve limit must be at least 1");
    if (limit + 1 > entry_budget)
        throw capacity_error("sieve limit " + std::to_string(limit) +
                             " exceeds entry budget " + std::to_string(entry_budget));

    // smallest-prime-factor sieve, then prime powers by repeated multiplication
    const std::size_t n = static_cast<std::size_t>(limit) + 1;
    std::vector<std::uint32_t> spf(n, 0);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes) {
            if (p > spf[i] || i * p > limit)
                break;
            spf[i * p] = p;
        }
    }

    lambda_table t;
    t.limit = limit;
    t.weights.assign(n, 0.0);
    for (std::uint32_t p : primes) {
        const double lp = std::log(static_cast<double>(p));
        for (std::uint64_t q = p; q <= limit; q *= p) {
            t.weights[q] = lp;
            if (q > limit / p)
                break;
        }
    }
    return t;
}

// Prime powers m with 2 <= m <= floor(sqrt(limit)), as (m, m^2, log p).
struct square_support_entry {
    std::uint64_t m;
    std::uint64_t msq;
    double weight;
};

inline std::uint64_t isqrt_u64(std::uint64_t x) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
    while (r > 0 && r * r > x)
        --r;
    while ((r + 1) * (r + 1) <= x)
        ++r;
    return r;
}

inline std::vector<square_support_entry> square_support(const lambda_table& t,
                                                        std::uint64_t limit) {
    const std::uint64_t root = isqrt_u64(limit);
    if (t.limit < root)
        throw capacity_error("lambda table covers " + std::to_string(t.limit) +
                             " but square support needs " + std::to_string(root));
    std::vector<square_support_entry> out;
    for (std::uint64_t m = 2; m <= root; ++m)
        if (t.weights[m] != 0.0)
            out.push_back({m, m * m, t.weights[m]});
    return out;
}

// prefix[M] = sum_{m <= M} weights[m] * m^j, compensated, stored per index.
inline std::vector<double> weighted_power_prefix(const lambda_table& t, unsigned j) {
    if (j > 12)
        throw config_error("power prefix exponent capped at 12, got " + std::to_string(j));
    std::vector<double> prefix(t.weights.size());
    kahan_sum acc;
    prefix[0] = 0.0;
    for (std::uint64_t m = 1; m <= t.limit; ++m) {
        const double w = t.weights[m];
        if (w != 0.0) {
            double p = 1.0;
            for (unsigned e = 0; e < j; ++e)
                p *= static_cast<double>(m);
            acc.add(w * p);
        }
        prefix[m] = acc.value();
    }
    return prefix;
}

// Binary cache: 8-byte magic, u64 little-endian limit, (limit+1) f64 LE.
inline constexpr char lambda_cache_magic[8] = {'L', 'A', 'M', 'B', 'D', 'A', 'v', '1'};

inline void save_lambda_table(const lambda_table& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw parse_error("cannot open cache file for writing: " + path.string());
    out.write(lambda_cache_magic, 8);
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i)
        buf[i] = static_cast<unsigned char>((t.limit >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), 8);
    // IEEE-754 doubles, little-endian host assumed for the payload
    out.write(reinterpret_cast<const char*>(t.weights.data()),
              static_cast<std::streamsize>(t.weights.size() * sizeof(double)));
    if (!out)
        throw parse_error("short write to cache file: " + path.string());
}

inline lambda_table load_lambda_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw parse_error("cannot open cache file: " + path.string());
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, lambda_cache_magic, 8) != 0)
        throw parse_error("bad cache magic in " + path.string());
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (!in)
        throw parse_error("truncated cache header in " + path.string());
    std::uint64_t limit = 0;
    for (int i = 0; i < 8; ++i)
        limit |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    if (limit + 1 > sieve_entry_budget)
        throw capacity_error("cached limit " + std::to_string(limit) + " exceeds entry budget");
    lambda_table t;
    t.limit = limit;
    t.weights.resize(static_cast<std::size_t>(limit) + 1);
    in.read(reinterpret_cast<char*>(t.weights.data()),
            static_cast<std::streamsize>(t.weights.size() * sizeof(double)));
    if (!in || in.gcount() != static_cast<std::streamsize>(t.weights.size() * sizeof(double)))
        throw parse_error("truncated cache payload in " + path.string());
    return t;
}

inline std::filesystem::path lambda_cache_file(const std::filesystem::path& dir,
                                               std::uint64_t limit) {
    return dir / ("lambda_" + std::to_string(limit) + ".bin");
}

// Loads a matching cache entry or rebuilds it.  A corrupt file is rebuilt and
// overwritten; the warning (if any) describes what was discarded.
inline lambda_table load_or_build_lambda_table(std::uint64_t limit,
                                               const std::filesystem::path& cache_dir,
                                               std::string* warning = nullptr,
                                               bool* was_cached = nullptr) {
    const auto file = lambda_cache_file(cache_dir, limit);
    if (was_cached)
        *was_cached = false;
    if (std::filesystem::exists(file)) {
        try {
            lambda_table t = load_lambda_table(file);
            if (t.limit == limit) {
                if (was_cached)
                    *was_cached = true;
                return t;
            }
            if (warning)
                *warning = "cache file " + file.string() + " has mismatched limit; rebuilding";
        } catch (const parse_error& e) {
            if (warning)
                *warning = std::string("discarding corrupt cache: ") + e.what();
        }
    }
    lambda_table t = build_lambda_table(limit);
    std::filesystem::create_directories(cache_dir);
    save_lambda_table(t, file);
    return t;
}

} // namespace cesaro
