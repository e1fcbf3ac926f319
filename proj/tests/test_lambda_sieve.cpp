#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "cesaro/lambda_sieve.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

// trial-division von Mangoldt in plain double, same log call the sieve uses,
// so sums in identical order must agree bit for bit
double lambda_double(std::uint64_t n) {
    if (n < 2)
        return 0.0;
    std::uint64_t p = 0, m = n;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (m % d == 0) {
            p = d;
            break;
        }
    if (p == 0)
        return std::log(static_cast<double>(n));
    while (m % p == 0)
        m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

fs::path fresh_dir(const char* tag) {
    const auto d = fs::temp_directory_path() /
                   (std::string("cesaro_") + tag + "_" + std::to_string(getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("sieve weights match trial division") {
    const auto t = cesaro::build_lambda_table(20000);
    REQUIRE(t.limit == 20000);
    REQUIRE(t.weights.size() == 20001);
    CHECK(t.weights[0] == 0.0);
    CHECK(t.weights[1] == 0.0);
    CHECK(t.weights[6] == 0.0);
    CHECK(t.weights[8] == std::log(2.0));
    for (std::uint64_t n = 0; n <= 20000; ++n) {
        const double want = lambda_double(n);
        if (want == 0.0) {
            REQUIRE(t.weights[n] == 0.0);
        } else {
            REQUIRE(t.weights[n] == want);   // same std::log(double) both sides
        }
    }
}

TEST_CASE("prime powers share the weight of their base") {
    const auto t = cesaro::build_lambda_table(10000);
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 97ull}) {
        for (std::uint64_t q = p; q <= t.limit; q *= p) {
            REQUIRE(t.weights[q] == t.weights[p]);
            if (q > t.limit / p)
                break;
        }
    }
}

TEST_CASE("chebyshev prefix stays near M") {
    const auto t = cesaro::build_lambda_table(10000);
    for (std::uint64_t M : {100ull, 1000ull, 10000ull}) {
        double s = 0.0;
        for (std::uint64_t n = 0; n <= M; ++n)
            s += t.weights[n];
        const double Md = static_cast<double>(M);
        const double band = 3.0 * std::sqrt(Md) * std::log(Md) * std::log(Md);
        CHECK(std::abs(s - Md) <= band);
        if (M == 10000) {
            CHECK(s >= 9000.0);
            CHECK(s <= 11000.0);
        }
    }
}

TEST_CASE("prefix equals trial-division psi in the same order") {
    const auto t = cesaro::build_lambda_table(10000);
    double lib = 0.0, ref = 0.0;
    for (std::uint64_t n = 0; n <= 10000; ++n) {
        lib += t.weights[n];
        ref += lambda_double(n);
    }
    CHECK(lib == ref);
}

TEST_CASE("sieve rejects bad limits") {
    CHECK_THROWS_AS(cesaro::build_lambda_table(0), cesaro::config_error);
    CHECK_THROWS_AS(cesaro::build_lambda_table(cesaro::sieve_entry_budget + 1),
                    cesaro::capacity_error);
}

TEST_CASE("building twice is bit-identical") {
    const auto a = cesaro::build_lambda_table(5000);
    const auto b = cesaro::build_lambda_table(5000);
    REQUIRE(a.weights == b.weights);
}

TEST_CASE("square support enumerates prime-power squares") {
    const auto t = cesaro::build_lambda_table(1000);
    const auto s10 = cesaro::square_support(t, 10);
    REQUIRE(s10.size() == 2);
    CHECK(s10[0].m == 2);
    CHECK(s10[0].msq == 4);
    CHECK(s10[0].weight == std::log(2.0));
    CHECK(s10[1].m == 3);
    CHECK(s10[1].msq == 9);

    CHECK(cesaro::square_support(t, 3).empty());

    const auto big = cesaro::build_lambda_table(1000);
    const auto s1m = cesaro::square_support(big, 1'000'000);
    CHECK(s1m.size() == 193);   // prime powers up to 1000
    for (std::size_t i = 1; i < s1m.size(); ++i)
        REQUIRE(s1m[i - 1].m < s1m[i].m);
    for (const auto& e : s1m) {
        REQUIRE(e.weight > 0.0);
        REQUIRE(e.msq == e.m * e.m);
    }

    CHECK_THROWS_AS(cesaro::square_support(t, 2'000'000), cesaro::capacity_error);
}

TEST_CASE("weighted power prefix sums") {
    const auto t = cesaro::build_lambda_table(10000);
    const auto p0 = cesaro::weighted_power_prefix(t, 0);
    CHECK(p0[2] == std::log(2.0));

    const auto p1 = cesaro::weighted_power_prefix(t, 1);
    const double want = 2.0 * std::log(2.0) + 3.0 * std::log(3.0) + 4.0 * std::log(2.0);
    CHECK(std::abs(p1[4] - want) <= 1e-15 * want);

    const auto p2 = cesaro::weighted_power_prefix(t, 2);
    double naive = 0.0;
    for (std::uint64_t m = 0; m <= 10000; ++m)
        naive += t.weights[m] * static_cast<double>(m) * static_cast<double>(m);
    CHECK(std::abs(p2[10000] - naive) <= 1e-12 * naive);

    for (std::uint64_t M : {101ull, 1024ull, 9973ull}) {
        const double diff = p2[M] - p2[M - 1];
        const double cell = t.weights[M] * static_cast<double>(M) * static_cast<double>(M);
        REQUIRE(std::abs(diff - cell) <= 1e-14 * std::max(1.0, std::abs(p2[M])));
    }

    CHECK_THROWS_AS(cesaro::weighted_power_prefix(t, 13), cesaro::config_error);
}

TEST_CASE("cache round trip and validation") {
    const auto dir = fresh_dir("cache");
    const auto t = cesaro::build_lambda_table(3000);
    const auto file = dir / "lambda_3000.bin";
    cesaro::save_lambda_table(t, file);

    const auto back = cesaro::load_lambda_table(file);
    REQUIRE(back.limit == t.limit);
    REQUIRE(back.weights == t.weights);

    SECTION("wrong magic is rejected") {
        auto bytes = file;
        std::fstream f(bytes, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("NOTLAMB1", 8);
        f.close();
        CHECK_THROWS_AS(cesaro::load_lambda_table(bytes), cesaro::parse_error);
    }

    SECTION("truncated payload is rejected") {
        const auto cut = dir / "cut.bin";
        std::ifstream in(file, std::ios::binary);
        std::string all((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
        std::ofstream out(cut, std::ios::binary);
        out.write(all.data(), static_cast<std::streamsize>(all.size() - 16));
        out.close();
        CHECK_THROWS_AS(cesaro::load_lambda_table(cut), cesaro::parse_error);
    }

    fs::remove_all(dir);
}

TEST_CASE("load_or_build reuses and repairs the cache") {
    const auto dir = fresh_dir("lob");
    std::string warning;
    bool hit = true;
    const auto t1 = cesaro::load_or_build_lambda_table(1000, dir, &warning, &hit);
    CHECK_FALSE(hit);
    CHECK(warning.empty());

    const auto t2 = cesaro::load_or_build_lambda_table(1000, dir, &warning, &hit);
    CHECK(hit);
    REQUIRE(t1.weights == t2.weights);

    // corrupt the magic; next load must warn and rebuild
    const auto file = cesaro::lambda_cache_file(dir, 1000);
    {
        std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("XXXXXXXX", 8);
    }
    warning.clear();
    const auto t3 = cesaro::load_or_build_lambda_table(1000, dir, &warning, &hit);
    CHECK_FALSE(hit);
    CHECK_FALSE(warning.empty());
    REQUIRE(t3.weights == t1.weights);

    // and the rebuild must have repaired the file
    const auto t4 = cesaro::load_or_build_lambda_table(1000, dir, &warning, &hit);
    CHECK(hit);
    fs::remove_all(dir);
}
