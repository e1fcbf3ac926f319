#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "cesaro/errors.hpp"
#include "cesaro/explicit_formula.hpp"
#include "cesaro/lambda_sieve.hpp"
#include "cesaro/laplace.hpp"
#include "cesaro/rsp.hpp"
#include "cesaro/zeros.hpp"

namespace {

using cesaro::cplx;

struct check_result {
    std::string name;
    double measured = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

check_result make_check(std::string name, double measured, double reference,
                        double tolerance) {
    check_result c{std::move(name), measured, reference, tolerance, false};
    c.pass = std::isfinite(measured) && std::abs(measured - reference) <= tolerance;
    return c;
}

void write_checks_json(std::ostream& os, const std::vector<check_result>& checks) {
    os << "[\n";
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        os << "  {\"name\": \"" << c.name << "\", \"measured\": "
           << cesaro::json_number(c.measured)
           << ", \"reference\": " << cesaro::json_number(c.reference)
           << ", \"tolerance\": " << cesaro::json_number(c.tolerance)
           << ", \"pass\": " << (c.pass ? "true" : "false") << "}"
           << (i + 1 < checks.size() ? "," : "") << "\n";
    }
    os << "]\n";
}

std::vector<check_result> suite_laplace() {
    std::vector<check_result> out;
    const struct {
        const char* name;
        cplx s;
        cplx ref;
    } cases[] = {
        {"laplace_s_half", {0.5, 0.0}, {1.0 / std::sqrt(M_PI), 0.0}},
        {"laplace_s_one", {1.0, 0.0}, {1.0, 0.0}},
        {"laplace_s_two", {2.0, 0.0}, {1.0, 0.0}},
        {"laplace_s_3_plus_i", {3.0, 1.0}, std::exp(-cesaro::log_gamma_c({3.0, 1.0}))},
    };
    for (const auto& c : cases) {
        const cplx q = cesaro::laplace_quadrature(c.s);
        out.push_back(make_check(c.name, std::abs(q - c.ref), 0.0, 1e-6));
    }
    cesaro::line_quadrature_spec fine;
    fine.step = 5e-4;
    const double drift = std::abs(cesaro::laplace_quadrature({2.0, 0.0}) -
                                  cesaro::laplace_quadrature({2.0, 0.0}, fine));
    out.push_back(make_check("laplace_step_halving", drift, 0.0, 1e-7));
    return out;
}

std::vector<check_result> suite_stirling() {
    std::vector<check_result> out;
    const double xs[] = {0.1, 0.5, 0.9};
    const double ys[] = {10.0, 20.0, 40.0, 80.0};
    for (double x : xs) {
        double dev[4];
        for (int i = 0; i < 4; ++i) {
            const double mag = std::exp(cesaro::log_gamma(cplx(x, ys[i])).logmod);
            dev[i] = std::abs(mag / cesaro::stirling_magnitude(x, ys[i]) - 1.0);
        }
        double worst_rise = 0.0;
        for (int i = 1; i < 4; ++i)
            worst_rise = std::max(worst_rise, dev[i] - dev[i - 1]);
        const std::string tag = "_x" + std::to_string(x).substr(0, 3);
        // 1e-12 slack: at x = 1/2 the magnitude law is exact up to e^{-2 pi y}
        // and the measured deviation is rounding noise
        out.push_back(make_check("stirling_deviation_decreasing" + tag,
                                 std::max(0.0, worst_rise), 0.0, 1e-12));
        out.push_back(make_check("stirling_ratio_y40" + tag, dev[2], 0.0, 1e-2));
    }
    return out;
}

std::vector<check_result> suite_gamma() {
    std::vector<check_result> out;
    std::mt19937 rng(12345);

    std::uniform_real_distribution<double> re_rec(1e-3, 10.0), im_rec(-100.0, 100.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const cplx z(re_rec(rng), im_rec(rng));
        const cplx ratio = std::exp(cesaro::log_gamma_c(z + 1.0) - cesaro::log_gamma_c(z) -
                                    std::log(z));
        worst = std::max(worst, std::abs(ratio - 1.0));
    }
    out.push_back(make_check("gamma_recurrence", worst, 0.0, 1e-10));

    std::uniform_real_distribution<double> re_any(-20.0, 20.0), im_any(-100.0, 100.0);
    double worst_mod = 0.0, worst_arg = 0.0;
    for (int i = 0; i < 200; ++i) {
        cplx z(re_any(rng), im_any(rng));
        if (z.imag() == 0.0)
            z += cplx(0.0, 1e-6);
        const auto a = cesaro::log_gamma(z);
        const auto b = cesaro::log_gamma(std::conj(z));
        worst_mod = std::max(worst_mod, std::abs(a.logmod - b.logmod));
        worst_arg = std::max(worst_arg, std::abs(a.arg + b.arg));
    }
    out.push_back(make_check("gamma_conjugate_logmod", worst_mod, 0.0, 0.0));
    out.push_back(make_check("gamma_conjugate_arg", worst_arg, 0.0, 1e-12));

    std::uniform_real_distribution<double> re_ref(1e-3, 1.0 - 1e-3), im_ref(-50.0, 50.0);
    double worst_ref = 0.0;
    for (int i = 0; i < 200; ++i) {
        const cplx z(re_ref(rng), im_ref(rng));
        const cplx expr = std::exp(cesaro::log_gamma_c(z) + cesaro::log_gamma_c(1.0 - z) +
                                   std::log(std::sin(M_PI * z)) - std::log(M_PI));
        worst_ref = std::max(worst_ref, std::abs(expr - 1.0));
    }
    out.push_back(make_check("gamma_reflection", worst_ref, 0.0, 1e-9));
    return out;
}

std::vector<check_result> suite_pnt(const cesaro::lambda_table& t) {
    std::vector<check_result> out;
    const auto s1 = cesaro::s_tilde(1, cplx(1e-3, 0.0), t);
    out.push_back(make_check("pnt_s1_times_a", 1e-3 * s1.value.real(), 1.0, 0.05));
    const auto s2 = cesaro::s_tilde(2, cplx(1e-4, 0.0), t);
    out.push_back(make_check("pnt_s2_times_sqrt_a",
                             2.0 * std::sqrt(1e-4) * s2.value.real() / std::sqrt(M_PI), 1.0,
                             0.05));
    return out;
}

std::vector<check_result> suite_lemma2(const cesaro::lambda_table& t,
                                       const cesaro::zero_set& zs) {
    std::vector<check_result> out;
    const cplx z(1e-3, 0.0);
    const double heights[3] = {50.0, 200.0, 500.0};
    double r[3];
    for (int i = 0; i < 3; ++i)
        r[i] = cesaro::lemma_residual(1, z, t, cesaro::truncate_zeros(zs, heights[i]));
    const double rise = std::max({0.0, r[1] - r[0], r[2] - r[1]});
    out.push_back(make_check("lemma2_residual_nonincreasing_T", rise, 0.0, 1e-12));
    out.push_back(make_check("lemma2_residual_T500", r[2], 0.0, 1e-2));
    return out;
}

std::vector<check_result> suite_lemma3(const cesaro::lambda_table& t,
                                       const cesaro::zero_set& zs) {
    std::vector<check_result> out;
    const double a = 1e-3;
    double c_min = 0.0, c_max = 0.0;
    double r1_min = 0.0, r1_max = 0.0, r2_min = 0.0, r2_max = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double y = 5e-3 + 5e-3 * static_cast<double>(i);
        const cplx z(a, y);
        const double shape = std::sqrt(std::abs(z)) *
                             (1.0 + std::pow(std::log(y / a), 2.0));
        const double r1 = cesaro::lemma_residual(1, z, t, zs);
        const double r2 = cesaro::lemma_residual(2, z, t, zs);
        const double c = r1 / shape;
        if (i == 0) {
            c_min = c_max = c;
            r1_min = r1_max = r1;
            r2_min = r2_max = r2;
        } else {
            c_min = std::min(c_min, c);
            c_max = std::max(c_max, c);
            r1_min = std::min(r1_min, r1);
            r1_max = std::max(r1_max, r1);
            r2_min = std::min(r2_min, r2);
            r2_max = std::max(r2_max, r2);
        }
    }
    out.push_back(make_check("lemma_error_shape_constant_ratio", c_max / c_min, 1.0, 3.0));
    out.push_back(make_check("lemma3_band_upper", r2_max / (10.0 * r1_max), 0.0, 1.0));
    out.push_back(make_check("lemma3_band_lower", r1_min / (10.0 * r2_min), 0.0, 1.0));
    return out;
}

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
    if (path.empty())
        return std::cout;
    file.open(path, std::ios::binary);
    if (!file)
        throw cesaro::config_error("cannot open output file " + path);
    return file;
}

cesaro::zero_set load_zeros_checked(const std::string& path) {
    if (path.empty())
        throw cesaro::config_error("a zero table is required (--zeros)");
    return cesaro::load_zeros(path);
}

} // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);

    CLI::App app{"Cesaro-averaged prime representation sums and their zero-sum expansion"};
    app.require_subcommand(1);
    // let --cache-dir / --threads / --format / --quiet appear after the
    // subcommand as well (subcommands inherit this at creation)
    app.fallthrough(true);

    std::string cache_dir;
    unsigned threads = 0;
    std::string format = "text";
    bool quiet = false;
    app.add_option("--cache-dir", cache_dir,
                   "von Mangoldt table cache directory (default ./.cesaro-cache)")
        ->envname("CESARO_CACHE_DIR");
    app.add_option("--threads", threads, "worker threads, 0 = all cores");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--quiet", quiet, "suppress notes on stderr");

    auto* cmd_sieve = app.add_subcommand("sieve", "build and cache a von Mangoldt table");
    std::uint64_t sieve_limit = 0;
    cmd_sieve->add_option("--limit", sieve_limit, "table limit")->required();

    auto* cmd_rsp =
        app.add_subcommand("rsp", "representation-function values n <= limit as CSV");
    std::uint64_t rsp_limit = 0;
    std::string rsp_out;
    cmd_rsp->add_option("--limit", rsp_limit, "largest n")->required();
    cmd_rsp->add_option("--out", rsp_out, "output file (default stdout)");

    auto* cmd_lhs = app.add_subcommand("lhs", "Cesaro-averaged sum of the representation function");
    std::uint64_t lhs_N = 0;
    double lhs_k = 0.0;
    std::string lhs_method = "direct";
    cmd_lhs->add_option("--N", lhs_N, "average endpoint")->required();
    cmd_lhs->add_option("--k", lhs_k, "Cesaro exponent")->required();
    cmd_lhs->add_option("--method", lhs_method, "evaluation method")
        ->check(CLI::IsMember({"direct", "binomial", "bruteforce"}));

    auto* cmd_compare =
        app.add_subcommand("compare", "Cesaro average against the zero-sum expansion");
    std::uint64_t cmp_N = 0;
    double cmp_k = 0.0, cmp_T = 100.0;
    std::string cmp_zeros, cmp_mode = "reduced", cmp_method = "direct";
    std::uint64_t cmp_budget = 1'000'000'000;
    cmd_compare->add_option("--N", cmp_N, "average endpoint")->required();
    cmd_compare->add_option("--k", cmp_k, "Cesaro exponent")->required();
    cmd_compare->add_option("--zeros", cmp_zeros, "zero table file");
    cmd_compare->add_option("--T", cmp_T, "zero truncation height (0 = no zeros)");
    cmd_compare->add_option("--mode", cmp_mode, "zero enumeration")
        ->check(CLI::IsMember({"reduced", "full"}));
    cmd_compare->add_option("--budget", cmp_budget, "triple-sum term budget");
    cmd_compare->add_option("--method", cmp_method, "lhs method")
        ->check(CLI::IsMember({"direct", "binomial", "bruteforce"}));

    auto* cmd_scan = app.add_subcommand("scan", "comparison rows over an N x k grid as CSV");
    std::vector<std::uint64_t> scan_N;
    std::vector<double> scan_k{2.0};
    double scan_T = 100.0;
    std::string scan_zeros, scan_mode = "reduced", scan_out;
    std::uint64_t scan_budget = 1'000'000'000;
    cmd_scan->add_option("--N", scan_N, "endpoints, comma separated")->delimiter(',');
    cmd_scan->add_option("--k", scan_k, "exponents, comma separated")->delimiter(',');
    cmd_scan->add_option("--zeros", scan_zeros, "zero table file");
    cmd_scan->add_option("--T", scan_T, "zero truncation height (0 = no zeros)");
    cmd_scan->add_option("--mode", scan_mode, "zero enumeration")
        ->check(CLI::IsMember({"reduced", "full"}));
    cmd_scan->add_option("--budget", scan_budget, "triple-sum term budget");
    cmd_scan->add_option("--out", scan_out, "output file (default stdout)");

    auto* cmd_verify = app.add_subcommand("verify", "analytic identity check suites");
    std::string verify_suite;
    std::string verify_zeros;
    double verify_T = 500.0;
    std::uint64_t verify_limit = 100'000;
    cmd_verify
        ->add_option("suite", verify_suite,
                     "laplace | stirling | gamma | lemma2 | lemma3 | pnt | all")
        ->required()
        ->check(CLI::IsMember({"laplace", "stirling", "gamma", "lemma2", "lemma3", "pnt",
                               "all"}));
    cmd_verify->add_option("--zeros", verify_zeros, "zero table (lemma suites)");
    cmd_verify->add_option("--T", verify_T, "zero truncation height for lemma3");
    cmd_verify->add_option("--limit", verify_limit, "von Mangoldt table limit");

    auto* cmd_zeros = app.add_subcommand("zeros", "inspect or rewrite a zero table");
    std::string zeros_action, zeros_file, zeros_out;
    double zeros_T = 0.0;
    cmd_zeros->add_option("action", zeros_action, "info")
        ->required()
        ->check(CLI::IsMember({"info"}));
    cmd_zeros->add_option("path", zeros_file, "zero table file")->required();
    cmd_zeros->add_option("--T", zeros_T, "truncate at this height before output");
    cmd_zeros->add_option("--out", zeros_out, "rewrite the (truncated) table here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (cache_dir.empty())
        cache_dir = ".cesaro-cache";

    try {
        if (*cmd_sieve) {
            std::string warning;
            bool hit = false;
            const auto t =
                cesaro::load_or_build_lambda_table(sieve_limit, cache_dir, &warning, &hit);
            if (!warning.empty() && !quiet)
                std::cerr << "note: " << warning << "\n";
            const auto path = cesaro::lambda_cache_file(cache_dir, sieve_limit);
            if (format == "json") {
                std::cout << "{\"limit\": " << t.limit << ", \"path\": \"" << path.string()
                          << "\", \"cache_hit\": " << (hit ? "true" : "false") << "}\n";
            } else {
                std::cout << (hit ? "cache hit: " : "built: ") << path.string() << " (limit "
                          << t.limit << ")\n";
            }
            return 0;
        }

        if (*cmd_rsp) {
            const auto t = cesaro::load_or_build_lambda_table(rsp_limit, cache_dir);
            const auto r = cesaro::build_rsp_table(t, rsp_limit);
            std::ofstream file;
            cesaro::write_rsp_csv(r, open_or_stdout(rsp_out, file));
            return 0;
        }

        if (*cmd_lhs) {
            const cesaro::cesaro_params p{lhs_N, lhs_k};
            cesaro::lhs_method method = cesaro::lhs_method::direct;
            if (lhs_method == "binomial")
                method = cesaro::lhs_method::binomial;
            else if (lhs_method == "bruteforce")
                method = cesaro::lhs_method::bruteforce;
            const auto t = cesaro::load_or_build_lambda_table(lhs_N, cache_dir);
            const auto support = cesaro::square_support(t, lhs_N);
            const double v = cesaro::cesaro_lhs(p, t, support, method);
            if (format == "json") {
                std::cout << "{\"N\": " << lhs_N << ", \"k\": " << cesaro::json_number(lhs_k)
                          << ", \"method\": \"" << lhs_method
                          << "\", \"lhs\": " << cesaro::json_number(v) << "}\n";
            } else {
                std::cout << "lhs(" << lhs_N << ", " << lhs_k
                          << ") = " << cesaro::json_number(v) << "\n";
            }
            if (!std::isfinite(v))
                return 4;
            return 0;
        }

        if (*cmd_compare) {
            cesaro::zero_set zs;
            if (cmp_T > 0.0)
                zs = load_zeros_checked(cmp_zeros);
            cesaro::explicit_options opts;
            opts.truncation = cmp_T;
            opts.mode = cmp_mode == "full" ? cesaro::zero_sum_mode::full
                                           : cesaro::zero_sum_mode::reduced;
            opts.term_budget = cmp_budget;
            opts.threads = threads;
            opts.method = cmp_method == "binomial"    ? cesaro::lhs_method::binomial
                          : cmp_method == "bruteforce" ? cesaro::lhs_method::bruteforce
                                                       : cesaro::lhs_method::direct;
            const auto t = cesaro::load_or_build_lambda_table(cmp_N, cache_dir);
            const auto support = cesaro::square_support(t, cmp_N);
            const auto rep = cesaro::compare({cmp_N, cmp_k}, t, support, zs, opts);
            if (format == "json")
                cesaro::write_report_json(std::cout, rep);
            else
                cesaro::write_report_text(std::cout, rep);
            if (!cesaro::report_is_finite(rep)) {
                if (!quiet)
                    std::cerr << "note: non-finite value in report\n";
                return 4;
            }
            return 0;
        }

        if (*cmd_scan) {
            cesaro::zero_set zs;
            if (scan_T > 0.0 && !scan_N.empty())
                zs = load_zeros_checked(scan_zeros);
            cesaro::explicit_options opts;
            opts.truncation = scan_T;
            opts.mode = scan_mode == "full" ? cesaro::zero_sum_mode::full
                                            : cesaro::zero_sum_mode::reduced;
            opts.term_budget = scan_budget;
            opts.threads = threads;
            std::ofstream file;
            std::ostream& os = open_or_stdout(scan_out, file);
            os << cesaro::scan_csv_header() << "\n";
            os.flush();
            if (scan_N.empty())
                return 0;
            const std::uint64_t maxN = *std::max_element(scan_N.begin(), scan_N.end());
            const auto t = cesaro::load_or_build_lambda_table(maxN, cache_dir);
            const auto support = cesaro::square_support(t, maxN);
            bool all_finite = true;
            for (const std::uint64_t N : scan_N) {
                for (const double k : scan_k) {
                    const auto rep = cesaro::compare({N, k}, t, support, zs, opts);
                    cesaro::write_scan_row(os, rep);
                    os.flush();
                    all_finite = all_finite && cesaro::report_is_finite(rep);
                }
            }
            return all_finite ? 0 : 4;
        }

        if (*cmd_verify) {
            std::vector<check_result> checks;
            const bool wants_lemma =
                verify_suite == "lemma2" || verify_suite == "lemma3" || verify_suite == "all";
            cesaro::zero_set zs;
            if (wants_lemma)
                zs = cesaro::truncate_zeros(load_zeros_checked(verify_zeros), verify_T);
            cesaro::lambda_table table;
            if (wants_lemma || verify_suite == "pnt" || verify_suite == "all")
                table = cesaro::load_or_build_lambda_table(verify_limit, cache_dir);

            if (verify_suite == "laplace" || verify_suite == "all") {
                auto s = suite_laplace();
                checks.insert(checks.end(), s.begin(), s.end());
            }
            if (verify_suite == "stirling" || verify_suite == "all") {
                auto s = suite_stirling();
                checks.insert(checks.end(), s.begin(), s.end());
            }
            if (verify_suite == "gamma" || verify_suite == "all") {
                auto s = suite_gamma();
                checks.insert(checks.end(), s.begin(), s.end());
            }
            if (verify_suite == "lemma2" || verify_suite == "all") {
                auto s = suite_lemma2(table, zs);
                checks.insert(checks.end(), s.begin(), s.end());
            }
            if (verify_suite == "lemma3" || verify_suite == "all") {
                auto s = suite_lemma3(table, zs);
                checks.insert(checks.end(), s.begin(), s.end());
            }
            if (verify_suite == "pnt" || verify_suite == "all") {
                auto s = suite_pnt(table);
                checks.insert(checks.end(), s.begin(), s.end());
            }
            write_checks_json(std::cout, checks);
            const bool ok = std::all_of(checks.begin(), checks.end(),
                                        [](const check_result& c) { return c.pass; });
            return ok ? 0 : 1;
        }

        if (*cmd_zeros) {
            auto zs = cesaro::load_zeros(zeros_file);
            if (zeros_T > 0.0)
                zs = cesaro::truncate_zeros(zs, zeros_T);
            if (!zeros_out.empty())
                cesaro::save_zeros(zs, std::filesystem::path(zeros_out));
            const char* beta_policy = zs.betas.empty() ? "all-half" : "explicit";
            if (format == "json") {
                std::cout << "{\"count\": " << zs.count();
                if (zs.count() > 0) {
                    std::cout << ", \"gamma_first\": " << cesaro::json_number(zs.gammas.front())
                              << ", \"gamma_last\": " << cesaro::json_number(zs.gammas.back());
                }
                std::cout << ", \"betas\": \"" << beta_policy << "\""
                          << ", \"T\": " << cesaro::json_number(zs.truncation) << "}\n";
            } else {
                std::cout << zs.count() << " zeros";
                if (zs.count() > 0)
                    std::cout << ", gamma in [" << cesaro::json_number(zs.gammas.front())
                              << ", " << cesaro::json_number(zs.gammas.back()) << "]";
                std::cout << ", beta " << beta_policy << "\n";
            }
            return 0;
        }
    } catch (const cesaro::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cesaro::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cesaro::capacity_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const cesaro::budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const cesaro::pole_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const cesaro::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
