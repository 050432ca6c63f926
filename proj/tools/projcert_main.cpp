// Command-line verifier. Subcommands:
//   verify        full certificate suite for one n
//   verify-range  the suite for every n in a range
//   randers-check classify a metric configuration from a JSON file
//   dims          dimension formulas only, no numerics
//
// Exit codes: 0 all checks pass, 1 a mathematical check failed,
// 2 numerical ambiguity, 64 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "projcert/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitNumericalAmbiguity = 2;
constexpr int kExitUsage = 64;

projcert::ReportFormat parse_format(const std::string& name) {
    if (name == "json") return projcert::ReportFormat::json;
    if (name == "text") return projcert::ReportFormat::text;
    throw std::invalid_argument("--format expects 'json' or 'text', got '" + name + "'");
}

projcert::RandersConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);

    const int n = doc.at("n").get<int>();
    if (n < 2) throw std::invalid_argument("config: n must be at least 2");
    const std::size_t m = static_cast<std::size_t>(n) + 1;

    projcert::Vector w(m);
    if (doc.contains("w")) {
        const auto& arr = doc.at("w");
        if (arr.size() != m) throw std::invalid_argument("config: w must have n+1 entries");
        for (std::size_t i = 0; i < m; ++i) w[i] = arr.at(i).get<double>();
    }
    projcert::Matrix skew(m, m);
    if (doc.contains("C")) {
        const auto& rows = doc.at("C");
        if (rows.size() != m) throw std::invalid_argument("config: C must be (n+1)x(n+1)");
        for (std::size_t i = 0; i < m; ++i) {
            if (rows.at(i).size() != m) throw std::invalid_argument("config: C must be (n+1)x(n+1)");
            for (std::size_t j = 0; j < m; ++j) skew(i, j) = rows.at(i).at(j).get<double>();
        }
    }
    return projcert::RandersConfig{n, std::move(w), std::move(skew)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical certificates for projective transformations of sphere quotients"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand name

    std::uint64_t seed = projcert::kDefaultSeed;
    std::string format = "text";
    projcert::Tolerances tol;
    app.add_option("--seed", seed, "seed for all sampled checks")->capture_default_str();
    app.add_option("--format", format, "report format: text or json")->capture_default_str();
    app.add_option("--tol-rank", tol.rank_rel_tol, "relative numerical-rank threshold")->capture_default_str();
    app.add_option("--dt", tol.dt, "geodesic integrator step")->capture_default_str();

    int n_verify = 0;
    CLI::App* verify = app.add_subcommand("verify", "run the certificate suite for one n");
    verify->add_option("--n", n_verify, "sphere dimension (2..16)")->required();

    int range_from = 2;
    int range_to = 8;
    CLI::App* verify_range = app.add_subcommand("verify-range", "run the suite for a range of n");
    verify_range->add_option("--from", range_from, "first n")->capture_default_str();
    verify_range->add_option("--to", range_to, "last n")->capture_default_str();

    std::string config_path;
    CLI::App* randers = app.add_subcommand("randers-check", "classify a metric configuration");
    randers->add_option("--config", config_path, "JSON configuration file")->required();

    int n_dims = 0;
    CLI::App* dims = app.add_subcommand("dims", "print the dimension formulas for one n");
    dims->add_option("--n", n_dims, "sphere dimension (>= 2)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const projcert::ReportFormat fmt = parse_format(format);

        if (*verify) {
            const projcert::VerificationReport report = projcert::run_verify(n_verify, seed, tol);
            std::cout << projcert::emit_report(report, fmt);
            return report.overall ? kExitPass : kExitCheckFailed;
        }

        if (*verify_range) {
            if (range_from < 2 || range_to < range_from)
                throw std::invalid_argument("verify-range: need 2 <= from <= to");
            bool all_pass = true;
            const bool json = fmt == projcert::ReportFormat::json;
            if (json) std::cout << "[\n";
            for (int n = range_from; n <= range_to; ++n) {
                const projcert::VerificationReport report = projcert::run_verify(n, seed, tol);
                std::cout << projcert::emit_report(report, fmt);
                if (json && n < range_to) std::cout << ",\n";
                all_pass = all_pass && report.overall;
            }
            if (json) std::cout << "]\n";
            return all_pass ? kExitPass : kExitCheckFailed;
        }

        if (*randers) {
            const projcert::RandersConfig config = load_config(config_path);
            const projcert::RandersCheckReport report = projcert::run_randers_check(config, seed, tol);
            std::cout << projcert::emit_randers_report(report, fmt);
            return kExitPass;
        }

        if (*dims) {
            if (n_dims < 2) throw std::invalid_argument("dims: n must be at least 2");
            const int isom = projcert::isometry_bound_dimension(n_dims);
            const int central = projcert::centralizer_dimension_formula(n_dims);
            const int sl = projcert::sl_dimension(n_dims);
            const bool strict = isom < central && central < sl;
            std::cout << "n = " << n_dims << "\n"
                      << "  isometry bound n(n+1)/2    = " << isom << "\n"
                      << "  quotient formula n^2-2n+2  = " << central << "\n"
                      << "  sphere group dim n(n+2)    = " << sl << "\n"
                      << "  chain " << isom << " < " << central << " < " << sl << "  "
                      << (strict ? "STRICT" : "NOT STRICT") << "\n";
            return kExitPass;
        }
    } catch (const projcert::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalAmbiguity;
    } catch (const projcert::FinslerValidityError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
