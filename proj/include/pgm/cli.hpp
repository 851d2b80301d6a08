#ifndef PGM_CLI_HPP
#define PGM_CLI_HPP

// Command-line front end. run() never calls exit(); it returns
//   0 success, 1 verification failure, 2 usage error.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pgm/density.hpp"
#include "pgm/experiments.hpp"
#include "pgm/expansion.hpp"
#include "pgm/io.hpp"
#include "pgm/parry_core.hpp"
#include "pgm/verify.hpp"

namespace pgm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
    std::string subcommand;
    int n = 2;
    int n_min = 2;
    int n_max = 10;
    double x = 0.0;
    int digits = 16;
    int m = 10;
    int m_min = 5;
    std::optional<int> m_max;
    std::string source;
    std::optional<double> alpha;
    int grid_size = kDefaultGridPerPiece;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "csv";
    double perturb_beta = 0.0;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline SourceDensity resolve_source(const RunConfig& cfg, const std::string& fallback)
{
    const std::string name = cfg.source.empty() ? fallback : cfg.source;
    if (name == "power")
        return SourceDensity::power(cfg.alpha.value_or(2.0));
    if (cfg.alpha)
        throw UsageError("--alpha only applies to --source power");
    if (name == "uniform")
        return SourceDensity::uniform();
    if (name == "affine")
        return SourceDensity::affine_decreasing();
    throw UsageError("unknown source '" + name + "'");
}

// Writes to --out when given, otherwise to the fallback stream.
template <typename Writer>
void emit(const RunConfig& cfg, std::ostream& fallback, Writer&& write)
{
    if (cfg.out_path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file)
        throw UsageError("cannot open output file " + cfg.out_path);
    write(file);
}

inline int cmd_basis(const RunConfig& cfg, std::ostream& out)
{
    const auto basis = build_basis(cfg.n);
    const auto rates = rate_exponents(basis);
    std::ostringstream os;
    os << std::setprecision(12);
    os << "n=" << basis.n() << '\n';
    os << "beta=" << basis.beta() << '\n';
    os << "lambda2_abs=" << basis.lambda2_abs() << '\n';
    for (std::size_t j = 0; j < basis.roots().size(); ++j)
        os << "abs_lambda_" << j + 1 << '=' << std::abs(basis.roots()[j]) << '\n';
    os << "d_beta=" << basis.d_beta() << '\n';
    os << "t=" << rates.t << '\n';
    os << "t_ratio=" << rates.t_over_1pt << '\n';
    out << os.str();
    return kExitOk;
}

inline int cmd_table1(const RunConfig& cfg, std::ostream& out)
{
    const auto rows = table1(cfg.n_min, cfg.n_max);
    emit(cfg, out, [&](std::ostream& os) { io::write_table1_csv(os, rows); });
    return kExitOk;
}

inline int cmd_expand(const RunConfig& cfg, std::ostream& out)
{
    const auto basis = build_basis(cfg.n);
    out << greedy_digits(basis, cfg.x, cfg.digits).str() << '\n';
    return kExitOk;
}

inline int cmd_errors(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto basis = build_basis(cfg.n);
    const auto source = resolve_source(cfg, "power");
    const int m_max = cfg.m_max.value_or(cfg.n == 2 ? 20 : 18);
    if (m_max < cfg.m_min)
        throw UsageError("--m-max must be >= --m-min");
    const auto curve = error_curve(basis, source, cfg.m_min, m_max, cfg.grid_size);

    std::optional<RateFit> fit;
    if (curve.rows.size() >= 4)
        fit = fit_rate(curve, basis);
    if (cfg.format == "svg" && !fit)
        throw UsageError("svg output needs at least 4 rows");

    emit(cfg, out, [&](std::ostream& os) {
        if (cfg.format == "svg")
            io::write_error_svg(os, curve, *fit);
        else
            io::write_errors_csv(os, curve);
    });

    std::ostream& summary = cfg.out_path.empty() ? err : out;
    if (fit) {
        summary << "slope=" << io::fmt_real(fit->slope) << '\n';
        summary << "normalized_slope=" << io::fmt_real(fit->normalized) << '\n';
        summary << "r_squared=" << io::fmt_real(fit->r_squared) << '\n';
    } else {
        summary << "fit skipped: fewer than 4 rows\n";
    }
    return kExitOk;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    VerifyOptions opt;
    opt.perturb_beta = cfg.perturb_beta;
    const auto results = run_verification(cfg.n_min, cfg.n_max, opt);
    std::size_t failed = 0;
    for (const auto& c : results) {
        failed += c.passed ? 0 : 1;
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " n=" << c.n;
        if (!c.detail.empty())
            out << ' ' << c.detail;
        out << '\n';
    }
    out << "checks=" << results.size() << " failed=" << failed << '\n';
    return failed == 0 ? kExitOk : kExitFailure;
}

inline int cmd_montecarlo(const RunConfig& cfg, std::ostream& out)
{
    const auto basis = build_basis(cfg.n);
    const auto source = resolve_source(cfg, "uniform");
    const auto report = monte_carlo(basis, source, cfg.m, cfg.samples, cfg.seed);
    emit(cfg, out, [&](std::ostream& os) { io::write_montecarlo_csv(os, report); });
    return kExitOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    RunConfig cfg;
    CLI::App app{"Greedy expansions in pseudo golden mean bases and the law of the scaled remainder", "pgm"};
    app.require_subcommand(1);

    const auto order_check = CLI::Range(2, kDefaultMaxOrder);
    const auto unit_interval = CLI::Validator(
        [](std::string& s) -> std::string {
            try {
                const double v = std::stod(s);
                return (v >= 0.0 && v < 1.0) ? std::string{} : "x must lie in [0,1)";
            } catch (const std::exception&) {
                return "x must be a number";
            }
        },
        "in [0,1)");
    const auto add_source = [&](CLI::App* sub) {
        sub->add_option("--source", cfg.source, "source density")->check(CLI::IsMember({"power", "uniform", "affine"}));
        sub->add_option("--alpha", cfg.alpha, "exponent of f(x) = alpha x^(alpha-1)")->check(CLI::Range(1.0, 1e6));
    };

    auto* basis = app.add_subcommand("basis", "spectral data for one order n");
    basis->add_option("--n", cfg.n, "order")->required()->check(order_check);

    auto* tab = app.add_subcommand("table1", "beta, |lambda_2|, beta^(-1/(n-1)) and t/(1+t) as CSV");
    tab->add_option("--n-min", cfg.n_min, "first order")->check(order_check);
    tab->add_option("--n-max", cfg.n_max, "last order")->check(order_check);
    tab->add_option("--out", cfg.out_path, "output file (default stdout)");

    auto* expand = app.add_subcommand("expand", "greedy digits of x");
    expand->add_option("--n", cfg.n, "order")->required()->check(order_check);
    expand->add_option("--x", cfg.x, "point in [0,1)")->required()->check(unit_interval);
    expand->add_option("--digits", cfg.digits, "number of digits")->check(CLI::Range(1, 1 << 20));

    auto* errors = app.add_subcommand("errors", "sup and TV error of f_m against f_beta over a range of m");
    errors->add_option("--n", cfg.n, "order")->required()->check(order_check);
    add_source(errors);
    errors->add_option("--m-min", cfg.m_min, "first m")->check(CLI::Range(1, 64));
    errors->add_option("--m-max", cfg.m_max, "last m (default 20 for n=2, else 18)")->check(CLI::Range(1, 64));
    errors->add_option("--grid", cfg.grid_size, "grid points per continuity piece")->check(CLI::Range(64, 1 << 20));
    errors->add_option("--out", cfg.out_path, "output file (default stdout; fit summary then goes to stderr)");
    errors->add_option("--format", cfg.format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));

    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_option("--n-min", cfg.n_min, "first order")->check(order_check);
    verify->add_option("--n-max", cfg.n_max, "last order")->check(order_check);
    verify->add_option("--perturb-beta", cfg.perturb_beta, "add this offset to beta before checking (fault injection)");

    auto* mc = app.add_subcommand("montecarlo", "Monte Carlo law of t^m(X) against f_beta");
    mc->add_option("--n", cfg.n, "order")->required()->check(order_check);
    add_source(mc);
    mc->add_option("--m", cfg.m, "number of digit-map steps")->check(CLI::Range(0, 1000));
    mc->add_option("--samples", cfg.samples, "sample count (>= 10000)");
    mc->add_option("--seed", cfg.seed, "64-bit seed");
    mc->add_option("--out", cfg.out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    try {
        if (basis->parsed()) {
            cfg.subcommand = "basis";
            return cmd_basis(cfg, out);
        }
        if (tab->parsed()) {
            cfg.subcommand = "table1";
            if (cfg.n_max < cfg.n_min)
                throw UsageError("empty order range");
            return cmd_table1(cfg, out);
        }
        if (expand->parsed()) {
            cfg.subcommand = "expand";
            return cmd_expand(cfg, out);
        }
        if (errors->parsed()) {
            cfg.subcommand = "errors";
            return cmd_errors(cfg, out, err);
        }
        if (verify->parsed()) {
            cfg.subcommand = "verify";
            if (cfg.n_max < cfg.n_min)
                throw UsageError("empty order range");
            return cmd_verify(cfg, out);
        }
        if (mc->parsed()) {
            cfg.subcommand = "montecarlo";
            if (cfg.samples < kMinMonteCarloSamples)
                throw UsageError("--samples must be at least 10000");
            return cmd_montecarlo(cfg, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const budget_exceeded& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace pgm::cli

#endif // PGM_CLI_HPP
