#ifndef PGM_VERIFY_HPP
#define PGM_VERIFY_HPP

// Self-check suite behind `pgm verify`: spectral properties of each order,
// the word-count and cylinder-partition oracles, and the Parry fixed point.

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include "pgm/density.hpp"
#include "pgm/digit_count.hpp"
#include "pgm/expansion.hpp"
#include "pgm/parry_core.hpp"

namespace pgm {

struct VerifyOptions {
    int count_max_m = 14;
    int partition_max_m = 12;
    int fixed_point_samples = 1000;
    /// Added to beta before any check runs (fault injection).
    double perturb_beta = 0.0;
};

namespace detail {

inline void add(std::vector<CheckResult>& out, std::string name, int n, bool ok, std::string detail = {})
{
    out.push_back({std::move(name), n, ok, std::move(detail)});
}

inline void check_counts(std::vector<CheckResult>& out, int n, int max_m)
{
    for (int m = 1; m <= max_m; ++m) {
        if (!(count_exact(n, m) == count_brute(n, m))) {
            add(out, "count_oracle", n, false, "mismatch at m=" + std::to_string(m));
            return;
        }
    }
    add(out, "count_oracle", n, true, "m<=" + std::to_string(max_m));
}

inline void check_partition(std::vector<CheckResult>& out, const ParryBasis& basis, int max_m)
{
    const int n = basis.n();
    double worst = 0.0;
    bool ok = true;
    for (int m = 1; m <= max_m && ok; ++m) {
        double expected_left = 0.0;
        std::uint64_t emitted = 0;
        for_each_cylinder(basis, m, [&](const CylinderView& c) {
            worst = std::max(worst, std::abs(c.left - expected_left));
            expected_left = c.left + c.width;
            ++emitted;
        });
        worst = std::max(worst, std::abs(expected_left - 1.0));
        ok = worst <= 1e-12 && emitted == count_exact(n, m).total();
    }
    std::ostringstream os;
    os << "max gap " << worst << " for m<=" << max_m;
    add(out, "cylinder_partition", n, ok, os.str());
}

inline void check_density(std::vector<CheckResult>& out, const ParryBasis& basis, int samples)
{
    const int n = basis.n();
    try {
        const StepDensity fbeta = parry_density(basis);
        add(out, "parry_density_forms", n, true);
        const auto t_fbeta = transfer_step(basis, [&fbeta](double x) { return fbeta(x); });
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double x = (i + 0.5) / samples;
            worst = std::max(worst, std::abs(t_fbeta(x) - fbeta(x)));
        }
        std::ostringstream os;
        os << "sup |T f_beta - f_beta| = " << worst;
        add(out, "parry_fixed_point", n, worst < 1e-10, os.str());
    } catch (const std::exception& e) {
        add(out, "parry_density_forms", n, false, e.what());
    }
}

} // namespace detail

/// Runs every check for orders n_min..n_max. Never throws on a failing check;
/// the caller inspects `passed`.
inline std::vector<CheckResult> run_verification(int n_min, int n_max, const VerifyOptions& opt = {})
{
    if (n_min < 2 || n_max < n_min)
        throw std::domain_error("verification range must satisfy 2 <= n_min <= n_max");

    std::vector<CheckResult> out;
    double previous_beta = 0.0;
    for (int n = n_min; n <= n_max; ++n) {
        auto roots = solve_spectrum(n);
        const double beta = roots.front().real() + opt.perturb_beta;
        roots.front() = {beta, 0.0};
        const ParryBasis basis = ParryBasis::unchecked(n, beta, std::move(roots));

        for (auto& c : check_basis(basis))
            out.push_back(std::move(c));
        if (n > n_min)
            detail::add(out, "beta_increasing", n, beta > previous_beta);
        previous_beta = beta;

        detail::check_counts(out, n, opt.count_max_m);
        detail::check_partition(out, basis, opt.partition_max_m);
        detail::check_density(out, basis, opt.fixed_point_samples);
    }
    return out;
}

} // namespace pgm

#endif // PGM_VERIFY_HPP
