#ifndef PGM_EXPERIMENTS_HPP
#define PGM_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgm/density.hpp"
#include "pgm/expansion.hpp"
#include "pgm/parry_core.hpp"
#include "pgm/philox.hpp"

namespace pgm {

struct Table1Row {
    int n = 0;
    double beta = 0.0;
    double lambda2_abs = 0.0;
    /// beta^(-1/(n-1)), the lower bound for |lambda_2|.
    double beta_pow = 0.0;
    double t_ratio = 0.0;
};

inline std::vector<Table1Row> table1(int n_min, int n_max)
{
    if (n_min < 2 || n_max < n_min)
        throw std::domain_error("table1 needs 2 <= n_min <= n_max");
    std::vector<Table1Row> rows;
    for (int n = n_min; n <= n_max; ++n) {
        const auto basis = build_basis(n);
        rows.push_back({n, basis.beta(), basis.lambda2_abs(), std::pow(basis.beta(), -1.0 / (n - 1)),
                        rate_exponents(basis).t_over_1pt});
    }
    return rows;
}

struct ErrorRow {
    int m = 0;
    double sup_error = 0.0;
    std::optional<double> sup_certified;
    double tv = 0.0;
    std::optional<double> tv_bound;
};

struct ErrorCurve {
    int n = 0;
    std::string source;
    int grid_size = 0;
    std::vector<ErrorRow> rows;
};

inline ErrorCurve error_curve(const ParryBasis& basis, const SourceDensity& source, int m_min, int m_max,
                              int grid_size = kDefaultGridPerPiece, std::uint64_t budget = kDefaultWordBudget)
{
    if (m_min < 1 || m_max < m_min)
        throw std::domain_error("error curve needs 1 <= m_min <= m_max");
    // Fail before doing any work if the largest m is out of budget.
    detail::check_budget(basis.n(), m_max, budget);

    const StepDensity fbeta = parry_density(basis);
    ErrorCurve curve{basis.n(), source.name(), grid_size, {}};
    for (int m = m_min; m <= m_max; ++m) {
        const auto fm = remainder_density(basis, source, m, grid_size, budget);
        const auto sup = sup_error(fm, fbeta);
        const auto tv = tv_distance(fm, fbeta);
        curve.rows.push_back({m, sup.raw, sup.certified, tv.value, tv.error_bound});
    }
    return curve;
}

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// slope / (-ln beta).
    double normalized = 0.0;
    double r_squared = 0.0;
    std::vector<int> used_m;
    /// Rows dropped because the error sits within 10x of its certified slack.
    std::vector<int> excluded_m;
};

/// Least squares of ln(sup_error) on m.
inline RateFit fit_rate(const ErrorCurve& curve, const ParryBasis& basis)
{
    std::vector<double> xs;
    std::vector<double> ys;
    RateFit fit;
    for (const auto& row : curve.rows) {
        const double slack = row.sup_certified ? *row.sup_certified - row.sup_error : 0.0;
        if (!(row.sup_error > 0.0) || row.sup_error < 10.0 * slack) {
            fit.excluded_m.push_back(row.m);
            continue;
        }
        fit.used_m.push_back(row.m);
        xs.push_back(row.m);
        ys.push_back(std::log(row.sup_error));
    }
    if (xs.size() < 4)
        throw std::domain_error("rate fit needs at least 4 usable rows, have " + std::to_string(xs.size()));

    const double k = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.normalized = fit.slope / -std::log(basis.beta());
    fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return fit;
}

struct SkewComparison {
    ErrorCurve left_skewed;  // f(x) = 2x
    ErrorCurve right_skewed; // f(x) = 2(1-x)
    RateFit left_fit;
    RateFit right_fit;
    /// sup_error(2x) / sup_error(2(1-x)) per m.
    std::vector<double> ratios;
};

inline SkewComparison skew_comparison(const ParryBasis& basis, int m_min, int m_max,
                                      int grid_size = kDefaultGridPerPiece)
{
    SkewComparison out;
    out.left_skewed = error_curve(basis, SourceDensity::power(2.0), m_min, m_max, grid_size);
    out.right_skewed = error_curve(basis, SourceDensity::affine_decreasing(), m_min, m_max, grid_size);
    out.left_fit = fit_rate(out.left_skewed, basis);
    out.right_fit = fit_rate(out.right_skewed, basis);
    for (std::size_t i = 0; i < out.left_skewed.rows.size(); ++i)
        out.ratios.push_back(out.left_skewed.rows[i].sup_error / out.right_skewed.rows[i].sup_error);
    return out;
}

inline constexpr std::uint64_t kMinMonteCarloSamples = 10000;
inline constexpr int kMonteCarloBins = 100;

struct McReport {
    int n = 0;
    int m = 0;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
    /// Kolmogorov-Smirnov distance between the empirical law of t^m(X) and f_beta.
    double ks_stat = 0.0;
    /// Total variation over kMonteCarloBins equal-width bins.
    double tv_bins = 0.0;
};

/// Inverse CDF of the source family; custom densities are not supported.
inline double sample_source(const SourceDensity& source, double u)
{
    switch (source.kind()) {
    case SourceKind::uniform:
        return u;
    case SourceKind::power:
        return std::pow(u, 1.0 / source.alpha());
    case SourceKind::affine_decreasing:
        return 1.0 - std::sqrt(1.0 - u);
    case SourceKind::custom:
        break;
    }
    throw std::invalid_argument("no inverse-CDF sampler for source " + source.name());
}

/// Draws sample_count points from source (sample i uses Philox block i under
/// key seed), applies t m times and compares with f_beta.
inline McReport monte_carlo(const ParryBasis& basis, const SourceDensity& source, int m,
                            std::uint64_t sample_count, std::uint64_t seed)
{
    if (m < 0)
        throw std::domain_error("m must be >= 0");
    if (sample_count < kMinMonteCarloSamples)
        throw std::domain_error("monte carlo needs at least 10^4 samples");
    if (source.kind() == SourceKind::custom)
        throw std::invalid_argument("no inverse-CDF sampler for source " + source.name());

    const Philox4x32 rng(seed);
    std::vector<double> xs(sample_count);
    for (std::uint64_t i = 0; i < sample_count; ++i) {
        double x = sample_source(source, rng.uniform(i));
        for (int k = 0; k < m; ++k)
            x = digit_map(basis, x).next;
        xs[i] = x;
    }
    std::sort(xs.begin(), xs.end());

    const StepDensity fbeta = parry_density(basis);
    const double count = static_cast<double>(sample_count);
    double ks = 0.0;
    for (std::uint64_t i = 0; i < sample_count; ++i) {
        const double f = fbeta.cdf(xs[i]);
        ks = std::max({ks, static_cast<double>(i + 1) / count - f, f - static_cast<double>(i) / count});
    }

    double tv = 0.0;
    auto it = xs.begin();
    for (int b = 0; b < kMonteCarloBins; ++b) {
        const double lo = static_cast<double>(b) / kMonteCarloBins;
        const double hi = static_cast<double>(b + 1) / kMonteCarloBins;
        const auto end = b + 1 == kMonteCarloBins ? xs.end() : std::lower_bound(it, xs.end(), hi);
        const double empirical = static_cast<double>(end - it) / count;
        tv += std::abs(empirical - (fbeta.cdf(hi) - fbeta.cdf(lo)));
        it = end;
    }

    return {basis.n(), m, sample_count, seed, std::clamp(ks, 0.0, 1.0), std::clamp(0.5 * tv, 0.0, 1.0)};
}

} // namespace pgm

#endif // PGM_EXPERIMENTS_HPP
