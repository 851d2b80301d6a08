#ifndef PGM_DENSITY_HPP
#define PGM_DENSITY_HPP

// Densities on [0,1): source densities with known Lipschitz constants, the
// invariant Parry density f_beta, the exact density f_m of t^m(X)
//
//   f_m(x) = beta^-m sum_{J in Omega_m} 1{x < K(J)} f(L_J + beta^-m x),
//
// the one-step transfer operator
//
//   (Tg)(x) = beta^-1 [ g(x/beta) + 1{x < K_1} g((1+x)/beta) ],
//
// and sup-norm / total-variation distances between f_m and f_beta.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pgm/error.hpp"
#include "pgm/expansion.hpp"
#include "pgm/parry_core.hpp"

namespace pgm {

enum class SourceKind { power, affine_decreasing, uniform, custom };

/// A probability density on [0,1) from a family with a known Lipschitz
/// constant. A missing constant means the density is not (known to be)
/// Lipschitz; computations on it are flagged uncertified.
class SourceDensity {
public:
    /// f(x) = alpha x^(alpha-1), alpha >= 1.
    static SourceDensity power(double alpha)
    {
        if (!(alpha >= 1.0) || !std::isfinite(alpha))
            throw std::domain_error("power density needs alpha >= 1");
        SourceDensity s(SourceKind::power);
        s.alpha_ = alpha;
        s.integer_exponent_ = alpha == std::floor(alpha) ? static_cast<int>(alpha) - 1 : -1;
        if (alpha == 1.0)
            s.lipschitz_ = 0.0;
        else if (alpha >= 2.0)
            s.lipschitz_ = alpha * (alpha - 1.0);
        // 1 < alpha < 2: f' = alpha(alpha-1) x^(alpha-2) is unbounded at 0.
        s.validate();
        return s;
    }

    /// f(x) = 2(1 - x).
    static SourceDensity affine_decreasing()
    {
        SourceDensity s(SourceKind::affine_decreasing);
        s.lipschitz_ = 2.0;
        s.validate();
        return s;
    }

    static SourceDensity uniform()
    {
        SourceDensity s(SourceKind::uniform);
        s.alpha_ = 1.0;
        s.lipschitz_ = 0.0;
        s.validate();
        return s;
    }

    static SourceDensity custom(std::string name, std::function<double(double)> f,
                                std::optional<double> lipschitz)
    {
        if (!f)
            throw std::invalid_argument("custom density needs a callable");
        if (lipschitz && !(*lipschitz >= 0.0))
            throw std::domain_error("Lipschitz constant must be nonnegative");
        SourceDensity s(SourceKind::custom);
        s.name_ = std::move(name);
        s.fn_ = std::move(f);
        s.lipschitz_ = lipschitz;
        s.validate();
        return s;
    }

    SourceKind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    std::optional<double> lipschitz() const noexcept { return lipschitz_; }
    bool certified() const noexcept { return lipschitz_.has_value(); }

    std::string name() const
    {
        switch (kind_) {
        case SourceKind::power: {
            std::string a = std::to_string(alpha_);
            a.erase(a.find_last_not_of('0') + 1);
            if (a.back() == '.')
                a.pop_back();
            return "power(alpha=" + a + ")";
        }
        case SourceKind::affine_decreasing:
            return "affine_decreasing";
        case SourceKind::uniform:
            return "uniform";
        case SourceKind::custom:
            return name_;
        }
        return {};
    }

    double operator()(double x) const
    {
        switch (kind_) {
        case SourceKind::power:
            return eval_power(x);
        case SourceKind::affine_decreasing:
            return 2.0 * (1.0 - x);
        case SourceKind::uniform:
            return 1.0;
        case SourceKind::custom:
            return fn_(x);
        }
        return 0.0;
    }

    /// Calls fn with a concrete callable for this density so hot loops avoid
    /// the per-sample dispatch.
    template <typename Fn>
    decltype(auto) dispatch(Fn&& fn) const
    {
        switch (kind_) {
        case SourceKind::power:
            if (integer_exponent_ == 1)
                return fn([a = alpha_](double x) { return a * x; });
            if (integer_exponent_ == 2)
                return fn([a = alpha_](double x) { return a * x * x; });
            if (integer_exponent_ == 3)
                return fn([a = alpha_](double x) { return a * x * x * x; });
            return fn([this](double x) { return eval_power(x); });
        case SourceKind::affine_decreasing:
            return fn([](double x) { return 2.0 * (1.0 - x); });
        case SourceKind::uniform:
            return fn([](double) { return 1.0; });
        case SourceKind::custom:
            break;
        }
        return fn([this](double x) { return fn_(x); });
    }

private:
    explicit SourceDensity(SourceKind kind) : kind_(kind) {}

    double eval_power(double x) const
    {
        if (integer_exponent_ >= 0) {
            double p = alpha_;
            for (int i = 0; i < integer_exponent_; ++i)
                p *= x;
            return p;
        }
        return alpha_ * std::pow(x, alpha_ - 1.0);
    }

    void validate() const
    {
        boost::math::quadrature::tanh_sinh<double> integrator;
        const double mass = integrator.integrate([this](double x) { return (*this)(x); }, 0.0, 1.0);
        if (!(std::abs(mass - 1.0) <= 1e-10))
            throw std::domain_error("density " + name() + " integrates to " + std::to_string(mass));
        constexpr int kGrid = 10000;
        for (int i = 0; i < kGrid; ++i) {
            const double x = static_cast<double>(i) / kGrid;
            if (!((*this)(x) >= 0.0))
                throw std::domain_error("density " + name() + " is negative at x=" + std::to_string(x));
        }
    }

    SourceKind kind_;
    double alpha_ = 0.0;
    int integer_exponent_ = -1;
    std::optional<double> lipschitz_;
    std::string name_;
    std::function<double(double)> fn_;
};

/// Piecewise-constant density: values[i] on [breakpoints[i], breakpoints[i+1]).
class StepDensity {
public:
    StepDensity(std::vector<double> breakpoints, std::vector<double> values)
        : breaks_(std::move(breakpoints)), values_(std::move(values))
    {
        if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size())
            throw std::invalid_argument("step density needs k+1 breakpoints for k values");
        if (breaks_.front() != 0.0 || breaks_.back() != 1.0)
            throw std::invalid_argument("step density breakpoints must span [0,1]");
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
            if (!(breaks_[i] < breaks_[i + 1]))
                throw std::invalid_argument("step density breakpoints must be strictly ascending");
        for (double v : values_)
            if (!(v >= 0.0))
                throw std::invalid_argument("step density values must be nonnegative");
        if (std::abs(integral() - 1.0) > 1e-12)
            throw std::invalid_argument("step density does not integrate to 1");
    }

    std::span<const double> breakpoints() const noexcept { return breaks_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t pieces() const noexcept { return values_.size(); }

    double operator()(double x) const
    {
        if (x < 0.0 || x >= 1.0)
            return 0.0;
        const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
        return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
    }

    double cdf(double x) const
    {
        if (x <= 0.0)
            return 0.0;
        if (x >= 1.0)
            return 1.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (x < breaks_[i + 1])
                return acc + values_[i] * (x - breaks_[i]);
            acc += values_[i] * (breaks_[i + 1] - breaks_[i]);
        }
        return acc;
    }

    double integral() const
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i)
            acc += values_[i] * (breaks_[i + 1] - breaks_[i]);
        return acc;
    }

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
};

/// Interior discontinuities of f_beta and f_m in ascending order:
/// K_{n-1} < ... < K_1 with K_r = beta^-1 + ... + beta^-(n-r).
inline std::vector<double> interior_breakpoints(const ParryBasis& basis)
{
    std::vector<double> out;
    for (int r = basis.n() - 1; r >= 1; --r)
        out.push_back(width_factor(basis, r));
    return out;
}

/// f_beta(x) as the stacked sum of nested indicators
///   sum_{s=0}^{n-1} 1{x < beta^-1 + ... + beta^-(n-s)} beta^-s / D(beta).
inline double parry_density_nested(const ParryBasis& basis, double x)
{
    const double beta = basis.beta();
    double acc = 0.0;
    for (int s = 0; s < basis.n(); ++s) {
        // s = 0 is the indicator of [0,1) itself.
        const bool inside = s == 0 ? x < 1.0 : x < width_factor(basis, s);
        if (x >= 0.0 && inside)
            acc += std::pow(beta, -s);
    }
    return acc / basis.d_beta();
}

/// The invariant density f_beta as a step function. Piece j (1-based) is
/// [beta^-1+...+beta^-(j-1), beta^-1+...+beta^-j) with height
/// (beta^j - beta^(j-1) - ... - beta) / D(beta). Cross-checked against the
/// nested-indicator form at every piece midpoint.
inline StepDensity parry_density(const ParryBasis& basis)
{
    const int n = basis.n();
    const double beta = basis.beta();
    std::vector<double> breaks{0.0};
    for (double k : interior_breakpoints(basis))
        breaks.push_back(k);
    breaks.push_back(1.0);

    std::vector<double> values;
    for (int j = 1; j <= n; ++j) {
        double h = std::pow(beta, j);
        for (int k = 1; k <= j - 1; ++k)
            h -= std::pow(beta, k);
        values.push_back(h / basis.d_beta());
    }

    for (int j = 0; j < n; ++j) {
        const double mid = 0.5 * (breaks[j] + breaks[j + 1]);
        const double other = parry_density_nested(basis, mid);
        if (std::abs(other - values[j]) > 1e-12)
            throw invariant_error("the two constructions of the Parry density disagree on piece " +
                                  std::to_string(j + 1) + " for n=" + std::to_string(n));
    }
    return StepDensity(std::move(breaks), std::move(values));
}

using DensityFn = std::function<double(double)>;

/// One step of the transfer operator induced by t.
inline DensityFn transfer_step(const ParryBasis& basis, DensityFn g)
{
    const double beta = basis.beta();
    const double k1 = width_factor(basis, 1);
    return [beta, k1, g = std::move(g)](double x) {
        double v = g(x / beta);
        if (x < k1)
            v += g((1.0 + x) / beta);
        return v / beta;
    };
}

/// T^m g as a nested composition; evaluation cost grows like |Omega_m|.
inline DensityFn transfer_power(const ParryBasis& basis, DensityFn g, int m)
{
    if (m < 0)
        throw std::domain_error("transfer power must be nonnegative");
    for (int i = 0; i < m; ++i)
        g = transfer_step(basis, std::move(g));
    return g;
}

struct DensityPiece {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> x;
    std::vector<double> value;

    double max_spacing() const
    {
        double h = 0.0;
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            h = std::max(h, x[i + 1] - x[i]);
        return h;
    }
};

/// f_m sampled piece by piece. Each piece is a continuity interval of f_m;
/// its first and last samples are one-sided limits at the piece ends.
struct EvaluatedDensity {
    int m = 0;
    std::uint64_t word_count = 0;
    std::vector<DensityPiece> pieces;
    /// Lipschitz bound valid on every piece; empty when the source has none.
    std::optional<double> lipschitz_piecewise;

    bool certified() const noexcept { return lipschitz_piecewise.has_value(); }

    std::vector<double> grid() const
    {
        std::vector<double> g;
        for (const auto& p : pieces)
            g.insert(g.end(), p.x.begin(), p.x.end());
        return g;
    }

    std::vector<double> samples() const
    {
        std::vector<double> s;
        for (const auto& p : pieces)
            s.insert(s.end(), p.value.begin(), p.value.end());
        return s;
    }

    double integral() const
    {
        double acc = 0.0;
        for (const auto& p : pieces)
            for (std::size_t i = 0; i + 1 < p.x.size(); ++i)
                acc += 0.5 * (p.value[i] + p.value[i + 1]) * (p.x[i + 1] - p.x[i]);
        return acc;
    }

    /// Bound on |integral() - true integral|: trapezoid error L h (b-a)/4 per
    /// piece plus the sliver cut off by the one-sided end samples.
    std::optional<double> integral_error_bound() const
    {
        if (!lipschitz_piecewise)
            return std::nullopt;
        double bound = 1e-12;
        for (const auto& p : pieces) {
            const double h = p.max_spacing();
            bound += *lipschitz_piecewise * h * (p.b - p.a) / 4.0;
            double vmax = 0.0;
            for (double v : p.value)
                vmax = std::max(vmax, v);
            const double sliver = (p.x.front() - p.a) + (p.b - p.x.back());
            bound += sliver * (vmax + *lipschitz_piecewise * h);
        }
        return bound;
    }
};

inline constexpr double kBreakpointOffset = 1e-13;
inline constexpr int kDefaultGridPerPiece = 512;

namespace detail {

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v)
    {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }

    double value() const { return sum + carry; }
};

} // namespace detail

/// f_m on the breakpoint-respecting grid: grid_size points per continuity
/// piece, the piece ends (including 0 and 1) replaced by one-sided limits offset by 1e-13.
///
/// Words are grouped by trailing-run class r once; at each grid point the
/// classes with K_r > x contribute sum_J f(L_J + beta^-m x), each class summed
/// in enumeration order.
inline EvaluatedDensity remainder_density(const ParryBasis& basis, const SourceDensity& f, int m,
                                          int grid_size = kDefaultGridPerPiece,
                                          std::uint64_t budget = kDefaultWordBudget)
{
    if (m < 1)
        throw std::domain_error("m must be >= 1");
    if (grid_size < 64)
        throw std::domain_error("grid_size must be >= 64");

    const int n = basis.n();
    std::vector<std::vector<double>> lefts(static_cast<std::size_t>(n));
    std::uint64_t words = 0;
    for_each_cylinder(
        basis, m,
        [&](const CylinderView& c) {
            lefts[static_cast<std::size_t>(c.trailing_ones)].push_back(c.left);
            ++words;
        },
        budget);

    const double scale = std::pow(basis.beta(), -m);
    std::vector<double> ends{0.0};
    for (double k : interior_breakpoints(basis))
        ends.push_back(k);
    ends.push_back(1.0);

    EvaluatedDensity out;
    out.m = m;
    out.word_count = words;
    if (const auto lf = f.lipschitz())
        out.lipschitz_piecewise = static_cast<double>(words) * scale * scale * *lf;

    f.dispatch([&](auto&& fn) {
        for (int i = 0; i < n; ++i) {
            DensityPiece piece;
            piece.a = ends[i];
            piece.b = ends[i + 1];
            // On piece i exactly the classes r = 0..n-1-i have K_r above x.
            const int active = n - i;
            piece.x.resize(static_cast<std::size_t>(grid_size));
            piece.value.resize(piece.x.size());
            for (int g = 0; g < grid_size; ++g) {
                double x = piece.a + (piece.b - piece.a) * g / (grid_size - 1);
                if (g == 0)
                    x = piece.a + kBreakpointOffset;
                if (g == grid_size - 1)
                    x = piece.b - kBreakpointOffset;
                piece.x[g] = x;
                const double shift = scale * x;
                double total = 0.0;
                for (int r = 0; r < active; ++r) {
                    detail::CompensatedSum acc;
                    for (double left : lefts[static_cast<std::size_t>(r)])
                        acc.add(fn(left + shift));
                    total += acc.value();
                }
                piece.value[g] = scale * total;
            }
            out.pieces.push_back(std::move(piece));
        }
        return 0;
    });

    if (const auto bound = out.integral_error_bound()) {
        const double mass = out.integral();
        if (std::abs(mass - 1.0) > *bound)
            throw invariant_error("f_m integrates to " + std::to_string(mass) + " for m=" + std::to_string(m));
    }
    return out;
}

struct SupError {
    /// Largest |f_m - f_beta| over the grid samples.
    double raw = 0.0;
    /// raw plus Lipschitz interpolation slack; empty if f_m is uncertified.
    std::optional<double> certified;
};

namespace detail {

inline void require_matching_pieces(const EvaluatedDensity& fm, const StepDensity& fb)
{
    if (fm.pieces.size() != fb.pieces())
        throw std::invalid_argument("f_m and f_beta must share continuity pieces");
}

} // namespace detail

inline SupError sup_error(const EvaluatedDensity& fm, const StepDensity& fbeta)
{
    detail::require_matching_pieces(fm, fbeta);
    SupError out;
    double slack = 0.0;
    for (std::size_t i = 0; i < fm.pieces.size(); ++i) {
        const auto& p = fm.pieces[i];
        const double level = fbeta.values()[i];
        for (double v : p.value)
            out.raw = std::max(out.raw, std::abs(v - level));
        if (fm.lipschitz_piecewise)
            slack = std::max(slack, *fm.lipschitz_piecewise * p.max_spacing() / 2.0);
    }
    if (fm.certified())
        out.certified = out.raw + slack;
    return out;
}

struct TvDistance {
    double value = 0.0;
    std::optional<double> error_bound;
};

/// Half the L1 distance, by the trapezoid rule on the f_m grid. f_beta is
/// constant on each piece, so |f_m - f_beta| is Lipschitz there with the
/// same constant as f_m.
inline TvDistance tv_distance(const EvaluatedDensity& fm, const StepDensity& fbeta)
{
    detail::require_matching_pieces(fm, fbeta);
    double acc = 0.0;
    double bound = 0.0;
    for (std::size_t i = 0; i < fm.pieces.size(); ++i) {
        const auto& p = fm.pieces[i];
        const double level = fbeta.values()[i];
        for (std::size_t k = 0; k + 1 < p.x.size(); ++k)
            acc += 0.5 * (std::abs(p.value[k] - level) + std::abs(p.value[k + 1] - level)) *
                   (p.x[k + 1] - p.x[k]);
        if (fm.lipschitz_piecewise) {
            double vmax = 0.0;
            for (double v : p.value)
                vmax = std::max(vmax, std::abs(v - level));
            bound += 0.5 * (*fm.lipschitz_piecewise * p.max_spacing() * (p.b - p.a) / 4.0 +
                            ((p.x.front() - p.a) + (p.b - p.x.back())) * vmax);
        }
    }
    TvDistance out{0.5 * acc, std::nullopt};
    if (fm.certified())
        out.error_bound = bound + 1e-13;
    return out;
}

} // namespace pgm

#endif // PGM_DENSITY_HPP
