#ifndef PGM_PARRY_CORE_HPP
#define PGM_PARRY_CORE_HPP

// Spectral data of the pseudo golden mean of order n, i.e. the positive root
// beta of p(x) = x^n - (1 + x + ... + x^(n-1)), together with the remaining
// roots of p and the eigenvector data of the run-length transfer matrix.
//
// Roots are found by Aberth-Ehrlich simultaneous iteration followed by
// Newton polishing; beta itself is refined separately on the deflated form
// q(x) = x^(n+1) - 2x^n + 1 = (x - 1) p(x).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pgm/error.hpp"

namespace pgm {

inline constexpr int kDefaultMaxOrder = 24;

namespace detail {

inline void require_order(int n, int max_n)
{
    if (n < 2)
        throw std::domain_error("order n must be >= 2, got " + std::to_string(n));
    if (n > max_n)
        throw std::domain_error("order n=" + std::to_string(n) + " exceeds the configured cap " +
                                std::to_string(max_n));
}

// p(z) and p'(z) by Horner, p monic with all lower coefficients -1.
template <typename T>
std::pair<T, T> parry_poly_eval(int n, T z)
{
    T p{1};
    T dp{0};
    for (int k = n - 1; k >= 0; --k) {
        dp = dp * z + p;
        p = p * z - T{1};
    }
    return {p, dp};
}

// Sum of |coefficient| * |z|^k, the natural scale for judging |p(z)|.
inline double parry_poly_scale(int n, double modulus)
{
    double s = 0.0;
    double pw = 1.0;
    for (int k = 0; k <= n; ++k) {
        s += pw;
        pw *= modulus;
    }
    return s;
}

// q(x) = x^n (x - 2) + 1; the subtraction x - 2 is exact for x in [1, 4].
inline double deflated_eval(int n, double x)
{
    return std::pow(x, n) * (x - 2.0) + 1.0;
}

inline double deflated_derivative(int n, double x)
{
    return std::pow(x, n - 1) * ((n + 1) * x - 2.0 * n);
}

} // namespace detail

/// Value of p at a real point near beta, evaluated as q(x)/(x-1) to avoid
/// the cancellation in the geometric sum.
inline double parry_residual(int n, double x)
{
    if (x == 1.0)
        return detail::parry_poly_eval(n, x).first;
    return detail::deflated_eval(n, x) / (x - 1.0);
}

/// The pseudo golden mean of order n.
///
/// Newton iteration on q(x) = x^(n+1) - 2x^n + 1 from 2 - 2^-n. q is convex
/// and increasing on (2n/(n+1), 2), which contains both beta and the start
/// point, so the iterates decrease monotonically to beta.
inline double solve_beta(int n, int max_n = kDefaultMaxOrder)
{
    detail::require_order(n, max_n);
    double x = 2.0 - std::ldexp(1.0, -n);
    for (int it = 0; it < 200; ++it) {
        const double step = detail::deflated_eval(n, x) / detail::deflated_derivative(n, x);
        const double next = x - step;
        // Monotone from the right; stop once rounding makes the iterate stall or turn back.
        if (!(next < x))
            return x;
        x = next;
    }
    throw numerical_error("beta refinement did not converge for n=" + std::to_string(n));
}

/// All n roots of p sorted by descending modulus, beta first. Conjugate pairs
/// carry identical moduli; the member with positive imaginary part comes first.
inline std::vector<std::complex<double>> solve_spectrum(int n, int max_n = kDefaultMaxOrder)
{
    using cplx = std::complex<double>;
    detail::require_order(n, max_n);

    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        z[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / n + 0.4);

    constexpr int kMaxIterations = 500;
    bool converged = false;
    for (int it = 0; it < kMaxIterations && !converged; ++it) {
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
            const auto [p, dp] = detail::parry_poly_eval(n, z[k]);
            if (p == cplx{0})
                continue;
            const cplx ratio = p / dp;
            cplx repulsion{0};
            for (int j = 0; j < n; ++j)
                if (j != k)
                    repulsion += 1.0 / (z[k] - z[j]);
            const cplx step = ratio / (1.0 - ratio * repulsion);
            z[k] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[k])));
        }
        converged = worst <= 1e-15;
    }
    if (!converged)
        throw numerical_error("root iteration did not converge for n=" + std::to_string(n));

    // Polish, snap near-real roots onto the axis.
    for (auto& root : z) {
        for (int it = 0; it < 3; ++it) {
            const auto [p, dp] = detail::parry_poly_eval(n, root);
            if (dp == cplx{0})
                break;
            root -= p / dp;
        }
        if (std::abs(root.imag()) <= 1e-9 * std::max(1.0, std::abs(root))) {
            double x = root.real();
            for (int it = 0; it < 3; ++it) {
                const auto [p, dp] = detail::parry_poly_eval(n, x);
                if (dp == 0.0)
                    break;
                x -= p / dp;
            }
            root = cplx{x, 0.0};
        }
    }

    // Pair conjugates exactly so their moduli tie.
    std::vector<bool> paired(z.size(), false);
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (z[k].imag() <= 0.0 || paired[k])
            continue;
        std::size_t best = z.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (j == k || paired[j] || z[j].imag() >= 0.0)
                continue;
            const double d = std::abs(z[j] - std::conj(z[k]));
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        if (best == z.size() || best_dist > 1e-8)
            throw numerical_error("unpaired complex root for n=" + std::to_string(n));
        z[best] = std::conj(z[k]);
        paired[k] = paired[best] = true;
    }

    std::sort(z.begin(), z.end(), [](const cplx& a, const cplx& b) {
        const double ma = std::abs(a);
        const double mb = std::abs(b);
        if (std::abs(ma - mb) > 1e-12 * std::max(ma, mb))
            return ma > mb;
        return a.imag() > b.imag();
    });

    const double beta = solve_beta(n, max_n);
    if (std::abs(z.front() - beta) > 1e-8)
        throw numerical_error("dominant root disagrees with beta for n=" + std::to_string(n));
    z.front() = cplx{beta, 0.0};
    return z;
}

/// Spectral data for one order n. Immutable; obtain through build_basis().
class ParryBasis {
public:
    /// Assembles the derived fields from beta and the sorted roots without
    /// checking any invariant. Meant for diagnostics (fault injection); use
    /// build_basis() otherwise.
    static ParryBasis unchecked(int n, double beta, std::vector<std::complex<double>> roots)
    {
        ParryBasis b;
        b.n_ = n;
        b.beta_ = beta;
        b.roots_ = std::move(roots);
        b.lambda2_abs_ = b.roots_.size() > 1 ? std::abs(b.roots_[1]) : 0.0;

        const auto un = static_cast<std::size_t>(n);
        b.u_.resize(un);
        b.v_.resize(un);
        b.w_.resize(un);
        for (std::size_t j = 0; j < un; ++j) {
            b.u_[j] = std::pow(beta, n - 1 - static_cast<int>(j));
            // v_j = beta^(j-1) - (beta^(j-2) + ... + 1) rewritten as the tail
            // beta^-1 + ... + beta^-(n-j+1) (1-based j), which has no cancellation.
            double tail = 0.0;
            for (int k = n - static_cast<int>(j); k >= 1; --k)
                tail += std::pow(beta, -k);
            b.v_[j] = tail;
            b.w_[j] = j + 1 < un ? std::ldexp(1.0, n - 2 - static_cast<int>(j)) : 1.0;
        }
        double vu = 0.0;
        for (std::size_t j = 0; j < un; ++j)
            vu += b.v_[j] * b.u_[j];
        b.v_dot_u_ = vu;
        b.d_beta_ = std::pow(beta, -(n - 1)) * vu;
        return b;
    }

    int n() const noexcept { return n_; }
    double beta() const noexcept { return beta_; }
    std::span<const std::complex<double>> roots() const noexcept { return roots_; }
    double lambda2_abs() const noexcept { return lambda2_abs_; }
    /// Right eigenvector of the run-length matrix, u_j = beta^(n-j).
    std::span<const double> u() const noexcept { return u_; }
    /// Left eigenvector, v_j = beta^(j-1) - (beta^(j-2) + ... + 1).
    std::span<const double> v() const noexcept { return v_; }
    /// Base count vector (2^(n-2), ..., 2, 1, 1).
    std::span<const double> w() const noexcept { return w_; }
    double v_dot_u() const noexcept { return v_dot_u_; }
    /// Normalizing constant of the Parry density, beta^-(n-1) <v,u>.
    double d_beta() const noexcept { return d_beta_; }

private:
    ParryBasis() = default;

    int n_ = 0;
    double beta_ = 0.0;
    std::vector<std::complex<double>> roots_;
    double lambda2_abs_ = 0.0;
    std::vector<double> u_;
    std::vector<double> v_;
    std::vector<double> w_;
    double v_dot_u_ = 0.0;
    double d_beta_ = 0.0;
};

struct CheckResult {
    std::string name;
    int n = 0;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline void record(std::vector<CheckResult>& out, std::string name, int n, bool ok, double measured,
                   double tolerance)
{
    std::ostringstream os;
    os.precision(6);
    os << "measured=" << measured << " tolerance=" << tolerance;
    out.push_back({std::move(name), n, ok, os.str()});
}

} // namespace detail

/// Evaluates every structural property a valid basis must satisfy. Failed
/// checks are reported, never thrown.
inline std::vector<CheckResult> check_basis(const ParryBasis& b)
{
    using detail::record;
    std::vector<CheckResult> out;
    const int n = b.n();
    const double beta = b.beta();
    const auto roots = b.roots();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    record(out, "beta_in_range", n, beta > 1.0 && beta < 2.0, beta, nan);

    // Beyond n ~ 13 one ulp of beta moves p(beta) by more than 1e-12, so the
    // tolerance widens with p'(beta).
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double p_beta = std::abs(parry_residual(n, beta));
    const double p_tol =
        std::max(1e-12, 4.0 * eps * beta * std::abs(detail::parry_poly_eval(n, beta).second));
    record(out, "polynomial_residual", n, p_beta <= p_tol, p_beta, p_tol);

    const double two_minus = std::abs(2.0 - beta - std::pow(beta, -n));
    record(out, "two_minus_beta", n, two_minus <= 1e-12, two_minus, 1e-12);

    if (roots.size() != static_cast<std::size_t>(n)) {
        out.push_back({"root_count", n, false, "expected n roots"});
        return out;
    }

    double worst_residual = 0.0;
    for (const auto& r : roots) {
        const double scale = detail::parry_poly_scale(n, std::abs(r));
        worst_residual = std::max(worst_residual, std::abs(detail::parry_poly_eval(n, r).first) / scale);
    }
    record(out, "spectrum_residual", n, worst_residual <= 1e-10, worst_residual, 1e-10);

    const bool dominant = std::abs(roots[0] - std::complex<double>{beta, 0.0}) <= 1e-12;
    record(out, "dominant_root_is_beta", n, dominant, std::abs(roots[0] - beta), 1e-12);

    double max_sub = 0.0;
    for (std::size_t j = 1; j < roots.size(); ++j)
        max_sub = std::max(max_sub, std::abs(roots[j]));
    record(out, "subdominant_in_unit_disk", n, max_sub < 1.0, max_sub, 1.0);

    const double l2 = std::abs(roots[1]);
    const double bound = std::pow(beta, -1.0 / (n - 1));
    record(out, "lambda2_lower_bound", n, l2 >= bound - 1e-12, l2 - bound, 1e-12);
    if (n <= 3)
        record(out, "lambda2_equality", n, std::abs(l2 - bound) <= 1e-10, std::abs(l2 - bound), 1e-10);
    else
        record(out, "lambda2_strict", n, l2 > bound + 1e-6, l2 - bound, 1e-6);

    const double floor_mod = std::pow(3.0, -1.0 / n);
    double min_mod = std::numeric_limits<double>::infinity();
    for (const auto& r : roots)
        min_mod = std::min(min_mod, std::abs(r));
    record(out, "root_modulus_floor", n, min_mod >= floor_mod, min_mod, floor_mod);

    std::complex<double> prod{1.0, 0.0};
    for (const auto& r : roots)
        prod *= r;
    const double expected_prod = (n % 2 == 1) ? 1.0 : -1.0; // (-1)^(n+1)
    const double prod_err = std::abs(prod - expected_prod);
    record(out, "root_product", n, prod_err <= 1e-8, prod_err, 1e-8);

    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            min_sep = std::min(min_sep, std::abs(roots[i] - roots[j]));
    record(out, "roots_simple", n, min_sep > 1e-8, min_sep, 1e-8);

    {
        int negatives = 0;
        int other_real = 0;
        for (std::size_t j = 1; j < roots.size(); ++j) {
            if (roots[j].imag() != 0.0)
                continue;
            if (roots[j].real() < 0.0)
                ++negatives;
            else
                ++other_real;
        }
        bool ok = other_real == 0;
        if (n % 2 == 0) {
            const auto& last = roots.back();
            ok = ok && negatives == 1 && last.imag() == 0.0 && last.real() < 0.0 &&
                 std::abs(last) < std::abs(roots[roots.size() - 2]);
        } else {
            ok = ok && negatives == 0;
        }
        out.push_back({"negative_root_parity", n, ok,
                       "negative_real_roots=" + std::to_string(negatives)});
    }

    {
        const auto v = b.v();
        bool ok = true;
        double worst = 0.0;
        for (int j = 1; j <= n; ++j) {
            // Direct form beta^(j-1) - (beta^(j-2) + ... + 1); its rounding grows like beta^(j-1).
            double direct = std::pow(beta, j - 1);
            double magnitude = direct;
            for (int k = 0; k <= j - 2; ++k) {
                direct -= std::pow(beta, k);
                magnitude += std::pow(beta, k);
            }
            double tail = 0.0;
            for (int k = 1; k <= n - j + 1; ++k)
                tail += std::pow(beta, -k);
            const double tol = std::max(1e-12, 8.0 * std::numeric_limits<double>::epsilon() * magnitude);
            const double err = std::max(std::abs(direct - tail), std::abs(v[j - 1] - tail));
            worst = std::max(worst, err);
            ok = ok && v[j - 1] > 0.0 && err <= tol;
        }
        record(out, "v_identity", n, ok, worst, 1e-12);
    }

    {
        double vw = 0.0;
        for (int j = 0; j < n; ++j)
            vw += b.v()[j] * b.w()[j];
        const double err = std::abs(vw - std::pow(beta, n - 1));
        const double tol = std::max(1e-10, 4.0 * n * eps * std::pow(beta, n - 1));
        record(out, "v_dot_w", n, err <= tol, err, tol);
    }

    {
        std::complex<double> prod_diff{1.0, 0.0};
        for (std::size_t j = 1; j < roots.size(); ++j)
            prod_diff *= std::complex<double>{beta, 0.0} - roots[j];
        const double err = std::abs(prod_diff - b.v_dot_u());
        record(out, "v_dot_u_product", n, err <= 1e-8, err, 1e-8);
    }

    return out;
}

/// Solves the spectrum for order n and assembles the basis. Throws
/// invariant_error naming every failed check.
inline ParryBasis build_basis(int n, int max_n = kDefaultMaxOrder)
{
    auto roots = solve_spectrum(n, max_n);
    const double beta = roots.front().real();
    ParryBasis basis = ParryBasis::unchecked(n, beta, std::move(roots));
    std::string failed;
    for (const auto& c : check_basis(basis))
        if (!c.passed)
            failed += (failed.empty() ? "" : ", ") + c.name + " (" + c.detail + ")";
    if (!failed.empty())
        throw invariant_error("basis for n=" + std::to_string(n) + " violates: " + failed);
    return basis;
}

struct RateExponents {
    double t = 0.0;
    /// Optimized exponent in the bound O(beta^(-m t/(1+t))).
    double t_over_1pt = 0.0;
};

inline RateExponents rate_exponents(const ParryBasis& basis)
{
    const double t = 1.0 - std::log(basis.lambda2_abs()) / std::log(basis.beta());
    return {t, t / (1.0 + t)};
}

} // namespace pgm

#endif // PGM_PARRY_CORE_HPP
