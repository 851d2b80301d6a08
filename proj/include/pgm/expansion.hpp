#ifndef PGM_EXPANSION_HPP
#define PGM_EXPANSION_HPP

// Greedy beta-expansions: the digit map t(x) = beta*x - floor(beta*x), the
// admissibility rules for digit strings, and the cylinder intervals
//   I_J = [L_J, L_J + beta^-m K(J)),  L_J = sum_k j_k beta^-k,
//   K(J) = beta^-1 + ... + beta^-(n - r(J)),
// where r(J) is the number of trailing ones of J.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pgm/digit_count.hpp"
#include "pgm/error.hpp"
#include "pgm/parry_core.hpp"

namespace pgm {

using Digit = std::uint8_t;

inline constexpr std::uint64_t kDefaultWordBudget = std::uint64_t{1} << 25;

inline bool is_admissible_word(int n, std::span<const Digit> digits)
{
    int run = 0;
    for (Digit d : digits) {
        run = d ? run + 1 : 0;
        if (run >= n)
            return false;
    }
    return true;
}

inline int trailing_ones(std::span<const Digit> digits)
{
    int r = 0;
    for (auto it = digits.rbegin(); it != digits.rend() && *it == 1; ++it)
        ++r;
    return r;
}

/// A finite 0/1 word with no run of n ones.
class AdmissibleWord {
public:
    AdmissibleWord(int n, std::vector<Digit> digits) : n_(n), digits_(std::move(digits))
    {
        if (digits_.empty())
            throw std::domain_error("admissible word must be nonempty");
        for (Digit d : digits_)
            if (d > 1)
                throw std::domain_error("digits must be 0 or 1");
        if (!is_admissible_word(n_, digits_))
            throw std::domain_error("word contains a run of " + std::to_string(n_) + " ones");
    }

    int order() const noexcept { return n_; }
    int size() const noexcept { return static_cast<int>(digits_.size()); }
    std::span<const Digit> digits() const noexcept { return digits_; }
    int trailing_ones() const noexcept { return pgm::trailing_ones(digits_); }

    std::string str() const
    {
        std::string s;
        s.reserve(digits_.size());
        for (Digit d : digits_)
            s.push_back(static_cast<char>('0' + d));
        return s;
    }

    bool operator==(const AdmissibleWord&) const = default;

private:
    int n_;
    std::vector<Digit> digits_;
};

struct Cylinder {
    AdmissibleWord word;
    double left = 0.0;
    double width = 0.0;
    int trailing_ones = 0;
    double k_of_j = 0.0;

    double right() const { return left + width; }
    bool contains(double x) const { return left <= x && x < left + width; }
};

/// Non-owning cylinder record handed to enumeration visitors.
struct CylinderView {
    std::span<const Digit> digits;
    double left = 0.0;
    double width = 0.0;
    int trailing_ones = 0;
    double k_of_j = 0.0;

    Cylinder materialize(int n) const
    {
        return {AdmissibleWord(n, {digits.begin(), digits.end()}), left, width, trailing_ones, k_of_j};
    }
};

/// Cached powers beta^-k and the width factors K_r for one basis.
class CylinderGeometry {
public:
    CylinderGeometry(const ParryBasis& basis, int m) : n_(basis.n()), beta_(basis.beta())
    {
        inv_pow_.resize(static_cast<std::size_t>(m) + 1);
        for (int k = 0; k <= m; ++k)
            inv_pow_[k] = std::pow(beta_, -k);
        k_.resize(static_cast<std::size_t>(n_));
        for (int r = 0; r < n_; ++r) {
            double s = 0.0;
            for (int k = n_ - r; k >= 1; --k)
                s += std::pow(beta_, -k);
            k_[r] = s;
        }
    }

    int order() const noexcept { return n_; }
    double beta() const noexcept { return beta_; }
    /// beta^-k for 0 <= k <= m.
    double inv_pow(int k) const { return inv_pow_[static_cast<std::size_t>(k)]; }
    /// K_r = beta^-1 + ... + beta^-(n-r). K_0 equals 1 up to rounding.
    double width_factor(int r) const { return k_[static_cast<std::size_t>(r)]; }
    std::span<const double> width_factors() const noexcept { return k_; }

private:
    int n_;
    double beta_;
    std::vector<double> inv_pow_;
    std::vector<double> k_;
};

/// K(J) for a word with r trailing ones.
inline double width_factor(const ParryBasis& basis, int r)
{
    if (r < 0 || r >= basis.n())
        throw std::domain_error("trailing-run length out of range");
    double s = 0.0;
    for (int k = basis.n() - r; k >= 1; --k)
        s += std::pow(basis.beta(), -k);
    return s;
}

namespace detail {

inline void require_unit_interval(double x)
{
    if (!(x >= 0.0 && x < 1.0))
        throw std::domain_error("x must lie in [0,1), got " + std::to_string(x));
}

} // namespace detail

struct DigitStep {
    int digit = 0;
    double next = 0.0;
};

/// One application of t: digit = floor(beta x), next = beta x - digit.
inline DigitStep digit_map(const ParryBasis& basis, double x)
{
    detail::require_unit_interval(x);
    const double y = basis.beta() * x;
    const int digit = y >= 1.0 ? 1 : 0;
    return {digit, y - digit};
}

/// First m greedy digits of x.
///
/// In exact arithmetic a greedy expansion never contains n consecutive ones.
/// If rounding would produce one, the digit is forced to 0 and the remainder
/// is clamped just below 1, which is where the exact orbit sits.
inline AdmissibleWord greedy_digits(const ParryBasis& basis, double x, int m)
{
    detail::require_unit_interval(x);
    if (m < 1)
        throw std::domain_error("digit count m must be >= 1");
    std::vector<Digit> digits;
    digits.reserve(static_cast<std::size_t>(m));
    int run = 0;
    for (int k = 0; k < m; ++k) {
        auto step = digit_map(basis, x);
        if (step.digit == 1 && run + 1 >= basis.n())
            step = {0, std::nextafter(1.0, 0.0)};
        digits.push_back(static_cast<Digit>(step.digit));
        run = step.digit ? run + 1 : 0;
        x = step.next;
    }
    return AdmissibleWord(basis.n(), std::move(digits));
}

/// An infinite digit sequence given as preperiod followed by a repeated period.
struct EventuallyPeriodic {
    std::vector<Digit> preperiod;
    std::vector<Digit> period;
};

/// Admissibility of an infinite sequence: no run of n ones and no tail equal
/// to S = (1^(n-1) 0)(1^(n-1) 0)... .
inline bool is_admissible_tail(int n, const EventuallyPeriodic& seq)
{
    if (seq.period.empty())
        throw std::domain_error("period must be nonempty");
    const auto& per = seq.period;

    bool all_ones = true;
    for (Digit d : per)
        all_ones = all_ones && d == 1;
    if (all_ones)
        return false;

    // A run of ones covers at most the preperiod plus one full period, so
    // unrolling two periods past the preperiod exposes every run.
    std::vector<Digit> unrolled = seq.preperiod;
    for (int rep = 0; rep < 3; ++rep)
        unrolled.insert(unrolled.end(), per.begin(), per.end());
    if (!is_admissible_word(n, unrolled))
        return false;

    // Tail equals S iff the period is a power of some rotation of 1^(n-1) 0.
    const std::size_t len = per.size();
    const auto un = static_cast<std::size_t>(n);
    if (len % un != 0)
        return true;
    for (std::size_t shift = 0; shift < un; ++shift) {
        bool match = true;
        for (std::size_t i = 0; i < len && match; ++i) {
            const Digit expected = ((i + shift) % un) == un - 1 ? 0 : 1;
            match = per[i] == expected;
        }
        if (match)
            return false;
    }
    return true;
}

namespace detail {

template <typename Visitor>
void visit_subtree(const CylinderGeometry& g, int m, int depth, int run, double left,
                   std::vector<Digit>& buf, Visitor& visit)
{
    if (depth == m) {
        const double k = g.width_factor(run);
        visit(CylinderView{std::span<const Digit>(buf.data(), buf.size()), left, g.inv_pow(m) * k, run, k});
        return;
    }
    buf[static_cast<std::size_t>(depth)] = 0;
    visit_subtree(g, m, depth + 1, 0, left, buf, visit);
    if (run + 1 < g.order()) {
        buf[static_cast<std::size_t>(depth)] = 1;
        visit_subtree(g, m, depth + 1, run + 1, left + g.inv_pow(depth + 1), buf, visit);
    }
}

inline void check_budget(int n, int m, std::uint64_t budget)
{
    const std::uint64_t words = count_words_saturating(n, m);
    if (words > budget)
        throw budget_exceeded(words, budget);
}

} // namespace detail

/// Calls visit(const CylinderView&) for every J in Omega_m, in lexicographic
/// order of digits (equivalently, by increasing left endpoint). Depth-first,
/// with left endpoints carried as running sums.
template <typename Visitor>
void for_each_cylinder(const ParryBasis& basis, int m, Visitor&& visit,
                       std::uint64_t budget = kDefaultWordBudget)
{
    if (m < 1)
        throw std::domain_error("word length m must be >= 1");
    detail::check_budget(basis.n(), m, budget);
    const CylinderGeometry geometry(basis, m);
    std::vector<Digit> buf(static_cast<std::size_t>(m));
    detail::visit_subtree(geometry, m, 0, 0, 0.0, buf, visit);
}

inline std::vector<Cylinder> enumerate_words(const ParryBasis& basis, int m,
                                             std::uint64_t budget = kDefaultWordBudget)
{
    std::vector<Cylinder> out;
    for_each_cylinder(
        basis, m, [&](const CylinderView& c) { out.push_back(c.materialize(basis.n())); }, budget);
    return out;
}

/// The cylinder of Omega_m containing x, found by descending the digit tree
/// against computed cylinder boundaries.
inline Cylinder locate(const ParryBasis& basis, int m, double x)
{
    detail::require_unit_interval(x);
    if (m < 1)
        throw std::domain_error("word length m must be >= 1");
    const CylinderGeometry g(basis, m);
    std::vector<Digit> digits(static_cast<std::size_t>(m));
    double left = 0.0;
    int run = 0;
    for (int k = 1; k <= m; ++k) {
        // The digit-1 child starts at left + beta^-k; it exists only if the run allows it.
        const double split = left + g.inv_pow(k);
        if (run + 1 < basis.n() && x >= split) {
            digits[static_cast<std::size_t>(k - 1)] = 1;
            left = split;
            ++run;
        } else {
            digits[static_cast<std::size_t>(k - 1)] = 0;
            run = 0;
        }
    }
    const double k_of_j = g.width_factor(run);
    Cylinder c{AdmissibleWord(basis.n(), std::move(digits)), left, g.inv_pow(m) * k_of_j, run, k_of_j};
    // Descent guarantees left <= x; x past the computed right end can only be a rounding gap.
    if (!(x < c.right()) && x - c.right() > 1e-12)
        throw invariant_error("point not covered by its cylinder beyond rounding tolerance");
    return c;
}

} // namespace pgm

#endif // PGM_EXPANSION_HPP
