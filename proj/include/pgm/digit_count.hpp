#ifndef PGM_DIGIT_COUNT_HPP
#define PGM_DIGIT_COUNT_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgm/parry_core.hpp"

namespace pgm {

/// Number of admissible words of length m, split by trailing-run length:
/// counts[r] = #{J in Omega_m : J ends in exactly r ones}.
struct CountVector {
    int n = 0;
    int m = 0;
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const
    {
        return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    }

    bool operator==(const CountVector&) const = default;
};

/// Exact counts from the run-length recursion
///   N_0(m+1) = sum_r N_r(m),   N_r(m+1) = N_{r-1}(m)  (1 <= r <= n-1),
/// started at m = 1 with N_0 = N_1 = 1. Throws std::overflow_error before
/// any entry would wrap.
inline CountVector count_exact(int n, int m)
{
    if (n < 2)
        throw std::domain_error("order n must be >= 2");
    if (m < 1)
        throw std::domain_error("word length m must be >= 1");

    std::vector<std::uint64_t> cur(static_cast<std::size_t>(n), 0);
    cur[0] = 1;
    cur[1] = 1;
    std::vector<std::uint64_t> next(cur.size());
    for (int len = 1; len < m; ++len) {
        std::uint64_t sum = 0;
        for (auto c : cur) {
            if (c > std::numeric_limits<std::uint64_t>::max() - sum)
                throw std::overflow_error("admissible word count overflows 64 bits at n=" +
                                          std::to_string(n) + ", m=" + std::to_string(len + 1));
            sum += c;
        }
        next[0] = sum;
        for (std::size_t r = 1; r < cur.size(); ++r)
            next[r] = cur[r - 1];
        cur.swap(next);
    }
    return {n, m, std::move(cur)};
}

/// |Omega_m|, saturating at UINT64_MAX instead of throwing.
inline std::uint64_t count_words_saturating(int n, int m)
{
    try {
        const auto c = count_exact(n, m);
        std::uint64_t total = 0;
        for (auto v : c.counts) {
            if (v > std::numeric_limits<std::uint64_t>::max() - total)
                return std::numeric_limits<std::uint64_t>::max();
            total += v;
        }
        return total;
    } catch (const std::overflow_error&) {
        return std::numeric_limits<std::uint64_t>::max();
    }
}

/// Independent oracle: filters all 2^m binary words. m <= 20.
inline CountVector count_brute(int n, int m)
{
    if (n < 2)
        throw std::domain_error("order n must be >= 2");
    if (m < 1 || m > 20)
        throw std::domain_error("count_brute supports 1 <= m <= 20, got " + std::to_string(m));

    CountVector out{n, m, std::vector<std::uint64_t>(static_cast<std::size_t>(n), 0)};
    for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
        // Bit m-1-k holds digit k, so the word reads most significant first.
        int run = 0;
        bool ok = true;
        for (int k = 0; k < m && ok; ++k) {
            const bool one = (bits >> (m - 1 - k)) & 1u;
            run = one ? run + 1 : 0;
            ok = run < n;
        }
        if (ok)
            ++out.counts[static_cast<std::size_t>(run)];
    }
    return out;
}

/// Leading spectral term of N_r(m):
///   beta^(m-(n-1)) <v,w> <v,u>^-1 (u)_r  with <v,w> = beta^(n-1), (u)_r = beta^(n-1-r).
/// The O(|lambda_2|^m) remainder is not included.
inline double count_asymptotic(const ParryBasis& basis, int m, int r)
{
    const int n = basis.n();
    if (m < n)
        throw std::domain_error("count_asymptotic requires m >= n");
    if (r < 0 || r > n - 1)
        throw std::domain_error("trailing-run class r out of range");
    const double beta = basis.beta();
    return std::pow(beta, m - (n - 1)) * std::pow(beta, n - 1) * std::pow(beta, n - 1 - r) /
           basis.v_dot_u();
}

} // namespace pgm

#endif // PGM_DIGIT_COUNT_HPP
