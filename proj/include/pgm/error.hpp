#ifndef PGM_ERROR_HPP
#define PGM_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pgm {

// Domain violations (n < 2, x outside [0,1), ...) are reported with
// std::domain_error; the types below cover the remaining failure modes.

/// Iterative solver did not converge within its budget.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A structural invariant did not hold on a freshly built object.
class invariant_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Word enumeration would exceed the configured budget.
class budget_exceeded : public std::runtime_error {
public:
    budget_exceeded(std::uint64_t estimated, std::uint64_t budget)
        : std::runtime_error("enumeration of " + std::to_string(estimated) +
                             " admissible words exceeds budget of " + std::to_string(budget)),
          estimated_(estimated), budget_(budget) {}

    std::uint64_t estimated_words() const noexcept { return estimated_; }
    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t estimated_;
    std::uint64_t budget_;
};

} // namespace pgm

#endif // PGM_ERROR_HPP
