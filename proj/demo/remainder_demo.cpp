// Distance between the law of t^m(X) and the Parry measure for X with
// density 2x, in the golden-mean base.

#include <cstdio>

#include "pgm/pgm.hpp"

int main()
{
    const auto basis = pgm::build_basis(2);
    const auto fbeta = pgm::parry_density(basis);
    const auto source = pgm::SourceDensity::power(2.0);

    std::printf("beta = %.15f, |lambda_2| = %.15f\n", basis.beta(), basis.lambda2_abs());
    std::printf("%4s %14s %14s\n", "m", "sup error", "tv distance");
    for (int m = 2; m <= 20; m += 2) {
        const auto fm = pgm::remainder_density(basis, source, m);
        std::printf("%4d %14.6e %14.6e\n", m, pgm::sup_error(fm, fbeta).raw, pgm::tv_distance(fm, fbeta).value);
    }
    std::printf("greedy digits of 0.5: %s\n", pgm::greedy_digits(basis, 0.5, 12).str().c_str());
    return 0;
}
