#ifndef PGM_PGM_HPP
#define PGM_PGM_HPP

#include "pgm/parry_core.hpp"
#include "pgm/digit_count.hpp"
#include "pgm/expansion.hpp"
#include "pgm/density.hpp"
#include "pgm/experiments.hpp"
#include "pgm/verify.hpp"

#endif // PGM_PGM_HPP
