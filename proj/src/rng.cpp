#include "caeac/rng.hpp"

#include <cmath>
#include <numbers>

namespace caeac {

double standard_normal(std::mt19937_64& eng) {
  // Box-Muller, cosine branch. u1 shifted into (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform_double(eng);
  const double u2 = uniform_double(eng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace caeac
