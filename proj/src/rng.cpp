#include "kmed/rng.hpp"

#include <cmath>
#include <numbers>

namespace kmed {

double RngStream::next_normal() {
  // 1 - u keeps the log argument in (0, 1]; the sine partner is discarded so
  // every call consumes the same number of engine steps.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace kmed
