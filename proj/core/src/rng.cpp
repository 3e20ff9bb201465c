#include "ridgepois/rng.hpp"

#include <cmath>
#include <numbers>

namespace ridgepois {

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  const std::uint64_t limit = max() - (max() % bound);
  std::uint64_t x = 0;
  do {
    x = (*this)();
  } while (x >= limit);
  return x % bound;
}

}  // namespace ridgepois
