#include "fwerkit/rng.hpp"

#include <cmath>

namespace fwerkit {

double Philox::next_gaussian() {
  if (have_gauss_spare_) {
    have_gauss_spare_ = false;
    return gauss_spare_;
  }
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.14159265358979323846 * u2;
  gauss_spare_ = r * std::sin(theta);
  have_gauss_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace fwerkit
