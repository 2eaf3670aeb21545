#include "mono3d/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mono3d {

double Rng::laplace(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("laplace sample requires sigma > 0");
  const double b = sigma / std::numbers::sqrt2;
  const double v = uniform01() - 0.5;  // (-0.5, 0.5), endpoints excluded
  const double mag = -b * std::log(1.0 - 2.0 * std::abs(v));
  return v < 0.0 ? mu - mag : mu + mag;
}

double Rng::gauss(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("gauss sample requires sigma > 0");
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mu + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace mono3d
