#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mono3d/rng.hpp"

namespace mono3d {

/// Location-scale Laplace with sigma as the STANDARD DEVIATION, never the
/// scale parameter; internally b = sigma / sqrt(2).
struct LaplaceDist {
  double mu = 0.0;
  double sigma = 1.0;
};

struct GaussDist {
  double mu = 0.0;
  double sigma = 1.0;
};

double laplace_pdf(const LaplaceDist& d, double x);
double laplace_cdf(const LaplaceDist& d, double x);
double gauss_pdf(const GaussDist& d, double x);

/// cdf(b) - cdf(a). For a symmetric interval [mu-D, mu+D] this equals
/// 1 - exp(-sqrt(2) * D / sigma). Throws if a > b.
double interval_prob(const LaplaceDist& d, double a, double b);

/// Inverse-CDF draw; deterministic for a fixed Rng state.
double sample(const LaplaceDist& d, Rng& rng);

/// Elementwise (value - mu) / sigma. Throws on length mismatch or sigma <= 0.
std::vector<double> standardize(std::span<const double> values,
                                std::span<const double> mus,
                                std::span<const double> sigmas);

/// Histogram of standardized residuals over a fixed range; out-of-range mass
/// is dropped and the densities renormalized so sum(density * width) = 1.
struct ResidualHistogram {
  std::vector<double> edges;    // nbins + 1, uniform
  std::vector<double> density;  // nbins
  std::size_t count = 0;        // samples kept in range

  static ResidualHistogram from_samples(std::span<const double> samples,
                                        int nbins = 100, double lo = -5.0,
                                        double hi = 5.0);
  static ResidualHistogram from_densities(std::vector<double> edges,
                                          std::vector<double> density);

  double bin_width() const { return edges[1] - edges[0]; }
  double bin_center(std::size_t i) const {
    return 0.5 * (edges[i] + edges[i + 1]);
  }
};

enum class DistFamily { Laplace, Gauss };

/// Mean absolute gap between the histogram contour and the standard
/// (mu = 0, sigma = 1) member of the family, sampled at bin centers.
double fit_error(const ResidualHistogram& h, DistFamily family);

}  // namespace mono3d
