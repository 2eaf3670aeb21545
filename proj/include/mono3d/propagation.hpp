#pragma once

#include <cstddef>

#include "mono3d/distributions.hpp"
#include "mono3d/rng.hpp"

namespace mono3d {

/// Estimated height distributions feeding the projection: visual height in
/// pixels, physical height in meters.
struct HeightBeliefs {
  LaplaceDist h2d;  // pixels
  LaplaceDist h3d;  // meters
};

/// Depth distribution with its provenance terms. mu_d = mu_p + mu_b and
/// sigma_d^2 = sigma_p^2 + sigma_b^2.
struct DepthBelief {
  double mu_p = 0.0, sigma_p = 0.0;  // projected depth
  double mu_b = 0.0, sigma_b = 0.0;  // learned-bias stream
  double mu_d = 0.0, sigma_d = 0.0;  // combined depth
};

struct ProjectedDepth {
  double mu_p = 0.0;
  double sigma_p = 0.0;
};

/// First-order propagation of both height uncertainties through the
/// perspective projection:
///   mu_p    = f * mu3d / mu2d
///   sigma_p = mu_p * sqrt(sigma2d^2/mu2d^2 + sigma3d^2/mu3d^2)
ProjectedDepth propagate(const HeightBeliefs& hb, double f);

/// Legacy variant that treats the 2D height as a fixed value:
///   mu_p = f * mu3d / h2d, sigma_p = f * sigma3d / h2d
ProjectedDepth legacy_geu(double h2d, const LaplaceDist& h3d, double f);

/// Adds the bias stream: mu_d = mu_p + mu_b, sigma_d = hypot(sigma_p, sigma_b).
DepthBelief combine_bias(double mu_p, double sigma_p, double mu_b, double sigma_b);

struct McDepthStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t samples = 0;
  double rejection_rate = 0.0;  // fraction of draws rejected by the tail guard
};

/// Monte-Carlo reference for the projected-depth statistics. Samples with
/// h2d <= 0.1 * mu2d are rejected and redrawn; the true ratio distribution
/// has no finite variance without this guard.
McDepthStats mc_oracle(const HeightBeliefs& hb, double f, std::size_t n, Rng& rng);

}  // namespace mono3d
