#include "mono3d/propagation.hpp"

#include <cmath>
#include <stdexcept>

namespace mono3d {

namespace {

void validate_beliefs(const HeightBeliefs& hb) {
  if (!(hb.h2d.mu > 0.0)) throw std::domain_error("propagate: mu2d must be positive");
  if (!(hb.h3d.mu > 0.0)) throw std::domain_error("propagate: mu3d must be positive");
  if (hb.h2d.sigma < 0.0 || hb.h3d.sigma < 0.0) {
    throw std::domain_error("propagate: negative sigma");
  }
}

}  // namespace

ProjectedDepth propagate(const HeightBeliefs& hb, double f) {
  validate_beliefs(hb);
  if (!(f > 0.0)) throw std::domain_error("propagate: f must be positive");
  const double mu_p = f * hb.h3d.mu / hb.h2d.mu;
  const double rel2 = hb.h2d.sigma / hb.h2d.mu;
  const double rel3 = hb.h3d.sigma / hb.h3d.mu;
  return {mu_p, mu_p * std::sqrt(rel2 * rel2 + rel3 * rel3)};
}

ProjectedDepth legacy_geu(double h2d, const LaplaceDist& h3d, double f) {
  if (!(h2d > 0.0)) throw std::domain_error("legacy_geu: h2d must be positive");
  if (!(f > 0.0)) throw std::domain_error("legacy_geu: f must be positive");
  return {f * h3d.mu / h2d, f * h3d.sigma / h2d};
}

DepthBelief combine_bias(double mu_p, double sigma_p, double mu_b, double sigma_b) {
  if (!(sigma_p > 0.0)) throw std::domain_error("combine_bias: sigma_p must be positive");
  if (sigma_b < 0.0) throw std::domain_error("combine_bias: sigma_b must be >= 0");
  DepthBelief d;
  d.mu_p = mu_p;
  d.sigma_p = sigma_p;
  d.mu_b = mu_b;
  d.sigma_b = sigma_b;
  d.mu_d = mu_p + mu_b;
  d.sigma_d = std::sqrt(sigma_p * sigma_p + sigma_b * sigma_b);
  return d;
}

McDepthStats mc_oracle(const HeightBeliefs& hb, double f, std::size_t n, Rng& rng) {
  validate_beliefs(hb);
  if (!(f > 0.0)) throw std::domain_error("mc_oracle: f must be positive");
  const double guard = 0.1 * hb.h2d.mu;
  std::size_t rejected = 0;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double h3 = hb.h3d.sigma > 0.0 ? rng.laplace(hb.h3d.mu, hb.h3d.sigma)
                                         : hb.h3d.mu;
    double h2 = hb.h2d.sigma > 0.0 ? rng.laplace(hb.h2d.mu, hb.h2d.sigma)
                                   : hb.h2d.mu;
    while (h2 <= guard) {
      ++rejected;
      h2 = rng.laplace(hb.h2d.mu, hb.h2d.sigma);
    }
    const double d = f * h3 / h2;
    const double delta = d - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (d - mean);
  }
  McDepthStats out;
  out.mean = mean;
  out.stddev = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
  out.samples = n;
  out.rejection_rate =
      static_cast<double>(rejected) / static_cast<double>(n + rejected);
  return out;
}

}  // namespace mono3d
