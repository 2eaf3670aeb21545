#include "mono3d/distributions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mono3d {

namespace {

void validate_sigma(double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("sigma must be positive");
}

}  // namespace

double laplace_pdf(const LaplaceDist& d, double x) {
  validate_sigma(d.sigma);
  return 1.0 / (std::numbers::sqrt2 * d.sigma) *
         std::exp(-std::numbers::sqrt2 * std::abs(x - d.mu) / d.sigma);
}

double laplace_cdf(const LaplaceDist& d, double x) {
  validate_sigma(d.sigma);
  const double b = d.sigma / std::numbers::sqrt2;
  const double t = (x - d.mu) / b;
  return t < 0.0 ? 0.5 * std::exp(t) : 1.0 - 0.5 * std::exp(-t);
}

double gauss_pdf(const GaussDist& d, double x) {
  validate_sigma(d.sigma);
  const double t = (x - d.mu) / d.sigma;
  return std::exp(-0.5 * t * t) / (d.sigma * std::sqrt(2.0 * std::numbers::pi));
}

double interval_prob(const LaplaceDist& d, double a, double b) {
  if (a > b) throw std::domain_error("interval_prob requires a <= b");
  // The symmetric case gets the closed form so it is exact for the score path.
  if (std::abs((d.mu - a) - (b - d.mu)) <= 1e-15 * (std::abs(b - a) + 1.0)) {
    const double half = 0.5 * (b - a);
    return 1.0 - std::exp(-std::numbers::sqrt2 * half / d.sigma);
  }
  return laplace_cdf(d, b) - laplace_cdf(d, a);
}

double sample(const LaplaceDist& d, Rng& rng) {
  return rng.laplace(d.mu, d.sigma);
}

std::vector<double> standardize(std::span<const double> values,
                                std::span<const double> mus,
                                std::span<const double> sigmas) {
  if (values.size() != mus.size() || values.size() != sigmas.size()) {
    throw std::invalid_argument("standardize: length mismatch");
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    validate_sigma(sigmas[i]);
    out[i] = (values[i] - mus[i]) / sigmas[i];
  }
  return out;
}

ResidualHistogram ResidualHistogram::from_samples(std::span<const double> samples,
                                                  int nbins, double lo, double hi) {
  if (nbins < 1 || !(hi > lo)) {
    throw std::invalid_argument("from_samples: bad binning");
  }
  ResidualHistogram h;
  h.edges.resize(nbins + 1);
  const double width = (hi - lo) / nbins;
  for (int i = 0; i <= nbins; ++i) h.edges[i] = lo + width * i;
  std::vector<std::size_t> counts(nbins, 0);
  std::size_t kept = 0;
  for (double x : samples) {
    if (x < lo || x > hi) continue;
    auto bin = static_cast<std::size_t>((x - lo) / width);
    if (bin >= static_cast<std::size_t>(nbins)) bin = nbins - 1;
    ++counts[bin];
    ++kept;
  }
  if (kept == 0) throw std::invalid_argument("from_samples: no samples in range");
  h.density.resize(nbins);
  for (int i = 0; i < nbins; ++i) {
    h.density[i] = static_cast<double>(counts[i]) / (static_cast<double>(kept) * width);
  }
  h.count = kept;
  return h;
}

ResidualHistogram ResidualHistogram::from_densities(std::vector<double> edges,
                                                    std::vector<double> density) {
  if (edges.size() < 2 || density.size() + 1 != edges.size()) {
    throw std::invalid_argument("from_densities: inconsistent sizes");
  }
  ResidualHistogram h;
  h.edges = std::move(edges);
  h.density = std::move(density);
  const double width = h.bin_width();
  double mass = 0.0;
  for (double d : h.density) {
    if (d < 0.0) throw std::invalid_argument("from_densities: negative density");
    mass += d * width;
  }
  if (!(mass > 0.0)) throw std::invalid_argument("from_densities: zero mass");
  for (double& d : h.density) d /= mass;
  h.count = h.density.size();
  return h;
}

double fit_error(const ResidualHistogram& h, DistFamily family) {
  if (h.density.empty()) throw std::invalid_argument("fit_error: empty histogram");
  const LaplaceDist lap{0.0, 1.0};
  const GaussDist gau{0.0, 1.0};
  double acc = 0.0;
  for (std::size_t i = 0; i < h.density.size(); ++i) {
    const double c = h.bin_center(i);
    const double ref =
        family == DistFamily::Laplace ? laplace_pdf(lap, c) : gauss_pdf(gau, c);
    acc += std::abs(h.density[i] - ref);
  }
  return acc / static_cast<double>(h.density.size());
}

}  // namespace mono3d
