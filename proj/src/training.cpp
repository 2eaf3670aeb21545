#include "mono3d/training.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mono3d {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

LossEval laplace_beta_nll(double mu, double sigma, double gt, double beta) {
  if (!(sigma > 0.0)) throw std::domain_error("laplace_beta_nll: sigma must be positive");
  if (beta < 0.0 || beta > 1.0) throw std::domain_error("laplace_beta_nll: beta must be in [0, 1]");
  const double prefactor = std::pow(sigma / std::numbers::sqrt2, beta);
  const double err = mu - gt;
  const double abs_err = std::abs(err);
  LossEval out;
  out.value = prefactor * (std::numbers::sqrt2 / sigma * abs_err + std::log(sigma));
  out.d_mu = prefactor * std::numbers::sqrt2 / sigma * sgn(err);
  out.d_sigma = prefactor * (1.0 / sigma - std::numbers::sqrt2 * abs_err / (sigma * sigma));
  return out;
}

LossEval laplace_nll(double mu, double sigma, double gt) {
  return laplace_beta_nll(mu, sigma, gt, 0.0);
}

LossEval gauss_nll(double mu, double sigma, double gt) {
  if (!(sigma > 0.0)) throw std::domain_error("gauss_nll: sigma must be positive");
  const double err = mu - gt;
  LossEval out;
  out.value = err * err / (2.0 * sigma * sigma) + std::log(sigma);
  out.d_mu = err / (sigma * sigma);
  out.d_sigma = -err * err / (sigma * sigma * sigma) + 1.0 / sigma;
  return out;
}

ToyFitResult toy_fit(std::span<const double> samples, const ToyFitConfig& cfg) {
  if (samples.size() < 2) throw std::invalid_argument("toy_fit: need at least 2 samples");
  const double n = static_cast<double>(samples.size());

  double mu = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double acc = 0.0;
  for (double s : samples) acc += std::abs(s - mu);
  const double log_floor = std::log(cfg.sigma_floor);
  double log_sigma = std::max(std::log(std::max(acc / n, cfg.sigma_floor)), log_floor);

  ToyFitResult res;
  for (int step = 0; step < cfg.steps; ++step) {
    const double sigma = std::exp(log_sigma);
    double loss = 0.0, g_mu = 0.0, g_sigma = 0.0;
    for (double s : samples) {
      const LossEval e = laplace_beta_nll(mu, sigma, s, cfg.beta);
      loss += e.value;
      g_mu += e.d_mu;
      g_sigma += e.d_sigma;
    }
    loss /= n;
    g_mu /= n;
    g_sigma /= n;
    if (!std::isfinite(loss) || !std::isfinite(g_mu) || !std::isfinite(g_sigma)) {
      throw FitDivergenceError("toy_fit: non-finite loss at step " + std::to_string(step), step);
    }
    mu -= cfg.lr * g_mu;
    log_sigma -= cfg.lr * g_sigma * sigma;  // chain rule through log-sigma
    log_sigma = std::max(log_sigma, log_floor);
    res.final_loss = loss;
    res.steps_run = step + 1;
  }
  res.mu_hat = mu;
  res.sigma_hat = std::exp(log_sigma);
  return res;
}

double htl_weight(double t, double total_epochs, double alpha) {
  if (!(total_epochs > 0.0)) throw std::domain_error("htl_weight: total_epochs must be positive");
  if (t < 0.0 || t > total_epochs) throw std::domain_error("htl_weight: t out of range");
  if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("htl_weight: alpha must be in [0, 1]");
  return std::pow(t / total_epochs, 1.0 - alpha);
}

namespace {

// Mean |L(i) - L(i-1)| over the window most recent epochs ending at t.
double mean_abs_diff(std::span<const double> history, int window, int t) {
  double acc = 0.0;
  for (int i = t - window + 1; i <= t; ++i) {
    acc += std::abs(history[i] - history[i - 1]);
  }
  return acc / window;
}

}  // namespace

double learning_situation(std::span<const double> history, int window, int t) {
  if (window < 1) throw std::invalid_argument("learning_situation: window must be >= 1");
  if (t < window || static_cast<std::size_t>(t) >= history.size()) {
    throw std::invalid_argument("learning_situation: need history for epochs 0..t with t >= window");
  }
  const double df_start = mean_abs_diff(history, window, window);
  if (df_start == 0.0) return 1.0;  // already converged at the start
  const double df_now = mean_abs_diff(history, window, t);
  return std::clamp((df_start - df_now) / df_start, 0.0, 1.0);
}

HtlScheduler::HtlScheduler(HtlConfig cfg) : cfg_(std::move(cfg)) {
  const int n = static_cast<int>(cfg_.tasks.size());
  if (n == 0) throw std::invalid_argument("HtlScheduler: empty task set");
  if (cfg_.total_epochs < 1 || cfg_.window < 1) {
    throw std::invalid_argument("HtlScheduler: bad schedule parameters");
  }
  // Kahn's algorithm; leftover nodes mean a cycle.
  std::vector<int> indeg(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int p : cfg_.tasks[i].pre) {
      if (p < 0 || p >= n) throw std::invalid_argument("HtlScheduler: pre-task index out of range");
    }
    indeg[i] = static_cast<int>(cfg_.tasks[i].pre.size());
  }
  std::vector<int> queue;
  for (int i = 0; i < n; ++i) {
    if (indeg[i] == 0) queue.push_back(i);
  }
  int visited = 0;
  while (!queue.empty()) {
    const int u = queue.back();
    queue.pop_back();
    ++visited;
    for (int v = 0; v < n; ++v) {
      for (int p : cfg_.tasks[v].pre) {
        if (p == u && --indeg[v] == 0) queue.push_back(v);
      }
    }
  }
  if (visited != n) throw std::invalid_argument("HtlScheduler: task graph has a cycle");
  history_.assign(n, {});
}

std::vector<TaskWeight> HtlScheduler::step(std::span<const double> epoch_losses) {
  const std::size_t n = cfg_.tasks.size();
  if (epoch_losses.size() != n) {
    throw std::invalid_argument("HtlScheduler::step: one loss per task required");
  }
  for (std::size_t i = 0; i < n; ++i) history_[i].push_back(epoch_losses[i]);
  const int t = static_cast<int>(history_[0].size()) - 1;

  std::vector<double> ls(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (t >= cfg_.window) {
      ls[i] = learning_situation(history_[i], cfg_.window, t);
    }
  }

  std::vector<TaskWeight> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double alpha = 1.0;
    for (int p : cfg_.tasks[i].pre) alpha *= ls[p];
    out[i].ls = ls[i];
    out[i].alpha = alpha;
    out[i].weight = htl_weight(t, cfg_.total_epochs, alpha);
  }
  return out;
}

HtlConfig default_task_graph(int total_epochs, int window) {
  HtlConfig cfg;
  cfg.total_epochs = total_epochs;
  cfg.window = window;
  cfg.tasks = {
      {"heatmap", {}},
      {"offset2d", {}},
      {"size2d", {}},
      {"angle", {0, 1, 2}},
      {"offset3d", {0, 1, 2}},
      {"size3d", {0, 1, 2}},
      {"depth", {0, 1, 2, 5}},
  };
  return cfg;
}

double sum_losses(std::span<const double> losses) {
  return std::accumulate(losses.begin(), losses.end(), 0.0);
}

double weighted_sum_losses(std::span<const double> losses,
                           std::span<const double> weights) {
  if (losses.size() != weights.size()) {
    throw std::invalid_argument("weighted_sum_losses: length mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) acc += losses[i] * weights[i];
  return acc;
}

}  // namespace mono3d
