#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mono3d {

/// A loss value with its analytic gradients.
struct LossEval {
  double value = 0.0;
  double d_mu = 0.0;
  double d_sigma = 0.0;
};

/// Laplacian uncertainty loss with a stop-gradient prefactor:
///   (sigma/sqrt(2))^beta * (sqrt(2)/sigma * |mu - gt| + log sigma)
/// The prefactor is a constant for differentiation purposes.
LossEval laplace_beta_nll(double mu, double sigma, double gt, double beta);

/// Plain Laplacian NLL; identical to laplace_beta_nll with beta = 0.
LossEval laplace_nll(double mu, double sigma, double gt);

/// Gaussian NLL: (mu - gt)^2 / (2 sigma^2) + log sigma.
LossEval gauss_nll(double mu, double sigma, double gt);

class FitDivergenceError : public std::runtime_error {
 public:
  FitDivergenceError(const std::string& what, int step_index)
      : std::runtime_error(what), step(step_index) {}
  int step;
};

struct ToyFitConfig {
  double beta = 0.5;
  int steps = 600;
  double lr = 0.05;
  double sigma_floor = 1e-4;
};

struct ToyFitResult {
  double mu_hat = 0.0;
  double sigma_hat = 0.0;
  double final_loss = 0.0;
  int steps_run = 0;
};

/// Full-batch gradient descent of the mean beta-NLL over the samples, with
/// sigma optimized through log-sigma and floored at cfg.sigma_floor.
/// Throws FitDivergenceError if the loss goes non-finite.
ToyFitResult toy_fit(std::span<const double> samples, const ToyFitConfig& cfg);

/// Curriculum weight (t/T)^(1-alpha).
double htl_weight(double t, double total_epochs, double alpha);

/// Scale-invariant learning-situation indicator at epoch t:
///   ls = clamp((DF(K) - DF(t)) / DF(K), 0, 1)
/// where DF(t) is the mean absolute consecutive-epoch loss difference over
/// the K most recent epochs. DF(K) = 0 yields ls = 1 (converged at start).
/// history[i] is the loss at epoch i; requires t >= window and
/// history.size() > t.
double learning_situation(std::span<const double> history, int window, int t);

struct HtlTask {
  std::string name;
  std::vector<int> pre;  // indices of pre-tasks
};

struct HtlConfig {
  int total_epochs = 140;
  int window = 5;  // K
  std::vector<HtlTask> tasks;
};

struct TaskWeight {
  double ls = 0.0;
  double alpha = 1.0;
  double weight = 0.0;
};

/// Per-epoch curriculum state: feed one loss per task per epoch, get back
/// ls / alpha / weight per task. Tasks without pre-tasks run at alpha = 1.
/// ls is held at 0 until a task has window+1 recorded losses.
class HtlScheduler {
 public:
  explicit HtlScheduler(HtlConfig cfg);  // throws on a cyclic task graph

  std::vector<TaskWeight> step(std::span<const double> epoch_losses);

  int epoch() const { return static_cast<int>(history_.empty() ? 0 : history_[0].size()) - 1; }
  const HtlConfig& config() const { return cfg_; }
  const std::vector<double>& history(std::size_t task) const { return history_.at(task); }

 private:
  HtlConfig cfg_;
  std::vector<std::vector<double>> history_;
};

/// The task hierarchy used throughout: 2D detection first, basic 3D heads
/// second, depth last (pre-tasks: the 2D stage plus the 3D size head).
HtlConfig default_task_graph(int total_epochs, int window);

double sum_losses(std::span<const double> losses);
double weighted_sum_losses(std::span<const double> losses,
                           std::span<const double> weights);

}  // namespace mono3d
