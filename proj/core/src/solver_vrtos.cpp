#include <cmath>

#include "vrtos/errors.hpp"
#include "vrtos/rng.hpp"
#include "solver_detail.hpp"

namespace vrtos::detail {

namespace {

// Variance-reduced splitting with dense updates:
//   z = prox_{gamma h}(y); v = grad psi_i(z) - alpha_i + mean + grad omega(z);
//   x = prox_{gamma g}(2z - y - gamma v); y += x - z; memory update.
class VrTosDenseSolver final : public SolverBase {
 public:
  VrTosDenseSolver(const Problem& problem, const SolverConfig& cfg)
      : prob_(&problem),
        rng_(cfg.seed),
        memory_(*problem.model, cfg.scheme, cfg.svrg_q,
                cfg.seed ^ 0x9e3779b97f4a7c15ull, MemoryStorage::compressed,
                cfg.init_memory_at_x0 ? std::span<const double>(cfg.x0)
                                      : std::span<const double>{}) {
    const std::size_t p = problem.dim();
    divergence_limit_ = cfg.divergence_limit;
    gamma_ = cfg.step_size > 0.0 ? cfg.step_size : default_step_dense(problem);
    y_.assign(p, 0.0);
    if (!cfg.x0.empty()) y_ = cfg.x0;
    z_.resize(p);
    v_.resize(p);
    u_.resize(p);
    x_.resize(p);
    if (cfg.track_ergodic) {
      ergodic_x_ = std::make_unique<RunningAverage>(p);
      ergodic_u_ = std::make_unique<RunningAverage>(p);
    }
  }

  std::size_t steps_per_epoch() const override { return prob_->model->n(); }

  void step() override {
    prob_->h().scaled_prox(y_, gamma_, {}, z_);
    counters_.prox_evals += 1;
    const std::size_t i = rng_.bounded(prob_->model->n());
    last_sampled_ = static_cast<long>(i);
    const double lp = assemble_estimator(*prob_->model, memory_, i, z_, v_);
    counters_.grad_evals += memory_.read_costs_eval() ? 2 : 1;  // svrg re-evaluates at the snapshot
    if (ergodic_u_) {
      for (std::size_t j = 0; j < y_.size(); ++j) u_[j] = (y_[j] - z_[j]) / gamma_;
      ergodic_u_->accumulate(u_);
    }
    detail::dense_tos_update(y_, z_, v_, gamma_, prob_->g(), u_, x_);
    counters_.prox_evals += 1;
    if (ergodic_x_) ergodic_x_->accumulate(x_);
    const auto report = memory_.update(
        i, lp, [this]() { return std::span<const double>(z_); });
    counters_.grad_evals += report.extra_grad_evals;
    ++t_;
    for (double val : y_) guard_value(val, "y");
  }

  std::vector<double> solution() const override {
    std::vector<double> z(y_.size());
    prob_->h().scaled_prox(y_, gamma_, {}, z);
    return z;
  }

  double residual() const override {
    return operator_residual(y_, *prob_, gamma_);
  }

  std::vector<double> dual_point() const override {
    std::vector<double> z(y_.size()), u(y_.size());
    prob_->h().scaled_prox(y_, gamma_, {}, z);
    for (std::size_t j = 0; j < y_.size(); ++j) u[j] = (y_[j] - z[j]) / gamma_;
    return u;
  }

  GradientMemory& memory() { return memory_; }

 private:
  static double default_step_dense(const Problem& problem) {
    const double l_f = problem.model->smoothness_constants(1.0).l_f();
    if (!(l_f > 0.0))
      throw ConfigError("cannot derive a default step size (L_f = 0); set step_size");
    return 1.0 / (3.0 * l_f);
  }

  const Problem* prob_;
  RandomStream rng_;
  GradientMemory memory_;
  std::vector<double> y_, z_, v_, u_, x_;
};

}  // namespace

std::unique_ptr<SolverBase> make_vrtos_dense(const Problem& problem,
                                             const SolverConfig& config) {
  return std::make_unique<VrTosDenseSolver>(problem, config);
}

}  // namespace vrtos::detail
