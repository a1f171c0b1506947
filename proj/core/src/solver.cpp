#include "vrtos/solver.hpp"

#include <chrono>
#include <cmath>

#include "vrtos/errors.hpp"
#include "vrtos/rng.hpp"
#include "solver_detail.hpp"

namespace vrtos {

const char* solver_kind_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::vrtos: return "vrtos";
    case SolverKind::vrtos_sparse: return "vrtos-sparse";
    case SolverKind::vrtos_k: return "vrtos-k";
    case SolverKind::tos: return "tos";
    case SolverKind::stos: return "stos";
    case SolverKind::saga_dr: return "saga";
    case SolverKind::proxsvrg_dr: return "proxsvrg";
  }
  return "?";
}

std::optional<SolverKind> solver_kind_from_name(const std::string& name) {
  for (SolverKind k : {SolverKind::vrtos, SolverKind::vrtos_sparse,
                       SolverKind::vrtos_k, SolverKind::tos, SolverKind::stos,
                       SolverKind::saga_dr, SolverKind::proxsvrg_dr})
    if (name == solver_kind_name(k)) return k;
  return std::nullopt;
}

std::vector<double> SolverBase::dual_point() const {
  throw ConfigError("this solver does not maintain a dual iterate");
}

void SolverBase::guard_value(double v, const char* what) const {
  if (!std::isfinite(v) || std::abs(v) > divergence_limit_)
    throw DivergenceError(std::string("divergent iterate (") + what +
                              ") at step " + std::to_string(t_),
                          t_);
}

namespace {

// Step size 1/(3 L_f) with L_f = L_psi + d_max L_omega.
double default_step(const SmoothModel& model, double d_max) {
  const double l_f = model.smoothness_constants(d_max).l_f();
  if (!(l_f > 0.0))
    throw ConfigError("cannot derive a default step size (L_f = 0); set step_size");
  return 1.0 / (3.0 * l_f);
}

// ---------------------------------------------------------------------------
// Deterministic full-gradient three operator splitting (two-term, D = I).

class TosFullSolver final : public SolverBase {
 public:
  TosFullSolver(const Problem& problem, const SolverConfig& cfg)
      : prob_(&problem) {
    const std::size_t p = problem.dim();
    divergence_limit_ = cfg.divergence_limit;
    gamma_ = cfg.step_size > 0.0 ? cfg.step_size : default_step(*problem.model, 1.0);
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

  std::size_t steps_per_epoch() const override { return 1; }

  void step() override {
    prob_->h().scaled_prox(y_, gamma_, {}, z_);
    counters_.prox_evals += 1;
    prob_->model->full_gradient(z_, v_);
    counters_.grad_evals += prob_->model->n();
    if (ergodic_u_) {
      for (std::size_t j = 0; j < y_.size(); ++j) u_[j] = (y_[j] - z_[j]) / gamma_;
      ergodic_u_->accumulate(u_);
    }
    detail::dense_tos_update(y_, z_, v_, gamma_, prob_->g(), u_, x_);
    counters_.prox_evals += 1;
    if (ergodic_x_) ergodic_x_->accumulate(x_);
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

 private:
  const Problem* prob_;
  std::vector<double> y_, z_, v_, u_, x_;
};

// ---------------------------------------------------------------------------
// Stochastic splitting with decreasing step gamma / (t+1) and no memory.

class StosSolver final : public SolverBase {
 public:
  StosSolver(const Problem& problem, const SolverConfig& cfg)
      : prob_(&problem), rng_(cfg.seed) {
    const std::size_t p = problem.dim();
    divergence_limit_ = cfg.divergence_limit;
    gamma_ = cfg.step_size > 0.0 ? cfg.step_size : default_step(*problem.model, 1.0);
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
    const double step_t = gamma_ / static_cast<double>(t_ + 1);
    prob_->h().scaled_prox(y_, step_t, {}, z_);
    counters_.prox_evals += 1;
    const std::size_t i = rng_.bounded(prob_->model->n());
    last_sampled_ = static_cast<long>(i);
    // Plain stochastic gradient: grad psi_i(z) + grad omega(z).
    const SmoothModel& model = *prob_->model;
    const double lp = model.scalar_derivative(i, model.row_dot(i, z_.data()));
    counters_.grad_evals += 1;
    const double l2 = model.l2_reg();
    for (std::size_t j = 0; j < z_.size(); ++j) v_[j] = l2 * z_[j];
    const auto row = model.features().row(i);
    for (std::size_t k = 0; k < row.size(); ++k)
      v_[row.cols[k]] += row.vals[k] * lp;
    if (ergodic_u_) {
      for (std::size_t j = 0; j < y_.size(); ++j) u_[j] = (y_[j] - z_[j]) / step_t;
      ergodic_u_->accumulate(u_);
    }
    detail::dense_tos_update(y_, z_, v_, step_t, prob_->g(), u_, x_);
    counters_.prox_evals += 1;
    if (ergodic_x_) ergodic_x_->accumulate(x_);
    ++t_;
    for (double val : y_) guard_value(val, "y");
  }

  std::vector<double> solution() const override {
    std::vector<double> z(y_.size());
    const double step_t = gamma_ / static_cast<double>(t_ + 1);
    prob_->h().scaled_prox(y_, step_t, {}, z);
    return z;
  }

  double residual() const override {
    const double step_t = gamma_ / static_cast<double>(t_ + 1);
    return operator_residual(y_, *prob_, step_t);
  }

 private:
  const Problem* prob_;
  RandomStream rng_;
  std::vector<double> y_, z_, v_, u_, x_;
};

}  // namespace

std::unique_ptr<SolverBase> make_solver(const Problem& problem, SolverKind kind,
                                        const SolverConfig& config) {
  problem.validate();
  if (config.step_size < 0.0) throw ConfigError("step_size must be >= 0");
  if (config.tolerance < 0.0) throw ConfigError("tolerance must be >= 0");
  if (!config.x0.empty() && config.x0.size() != problem.dim())
    throw ConfigError("x0 dimension mismatch");
  switch (kind) {
    case SolverKind::vrtos:
      if (problem.consensus)
        throw ConfigError("vrtos: use vrtos-k for consensus problems");
      return detail::make_vrtos_dense(problem, config);
    case SolverKind::vrtos_sparse:
      if (problem.consensus) return detail::make_kterm(problem, config, false);
      return detail::make_vrtos_sparse(problem, config);
    case SolverKind::vrtos_k:
      if (!problem.consensus)
        throw ConfigError("vrtos-k: needs a consensus problem with k >= 2 terms");
      return detail::make_kterm(problem, config, false);
    case SolverKind::tos:
      if (problem.consensus) return detail::make_kterm(problem, config, true);
      return std::make_unique<TosFullSolver>(problem, config);
    case SolverKind::stos:
      if (problem.consensus)
        throw ConfigError("stos: supports two-term problems only");
      return std::make_unique<StosSolver>(problem, config);
    case SolverKind::saga_dr:
      if (problem.consensus)
        throw ConfigError("saga: supports two-term problems only");
      return detail::make_baseline(problem, config, MemoryScheme::saga_like);
    case SolverKind::proxsvrg_dr:
      if (problem.consensus)
        throw ConfigError("proxsvrg: supports two-term problems only");
      return detail::make_baseline(problem, config, MemoryScheme::svrg_like);
  }
  throw ConfigError("unknown solver kind");
}

RunResult run(const Problem& problem, SolverKind kind, const SolverConfig& config) {
  auto solver = make_solver(problem, kind, config);
  RunResult result;
  result.step_size = solver->step_size();
  result.reason = Termination::epoch_budget;

  const auto start = std::chrono::steady_clock::now();
  auto record = [&](std::size_t epoch) {
    const std::vector<double> z = solver->solution();
    TraceRow row;
    row.epoch = epoch;
    row.grad_evals = solver->counters().grad_evals;
    row.prox_evals = solver->counters().prox_evals;
    row.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    row.objective = primal_objective(z, problem);
    row.residual = solver->residual();
    row.nnz = count_nnz(z);
    result.trace.append(row);
    return row.residual;
  };

  double res = record(0);
  if (config.tolerance > 0.0 && res <= config.tolerance) {
    result.reason = Termination::tolerance;
  } else {
    const std::size_t cadence = config.trace_every == 0 ? 1 : config.trace_every;
    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
      const std::size_t steps = solver->steps_per_epoch();
      for (std::size_t s = 0; s < steps; ++s) solver->step();
      if (epoch % cadence == 0 || epoch == config.max_epochs) {
        res = record(epoch);
        if (config.tolerance > 0.0 && res <= config.tolerance) {
          result.reason = Termination::tolerance;
          result.epochs = epoch;
          break;
        }
      }
      result.epochs = epoch;
    }
  }

  result.solution = solver->solution();
  result.counters = solver->counters();
  return result;
}

}  // namespace vrtos
