#include <cmath>

#include "vrtos/errors.hpp"
#include "vrtos/rng.hpp"
#include "vrtos/structure.hpp"
#include "solver_detail.hpp"

namespace vrtos::detail {

namespace {

// Sparse lazy-update variant: every step touches only the extended support
// T_i of the sampled gradient, with the reweighting diagonal D correcting
// the bias of the partial updates:
//   [z]_{T_i} = [prox^{D^-1}_{gamma h}(y)]_{T_i}
//   [v]_{T_i} = [grad psi_i(z) - alpha_i + D(mean + grad omega(z))]_{T_i}
//   [x]_{T_i} = per-block prox of g at step gamma d_B
//   [y]_{T_i} += [x - z]_{T_i}
class SparseVrTosSolver final : public SolverBase {
 public:
  SparseVrTosSolver(const Problem& problem, const SolverConfig& cfg)
      : prob_(&problem),
        rng_(cfg.seed),
        memory_(*problem.model, cfg.scheme, cfg.svrg_q,
                cfg.seed ^ 0x9e3779b97f4a7c15ull, MemoryStorage::compressed,
                cfg.init_memory_at_x0 ? std::span<const double>(cfg.x0)
                                      : std::span<const double>{}) {
    const SmoothModel& model = *problem.model;
    const std::size_t p = model.dim();
    const BlockPartition* part = problem.g().blocks();
    if (part == nullptr)
      throw ConfigError("vrtos-sparse: g must be block separable");
    supports_ = ExtendedSupportSet::compute(model.features(), *part);
    weights_ = compute_reweighting(supports_, *part, model.n());

    divergence_limit_ = cfg.divergence_limit;
    gamma_ = cfg.step_size > 0.0
                 ? cfg.step_size
                 : 1.0 / (3.0 * model.smoothness_constants(weights_.d_max).l_f());

    y_.assign(p, 0.0);
    if (!cfg.x0.empty()) y_ = cfg.x0;
    z_.resize(p);
    v_.resize(p);
    u_.resize(p);
    x_.resize(p);
    full_z_.resize(p);
    // Fail fast if h cannot evaluate its scaled prox under these weights.
    prob_->h().scaled_prox(y_, gamma_, weights_.d, z_);
  }

  std::size_t steps_per_epoch() const override { return prob_->model->n(); }

  void step() override {
    const SmoothModel& model = *prob_->model;
    const std::size_t i = rng_.bounded(model.n());
    last_sampled_ = static_cast<long>(i);
    const auto coords = supports_.coords_of(i);
    const auto blocks = supports_.blocks_of(i);
    const auto d = std::span<const double>(weights_.d);

    prob_->h().scaled_prox_coords(y_, gamma_, d, coords, z_);
    counters_.prox_evals += 1;

    const double lp = model.scalar_derivative(i, model.row_dot(i, z_.data()));
    counters_.grad_evals += memory_.read_costs_eval() ? 2 : 1;
    const double c_i = memory_.factor(i);
    const auto mean = memory_.mean();
    const double l2 = model.l2_reg();

    for (Index c : coords) v_[c] = d[c] * (mean[c] + l2 * z_[c]);
    const auto row = model.features().row(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const Index c = row.cols[k];
      v_[c] += row.vals[k] * lp - row.vals[k] * c_i;
    }

    for (Index c : coords) u_[c] = 2.0 * z_[c] - y_[c] - gamma_ * v_[c];
    prob_->g().scaled_prox_blocks(u_, gamma_, d, blocks, x_);
    counters_.prox_evals += 1;

    // Memory update sees z_t, so a full svrg refresh materializes the prox of
    // the pre-update y.
    const auto report = memory_.update(i, lp, [this]() {
      prob_->h().scaled_prox(y_, gamma_, weights_.d, full_z_);
      return std::span<const double>(full_z_);
    });
    counters_.grad_evals += report.extra_grad_evals;
    if (report.full_refresh) counters_.prox_evals += 1;

    for (Index c : coords) {
      y_[c] += x_[c] - z_[c];
      guard_value(y_[c], "y");
    }
    ++t_;
  }

  std::vector<double> solution() const override {
    std::vector<double> z(y_.size());
    prob_->h().scaled_prox(y_, gamma_, weights_.d, z);
    return z;
  }

  double residual() const override {
    return operator_residual(y_, *prob_, gamma_, weights_.d);
  }

  std::vector<double> dual_point() const override {
    std::vector<double> z(y_.size()), u(y_.size());
    prob_->h().scaled_prox(y_, gamma_, weights_.d, z);
    for (std::size_t j = 0; j < y_.size(); ++j)
      u[j] = (y_[j] - z[j]) / (weights_.d[j] * gamma_);
    return u;
  }

  const DiagonalWeights& reweighting() const { return weights_; }

 private:
  const Problem* prob_;
  RandomStream rng_;
  GradientMemory memory_;
  ExtendedSupportSet supports_;
  DiagonalWeights weights_;
  std::vector<double> y_, z_, v_, u_, x_, full_z_;
};

}  // namespace

std::unique_ptr<SolverBase> make_vrtos_sparse(const Problem& problem,
                                              const SolverConfig& config) {
  return std::make_unique<SparseVrTosSolver>(problem, config);
}

}  // namespace vrtos::detail
