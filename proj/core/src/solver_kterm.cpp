#include <algorithm>
#include <cmath>

#include "vrtos/errors.hpp"
#include "vrtos/rng.hpp"
#include "vrtos/structure.hpp"
#include "solver_detail.hpp"

namespace vrtos::detail {

namespace {

// Consensus extension: k copies Y_1..Y_k coupled by the equality indicator,
// whose scaled prox is the per-coordinate weighted average with weights
// 1/d^(j). One partial gradient is shared across copies and carries a 1/k
// factor; the consensus point z is kept exact incrementally because it only
// changes where some copy changed.
class KTermSolver final : public SolverBase {
 public:
  KTermSolver(const Problem& problem, const SolverConfig& cfg, bool full_gradient)
      : prob_(&problem),
        rng_(cfg.seed),
        full_(full_gradient),
        k_(problem.k()),
        p_(problem.dim()) {
    const SmoothModel& model = *problem.model;
    divergence_limit_ = cfg.divergence_limit;

    double d_max = 1.0;
    for (std::size_t j = 0; j < k_; ++j) {
      const BlockPartition* part = problem.penalties[j]->blocks();
      if (part == nullptr)
        throw ConfigError("vrtos-k: every penalty must be block separable");
      if (full_) {
        supports_.push_back({});
        weights_.push_back(DiagonalWeights::identity(p_));
      } else {
        supports_.push_back(ExtendedSupportSet::compute(model.features(), *part));
        weights_.push_back(compute_reweighting(supports_.back(), *part, model.n()));
        d_max = std::max(d_max, weights_.back().d_max);
      }
    }

    // Step size from the lifted problem: each psi_i(mean of copies) is
    // (L_psi / k)-smooth and the separable omega copy carries L_omega / k.
    const double l_f_lifted =
        model.smoothness_constants(d_max).l_f() / static_cast<double>(k_);
    if (cfg.step_size > 0.0) {
      gamma_ = cfg.step_size;
    } else {
      if (!(l_f_lifted > 0.0))
        throw ConfigError("cannot derive a default step size (L_f = 0); set step_size");
      gamma_ = 1.0 / (3.0 * l_f_lifted);
    }

    // Consensus weights w_{j,c} = 1/d^(j)_c and their per-coordinate sums.
    consensus_w_.assign(k_ * p_, 1.0);
    consensus_den_.assign(p_, 0.0);
    for (std::size_t j = 0; j < k_; ++j)
      for (std::size_t c = 0; c < p_; ++c) {
        consensus_w_[j * p_ + c] = 1.0 / weights_[j].d[c];
        consensus_den_[c] += consensus_w_[j * p_ + c];
      }

    y_.assign(k_ * p_, 0.0);
    if (!cfg.x0.empty())
      for (std::size_t j = 0; j < k_; ++j)
        std::copy(cfg.x0.begin(), cfg.x0.end(), y_.begin() + j * p_);
    z_.resize(p_);
    refresh_consensus_full();
    v_.resize(p_);
    u_.resize(p_);
    x_.resize(p_);

    if (!full_)
      memory_ = std::make_unique<GradientMemory>(
          model, cfg.scheme, cfg.svrg_q, cfg.seed ^ 0x9e3779b97f4a7c15ull,
          MemoryStorage::compressed,
          cfg.init_memory_at_x0 ? std::span<const double>(cfg.x0)
                                : std::span<const double>{});

    if (!full_) {
      // Union of the per-copy extended supports per sample.
      union_ptr_.assign(1, 0);
      std::vector<Index> merged;
      for (std::size_t i = 0; i < model.n(); ++i) {
        merged.clear();
        for (std::size_t j = 0; j < k_; ++j) {
          const auto coords = supports_[j].coords_of(i);
          merged.insert(merged.end(), coords.begin(), coords.end());
        }
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        union_ids_.insert(union_ids_.end(), merged.begin(), merged.end());
        union_ptr_.push_back(union_ids_.size());
      }
    }
  }

  std::size_t steps_per_epoch() const override {
    return full_ ? 1 : prob_->model->n();
  }

  void step() override {
    if (full_)
      step_full();
    else
      step_vr();
    ++t_;
  }

  std::vector<double> solution() const override { return z_; }

  double residual() const override {
    if (full_) return operator_residual_consensus(y_, *prob_, gamma_);
    std::vector<double> stacked_d(k_ * p_);
    for (std::size_t j = 0; j < k_; ++j)
      std::copy(weights_[j].d.begin(), weights_[j].d.end(),
                stacked_d.begin() + j * p_);
    return operator_residual_consensus(y_, *prob_, gamma_, stacked_d);
  }

 private:
  void refresh_consensus_full() {
    for (std::size_t c = 0; c < p_; ++c) refresh_consensus_coord(c);
  }

  void refresh_consensus_coord(std::size_t c) {
    // Anchored difference form, matching consensus_projection: equal copies
    // leave the coordinate bitwise unchanged.
    const double anchor = y_[c];
    double num = 0.0;
    for (std::size_t j = 0; j < k_; ++j)
      num += consensus_w_[j * p_ + c] * (y_[j * p_ + c] - anchor);
    z_[c] = anchor + num / consensus_den_[c];
  }

  void step_vr() {
    const SmoothModel& model = *prob_->model;
    const std::size_t i = rng_.bounded(model.n());
    last_sampled_ = static_cast<long>(i);
    const double inv_k = 1.0 / static_cast<double>(k_);

    const double lp = model.scalar_derivative(i, model.row_dot(i, z_.data()));
    counters_.grad_evals += memory_->read_costs_eval() ? 2 : 1;
    const double c_i = memory_->factor(i);
    const auto mean = memory_->mean();
    const double l2 = model.l2_reg();
    const auto row = model.features().row(i);

    for (std::size_t j = 0; j < k_; ++j) {
      const auto coords = supports_[j].coords_of(i);
      const auto blocks = supports_[j].blocks_of(i);
      const auto d = std::span<const double>(weights_[j].d);
      double* yj = y_.data() + j * p_;

      for (Index c : coords) v_[c] = inv_k * (d[c] * (mean[c] + l2 * z_[c]));
      for (std::size_t k = 0; k < row.size(); ++k) {
        const Index c = row.cols[k];
        v_[c] += inv_k * (row.vals[k] * lp - row.vals[k] * c_i);
      }
      for (Index c : coords) u_[c] = 2.0 * z_[c] - yj[c] - gamma_ * v_[c];
      prob_->penalties[j]->scaled_prox_blocks(u_, gamma_, d, blocks, x_);
      counters_.prox_evals += 1;
      for (Index c : coords) {
        yj[c] += x_[c] - z_[c];
        guard_value(yj[c], "y");
      }
    }

    // Memory sees the pre-refresh consensus point z_t, which is full here.
    const auto report = memory_->update(
        i, lp, [this]() { return std::span<const double>(z_); });
    counters_.grad_evals += report.extra_grad_evals;

    const std::span<const Index> touched{
        union_ids_.data() + union_ptr_[i], union_ptr_[i + 1] - union_ptr_[i]};
    for (Index c : touched) refresh_consensus_coord(c);
    counters_.prox_evals += 1;
  }

  void step_full() {
    const SmoothModel& model = *prob_->model;
    const double inv_k = 1.0 / static_cast<double>(k_);
    std::vector<double> grad(p_);
    model.full_gradient(z_, grad);
    counters_.grad_evals += model.n();

    for (std::size_t j = 0; j < k_; ++j) {
      double* yj = y_.data() + j * p_;
      for (std::size_t c = 0; c < p_; ++c) {
        v_[c] = inv_k * grad[c];
        u_[c] = 2.0 * z_[c] - yj[c] - gamma_ * v_[c];
      }
      prob_->penalties[j]->scaled_prox(u_, gamma_, {}, x_);
      counters_.prox_evals += 1;
      for (std::size_t c = 0; c < p_; ++c) {
        yj[c] += x_[c] - z_[c];
        guard_value(yj[c], "y");
      }
    }
    refresh_consensus_full();
    counters_.prox_evals += 1;
  }

  const Problem* prob_;
  RandomStream rng_;
  bool full_;
  std::size_t k_, p_;
  std::unique_ptr<GradientMemory> memory_;
  std::vector<ExtendedSupportSet> supports_;
  std::vector<DiagonalWeights> weights_;
  std::vector<double> consensus_w_, consensus_den_;
  std::vector<double> y_;  // k x p row-major
  std::vector<double> z_, v_, u_, x_;
  std::vector<std::size_t> union_ptr_;
  std::vector<Index> union_ids_;
};

}  // namespace

std::unique_ptr<SolverBase> make_kterm(const Problem& problem,
                                       const SolverConfig& config,
                                       bool full_gradient) {
  return std::make_unique<KTermSolver>(problem, config, full_gradient);
}

}  // namespace vrtos::detail
