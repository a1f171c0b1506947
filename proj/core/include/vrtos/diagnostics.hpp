#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vrtos/memory.hpp"
#include "vrtos/problem.hpp"

namespace vrtos {

struct TraceRow {
  std::size_t epoch = 0;
  std::uint64_t grad_evals = 0;
  std::uint64_t prox_evals = 0;
  double wall_time = 0.0;  // seconds since run start, monotonic clock
  double objective = 0.0;
  double residual = 0.0;
  std::size_t nnz = 0;
};

// Per-epoch convergence record. Epochs strictly increasing, counters
// nondecreasing, objective finite.
class Trace {
 public:
  void append(const TraceRow& row);
  const std::vector<TraceRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  const TraceRow& back() const { return rows_.back(); }

 private:
  std::vector<TraceRow> rows_;
};

// P(x) = f(x) + g(x) + h(x) (or f + sum_j g_j at the consensus point).
double primal_objective(std::span<const double> x, const Problem& problem);

// || y - G_gamma(y) || for the two-term operator
//   G(y) = y - z + prox^{D^-1}_{gamma g}(2z - y - gamma D grad f(z)),
//   z = prox^{D^-1}_{gamma h}(y),
// with D = diag(weights) (empty = identity). Full gradient; diagnostic only.
double operator_residual(std::span<const double> y, const Problem& problem,
                         double gamma, std::span<const double> weights = {});

// Lifted residual of the consensus formulation: y_stacked is k x p row-major,
// weights_stacked the per-copy reweighting diagonals (empty = identity).
double operator_residual_consensus(std::span<const double> y_stacked,
                                   const Problem& problem, double gamma,
                                   std::span<const double> weights_stacked = {});

// u = D^-1 (y - z) / gamma.
std::vector<double> dual_iterate(std::span<const double> y,
                                 std::span<const double> z, double gamma,
                                 std::span<const double> weights = {});

// Exact E || v - grad f(z) ||^2 of the variance-reduced estimator, by
// enumeration over all n indices.
double estimator_variance(const Problem& problem, const GradientMemory& memory,
                          std::span<const double> z);

// Count of |x_j| above the sparsity threshold used in traces.
std::size_t count_nnz(std::span<const double> x, double threshold = 1e-10);

// Incrementally maintained running average (ergodic iterate).
class RunningAverage {
 public:
  explicit RunningAverage(std::size_t p) : avg_(p, 0.0) {}
  void accumulate(std::span<const double> x) {
    ++count_;
    const double w = 1.0 / static_cast<double>(count_);
    for (std::size_t j = 0; j < avg_.size(); ++j) avg_[j] += (x[j] - avg_[j]) * w;
  }
  std::span<const double> value() const { return avg_; }
  std::size_t count() const { return count_; }

 private:
  std::vector<double> avg_;
  std::size_t count_ = 0;
};

namespace detail {
// v_i = grad psi_i(z) - alpha_i + mean + grad omega(z), dense.
// Returns l_i'(a_i^T z) so callers can reuse it for the memory update.
double assemble_estimator(const SmoothModel& model, const GradientMemory& memory,
                          std::size_t i, std::span<const double> z,
                          std::span<double> v);
}  // namespace detail

}  // namespace vrtos
