#include "vrtos/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "vrtos/errors.hpp"

namespace vrtos {

void Trace::append(const TraceRow& row) {
  if (!rows_.empty()) {
    const TraceRow& prev = rows_.back();
    if (row.epoch <= prev.epoch)
      throw std::invalid_argument("Trace: epochs must be strictly increasing");
    if (row.grad_evals < prev.grad_evals || row.prox_evals < prev.prox_evals)
      throw std::invalid_argument("Trace: counters must be nondecreasing");
  }
  if (!std::isfinite(row.objective))
    throw std::invalid_argument("Trace: objective must be finite");
  rows_.push_back(row);
}

double primal_objective(std::span<const double> x, const Problem& problem) {
  return problem.primal_value(x);
}

double operator_residual(std::span<const double> y, const Problem& problem,
                         double gamma, std::span<const double> weights) {
  const std::size_t p = y.size();
  std::vector<double> z(p), grad(p), u(p), x(p);
  problem.h().scaled_prox(y, gamma, weights, z);
  problem.model->full_gradient(z, grad);
  for (std::size_t j = 0; j < p; ++j) {
    const double dj = weights.empty() ? 1.0 : weights[j];
    u[j] = 2.0 * z[j] - y[j] - gamma * dj * grad[j];
  }
  problem.g().scaled_prox(u, gamma, weights, x);
  // y - G(y) = z - x
  double acc = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    const double r = z[j] - x[j];
    acc += r * r;
  }
  return std::sqrt(acc);
}

double operator_residual_consensus(std::span<const double> y_stacked,
                                   const Problem& problem, double gamma,
                                   std::span<const double> weights_stacked) {
  const std::size_t k = problem.k();
  const std::size_t p = problem.dim();
  std::vector<double> consensus_w(k * p, 1.0);
  if (!weights_stacked.empty())
    for (std::size_t i = 0; i < k * p; ++i)
      consensus_w[i] = 1.0 / weights_stacked[i];
  const std::vector<double> z =
      consensus_projection(y_stacked, consensus_w, k, p);

  std::vector<double> grad(p), u(p), x(p);
  problem.model->full_gradient(z, grad);
  const double inv_k = 1.0 / static_cast<double>(k);

  double acc = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double* yj = y_stacked.data() + j * p;
    const double* dj =
        weights_stacked.empty() ? nullptr : weights_stacked.data() + j * p;
    for (std::size_t c = 0; c < p; ++c) {
      const double w = dj ? dj[c] : 1.0;
      u[c] = 2.0 * z[c] - yj[c] - gamma * w * inv_k * grad[c];
    }
    problem.penalties[j]->scaled_prox(
        u, gamma, dj ? std::span<const double>(dj, p) : std::span<const double>{},
        x);
    for (std::size_t c = 0; c < p; ++c) {
      const double r = z[c] - x[c];
      acc += r * r;
    }
  }
  return std::sqrt(acc);
}

std::vector<double> dual_iterate(std::span<const double> y,
                                 std::span<const double> z, double gamma,
                                 std::span<const double> weights) {
  if (!(gamma > 0.0)) throw ConfigError("dual_iterate: gamma must be > 0");
  std::vector<double> u(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double dj = weights.empty() ? 1.0 : weights[j];
    u[j] = (y[j] - z[j]) / (dj * gamma);
  }
  return u;
}

namespace detail {

double assemble_estimator(const SmoothModel& model, const GradientMemory& memory,
                          std::size_t i, std::span<const double> z,
                          std::span<double> v) {
  const std::size_t p = model.dim();
  const double l2 = model.l2_reg();
  const auto mean = memory.mean();
  const auto row = model.features().row(i);

  if (memory.storage() == MemoryStorage::dense_table) {
    std::vector<double> alpha(p);
    memory.read_into(i, alpha);
    for (std::size_t j = 0; j < p; ++j)
      v[j] = (mean[j] - alpha[j]) + l2 * z[j];
  } else {
    const double c = memory.factor(i);
    for (std::size_t j = 0; j < p; ++j) v[j] = mean[j] + l2 * z[j];
    // The memory correction stays a bracketed difference so it vanishes
    // exactly whenever the stored term equals the running mean (n = 1).
    for (std::size_t k = 0; k < row.size(); ++k) {
      const Index cidx = row.cols[k];
      v[cidx] = (mean[cidx] - row.vals[k] * c) + l2 * z[cidx];
    }
  }
  const double lp = model.scalar_derivative(i, model.row_dot(i, z.data()));
  for (std::size_t k = 0; k < row.size(); ++k)
    v[row.cols[k]] += row.vals[k] * lp;
  return lp;
}

}  // namespace detail

double estimator_variance(const Problem& problem, const GradientMemory& memory,
                          std::span<const double> z) {
  const SmoothModel& model = *problem.model;
  const std::size_t p = model.dim();
  std::vector<double> grad(p), v(p);
  model.full_gradient(z, grad);
  double acc = 0.0;
  for (std::size_t i = 0; i < model.n(); ++i) {
    detail::assemble_estimator(model, memory, i, z, v);
    double sq = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double r = v[j] - grad[j];
      sq += r * r;
    }
    acc += sq;
  }
  return acc / static_cast<double>(model.n());
}

std::size_t count_nnz(std::span<const double> x, double threshold) {
  std::size_t count = 0;
  for (double v : x)
    if (std::abs(v) > threshold) ++count;
  return count;
}

}  // namespace vrtos
