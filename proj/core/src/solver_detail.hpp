#pragma once

#include <span>
#include <vector>

#include "vrtos/penalty.hpp"
#include "vrtos/solver.hpp"

namespace vrtos::detail {

// Splitting update shared by the dense solvers:
// u = 2z - y - gamma v; x = prox_{gamma g}(u); y += x - z.
inline void dense_tos_update(std::span<double> y, std::span<const double> z,
                             std::span<const double> v, double gamma,
                             const Penalty& g, std::span<double> u,
                             std::span<double> x) {
  const std::size_t p = y.size();
  for (std::size_t j = 0; j < p; ++j) u[j] = 2.0 * z[j] - y[j] - gamma * v[j];
  g.scaled_prox(u, gamma, {}, x);
  for (std::size_t j = 0; j < p; ++j) y[j] += x[j] - z[j];
}

std::unique_ptr<SolverBase> make_vrtos_dense(const Problem&, const SolverConfig&);
std::unique_ptr<SolverBase> make_vrtos_sparse(const Problem&, const SolverConfig&);
std::unique_ptr<SolverBase> make_kterm(const Problem&, const SolverConfig&,
                                       bool full_gradient);
std::unique_ptr<SolverBase> make_baseline(const Problem&, const SolverConfig&,
                                          MemoryScheme scheme);

}  // namespace vrtos::detail
