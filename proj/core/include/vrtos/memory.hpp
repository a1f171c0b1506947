#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vrtos/model.hpp"
#include "vrtos/rng.hpp"

namespace vrtos {

// Memory update rule: every stored gradient has probability q/n of being
// refreshed at each step.
enum class MemoryScheme { saga_like, svrg_like };

enum class MemoryStorage {
  compressed,   // n scalars c_i with alpha_i = a_i * c_i
  dense_table,  // n x p table (general losses)
  snapshot,     // svrg: only (z_tilde, mean) stored
};

struct MemoryUpdateReport {
  std::size_t refreshed = 0;       // how many memory terms were rewritten
  bool full_refresh = false;
  std::size_t extra_grad_evals = 0;  // gradient evaluations beyond the caller's
};

// q-memorization gradient table for grad psi_i (the finite-sum part only;
// grad omega is never stored). Owned by exactly one solver run; mutation is
// single threaded.
class GradientMemory {
 public:
  // Compressed scalars for the linearly-parametrized losses; `init_at`
  // non-null initializes alpha_i = grad psi_i(x0), otherwise zero.
  GradientMemory(const SmoothModel& model, MemoryScheme scheme, double q,
                 std::uint64_t seed, MemoryStorage storage = MemoryStorage::compressed,
                 std::span<const double> init_at = {});

  MemoryScheme scheme() const { return scheme_; }
  MemoryStorage storage() const { return storage_; }
  double q() const { return q_; }

  // alpha_i = a_i * factor(i). For the svrg snapshot this evaluates
  // l_i'(a_i^T z_tilde) on demand (one sparse dot; the caller accounts the
  // gradient evaluation). All schemes start from alpha = 0: the snapshot
  // only takes over after the first full refresh.
  double factor(std::size_t i) const;

  // True when factor() evaluates a gradient at the snapshot.
  bool read_costs_eval() const {
    return storage_ == MemoryStorage::snapshot && svrg_primed_;
  }

  // Dense alpha_i written into out (any storage).
  void read_into(std::size_t i, std::span<double> out) const;

  // Running mean (1/n) sum_i alpha_i, maintained incrementally and recomputed
  // exactly every n incremental updates.
  std::span<const double> mean() const { return mean_; }

  // q-memorization step after sampling index i at point z. `factor_at_z` is
  // l_i'(a_i^T z) already computed by the caller; `full_z` materializes the
  // complete current point and is only invoked when an svrg refresh triggers.
  MemoryUpdateReport update(std::size_t i, double factor_at_z,
                            const std::function<std::span<const double>()>& full_z);

  // Unconditional full refresh at z (n gradient evaluations).
  void refresh_all(std::span<const double> z);

  // Exact recomputation of the mean from stored terms (drift control).
  void recompute_mean();

 private:
  const SmoothModel* model_;
  MemoryScheme scheme_;
  MemoryStorage storage_;
  double q_;
  std::vector<double> factors_;    // compressed
  std::vector<double> table_;      // dense_table, row-major n x p
  std::vector<double> snapshot_;   // svrg z_tilde
  std::vector<double> mean_;
  RandomStream rng_;
  std::size_t updates_since_recompute_ = 0;
  bool svrg_primed_ = false;
};

}  // namespace vrtos
