#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vrtos/diagnostics.hpp"
#include "vrtos/memory.hpp"
#include "vrtos/problem.hpp"

namespace vrtos {

enum class SolverKind {
  vrtos,         // variance-reduced splitting, dense updates, two terms
  vrtos_sparse,  // sparse lazy-update variant (extended supports, D)
  vrtos_k,       // consensus extension for k proximal terms
  tos,           // deterministic full-gradient three operator splitting
  stos,          // stochastic splitting with decreasing step, no memory
  saga_dr,       // proximal saga, prox of g+h via inner Douglas-Rachford
  proxsvrg_dr,   // same loop with svrg-like memory
};

const char* solver_kind_name(SolverKind kind);
std::optional<SolverKind> solver_kind_from_name(const std::string& name);

struct SolverConfig {
  double step_size = 0.0;  // 0 selects 1/(3 L_f)
  MemoryScheme scheme = MemoryScheme::saga_like;
  double svrg_q = 1.0;
  std::size_t max_epochs = 100;
  double tolerance = 0.0;  // operator-residual target; 0 runs the full budget
  std::uint64_t seed = 0;
  std::size_t trace_every = 1;  // epochs between trace rows
  bool track_ergodic = false;
  std::size_t dr_iters = 10;  // inner sweeps for the baseline prox
  double divergence_limit = 1e12;
  std::vector<double> x0;  // empty = origin; y0 = x0 + gamma * u0, u0 = 0
  bool init_memory_at_x0 = false;  // default: memory terms start at zero
};

enum class Termination { tolerance, epoch_budget };

struct OracleCounters {
  std::uint64_t grad_evals = 0;  // partial-gradient evaluations
  std::uint64_t prox_evals = 0;  // penalty prox applications
};

struct RunResult {
  std::vector<double> solution;  // prox^{D^-1}_{gamma h}(y_final)
  Trace trace;
  Termination reason = Termination::epoch_budget;
  OracleCounters counters;
  double step_size = 0.0;
  std::size_t epochs = 0;
};

// One solver run: strictly sequential, owns its state and random streams.
class SolverBase {
 public:
  virtual ~SolverBase() = default;

  virtual void step() = 0;
  virtual std::size_t steps_per_epoch() const = 0;
  // Current primal point (consensus point for the k-term formulation).
  virtual std::vector<double> solution() const = 0;
  // Operator residual at the current iterate; pure observer.
  virtual double residual() const = 0;
  // Current dual iterate u = D^-1 (y - z) / gamma where the splitting
  // maintains one; throws otherwise.
  virtual std::vector<double> dual_point() const;

  double step_size() const { return gamma_; }
  const OracleCounters& counters() const { return counters_; }
  std::size_t steps_taken() const { return t_; }
  long last_sampled() const { return last_sampled_; }

  const RunningAverage* ergodic_x() const { return ergodic_x_.get(); }
  const RunningAverage* ergodic_u() const { return ergodic_u_.get(); }

 protected:
  double gamma_ = 0.0;
  OracleCounters counters_;
  std::size_t t_ = 0;
  long last_sampled_ = -1;
  double divergence_limit_ = 1e12;
  std::unique_ptr<RunningAverage> ergodic_x_, ergodic_u_;

  void guard_value(double v, const char* what) const;
};

std::unique_ptr<SolverBase> make_solver(const Problem& problem, SolverKind kind,
                                        const SolverConfig& config);

// Epoch loop: one trace row at epoch 0 and then every `trace_every` epochs,
// stopping at the residual tolerance or the epoch budget.
RunResult run(const Problem& problem, SolverKind kind, const SolverConfig& config);

}  // namespace vrtos
