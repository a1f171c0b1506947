#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "vrtos/model.hpp"
#include "vrtos/penalty.hpp"

namespace vrtos {

// A composite problem: smooth model plus either a (g, h) pair or an ordered
// list g_1..g_k coupled through the consensus reformulation.
struct Problem {
  std::shared_ptr<const SmoothModel> model;
  std::vector<std::shared_ptr<const Penalty>> penalties;
  bool consensus = false;

  // Optional direct evaluator for the penalty total (e.g. the overlapping
  // group lasso value); when absent the penalties are summed.
  std::function<double(std::span<const double>)> penalty_value_override;

  static Problem two_term(std::shared_ptr<const SmoothModel> model,
                          std::shared_ptr<const Penalty> g,
                          std::shared_ptr<const Penalty> h);
  static Problem k_term(std::shared_ptr<const SmoothModel> model,
                        std::vector<std::shared_ptr<const Penalty>> gs);

  std::size_t dim() const { return model->dim(); }
  std::size_t k() const { return penalties.size(); }
  const Penalty& g() const { return *penalties[0]; }
  const Penalty& h() const { return *penalties[1]; }

  double penalty_value(std::span<const double> x) const;
  // P(x) = f(x) + sum of penalty terms, all evaluated at the same point.
  double primal_value(std::span<const double> x) const;

  void validate() const;
};

}  // namespace vrtos
