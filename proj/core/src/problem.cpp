#include "vrtos/problem.hpp"

#include "vrtos/errors.hpp"

namespace vrtos {

Problem Problem::two_term(std::shared_ptr<const SmoothModel> model,
                          std::shared_ptr<const Penalty> g,
                          std::shared_ptr<const Penalty> h) {
  Problem p;
  p.model = std::move(model);
  p.penalties = {std::move(g), std::move(h)};
  p.consensus = false;
  p.validate();
  return p;
}

Problem Problem::k_term(std::shared_ptr<const SmoothModel> model,
                        std::vector<std::shared_ptr<const Penalty>> gs) {
  Problem p;
  p.model = std::move(model);
  p.penalties = std::move(gs);
  p.consensus = true;
  p.validate();
  return p;
}

double Problem::penalty_value(std::span<const double> x) const {
  if (penalty_value_override) return penalty_value_override(x);
  double acc = 0.0;
  for (const auto& pen : penalties) acc += pen->value(x);
  return acc;
}

double Problem::primal_value(std::span<const double> x) const {
  return model->smooth_value(x) + penalty_value(x);
}

void Problem::validate() const {
  if (!model) throw ConfigError("Problem: missing model");
  if (penalties.empty()) throw ConfigError("Problem: needs at least one penalty");
  if (!consensus && penalties.size() != 2)
    throw ConfigError("Problem: the two-term form needs exactly (g, h)");
  if (consensus && penalties.size() < 2)
    throw ConfigError("Problem: the consensus form needs k >= 2 penalties");
  for (const auto& pen : penalties) {
    if (!pen) throw ConfigError("Problem: null penalty");
    if (pen->dim() != model->dim())
      throw ConfigError("Problem: penalty dimension mismatch");
  }
}

}  // namespace vrtos
