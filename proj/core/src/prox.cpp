#include "vrtos/prox.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace vrtos {

void prox_l1_scaled(std::span<const double> x, double gamma,
                    std::span<const double> d, std::span<double> out) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double thr = (d.empty() ? 1.0 : d[j]) * gamma;
    const double v = x[j];
    if (v > thr)
      out[j] = v - thr;
    else if (v < -thr)
      out[j] = v + thr;
    else
      out[j] = 0.0;
  }
}

void prox_group_lasso_scaled(std::span<const double> x, double gamma,
                             std::span<const double> d,
                             const std::vector<std::vector<Index>>& groups,
                             double strength, std::span<double> out) {
  std::vector<char> covered(x.size(), 0);
  for (const auto& g : groups)
    for (Index c : g) {
      if (covered[c])
        throw std::invalid_argument(
            "prox_group_lasso_scaled: overlapping groups (use the consensus "
            "split)");
      covered[c] = 1;
    }
  for (std::size_t j = 0; j < x.size(); ++j)
    if (!covered[j]) out[j] = x[j];
  for (const auto& g : groups) {
    const double d_b = d.empty() ? 1.0 : d[g.front()];
    double norm_sq = 0.0;
    for (Index c : g) norm_sq += x[c] * x[c];
    const double norm = std::sqrt(norm_sq);
    const double thr = d_b * gamma * strength;
    if (norm <= thr) {
      for (Index c : g) out[c] = 0.0;
    } else {
      const double shrink = 1.0 - thr / norm;
      for (Index c : g) out[c] = shrink * x[c];
    }
  }
}

std::pair<double, double> prox_fused_block2_scaled(double x1, double x2,
                                                   double gamma, double q1,
                                                   double q2) {
  const double s1 = gamma / q1, s2 = gamma / q2;
  if (x1 - s1 >= x2 + s2) return {x1 - s1, x2 + s2};
  if (x1 + s1 <= x2 - s2) return {x1 + s1, x2 - s2};
  const double merged = (q1 * x1 + q2 * x2) / (q1 + q2);
  return {merged, merged};
}

std::vector<double> consensus_projection(std::span<const double> stacked,
                                         std::span<const double> weights,
                                         std::size_t k, std::size_t p,
                                         std::span<double> broadcast) {
  std::vector<double> z(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    // Anchored difference form: rows that are already equal stay bitwise
    // unchanged (every difference is exactly zero).
    const double anchor = stacked[j];
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double w = weights[i * p + j];
      if (!(w > 0.0))
        throw std::invalid_argument("consensus_projection: weights must be > 0");
      num += w * (stacked[i * p + j] - anchor);
      den += w;
    }
    z[j] = anchor + num / den;
  }
  if (!broadcast.empty())
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < p; ++j) broadcast[i * p + j] = z[j];
  return z;
}

double overlapping_group_lasso_value(std::span<const double> x,
                                     const std::vector<std::vector<Index>>& groups,
                                     double strength) {
  double acc = 0.0;
  for (const auto& g : groups) {
    double norm_sq = 0.0;
    for (Index c : g) norm_sq += x[c] * x[c];
    acc += std::sqrt(norm_sq);
  }
  return strength * acc;
}

}  // namespace vrtos
