#pragma once

#include <span>
#include <utility>
#include <vector>

#include "vrtos/blocks.hpp"

namespace vrtos {

// Closed-form scaled proximal operators. The metric is ||.||_{D^-1} with
// D = diag(d) the reweighting diagonal (d >= 1), so larger d means a larger
// effective step on that coordinate.

// Soft threshold at d_j * gamma per coordinate: (1 - d_j g / |x_j|)_+ x_j.
void prox_l1_scaled(std::span<const double> x, double gamma,
                    std::span<const double> d, std::span<double> out);

// Per block B: x_B * (1 - d_B gamma strength / ||x_B||)_+ for coordinates in
// `groups`; coordinates outside every group pass through unchanged. Groups
// must be non-overlapping (use the consensus split otherwise).
void prox_group_lasso_scaled(std::span<const double> x, double gamma,
                             std::span<const double> d,
                             const std::vector<std::vector<Index>>& groups,
                             double strength, std::span<double> out);

// Scaled prox of |z1 - z2| for a block of two coordinates under the metric
// diag(q1, q2) (three-case rule).
std::pair<double, double> prox_fused_block2_scaled(double x1, double x2,
                                                   double gamma, double q1,
                                                   double q2);

// Weighted per-coordinate average of k stacked rows (row-major k x p), the
// scaled prox of the equality-constraint indicator. Weights strictly > 0.
// Returns the p-vector; `broadcast` fills a k x p stacked output if nonnull.
std::vector<double> consensus_projection(std::span<const double> stacked,
                                         std::span<const double> weights,
                                         std::size_t k, std::size_t p,
                                         std::span<double> broadcast = {});

// sum_{g in groups} strength * ||x_g||_2 with possibly overlapping groups.
double overlapping_group_lasso_value(std::span<const double> x,
                                     const std::vector<std::vector<Index>>& groups,
                                     double strength);

}  // namespace vrtos
