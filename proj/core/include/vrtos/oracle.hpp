#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace vrtos::oracle {

// Reference minimizers for the scaled proximal problems, kept independent of
// the closed forms they validate: every routine reduces to one-dimensional
// golden-section searches on the prox objective itself.

// Argmin over [lo, hi] of a unimodal function.
double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, double tol = 1e-12, int max_iter = 300);

// argmin_z phi(z) + w (x - z)^2 / (2 gamma) for a scalar convex phi.
double scalar_prox_reference(const std::function<double(double)>& phi, double x,
                             double gamma, double metric_weight,
                             double bracket_pad);

// argmin_z ||z||_1 + ||x - z||^2_{D^-1} / (2 gamma), coordinate-wise search.
std::vector<double> prox_l1_reference(std::span<const double> x, double gamma,
                                      std::span<const double> d);

// argmin_z strength ||z|| + ||x - z||^2 / (2 gamma d_b) on one block. The
// minimizer is collinear with x (both terms only grow along directions
// orthogonal to x), so the search runs over the radial coordinate.
std::vector<double> prox_group_block_reference(std::span<const double> x,
                                               double gamma, double d_b,
                                               double strength);

// argmin |z1 - z2| + (q1 (x1-z1)^2 + q2 (x2-z2)^2) / (2 gamma) by nested
// golden-section over the two coordinates.
std::pair<double, double> prox_fused2_reference(double x1, double x2,
                                                double gamma, double q1,
                                                double q2);

// Per-coordinate weighted least squares solved by search: argmin_z of
// sum_l w_{l,c} (X_{l,c} - z)^2 for each coordinate c.
std::vector<double> consensus_reference(std::span<const double> stacked,
                                        std::span<const double> weights,
                                        std::size_t k, std::size_t p);

}  // namespace vrtos::oracle
