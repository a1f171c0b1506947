#pragma once

#include <span>
#include <vector>

#include "vrtos/data.hpp"

namespace vrtos {

enum class LossKind { logistic, squared };

struct SmoothnessConstants {
  double l_psi = 0.0;    // per-sample smoothness of psi_i
  double l_omega = 0.0;  // = l2_reg
  double mu_omega = 0.0; // = l2_reg
  double d_max = 1.0;
  // L_f = L_psi + d_max * L_omega
  double l_f() const { return l_psi + d_max * l_omega; }
};

// Smooth part f(x) = (1/n) sum_i l_i(a_i^T x) + (l2_reg/2) ||x||^2.
// Immutable; all evaluations are pure.
class SmoothModel {
 public:
  SmoothModel(LabeledDataset dataset, LossKind loss, double l2_reg);

  const LabeledDataset& dataset() const { return data_; }
  const SparseRowMatrix& features() const { return data_.features; }
  LossKind loss() const { return loss_; }
  double l2_reg() const { return l2_reg_; }
  std::size_t n() const { return data_.n_rows(); }
  std::size_t dim() const { return data_.n_cols(); }

  // l_i'(t): the scalar derivative of the per-sample loss at margin t.
  double scalar_derivative(std::size_t i, double t) const;
  double scalar_loss(std::size_t i, double t) const;

  double row_dot(std::size_t i, const double* x) const {
    return data_.features.row_dot(i, x);
  }

  // grad psi_i(z) = a_i * l_i'(a_i^T z); written into `out` (dense, zeroed
  // outside supp(a_i) only if zero_out). Does not include grad omega.
  void partial_gradient(std::size_t i, std::span<const double> z,
                        std::span<double> out, bool zero_out = true) const;

  // (1/n) sum_i grad psi_i(z) + l2_reg * z.
  void full_gradient(std::span<const double> z, std::span<double> out) const;

  double smooth_value(std::span<const double> z) const;

  // Curvature bound of the scalar loss (1/4 logistic, 1 squared).
  double loss_curvature() const;

  SmoothnessConstants smoothness_constants(double d_max = 1.0) const;

 private:
  LabeledDataset data_;
  LossKind loss_;
  double l2_reg_;
  double max_row_sq_norm_;
};

}  // namespace vrtos
