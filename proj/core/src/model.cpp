#include "vrtos/model.hpp"

#include <algorithm>
#include <cmath>

#include "vrtos/errors.hpp"

namespace vrtos {

SmoothModel::SmoothModel(LabeledDataset dataset, LossKind loss, double l2_reg)
    : data_(std::move(dataset)), loss_(loss), l2_reg_(l2_reg) {
  if (data_.n_rows() == 0) throw ConfigError("SmoothModel: empty dataset");
  if (data_.labels.size() != data_.n_rows())
    throw ConfigError("SmoothModel: labels/rows mismatch");
  if (l2_reg_ < 0.0) throw ConfigError("SmoothModel: l2_reg must be >= 0");
  if (loss_ == LossKind::logistic) {
    for (double b : data_.labels)
      if (b != 1.0 && b != -1.0)
        throw ConfigError("SmoothModel: logistic labels must be in {-1, +1}");
  }
  max_row_sq_norm_ = 0.0;
  for (std::size_t i = 0; i < data_.n_rows(); ++i)
    max_row_sq_norm_ = std::max(max_row_sq_norm_, data_.features.row_sq_norm(i));
}

double SmoothModel::scalar_derivative(std::size_t i, double t) const {
  const double b = data_.labels[i];
  if (loss_ == LossKind::squared) return t - b;
  // -b * sigma(-b t), overflow-safe on both sides of the margin.
  const double m = b * t;
  if (m >= 0.0) {
    const double e = std::exp(-m);
    return -b * (e / (1.0 + e));
  }
  return -b / (1.0 + std::exp(m));
}

double SmoothModel::scalar_loss(std::size_t i, double t) const {
  const double b = data_.labels[i];
  if (loss_ == LossKind::squared) {
    const double r = t - b;
    return 0.5 * r * r;
  }
  // log(1 + exp(-m)) via the log1p branch that never overflows.
  const double m = b * t;
  if (m >= 0.0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

void SmoothModel::partial_gradient(std::size_t i, std::span<const double> z,
                                   std::span<double> out, bool zero_out) const {
  if (zero_out) std::fill(out.begin(), out.end(), 0.0);
  const double coef = scalar_derivative(i, row_dot(i, z.data()));
  const auto row = data_.features.row(i);
  for (std::size_t k = 0; k < row.size(); ++k)
    out[row.cols[k]] += row.vals[k] * coef;
}

void SmoothModel::full_gradient(std::span<const double> z,
                                std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(n());
  for (std::size_t i = 0; i < n(); ++i) {
    const double coef = scalar_derivative(i, row_dot(i, z.data())) * inv_n;
    const auto row = data_.features.row(i);
    for (std::size_t k = 0; k < row.size(); ++k)
      out[row.cols[k]] += row.vals[k] * coef;
  }
  if (l2_reg_ != 0.0)
    for (std::size_t j = 0; j < dim(); ++j) out[j] += l2_reg_ * z[j];
}

double SmoothModel::smooth_value(std::span<const double> z) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < n(); ++i)
    acc += scalar_loss(i, row_dot(i, z.data()));
  acc /= static_cast<double>(n());
  if (l2_reg_ != 0.0) {
    double sq = 0.0;
    for (double v : z) sq += v * v;
    acc += 0.5 * l2_reg_ * sq;
  }
  return acc;
}

double SmoothModel::loss_curvature() const {
  return loss_ == LossKind::logistic ? 0.25 : 1.0;
}

SmoothnessConstants SmoothModel::smoothness_constants(double d_max) const {
  SmoothnessConstants c;
  c.l_psi = max_row_sq_norm_ * loss_curvature();
  c.l_omega = l2_reg_;
  c.mu_omega = l2_reg_;
  c.d_max = d_max;
  return c;
}

}  // namespace vrtos
