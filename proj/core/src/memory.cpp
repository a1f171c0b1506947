#include "vrtos/memory.hpp"

#include <algorithm>

#include "vrtos/errors.hpp"

namespace vrtos {

GradientMemory::GradientMemory(const SmoothModel& model, MemoryScheme scheme,
                               double q, std::uint64_t seed,
                               MemoryStorage storage,
                               std::span<const double> init_at)
    : model_(&model), scheme_(scheme), storage_(storage), q_(q), rng_(seed) {
  const std::size_t n = model.n(), p = model.dim();
  if (scheme_ == MemoryScheme::svrg_like) {
    if (!(q_ > 0.0) || q_ > static_cast<double>(n))
      throw ConfigError("GradientMemory: svrg q must be in (0, n]");
    storage_ = MemoryStorage::snapshot;
  } else {
    q_ = 1.0;
    if (storage_ == MemoryStorage::snapshot)
      throw ConfigError("GradientMemory: snapshot storage is svrg-only");
  }
  mean_.assign(p, 0.0);
  switch (storage_) {
    case MemoryStorage::compressed:
      factors_.assign(n, 0.0);
      break;
    case MemoryStorage::dense_table:
      table_.assign(n * p, 0.0);
      break;
    case MemoryStorage::snapshot:
      snapshot_.assign(p, 0.0);
      break;
  }
  if (!init_at.empty()) refresh_all(init_at);
}

double GradientMemory::factor(std::size_t i) const {
  switch (storage_) {
    case MemoryStorage::compressed:
      return factors_[i];
    case MemoryStorage::snapshot:
      if (!svrg_primed_) return 0.0;
      return model_->scalar_derivative(i, model_->row_dot(i, snapshot_.data()));
    case MemoryStorage::dense_table:
      throw ConfigError("GradientMemory: dense table has no scalar factor");
  }
  return 0.0;
}

void GradientMemory::read_into(std::size_t i, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (storage_ == MemoryStorage::dense_table) {
    const double* row = table_.data() + i * model_->dim();
    std::copy(row, row + model_->dim(), out.begin());
    return;
  }
  const double c = factor(i);
  const auto row = model_->features().row(i);
  for (std::size_t k = 0; k < row.size(); ++k)
    out[row.cols[k]] = row.vals[k] * c;
}

MemoryUpdateReport GradientMemory::update(
    std::size_t i, double factor_at_z,
    const std::function<std::span<const double>()>& full_z) {
  MemoryUpdateReport report;
  const std::size_t n = model_->n();

  if (scheme_ == MemoryScheme::svrg_like) {
    if (rng_.unit_real() < q_ / static_cast<double>(n)) {
      refresh_all(full_z());
      report.refreshed = n;
      report.full_refresh = true;
      report.extra_grad_evals = n;
    }
    return report;
  }

  // Saga-like: J_t = {i}, incremental mean touching only supp(a_i).
  const double inv_n = 1.0 / static_cast<double>(n);
  if (storage_ == MemoryStorage::compressed) {
    const double delta = factor_at_z - factors_[i];
    const auto row = model_->features().row(i);
    for (std::size_t k = 0; k < row.size(); ++k)
      mean_[row.cols[k]] += row.vals[k] * delta * inv_n;
    factors_[i] = factor_at_z;
  } else {
    double* alpha = table_.data() + i * model_->dim();
    const auto row = model_->features().row(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const Index c = row.cols[k];
      const double fresh = row.vals[k] * factor_at_z;
      mean_[c] += (fresh - alpha[c]) * inv_n;
      alpha[c] = fresh;
    }
  }
  report.refreshed = 1;
  if (++updates_since_recompute_ >= n) recompute_mean();
  return report;
}

void GradientMemory::refresh_all(std::span<const double> z) {
  const std::size_t n = model_->n();
  if (storage_ == MemoryStorage::snapshot) {
    snapshot_.assign(z.begin(), z.end());
    svrg_primed_ = true;
  } else if (storage_ == MemoryStorage::compressed) {
    for (std::size_t i = 0; i < n; ++i)
      factors_[i] = model_->scalar_derivative(i, model_->row_dot(i, z.data()));
  } else {
    std::fill(table_.begin(), table_.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double c = model_->scalar_derivative(i, model_->row_dot(i, z.data()));
      double* alpha = table_.data() + i * model_->dim();
      const auto row = model_->features().row(i);
      for (std::size_t k = 0; k < row.size(); ++k)
        alpha[row.cols[k]] = row.vals[k] * c;
    }
  }
  recompute_mean();
}

void GradientMemory::recompute_mean() {
  const std::size_t n = model_->n();
  std::fill(mean_.begin(), mean_.end(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  if (storage_ == MemoryStorage::dense_table) {
    for (std::size_t i = 0; i < n; ++i) {
      const double* alpha = table_.data() + i * model_->dim();
      for (std::size_t j = 0; j < model_->dim(); ++j) mean_[j] += alpha[j] * inv_n;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double c = factor(i);
      const auto row = model_->features().row(i);
      for (std::size_t k = 0; k < row.size(); ++k)
        mean_[row.cols[k]] += row.vals[k] * c * inv_n;
    }
  }
  updates_since_recompute_ = 0;
}

}  // namespace vrtos
