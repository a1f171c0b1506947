#include "vrtos/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace vrtos::oracle {

double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, double tol, int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  // Track the best evaluated point: once the bracket shrinks to the rounding
  // noise floor the comparisons stop being informative and the bracket can
  // drift off the minimizer.
  double best_x = f1 <= f2 ? x1 : x2;
  double best_f = std::min(f1, f2);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    if (f1 < best_f) {
      best_f = f1;
      best_x = x1;
    }
    if (f2 < best_f) {
      best_f = f2;
      best_x = x2;
    }
  }
  return best_x;
}

double scalar_prox_reference(const std::function<double(double)>& phi, double x,
                             double gamma, double metric_weight,
                             double bracket_pad) {
  if (gamma == 0.0) return x;
  auto objective = [&](double z) {
    const double r = x - z;
    return phi(z) + metric_weight * r * r / (2.0 * gamma);
  };
  const double lo = std::min(x, 0.0) - bracket_pad;
  const double hi = std::max(x, 0.0) + bracket_pad;
  return golden_section(objective, lo, hi);
}

std::vector<double> prox_l1_reference(std::span<const double> x, double gamma,
                                      std::span<const double> d) {
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double dj = d.empty() ? 1.0 : d[j];
    z[j] = scalar_prox_reference([](double t) { return std::abs(t); }, x[j],
                                 gamma, 1.0 / dj, gamma * dj + 1.0);
  }
  return z;
}

std::vector<double> prox_group_block_reference(std::span<const double> x,
                                               double gamma, double d_b,
                                               double strength) {
  std::vector<double> z(x.size(), 0.0);
  if (gamma == 0.0) {
    std::copy(x.begin(), x.end(), z.begin());
    return z;
  }
  double norm_sq = 0.0;
  for (double v : x) norm_sq += v * v;
  const double norm = std::sqrt(norm_sq);
  if (norm == 0.0) return z;
  auto radial = [&](double t) {
    const double r = t - norm;
    return strength * std::abs(t) + r * r / (2.0 * gamma * d_b);
  };
  const double t_star = golden_section(radial, 0.0, norm + 1.0);
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = t_star * x[j] / norm;
  return z;
}

std::pair<double, double> prox_fused2_reference(double x1, double x2,
                                                double gamma, double q1,
                                                double q2) {
  if (gamma == 0.0) return {x1, x2};
  const double pad = gamma * (1.0 / q1 + 1.0 / q2) + 1.0;
  const double lo = std::min(x1, x2) - pad, hi = std::max(x1, x2) + pad;
  auto inner_min = [&](double z1) {
    auto f2 = [&](double z2) {
      const double r1 = x1 - z1, r2 = x2 - z2;
      return std::abs(z1 - z2) + (q1 * r1 * r1 + q2 * r2 * r2) / (2.0 * gamma);
    };
    return golden_section(f2, lo, hi);
  };
  auto partial = [&](double z1) {
    const double z2 = inner_min(z1);
    const double r1 = x1 - z1, r2 = x2 - z2;
    return std::abs(z1 - z2) + (q1 * r1 * r1 + q2 * r2 * r2) / (2.0 * gamma);
  };
  const double z1 = golden_section(partial, lo, hi);
  return {z1, inner_min(z1)};
}

std::vector<double> consensus_reference(std::span<const double> stacked,
                                        std::span<const double> weights,
                                        std::size_t k, std::size_t p) {
  std::vector<double> z(p);
  for (std::size_t c = 0; c < p; ++c) {
    double lo = stacked[c], hi = stacked[c];
    for (std::size_t l = 0; l < k; ++l) {
      lo = std::min(lo, stacked[l * p + c]);
      hi = std::max(hi, stacked[l * p + c]);
    }
    auto f = [&](double t) {
      double acc = 0.0;
      for (std::size_t l = 0; l < k; ++l) {
        const double r = stacked[l * p + c] - t;
        acc += weights[l * p + c] * r * r;
      }
      return acc;
    };
    z[c] = golden_section(f, lo - 1e-9, hi + 1e-9);
  }
  return z;
}

}  // namespace vrtos::oracle
