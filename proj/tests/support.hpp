#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

#include "vrtos/data.hpp"
#include "vrtos/model.hpp"
#include "vrtos/rng.hpp"

namespace vrtos::testing {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

inline double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline std::vector<double> random_vector(RandomStream& rng, std::size_t p,
                                         double lo = -2.0, double hi = 2.0) {
  std::vector<double> x(p);
  for (auto& v : x) v = rng.uniform(lo, hi);
  return x;
}

// Dataset from explicit rows (index, value) with given labels and dimension.
inline LabeledDataset make_dataset(
    std::size_t p,
    std::initializer_list<std::vector<std::pair<Index, double>>> rows,
    std::initializer_list<double> labels) {
  LabeledDataset ds;
  ds.features.set_n_cols(p);
  for (const auto& row : rows) {
    std::vector<Index> cols;
    std::vector<double> vals;
    for (auto [c, v] : row) {
      cols.push_back(c);
      vals.push_back(v);
    }
    ds.features.append_row(cols, vals);
  }
  ds.labels.assign(labels);
  return ds;
}

}  // namespace vrtos::testing
