#include "vrtos/structure.hpp"

#include <algorithm>
#include <string>

#include "vrtos/errors.hpp"

namespace vrtos {

ExtendedSupportSet ExtendedSupportSet::compute(const SparseRowMatrix& features,
                                               const BlockPartition& partition) {
  const std::size_t n = features.n_rows();
  ExtendedSupportSet out;
  out.block_ptr_.assign(1, 0);
  out.coord_ptr_.assign(1, 0);
  out.block_freq_.assign(partition.n_blocks(), 0);

  std::vector<Index> touched;
  for (std::size_t i = 0; i < n; ++i) {
    touched.clear();
    const auto row = features.row(i);
    for (std::size_t k = 0; k < row.size(); ++k)
      touched.push_back(partition.block_of(row.cols[k]));
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    for (Index b : touched) {
      out.block_ids_.push_back(b);
      ++out.block_freq_[b];
      const auto blk = partition.block(b);
      out.coord_ids_.insert(out.coord_ids_.end(), blk.begin(), blk.end());
    }
    // Blocks are listed in increasing order; sort the flattened coordinates
    // so restricted prox passes can walk them monotonically.
    std::sort(out.coord_ids_.begin() + out.coord_ptr_.back(), out.coord_ids_.end());
    out.block_ptr_.push_back(out.block_ids_.size());
    out.coord_ptr_.push_back(out.coord_ids_.size());
  }
  return out;
}

DiagonalWeights compute_reweighting(const ExtendedSupportSet& supports,
                                    const BlockPartition& partition,
                                    std::size_t n) {
  DiagonalWeights w;
  w.d.assign(partition.dim(), 0.0);
  w.d_block.assign(partition.n_blocks(), 0.0);
  w.d_max = 1.0;
  for (std::size_t b = 0; b < partition.n_blocks(); ++b) {
    const std::size_t freq = supports.block_frequency(b);
    if (freq == 0)
      throw ConfigError("block " + std::to_string(b) +
                        " is never touched by any sample; reformulate the "
                        "problem without it");
    const double d_b = static_cast<double>(n) / static_cast<double>(freq);
    w.d_block[b] = d_b;
    w.d_max = std::max(w.d_max, d_b);
    for (Index c : partition.block(b)) w.d[c] = d_b;
  }
  return w;
}

}  // namespace vrtos
