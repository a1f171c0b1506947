#pragma once

#include <span>
#include <vector>

#include "vrtos/blocks.hpp"
#include "vrtos/sparse.hpp"

namespace vrtos {

// Per-sample extended supports: the blocks of a partition that intersect the
// support of a_i, plus the flattened sorted coordinate set they cover. A
// sparse step may touch exactly these coordinates.
class ExtendedSupportSet {
 public:
  static ExtendedSupportSet compute(const SparseRowMatrix& features,
                                    const BlockPartition& partition);

  std::size_t n_samples() const { return block_ptr_.size() - 1; }

  std::span<const Index> blocks_of(std::size_t i) const {
    return {block_ids_.data() + block_ptr_[i], block_ptr_[i + 1] - block_ptr_[i]};
  }
  std::span<const Index> coords_of(std::size_t i) const {
    return {coord_ids_.data() + coord_ptr_[i], coord_ptr_[i + 1] - coord_ptr_[i]};
  }

  // Number of samples whose extended support contains block b.
  std::size_t block_frequency(std::size_t b) const { return block_freq_[b]; }

 private:
  std::vector<std::size_t> block_ptr_, coord_ptr_;
  std::vector<Index> block_ids_, coord_ids_;
  std::vector<std::size_t> block_freq_;
};

// d_B = n / |{i : B in T_i}| expanded to coordinates. Throws ConfigError
// naming any block that no sample ever touches.
DiagonalWeights compute_reweighting(const ExtendedSupportSet& supports,
                                    const BlockPartition& partition,
                                    std::size_t n);

}  // namespace vrtos
