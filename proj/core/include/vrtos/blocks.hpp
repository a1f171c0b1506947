#pragma once

#include <span>
#include <vector>

#include "vrtos/sparse.hpp"

namespace vrtos {

// Ordered disjoint coordinate blocks covering {0..p-1}.
class BlockPartition {
 public:
  BlockPartition() = default;

  static BlockPartition singletons(std::size_t p);
  // Validates: blocks nonempty, disjoint, and covering all p coordinates.
  static BlockPartition from_blocks(std::size_t p,
                                    std::vector<std::vector<Index>> blocks);

  std::size_t dim() const { return block_of_.size(); }
  std::size_t n_blocks() const { return blocks_.size(); }
  std::span<const Index> block(std::size_t b) const { return blocks_[b]; }
  Index block_of(Index coord) const { return block_of_[coord]; }

 private:
  std::vector<std::vector<Index>> blocks_;
  std::vector<Index> block_of_;
};

// Per-coordinate reweighting diagonal D: entries >= 1, constant within each
// block of the owning partition.
struct DiagonalWeights {
  std::vector<double> d;      // per coordinate
  std::vector<double> d_block;  // per block of the owning partition
  double d_max = 1.0;

  static DiagonalWeights identity(std::size_t p) {
    DiagonalWeights w;
    w.d.assign(p, 1.0);
    w.d_max = 1.0;
    return w;
  }
};

}  // namespace vrtos
