#include "vrtos/blocks.hpp"

#include <stdexcept>
#include <string>

namespace vrtos {

BlockPartition BlockPartition::singletons(std::size_t p) {
  BlockPartition part;
  part.blocks_.resize(p);
  part.block_of_.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    part.blocks_[j] = {static_cast<Index>(j)};
    part.block_of_[j] = static_cast<Index>(j);
  }
  return part;
}

BlockPartition BlockPartition::from_blocks(
    std::size_t p, std::vector<std::vector<Index>> blocks) {
  BlockPartition part;
  part.block_of_.assign(p, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty())
      throw std::invalid_argument("BlockPartition: empty block " + std::to_string(b));
    for (Index c : blocks[b]) {
      if (c < 0 || static_cast<std::size_t>(c) >= p)
        throw std::invalid_argument("BlockPartition: coordinate out of range");
      if (part.block_of_[c] != -1)
        throw std::invalid_argument("BlockPartition: coordinate " +
                                    std::to_string(c) + " in two blocks");
      part.block_of_[c] = static_cast<Index>(b);
    }
  }
  for (std::size_t c = 0; c < p; ++c)
    if (part.block_of_[c] == -1)
      throw std::invalid_argument("BlockPartition: coordinate " +
                                  std::to_string(c) + " not covered");
  part.blocks_ = std::move(blocks);
  return part;
}

}  // namespace vrtos
