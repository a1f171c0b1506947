#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "vrtos/blocks.hpp"
#include "vrtos/prox.hpp"

namespace vrtos {

// A proximal term: value evaluation, scaled proximal operator and optional
// block structure. Objects are immutable after construction; every operation
// is pure and safe under concurrent callers.
//
// The scaled prox solves argmin_z { phi(z) + ||x - z||^2_{D^-1} / (2 gamma) }
// with D = diag(weights); an empty weights span means identity, in which case
// it reduces to the plain proximal operator. gamma == 0 returns x.
class Penalty {
 public:
  virtual ~Penalty() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual void scaled_prox(std::span<const double> x, double gamma,
                           std::span<const double> weights,
                           std::span<double> out) const = 0;

  // Block structure; nullptr when the penalty is not block separable.
  virtual const BlockPartition* blocks() const { return nullptr; }

  // [scaled_prox(x)]_c for every c in the sorted subset `coords`. Reads x
  // wherever the penalty couples coordinates, writes only the listed entries.
  virtual void scaled_prox_coords(std::span<const double> x, double gamma,
                                  std::span<const double> weights,
                                  std::span<const Index> coords,
                                  std::span<double> out) const;

  // Scaled prox restricted to the listed blocks of blocks(). Writes only
  // coordinates of those blocks. Throws if the penalty is not block
  // separable.
  virtual void scaled_prox_blocks(std::span<const double> x, double gamma,
                                  std::span<const double> weights,
                                  std::span<const Index> block_ids,
                                  std::span<double> out) const;
};

class ZeroPenalty final : public Penalty {
 public:
  explicit ZeroPenalty(std::size_t p);
  std::size_t dim() const override { return part_.dim(); }
  double value(std::span<const double>) const override { return 0.0; }
  void scaled_prox(std::span<const double> x, double gamma,
                   std::span<const double> weights,
                   std::span<double> out) const override;
  const BlockPartition* blocks() const override { return &part_; }
  void scaled_prox_coords(std::span<const double> x, double, std::span<const double>,
                          std::span<const Index> coords,
                          std::span<double> out) const override;
  void scaled_prox_blocks(std::span<const double> x, double, std::span<const double>,
                          std::span<const Index> block_ids,
                          std::span<double> out) const override;

 private:
  BlockPartition part_;
};

class L1Penalty final : public Penalty {
 public:
  L1Penalty(std::size_t p, double strength);
  double strength() const { return strength_; }
  std::size_t dim() const override { return part_.dim(); }
  double value(std::span<const double> x) const override;
  void scaled_prox(std::span<const double> x, double gamma,
                   std::span<const double> weights,
                   std::span<double> out) const override;
  const BlockPartition* blocks() const override { return &part_; }
  void scaled_prox_coords(std::span<const double> x, double gamma,
                          std::span<const double> weights,
                          std::span<const Index> coords,
                          std::span<double> out) const override;
  void scaled_prox_blocks(std::span<const double> x, double gamma,
                          std::span<const double> weights,
                          std::span<const Index> block_ids,
                          std::span<double> out) const override;

 private:
  BlockPartition part_;
  double strength_;
};

// Smooth quadratic (c/2)||x||^2 as a proximal term.
class SquaredL2Penalty final : public Penalty {
 public:
  SquaredL2Penalty(std::size_t p, double strength);
  std::size_t dim() const override { return part_.dim(); }
  double value(std::span<const double> x) const override;
  void scaled_prox(std::span<const double> x, double gamma,
                   std::span<const double> weights,
                   std::span<double> out) const override;
  const BlockPartition* blocks() const override { return &part_; }
  void scaled_prox_coords(std::span<const double> x, double gamma,
                          std::span<const double> weights,
                          std::span<const Index> coords,
                          std::span<double> out) const override;
  void scaled_prox_blocks(std::span<const double> x, double gamma,
                          std::span<const double> weights,
                          std::span<const Index> block_ids,
                          std::span<double> out) const override;

 private:
  BlockPartition part_;
  double strength_;
};

// Non-overlapping group lasso. Coordinates outside every group form
// zero-penalty singleton blocks so the partition covers all of {0..p-1}.
class GroupLassoPenalty final : public Penalty {
 public:
  GroupLassoPenalty(std::size_t p, std::vector<std::vector<Index>> groups,
                    double strength);
  const std::vector<std::vector<Index>>& groups() const { return groups_; }
  double strength() const { return strength_; }
  std::size_t dim() const override { return part_.dim(); }
  double value(std::span<const double> x) const override;
  void scaled_prox(std::span<const double> x, double gamma,
                   std::span<const double> weights,
                   std::span<double> out) const override;
  const BlockPartition* blocks() const override { return &part_; }
  void scaled_prox_coords(std::span<const double> x, double gamma,
                          std::span<const double> weights,
                          std::span<const Index> coords,
                          std::span<double> out) const override;
  void scaled_prox_blocks(std::span<const double> x, double gamma,
                          std::span<const double> weights,
                          std::span<const Index> block_ids,
                          std::span<double> out) const override;

 private:
  // Applies the scaled prox of one partition block; q is the metric weight
  // vector (may be empty).
  void prox_block(std::size_t b, std::span<const double> x, double gamma,
                  std::span<const double> weights, std::span<double> out) const;

  BlockPartition part_;
  std::vector<std::vector<Index>> groups_;
  std::vector<Index> group_of_block_;  // -1 for filler singletons
  double strength_;
};

// One half of the 1-D total variation split: strength * sum |x_a - x_b| over
// disjoint consecutive pairs starting at `parity` (0 or 1). Block separable
// with blocks of size two plus boundary singletons.
class FusedHalfPenalty final : public Penalty {
 public:
  FusedHalfPenalty(std::size_t p, int parity, double strength);
  std::size_t dim() const override { return part_.dim(); }
  double value(std::span<const double> x) const override;
  void scaled_prox(std::span<const double> x, double gamma,
                   std::span<const double> weights,
                   std::span<double> out) const override;
  const BlockPartition* blocks() const override { return &part_; }
  void scaled_prox_coords(std::span<const double> x, double gamma,
                          std::span<const double> weights,
                          std::span<const Index> coords,
                          std::span<double> out) const override;
  void scaled_prox_blocks(std::span<const double> x, double gamma,
                          std::span<const double> weights,
                          std::span<const Index> block_ids,
                          std::span<double> out) const override;

 private:
  void prox_block(std::size_t b, std::span<const double> x, double gamma,
                  std::span<const double> weights, std::span<double> out) const;

  BlockPartition part_;
  std::vector<std::size_t> pair_blocks_;  // block ids that are pairs
  double strength_;
};

// Splits the fused lasso (1-D total variation) into two 2-block-separable
// halves whose values sum to strength * sum_i |x_i - x_{i+1}|. p >= 2.
std::pair<std::unique_ptr<Penalty>, std::unique_ptr<Penalty>> fused_lasso_split(
    std::size_t p, double strength);

// Douglas-Rachford evaluation of prox_{gamma(g+h)}(x): alternates the prox of
// g and a prox of h against the quadratic anchor at x, returning the g-prox
// point after `iters` sweeps. `warm` carries the splitting variable across
// calls when non-null (updated in place); the fixed point is exact.
std::vector<double> dr_prox_sum(std::span<const double> x, double gamma,
                                const Penalty& g, const Penalty& h,
                                std::size_t iters,
                                std::vector<double>* warm = nullptr);

struct GroupSpec {
  std::vector<std::vector<Index>> groups;
  double strength = 0.0;
};

// {"groups": [[0,1,...], ...], "strength": lambda}
GroupSpec load_groups_json(std::string_view text);

// Chained groups of `size` with `overlap` shared coordinates between
// consecutive groups, covering as much of {0..p-1} as fits.
std::vector<std::vector<Index>> chained_groups(std::size_t p, std::size_t size,
                                               std::size_t overlap);

// Odd/even split of a (possibly overlapping) chained group family into two
// disjoint group-lasso families.
std::pair<std::vector<std::vector<Index>>, std::vector<std::vector<Index>>>
split_groups_odd_even(const std::vector<std::vector<Index>>& groups);

}  // namespace vrtos
