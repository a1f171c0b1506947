#include "vrtos/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "vrtos/errors.hpp"

namespace vrtos {

namespace {

inline double weight_at(std::span<const double> w, Index c) {
  return w.empty() ? 1.0 : w[c];
}

inline bool contains(std::span<const Index> sorted, Index c) {
  return std::binary_search(sorted.begin(), sorted.end(), c);
}

}  // namespace

void Penalty::scaled_prox_coords(std::span<const double> x, double gamma,
                                 std::span<const double> weights,
                                 std::span<const Index> coords,
                                 std::span<double> out) const {
  std::vector<double> full(x.size());
  scaled_prox(x, gamma, weights, full);
  for (Index c : coords) out[c] = full[c];
}

void Penalty::scaled_prox_blocks(std::span<const double>, double,
                                 std::span<const double>, std::span<const Index>,
                                 std::span<double>) const {
  throw ConfigError("penalty is not block separable");
}

// ---------------------------------------------------------------------------
// ZeroPenalty

ZeroPenalty::ZeroPenalty(std::size_t p) : part_(BlockPartition::singletons(p)) {}

void ZeroPenalty::scaled_prox(std::span<const double> x, double,
                              std::span<const double>, std::span<double> out) const {
  std::copy(x.begin(), x.end(), out.begin());
}

void ZeroPenalty::scaled_prox_coords(std::span<const double> x, double,
                                     std::span<const double>,
                                     std::span<const Index> coords,
                                     std::span<double> out) const {
  for (Index c : coords) out[c] = x[c];
}

void ZeroPenalty::scaled_prox_blocks(std::span<const double> x, double,
                                     std::span<const double>,
                                     std::span<const Index> block_ids,
                                     std::span<double> out) const {
  for (Index b : block_ids) out[b] = x[b];  // singleton blocks
}

// ---------------------------------------------------------------------------
// L1Penalty

L1Penalty::L1Penalty(std::size_t p, double strength)
    : part_(BlockPartition::singletons(p)), strength_(strength) {
  if (strength < 0.0) throw ConfigError("L1Penalty: strength must be >= 0");
}

double L1Penalty::value(std::span<const double> x) const {
  double acc = 0.0;
  for (double v : x) acc += std::abs(v);
  return strength_ * acc;
}

void L1Penalty::scaled_prox(std::span<const double> x, double gamma,
                            std::span<const double> weights,
                            std::span<double> out) const {
  if (weights.empty()) {
    std::vector<double> ones(x.size(), 1.0);
    prox_l1_scaled(x, gamma * strength_, ones, out);
  } else {
    prox_l1_scaled(x, gamma * strength_, weights, out);
  }
}

void L1Penalty::scaled_prox_coords(std::span<const double> x, double gamma,
                                   std::span<const double> weights,
                                   std::span<const Index> coords,
                                   std::span<double> out) const {
  for (Index c : coords) {
    const double thr = weight_at(weights, c) * gamma * strength_;
    const double v = x[c];
    out[c] = v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
  }
}

void L1Penalty::scaled_prox_blocks(std::span<const double> x, double gamma,
                                   std::span<const double> weights,
                                   std::span<const Index> block_ids,
                                   std::span<double> out) const {
  scaled_prox_coords(x, gamma, weights, block_ids, out);  // singleton blocks
}

// ---------------------------------------------------------------------------
// SquaredL2Penalty

SquaredL2Penalty::SquaredL2Penalty(std::size_t p, double strength)
    : part_(BlockPartition::singletons(p)), strength_(strength) {
  if (strength < 0.0) throw ConfigError("SquaredL2Penalty: strength must be >= 0");
}

double SquaredL2Penalty::value(std::span<const double> x) const {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return 0.5 * strength_ * acc;
}

void SquaredL2Penalty::scaled_prox(std::span<const double> x, double gamma,
                                   std::span<const double> weights,
                                   std::span<double> out) const {
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = x[j] / (1.0 + strength_ * gamma * weight_at(weights, j));
}

void SquaredL2Penalty::scaled_prox_coords(std::span<const double> x, double gamma,
                                          std::span<const double> weights,
                                          std::span<const Index> coords,
                                          std::span<double> out) const {
  for (Index c : coords)
    out[c] = x[c] / (1.0 + strength_ * gamma * weight_at(weights, c));
}

void SquaredL2Penalty::scaled_prox_blocks(std::span<const double> x, double gamma,
                                          std::span<const double> weights,
                                          std::span<const Index> block_ids,
                                          std::span<double> out) const {
  scaled_prox_coords(x, gamma, weights, block_ids, out);
}

// ---------------------------------------------------------------------------
// GroupLassoPenalty

GroupLassoPenalty::GroupLassoPenalty(std::size_t p,
                                     std::vector<std::vector<Index>> groups,
                                     double strength)
    : groups_(std::move(groups)), strength_(strength) {
  if (strength < 0.0) throw ConfigError("GroupLassoPenalty: strength must be >= 0");
  std::vector<char> covered(p, 0);
  std::vector<std::vector<Index>> blocks;
  group_of_block_.clear();
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    auto& grp = groups_[g];
    std::sort(grp.begin(), grp.end());
    for (Index c : grp) {
      if (c < 0 || static_cast<std::size_t>(c) >= p)
        throw ConfigError("GroupLassoPenalty: coordinate out of range");
      if (covered[c])
        throw ConfigError("GroupLassoPenalty: groups overlap at coordinate " +
                          std::to_string(c) + " (use the consensus split)");
      covered[c] = 1;
    }
    blocks.push_back(grp);
    group_of_block_.push_back(static_cast<Index>(g));
  }
  for (std::size_t c = 0; c < p; ++c)
    if (!covered[c]) {
      blocks.push_back({static_cast<Index>(c)});
      group_of_block_.push_back(-1);
    }
  part_ = BlockPartition::from_blocks(p, std::move(blocks));
}

double GroupLassoPenalty::value(std::span<const double> x) const {
  return overlapping_group_lasso_value(x, groups_, strength_);
}

void GroupLassoPenalty::prox_block(std::size_t b, std::span<const double> x,
                                   double gamma, std::span<const double> weights,
                                   std::span<double> out) const {
  const auto blk = part_.block(b);
  if (group_of_block_[b] < 0) {
    out[blk[0]] = x[blk[0]];
    return;
  }
  const double d_b = weight_at(weights, blk[0]);
  if (!weights.empty())
    for (Index c : blk)
      if (weights[c] != d_b)
        throw ConfigError(
            "GroupLassoPenalty: scaled prox needs block-constant weights");
  double norm_sq = 0.0;
  for (Index c : blk) norm_sq += x[c] * x[c];
  const double norm = std::sqrt(norm_sq);
  const double thr = d_b * gamma * strength_;
  if (norm <= thr) {
    for (Index c : blk) out[c] = 0.0;
  } else {
    const double shrink = 1.0 - thr / norm;
    for (Index c : blk) out[c] = shrink * x[c];
  }
}

void GroupLassoPenalty::scaled_prox(std::span<const double> x, double gamma,
                                    std::span<const double> weights,
                                    std::span<double> out) const {
  for (std::size_t b = 0; b < part_.n_blocks(); ++b)
    prox_block(b, x, gamma, weights, out);
}

void GroupLassoPenalty::scaled_prox_coords(std::span<const double> x, double gamma,
                                           std::span<const double> weights,
                                           std::span<const Index> coords,
                                           std::span<double> out) const {
  std::vector<double> scratch(4);
  Index last_block = -1;
  for (Index c : coords) {
    const Index b = part_.block_of(c);
    if (b == last_block) continue;
    last_block = b;
    const auto blk = part_.block(b);
    if (scratch.size() < x.size()) scratch.resize(x.size());
    prox_block(b, x, gamma, weights, scratch);
    for (Index m : blk)
      if (m == c || contains(coords, m)) out[m] = scratch[m];
  }
}

void GroupLassoPenalty::scaled_prox_blocks(std::span<const double> x, double gamma,
                                           std::span<const double> weights,
                                           std::span<const Index> block_ids,
                                           std::span<double> out) const {
  for (Index b : block_ids) prox_block(b, x, gamma, weights, out);
}

// ---------------------------------------------------------------------------
// FusedHalfPenalty

FusedHalfPenalty::FusedHalfPenalty(std::size_t p, int parity, double strength)
    : strength_(strength) {
  if (p < 2) throw ConfigError("FusedHalfPenalty: p must be >= 2");
  if (parity != 0 && parity != 1)
    throw ConfigError("FusedHalfPenalty: parity must be 0 or 1");
  if (strength < 0.0) throw ConfigError("FusedHalfPenalty: strength must be >= 0");
  std::vector<std::vector<Index>> blocks;
  if (parity == 1) blocks.push_back({0});
  std::size_t c = static_cast<std::size_t>(parity);
  for (; c + 1 < p; c += 2) {
    pair_blocks_.push_back(blocks.size());
    blocks.push_back({static_cast<Index>(c), static_cast<Index>(c + 1)});
  }
  if (c < p) blocks.push_back({static_cast<Index>(c)});
  part_ = BlockPartition::from_blocks(p, std::move(blocks));
}

double FusedHalfPenalty::value(std::span<const double> x) const {
  double acc = 0.0;
  for (std::size_t b : pair_blocks_) {
    const auto blk = part_.block(b);
    acc += std::abs(x[blk[0]] - x[blk[1]]);
  }
  return strength_ * acc;
}

void FusedHalfPenalty::prox_block(std::size_t b, std::span<const double> x,
                                  double gamma, std::span<const double> weights,
                                  std::span<double> out) const {
  const auto blk = part_.block(b);
  if (blk.size() == 1 || strength_ == 0.0 || gamma == 0.0) {
    for (Index c : blk) out[c] = x[c];
    return;
  }
  // Metric D^{-1} = diag(1/d); strength folds into the step.
  const double q1 = 1.0 / weight_at(weights, blk[0]);
  const double q2 = 1.0 / weight_at(weights, blk[1]);
  const auto [z1, z2] =
      prox_fused_block2_scaled(x[blk[0]], x[blk[1]], gamma * strength_, q1, q2);
  out[blk[0]] = z1;
  out[blk[1]] = z2;
}

void FusedHalfPenalty::scaled_prox(std::span<const double> x, double gamma,
                                   std::span<const double> weights,
                                   std::span<double> out) const {
  for (std::size_t b = 0; b < part_.n_blocks(); ++b)
    prox_block(b, x, gamma, weights, out);
}

void FusedHalfPenalty::scaled_prox_coords(std::span<const double> x, double gamma,
                                          std::span<const double> weights,
                                          std::span<const Index> coords,
                                          std::span<double> out) const {
  Index last_block = -1;
  for (Index c : coords) {
    const Index b = part_.block_of(c);
    if (b == last_block) continue;
    last_block = b;
    const auto blk = part_.block(b);
    if (blk.size() == 1) {
      out[c] = x[c];
      continue;
    }
    double z1 = x[blk[0]], z2 = x[blk[1]];
    if (strength_ != 0.0 && gamma != 0.0) {
      const double q1 = 1.0 / weight_at(weights, blk[0]);
      const double q2 = 1.0 / weight_at(weights, blk[1]);
      std::tie(z1, z2) =
          prox_fused_block2_scaled(z1, z2, gamma * strength_, q1, q2);
    }
    if (blk[0] == c || contains(coords, blk[0])) out[blk[0]] = z1;
    if (blk[1] == c || contains(coords, blk[1])) out[blk[1]] = z2;
  }
}

void FusedHalfPenalty::scaled_prox_blocks(std::span<const double> x, double gamma,
                                          std::span<const double> weights,
                                          std::span<const Index> block_ids,
                                          std::span<double> out) const {
  for (Index b : block_ids) prox_block(b, x, gamma, weights, out);
}

std::pair<std::unique_ptr<Penalty>, std::unique_ptr<Penalty>> fused_lasso_split(
    std::size_t p, double strength) {
  if (p < 2) throw ConfigError("fused_lasso_split: p must be >= 2");
  return {std::make_unique<FusedHalfPenalty>(p, 0, strength),
          std::make_unique<FusedHalfPenalty>(p, 1, strength)};
}

// ---------------------------------------------------------------------------
// Douglas-Rachford prox of a sum

std::vector<double> dr_prox_sum(std::span<const double> x, double gamma,
                                const Penalty& g, const Penalty& h,
                                std::size_t iters, std::vector<double>* warm) {
  const std::size_t p = x.size();
  std::vector<double> local;
  std::vector<double>* s;
  if (warm == nullptr) {
    local.assign(x.begin(), x.end());
    s = &local;
  } else {
    if (warm->size() != p) warm->assign(x.begin(), x.end());
    s = warm;
  }
  std::vector<double> a(p), b(p), u(p);
  for (std::size_t it = 0; it < iters; ++it) {
    // Splitting pair: phi1 = h + ||. - x||^2 / (2 gamma), phi2 = g.
    // With h = 0 a single sweep already returns prox_{gamma g}(x).
    for (std::size_t j = 0; j < p; ++j) u[j] = 0.5 * (x[j] + (*s)[j]);
    h.scaled_prox(u, 0.5 * gamma, {}, a);
    for (std::size_t j = 0; j < p; ++j) u[j] = 2.0 * a[j] - (*s)[j];
    g.scaled_prox(u, gamma, {}, b);
    for (std::size_t j = 0; j < p; ++j) (*s)[j] += b[j] - a[j];
  }
  return b;
}

// ---------------------------------------------------------------------------
// Group descriptions

GroupSpec load_groups_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("groups json: ") + e.what(), 0);
  }
  GroupSpec spec;
  if (!j.contains("groups") || !j["groups"].is_array())
    throw ConfigError("groups json: missing 'groups' array");
  for (const auto& g : j["groups"]) {
    std::vector<Index> grp;
    for (const auto& c : g) grp.push_back(c.get<Index>());
    spec.groups.push_back(std::move(grp));
  }
  spec.strength = j.value("strength", 0.0);
  if (spec.strength < 0.0) throw ConfigError("groups json: strength must be >= 0");
  return spec;
}

std::vector<std::vector<Index>> chained_groups(std::size_t p, std::size_t size,
                                               std::size_t overlap) {
  if (size < 1 || overlap >= size)
    throw ConfigError("chained_groups: need 0 <= overlap < size");
  std::vector<std::vector<Index>> groups;
  const std::size_t stride = size - overlap;
  for (std::size_t start = 0; start + size <= p; start += stride) {
    std::vector<Index> g(size);
    for (std::size_t j = 0; j < size; ++j) g[j] = static_cast<Index>(start + j);
    groups.push_back(std::move(g));
  }
  if (groups.empty()) throw ConfigError("chained_groups: p too small for one group");
  return groups;
}

std::pair<std::vector<std::vector<Index>>, std::vector<std::vector<Index>>>
split_groups_odd_even(const std::vector<std::vector<Index>>& groups) {
  std::vector<std::vector<Index>> odd, even;
  for (std::size_t g = 0; g < groups.size(); ++g)
    (g % 2 == 0 ? odd : even).push_back(groups[g]);
  return {odd, even};
}

}  // namespace vrtos
