#include <doctest.h>

#include "vrtos/errors.hpp"
#include "vrtos/structure.hpp"
#include "support.hpp"

using namespace vrtos;
using vrtos::testing::make_dataset;

TEST_CASE("extended supports are the blocks intersecting the row support") {
  const auto ds = make_dataset(6, {{{0, 1.0}, {3, 2.0}}}, {1.0});
  const auto part = BlockPartition::from_blocks(6, {{0, 1}, {2, 3}, {4, 5}});
  const auto supports = ExtendedSupportSet::compute(ds.features, part);
  const auto blocks = supports.blocks_of(0);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0] == 0);
  CHECK(blocks[1] == 1);
  const auto coords = supports.coords_of(0);
  REQUIRE(coords.size() == 4);
  CHECK(coords[0] == 0);
  CHECK(coords[3] == 3);
}

TEST_CASE("dense row touches every block, empty row touches none") {
  const auto ds = make_dataset(
      4, {{{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}}, {}}, {1.0, -1.0});
  const auto part = BlockPartition::from_blocks(4, {{0, 1}, {2, 3}});
  const auto supports = ExtendedSupportSet::compute(ds.features, part);
  CHECK(supports.blocks_of(0).size() == 2);
  CHECK(supports.blocks_of(1).size() == 0);
  CHECK(supports.coords_of(1).size() == 0);
}

TEST_CASE("reweighting is the inverse block frequency") {
  // n = 2: T_1 = {B0}, T_2 = {B0, B1} -> d = (1, 2).
  const auto ds = make_dataset(2, {{{0, 1.0}}, {{0, 1.0}, {1, 2.0}}}, {1.0, -1.0});
  const auto part = BlockPartition::from_blocks(2, {{0}, {1}});
  const auto supports = ExtendedSupportSet::compute(ds.features, part);
  const auto w = compute_reweighting(supports, part, 2);
  CHECK(w.d[0] == 1.0);
  CHECK(w.d[1] == 2.0);
  CHECK(w.d_max == 2.0);
}

TEST_CASE("dense data gives the identity reweighting") {
  const LabeledDataset ds = generate_synthetic(10, 6, 1.0, TaskKind::squared, 4);
  const auto part = BlockPartition::from_blocks(6, {{0, 1, 2}, {3, 4, 5}});
  const auto supports = ExtendedSupportSet::compute(ds.features, part);
  const auto w = compute_reweighting(supports, part, 10);
  for (double v : w.d) CHECK(v == 1.0);
  CHECK(w.d_max == 1.0);
}

TEST_CASE("reweighting satisfies the mask identity per coordinate") {
  const LabeledDataset ds = generate_synthetic(40, 18, 0.15, TaskKind::squared, 8);
  const auto part =
      BlockPartition::from_blocks(18, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8},
                                       {9, 10, 11}, {12, 13, 14}, {15, 16, 17}});
  const auto supports = ExtendedSupportSet::compute(ds.features, part);
  const auto w = compute_reweighting(supports, part, 40);
  for (double v : w.d) CHECK(v >= 1.0);

  // (1/n) sum_i IND(c in flatten(T_i)) * d_c = 1 for every coordinate.
  std::vector<double> freq(18, 0.0);
  for (std::size_t i = 0; i < 40; ++i)
    for (Index c : supports.coords_of(i)) freq[c] += 1.0;
  for (std::size_t c = 0; c < 18; ++c)
    CHECK(freq[c] / 40.0 * w.d[c] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("a block never touched by any sample is a configuration error") {
  const auto ds = make_dataset(2, {{{0, 1.0}}, {{1, 1.0}}}, {1.0, -1.0});
  const auto part = BlockPartition::from_blocks(4, {{0, 1}, {2, 3}});
  const auto supports = ExtendedSupportSet::compute(ds.features, part);
  try {
    (void)compute_reweighting(supports, part, 2);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("block 1") != std::string::npos);
  }
}
