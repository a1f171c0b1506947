#include <doctest.h>

#include <cmath>

#include "vrtos/diagnostics.hpp"
#include "vrtos/memory.hpp"
#include "support.hpp"

using namespace vrtos;
using vrtos::testing::make_dataset;
using vrtos::testing::max_abs_diff;

namespace {

Problem toy_problem(std::shared_ptr<const SmoothModel> model) {
  const std::size_t p = model->dim();
  return Problem::two_term(std::move(model), std::make_shared<ZeroPenalty>(p),
                           std::make_shared<ZeroPenalty>(p));
}

}  // namespace

TEST_CASE("fresh memory reads zero") {
  const auto model = std::make_shared<SmoothModel>(
      make_dataset(3, {{{0, 1.0}}, {{1, 2.0}}}, {1.0, -1.0}), LossKind::squared,
      0.0);
  GradientMemory mem(*model, MemoryScheme::saga_like, 1.0, 1);
  CHECK(mem.factor(0) == 0.0);
  std::vector<double> alpha(3, 1.0);
  mem.read_into(1, alpha);
  CHECK(alpha == std::vector<double>{0.0, 0.0, 0.0});
  for (double v : mem.mean()) CHECK(v == 0.0);
}

TEST_CASE("compressed memory reconstructs a_i l'(a_i^T z) after an update") {
  const auto ds = make_dataset(4, {{{1, 1.5}, {3, -2.0}}}, {1.0});
  const auto model = std::make_shared<SmoothModel>(ds, LossKind::logistic, 0.0);
  GradientMemory mem(*model, MemoryScheme::saga_like, 1.0, 2);
  const std::vector<double> z = {0.1, -0.4, 0.2, 0.9};
  const double lp = model->scalar_derivative(0, model->row_dot(0, z.data()));
  mem.update(0, lp, [&] { return std::span<const double>(z); });
  std::vector<double> alpha(4), expect(4);
  mem.read_into(0, alpha);
  model->partial_gradient(0, z, expect);
  CHECK(alpha == expect);
}

TEST_CASE("svrg snapshot reads evaluate at the snapshot point") {
  const auto model = std::make_shared<SmoothModel>(
      generate_synthetic(6, 5, 0.8, TaskKind::logistic, 3), LossKind::logistic,
      0.0);
  GradientMemory mem(*model, MemoryScheme::svrg_like, 6.0, 4);  // q = n
  std::vector<double> z(5, 0.3);
  mem.refresh_all(z);
  std::vector<double> alpha(5), expect(5);
  for (std::size_t i = 0; i < 6; ++i) {
    mem.read_into(i, alpha);
    model->partial_gradient(i, z, expect);
    CHECK(max_abs_diff(alpha, expect) == 0.0);
  }

  // q = n triggers a refresh on every update.
  std::vector<double> z2(5, -0.7);
  const auto report =
      mem.update(0, 0.0, [&] { return std::span<const double>(z2); });
  CHECK(report.full_refresh);
  CHECK(report.refreshed == 6);
  CHECK(report.extra_grad_evals == 6);
  mem.read_into(2, alpha);
  model->partial_gradient(2, z2, expect);
  CHECK(max_abs_diff(alpha, expect) == 0.0);
}

TEST_CASE("incremental mean update") {
  // n = 2, unit features, alpha = (1, 3), mean 2; update alpha_0 <- 5 gives
  // mean 2 + (5-1)/2 = 4.
  const auto ds = make_dataset(1, {{{0, 1.0}}, {{0, 1.0}}}, {1.0, -1.0});
  const auto model = std::make_shared<SmoothModel>(ds, LossKind::squared, 0.0);
  GradientMemory mem(*model, MemoryScheme::saga_like, 1.0, 5);
  std::vector<double> dummy(1, 0.0);
  auto z = [&] { return std::span<const double>(dummy); };
  mem.update(0, 1.0, z);
  mem.update(1, 3.0, z);
  CHECK(mem.mean()[0] == 2.0);
  mem.update(0, 5.0, z);
  CHECK(mem.mean()[0] == 4.0);
}

TEST_CASE("saga marginal refresh frequency is 1/n") {
  const std::size_t n = 16;
  const auto model = std::make_shared<SmoothModel>(
      generate_synthetic(n, 4, 0.5, TaskKind::squared, 6), LossKind::squared, 0.0);
  GradientMemory mem(*model, MemoryScheme::saga_like, 1.0, 7);
  RandomStream sampler(8);
  std::vector<double> z(4, 0.0);
  auto zf = [&] { return std::span<const double>(z); };
  const std::size_t trials = 100000;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t i = sampler.bounded(n);
    mem.update(i, 0.5, zf);
    if (i == 3) ++hits;
  }
  const double expected = static_cast<double>(trials) / n;
  const double sigma = std::sqrt(trials * (1.0 / n) * (1.0 - 1.0 / n));
  CHECK(std::abs(static_cast<double>(hits) - expected) <= 3.0 * sigma);
}

TEST_CASE("svrg refresh frequency is q/n") {
  const std::size_t n = 10;
  const auto model = std::make_shared<SmoothModel>(
      generate_synthetic(n, 3, 0.7, TaskKind::squared, 9), LossKind::squared, 0.0);
  const double q = 2.5;
  GradientMemory mem(*model, MemoryScheme::svrg_like, q, 10);
  std::vector<double> z(3, 0.1);
  auto zf = [&] { return std::span<const double>(z); };
  const std::size_t trials = 100000;
  std::size_t refreshes = 0;
  for (std::size_t t = 0; t < trials; ++t)
    if (mem.update(t % n, 0.0, zf).full_refresh) ++refreshes;
  const double prob = q / n;
  const double expected = trials * prob;
  const double sigma = std::sqrt(trials * prob * (1.0 - prob));
  CHECK(std::abs(static_cast<double>(refreshes) - expected) <= 3.0 * sigma);
}

TEST_CASE("estimator is unbiased for any memory state") {
  RandomStream rng(11);
  const std::size_t n = 20, p = 8;
  const auto model = std::make_shared<SmoothModel>(
      generate_synthetic(n, p, 0.4, TaskKind::logistic, 12), LossKind::logistic,
      0.15);
  const Problem problem = toy_problem(model);
  GradientMemory mem(*model, MemoryScheme::saga_like, 1.0, 13);

  for (int round = 0; round < 10; ++round) {
    // Random memory state via updates at random points.
    for (int u = 0; u < 15; ++u) {
      const std::size_t i = rng.bounded(n);
      const auto zr = vrtos::testing::random_vector(rng, p);
      const double lp = model->scalar_derivative(i, model->row_dot(i, zr.data()));
      mem.update(i, lp, [&] { return std::span<const double>(zr); });
    }
    const auto z = vrtos::testing::random_vector(rng, p);
    std::vector<double> v(p), acc(p, 0.0), grad(p);
    for (std::size_t i = 0; i < n; ++i) {
      detail::assemble_estimator(*model, mem, i, z, v);
      for (std::size_t j = 0; j < p; ++j) acc[j] += v[j] / n;
    }
    model->full_gradient(z, grad);
    CHECK(max_abs_diff(acc, grad) <=
          1e-12 * (1.0 + vrtos::testing::inf_norm(grad)));
  }
}

TEST_CASE("dense table storage matches the compressed representation") {
  RandomStream rng(14);
  const std::size_t n = 8, p = 6;
  const auto model = std::make_shared<SmoothModel>(
      generate_synthetic(n, p, 0.5, TaskKind::squared, 15), LossKind::squared, 0.0);
  GradientMemory compressed(*model, MemoryScheme::saga_like, 1.0, 16);
  GradientMemory dense(*model, MemoryScheme::saga_like, 1.0, 16,
                       MemoryStorage::dense_table);
  for (int u = 0; u < 30; ++u) {
    const std::size_t i = rng.bounded(n);
    const auto z = vrtos::testing::random_vector(rng, p);
    const double lp = model->scalar_derivative(i, model->row_dot(i, z.data()));
    auto zf = [&] { return std::span<const double>(z); };
    compressed.update(i, lp, zf);
    dense.update(i, lp, zf);
  }
  std::vector<double> a(p), b(p);
  for (std::size_t i = 0; i < n; ++i) {
    compressed.read_into(i, a);
    dense.read_into(i, b);
    CHECK(max_abs_diff(a, b) <= 1e-15);
  }
  CHECK(max_abs_diff(compressed.mean(), dense.mean()) <= 1e-15);
}

TEST_CASE("incremental mean does not drift") {
  RandomStream rng(17);
  const std::size_t n = 50, p = 10;
  const auto model = std::make_shared<SmoothModel>(
      generate_synthetic(n, p, 0.3, TaskKind::squared, 18), LossKind::squared, 0.0);
  GradientMemory mem(*model, MemoryScheme::saga_like, 1.0, 19);
  std::vector<double> z(p);
  double worst = 0.0;
  for (std::size_t t = 0; t < 1000000; ++t) {
    const std::size_t i = rng.bounded(n);
    for (auto& v : z) v = rng.uniform(-5.0, 5.0);
    const double lp = model->scalar_derivative(i, model->row_dot(i, z.data()));
    mem.update(i, lp, [&] { return std::span<const double>(z); });
    if (t % 977 == 0) {
      // Exact mean from the stored factors.
      std::vector<double> exact(p, 0.0);
      for (std::size_t s = 0; s < n; ++s) {
        const double c = mem.factor(s);
        const auto row = model->features().row(s);
        for (std::size_t k = 0; k < row.size(); ++k)
          exact[row.cols[k]] += row.vals[k] * c / n;
      }
      worst = std::max(worst, max_abs_diff(exact, mem.mean()));
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("memory can be initialized at a point") {
  const auto model = std::make_shared<SmoothModel>(
      generate_synthetic(5, 4, 0.9, TaskKind::squared, 20), LossKind::squared, 0.0);
  std::vector<double> x0(4, 0.7);
  GradientMemory mem(*model, MemoryScheme::saga_like, 1.0, 21,
                     MemoryStorage::compressed, x0);
  std::vector<double> alpha(4), expect(4);
  for (std::size_t i = 0; i < 5; ++i) {
    mem.read_into(i, alpha);
    model->partial_gradient(i, x0, expect);
    CHECK(max_abs_diff(alpha, expect) == 0.0);
  }
}
