#include <doctest.h>

#include <cmath>

#include "vrtos/model.hpp"
#include "vrtos/errors.hpp"
#include "support.hpp"

using namespace vrtos;
using vrtos::testing::make_dataset;
using vrtos::testing::max_abs_diff;

namespace {

SmoothModel random_model(std::size_t n, std::size_t p, LossKind loss,
                         double l2, std::uint64_t seed) {
  return SmoothModel(
      generate_synthetic(n, p, 0.6,
                         loss == LossKind::logistic ? TaskKind::logistic
                                                    : TaskKind::squared,
                         seed),
      loss, l2);
}

}  // namespace

TEST_CASE("scalar derivatives at reference points") {
  const SmoothModel sq(make_dataset(1, {{{0, 1.0}}}, {1.0}), LossKind::squared, 0.0);
  CHECK(sq.scalar_derivative(0, 1.0) == 0.0);

  const SmoothModel lg(make_dataset(1, {{{0, 1.0}}}, {1.0}), LossKind::logistic, 0.0);
  CHECK(lg.scalar_derivative(0, 0.0) == doctest::Approx(-0.5).epsilon(1e-15));

  const SmoothModel lgneg(make_dataset(1, {{{0, 1.0}}}, {-1.0}), LossKind::logistic, 0.0);
  CHECK(lgneg.scalar_derivative(0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));

  // Stable at extreme margins.
  CHECK(std::isfinite(lg.scalar_derivative(0, 1e4)));
  CHECK(std::isfinite(lg.scalar_derivative(0, -1e4)));
  CHECK(std::isfinite(lg.scalar_loss(0, -1e4)));
}

TEST_CASE("partial gradient inherits the sparsity pattern") {
  const auto ds = make_dataset(8, {{{2, 1.5}, {6, -2.0}}}, {1.0});
  const SmoothModel model(ds, LossKind::logistic, 0.0);
  std::vector<double> z(8, 0.3), grad(8);
  model.partial_gradient(0, z, grad);
  for (std::size_t j = 0; j < 8; ++j)
    if (j != 2 && j != 6) CHECK(grad[j] == 0.0);
}

TEST_CASE("partial gradient of a unit-vector sample") {
  // a = e_0, b = 0, squared loss, z = (3, ...): gradient = 3 e_0.
  const auto ds = make_dataset(3, {{{0, 1.0}}}, {0.0});
  const SmoothModel model(ds, LossKind::squared, 0.0);
  std::vector<double> z = {3.0, 5.0, -1.0}, grad(3);
  model.partial_gradient(0, z, grad);
  CHECK(grad[0] == 3.0);
  CHECK(grad[1] == 0.0);
  CHECK(grad[2] == 0.0);
}

TEST_CASE("mean of partial gradients plus ridge equals the full gradient") {
  RandomStream rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto loss = trial % 2 == 0 ? LossKind::logistic : LossKind::squared;
    const SmoothModel model = random_model(12, 9, loss, 0.3, 100 + trial);
    const std::vector<double> z = vrtos::testing::random_vector(rng, 9);
    std::vector<double> full(9), acc(9, 0.0), part(9);
    model.full_gradient(z, full);
    for (std::size_t i = 0; i < model.n(); ++i) {
      model.partial_gradient(i, z, part);
      for (std::size_t j = 0; j < 9; ++j) acc[j] += part[j] / 12.0;
    }
    for (std::size_t j = 0; j < 9; ++j) acc[j] += 0.3 * z[j];
    CHECK(max_abs_diff(full, acc) <= 1e-12 * (1.0 + vrtos::testing::inf_norm(full)));
  }
}

TEST_CASE("full gradient matches central finite differences") {
  RandomStream rng(22);
  for (int trial = 0; trial < 8; ++trial) {
    const auto loss = trial % 2 == 0 ? LossKind::logistic : LossKind::squared;
    const std::size_t n = 4 + rng.bounded(16), p = 3 + rng.bounded(17);
    SmoothModel model(
        generate_synthetic(n, p, 0.7,
                           loss == LossKind::logistic ? TaskKind::logistic
                                                      : TaskKind::squared,
                           300 + trial),
        loss, 0.1);
    const std::vector<double> z = vrtos::testing::random_vector(rng, p, -1.0, 1.0);
    std::vector<double> grad(p);
    model.full_gradient(z, grad);
    const double eps = 1e-6;
    for (std::size_t j = 0; j < p; ++j) {
      std::vector<double> zp = z, zm = z;
      zp[j] += eps;
      zm[j] -= eps;
      const double fd = (model.smooth_value(zp) - model.smooth_value(zm)) / (2 * eps);
      CHECK(std::abs(grad[j] - fd) <= 1e-5 * (1.0 + std::abs(fd)));
    }
  }
}

TEST_CASE("full gradient degenerate cases") {
  // Perfect squared fit with no ridge: stationary, gradient is zero.
  const auto fit = make_dataset(2, {{{0, 1.0}}, {{1, 2.0}}}, {3.0, 4.0});
  const SmoothModel squared(fit, LossKind::squared, 0.0);
  std::vector<double> grad(2);
  squared.full_gradient(std::vector<double>{3.0, 2.0}, grad);
  CHECK(grad == std::vector<double>{0.0, 0.0});

  // n = 1: full gradient equals the partial gradient plus the ridge term.
  const auto one = make_dataset(3, {{{0, 1.5}, {2, -0.5}}}, {1.0});
  const SmoothModel single(one, LossKind::logistic, 0.25);
  const std::vector<double> z = {0.4, -1.0, 0.7};
  std::vector<double> full(3), part(3);
  single.full_gradient(z, full);
  single.partial_gradient(0, z, part);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(full[j] == doctest::Approx(part[j] + 0.25 * z[j]).epsilon(1e-15));
}

TEST_CASE("smooth value reference points and naive-sum oracle") {
  const auto ds = make_dataset(2, {{{0, 1.0}}, {{1, 2.0}}}, {1.0, -1.0});
  const SmoothModel logistic(ds, LossKind::logistic, 0.0);
  const std::vector<double> zero(2, 0.0);
  CHECK(logistic.smooth_value(zero) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  // Perfect squared fit: b_i = a_i^T z.
  const auto fit = make_dataset(2, {{{0, 1.0}}, {{1, 2.0}}}, {3.0, 4.0});
  const SmoothModel squared(fit, LossKind::squared, 0.0);
  const std::vector<double> z = {3.0, 2.0};
  CHECK(squared.smooth_value(z) == 0.0);

  RandomStream rng(23);
  const SmoothModel model = random_model(15, 8, LossKind::logistic, 0.05, 407);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> x = vrtos::testing::random_vector(rng, 8, -1.5, 1.5);
    double naive = 0.0;
    for (std::size_t i = 0; i < model.n(); ++i) {
      const double m = model.dataset().labels[i] * model.row_dot(i, x.data());
      naive += std::log(1.0 + std::exp(-m));
    }
    naive /= static_cast<double>(model.n());
    double sq = 0.0;
    for (double v : x) sq += v * v;
    naive += 0.5 * 0.05 * sq;
    CHECK(model.smooth_value(x) == doctest::Approx(naive).epsilon(1e-12));
  }
}

TEST_CASE("smoothness constants") {
  // Squared loss, single row a = (1, 0), no ridge: L_f = 1.
  const SmoothModel sq(make_dataset(2, {{{0, 1.0}}}, {0.0}), LossKind::squared, 0.0);
  CHECK(sq.smoothness_constants(1.0).l_f() == 1.0);

  // Logistic with ||a_i||^2 = 4 for all i: L_psi = 1.
  const SmoothModel lg(make_dataset(1, {{{0, 2.0}}, {{0, -2.0}}}, {1.0, -1.0}),
                       LossKind::logistic, 0.0);
  CHECK(lg.smoothness_constants(1.0).l_psi == 1.0);

  // L_f = L_psi + d_max * L_omega = 1 + 2 * 0.5.
  const SmoothModel mix(make_dataset(1, {{{0, 1.0}}}, {0.0}), LossKind::squared, 0.5);
  CHECK(mix.smoothness_constants(2.0).l_f() == 2.0);

  CHECK_THROWS_AS(SmoothModel(LabeledDataset{}, LossKind::squared, 0.0), ConfigError);
}

TEST_CASE("descent lemma holds at the derived step size") {
  RandomStream rng(24);
  const SmoothModel model = random_model(25, 12, LossKind::logistic, 0.2, 501);
  const double gamma = 1.0 / model.smoothness_constants(1.0).l_f();
  std::vector<double> grad(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> z = vrtos::testing::random_vector(rng, 12);
    model.full_gradient(z, grad);
    std::vector<double> next(12);
    for (std::size_t j = 0; j < 12; ++j) next[j] = z[j] - gamma * grad[j];
    CHECK(model.smooth_value(next) <= model.smooth_value(z) + 1e-12);
  }
}

TEST_CASE("logistic labels are validated") {
  CHECK_THROWS_AS(SmoothModel(make_dataset(1, {{{0, 1.0}}}, {0.5}),
                              LossKind::logistic, 0.0),
                  ConfigError);
}
