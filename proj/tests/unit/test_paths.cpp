#include <doctest.h>

#include <cmath>

#include "jumpsde/error.hpp"
#include "jumpsde/paths.hpp"

using namespace jumpsde;

namespace {

ModelParams with_lambda(double lambda) {
  auto p = parameter_set_one();
  p.lambda = lambda;
  return p;
}

}  // namespace

TEST_CASE("bundles are a pure function of (seed, index)") {
  const auto p = with_lambda(2.0);
  const auto a = generate_bundle(p, 64, 42, 3);
  const auto b = generate_bundle(p, 64, 42, 3);
  CHECK(a.jump_times == b.jump_times);
  CHECK(a.fine_mesh == b.fine_mesh);
  CHECK(a.dW_fine == b.dW_fine);
  const auto c = generate_bundle(p, 64, 42, 4);
  CHECK(c.dW_fine != a.dW_fine);
  const auto d = generate_bundle(p, 64, 43, 3);
  CHECK(d.dW_fine != a.dW_fine);
}

TEST_CASE("jump stream is independent of the grid resolution") {
  const auto p = with_lambda(5.0);
  const auto coarse = generate_bundle(p, 32, 9, 0);
  const auto fine = generate_bundle(p, 1024, 9, 0);
  CHECK(coarse.jump_times == fine.jump_times);
}

TEST_CASE("coarsening sums the fine increments over each coarse interval") {
  const auto p = with_lambda(5.0);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto bundle = generate_bundle(p, 256, 5, i);
    const auto coarse = coarsen_increments(bundle, 16);
    CHECK(coarse.mesh == build_mesh(16, 1.0, bundle.jump_times));
    double fine_total = 0.0, coarse_total = 0.0;
    for (double w : bundle.dW_fine) fine_total += w;
    for (double w : coarse.dW) coarse_total += w;
    CHECK(coarse_total == doctest::Approx(fine_total).epsilon(1e-12));
  }
  const auto bundle = generate_bundle(p, 256, 5, 0);
  const auto same = coarsen_increments(bundle, 256);
  CHECK(same.dW == bundle.dW_fine);
  CHECK_THROWS_AS(coarsen_increments(bundle, 48), Error);
}

TEST_CASE("regular increments count jumps per interval") {
  const auto p = with_lambda(5.0);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto bundle = generate_bundle(p, 128, 17, i);
    const auto reg = regular_increments(bundle, 8);
    REQUIRE(reg.dW.size() == 8);
    int total = 0;
    for (int k = 0; k < 8; ++k) {
      int expected = 0;
      for (double t : bundle.jump_times) {
        if (t > k / 8.0 && t <= (k + 1) / 8.0) ++expected;
      }
      CHECK(reg.dN[k] == expected);
      total += reg.dN[k];
    }
    CHECK(total == static_cast<int>(bundle.jump_times.size()));
  }
}

TEST_CASE("Brownian increments have the right variance") {
  const auto p = with_lambda(0.0);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const auto bundle = generate_bundle(p, 16, 1, i);
    double w = 0.0;
    for (double d : bundle.dW_fine) w += d;
    sum += w;
    sum_sq += w * w;
  }
  // W_T ~ N(0, 1): mean within 4 sd of 0, variance within 10%.
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.1));
}
