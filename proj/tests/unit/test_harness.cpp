#include <doctest.h>

#include <cmath>

#include "jumpsde/error.hpp"
#include "jumpsde/harness.hpp"
#include "jumpsde/paths.hpp"

using namespace jumpsde;

namespace {

ModelParams set_one(double lambda) {
  auto p = parameter_set_one();
  p.lambda = lambda;
  return p;
}

}  // namespace

TEST_CASE("order fit recovers exact power laws") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 5; i <= 9; ++i) {
    const double dt = std::ldexp(1.0, -i);
    pts.emplace_back(dt, 3.0 * dt);
  }
  auto fit = fit_order(pts);
  CHECK(fit.slope == doctest::Approx(1.0));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)));
  CHECK(fit.r2 == doctest::Approx(1.0));

  for (auto& [dt, err] : pts) err = 0.1 * std::sqrt(dt);
  CHECK(fit_order(pts).slope == doctest::Approx(0.5));
  CHECK_THROWS_AS(fit_order({{0.1, 1.0}}), Error);
  CHECK_THROWS_AS(fit_order({{0.1, 1.0}, {0.1, 2.0}}), Error);
  CHECK_THROWS_AS(fit_order({{0.1, 0.0}, {0.2, 2.0}}), Error);
}

TEST_CASE("ladder is deterministic and independent of parallelism") {
  const auto p = set_one(1.0);
  const LadderSpec ladder{{8, 16, 32}, 128};
  RunConfig run;
  run.n_paths = 64;
  run.seed = 99;
  run.parallelism = 1;
  const auto serial = strong_error_ladders(p, JumpCoefficient::linear(-0.5),
                                           {Scheme::Tjabem, Scheme::Bem}, ladder, run);
  run.parallelism = 4;
  const auto threaded = strong_error_ladders(p, JumpCoefficient::linear(-0.5),
                                             {Scheme::Tjabem, Scheme::Bem}, ladder, run);
  REQUIRE(serial.size() == 2);
  for (std::size_t s = 0; s < 2; ++s) {
    REQUIRE(serial[s].points.size() == 3);
    CHECK(serial[s].points.front().M == 8);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(serial[s].points[i].error_l1 == threaded[s].points[i].error_l1);
      CHECK(serial[s].points[i].error_l2 == threaded[s].points[i].error_l2);
      CHECK(serial[s].points[i].error_l1 > 0.0);
    }
    CHECK(serial[s].fit.slope == threaded[s].fit.slope);
  }
  CHECK(serial[0].scheme == Scheme::Tjabem);
  CHECK(serial[1].scheme == Scheme::Bem);
}

TEST_CASE("ladder errors shrink for the transformed scheme") {
  const auto p = set_one(1.0);
  RunConfig run;
  run.n_paths = 200;
  const auto r = strong_error_ladder(p, JumpCoefficient::linear(-0.5), Scheme::Tjabem,
                                     {{16, 32, 64, 128}, 1024}, run);
  CHECK(monotone_pairs(r) >= 2);
  CHECK(r.fit.slope > 0.7);
  CHECK(r.fit.slope < 1.3);
}

TEST_CASE("ladder rejects a step count that does not divide the reference") {
  RunConfig run;
  run.n_paths = 4;
  CHECK_THROWS_AS(strong_error_ladder(set_one(1.0), JumpCoefficient::zero(), Scheme::Tjabem,
                                      {{24}, 128}, run),
                  Error);
}

TEST_CASE("a failing path reports the lowest failing index and its seed") {
  const auto p = set_one(5.0);
  const auto h = JumpCoefficient::custom(
      "boom", [](double) -> double { throw Error(ErrorKind::Domain, "boom"); },
      [](double) { return 0.0; });
  std::uint64_t first_jump = 0;
  while (generate_bundle(p, 64, 3, first_jump).jump_times.empty()) ++first_jump;

  for (unsigned threads : {1u, 3u}) {
    RunConfig run;
    run.n_paths = 40;
    run.seed = 3;
    run.parallelism = threads;
    try {
      strong_error_ladder(p, h, Scheme::Tjabem, {{16}, 64}, run);
      FAIL("expected a path failure");
    } catch (const PathFailure& e) {
      CHECK(e.path_index() == first_jump);
      CHECK(e.seed() == 3);
      CHECK(std::string(e.what()).find("boom") != std::string::npos);
    }
  }
}

TEST_CASE("positivity table counts every value") {
  std::vector<NamedParams> sets{{"set1", parameter_set_one()}, {"set2", parameter_set_two()}};
  std::vector<JumpCoefficient> jumps{JumpCoefficient::linear(-0.5), JumpCoefficient::sine(1.0)};
  RunConfig run;
  run.n_paths = 50;
  const auto report = positivity_table(sets, jumps, {32, 64}, 1.0, run);
  CHECK(report.cells.size() == 8);
  for (const auto& c : report.cells) {
    CHECK(c.n_values >= 50u * (c.dt == 1.0 / 32 ? 33u : 65u));
    CHECK(c.n_nonpositive == 0);
    CHECK(c.percent == 0.0);
  }
  // Without jumps each path contributes exactly M + 1 values.
  const auto quiet = positivity_table(sets, jumps, {32}, 0.0, run);
  for (const auto& c : quiet.cells) CHECK(c.n_values == 50u * 33u);
}

TEST_CASE("moment probe") {
  RunConfig run;
  run.n_paths = 100;
  const auto t = moment_probe(set_one(1.0), JumpCoefficient::linear(-0.5), 32,
                              {-2.0, 0.0, 2.0}, run);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[1].sup_mean == doctest::Approx(1.0));
  CHECK(t.rows[1].terminal_mean == doctest::Approx(1.0));
  for (const auto& r : t.rows) {
    CHECK(std::isfinite(r.sup_mean));
    CHECK(r.sup_mean >= r.terminal_mean * (1 - 1e-12));
  }
}
