#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "specreg/config.hpp"
#include "specreg/stats.hpp"

using namespace specreg;
using nlohmann::json;

TEST_CASE("wilson interval") {
  const double z2 = stats::kZ95 * stats::kZ95;
  const auto zero = stats::wilson(0, 10);
  CHECK(zero.lo == doctest::Approx(0.0));
  CHECK(zero.hi == doctest::Approx(z2 / (10.0 + z2)));
  const auto all = stats::wilson(10, 10);
  CHECK(all.hi == doctest::Approx(1.0));
  // Direct formula at k = 30, n = 100.
  const double p = 0.3, n = 100.0;
  const double center = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = stats::kZ95 / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  const auto w = stats::wilson(30, 100);
  CHECK(w.lo == doctest::Approx(center - half));
  CHECK(w.hi == doctest::Approx(center + half));
  CHECK_THROWS(stats::wilson(5, 0));
}

TEST_CASE("log-log slope") {
  std::vector<stats::LogLogPoint> pts;
  for (double x : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) pts.push_back({x, 3.0 * x * x, 1.0});
  const auto f = stats::fit_loglog_slope(pts);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)));
  CHECK(f.points == 5);
  pts.resize(3);
  CHECK_THROWS(stats::fit_loglog_slope(pts));
}

TEST_CASE("tail points skip empty and saturated counts") {
  const auto pts = stats::tail_points({1, 2, 3, 4}, {0, 5, 10, 10}, 10);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].x == 2.0);
  CHECK(pts[0].p == doctest::Approx(0.5));
  CHECK(pts[0].weight == doctest::Approx(10.0));
}

TEST_CASE("quantile and mean") {
  CHECK(stats::quantile({4, 1, 3, 2}, 0.5) == doctest::Approx(2.5));
  CHECK(stats::quantile({4, 1, 3, 2}, 0.0) == doctest::Approx(1.0));
  CHECK(stats::quantile({4, 1, 3, 2}, 1.0) == doctest::Approx(4.0));
  CHECK(stats::quantile({1, 2, 3, 4, 5}, 0.9) == doctest::Approx(4.6));
  const auto m = stats::mean_estimate({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(m.ci95.lo < 2.5);
  CHECK(m.ci95.hi > 2.5);
}

TEST_CASE("log grid") {
  const auto g = log_grid(1e-4, 1e-2);
  CHECK(g.size() == 17);
  CHECK(g.front() == doctest::Approx(1e-4));
  CHECK(g.back() == doctest::Approx(1e-2));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(10.0, 0.125)));
}

TEST_CASE("complex literals") {
  CHECK(parse_complex("0.3i") == cplx(0.0, 0.3));
  CHECK(parse_complex("1-2i") == cplx(1.0, -2.0));
  CHECK(parse_complex("-1.5e-1+2j") == cplx(-0.15, 2.0));
  CHECK(parse_complex("4") == cplx(4.0, 0.0));
  CHECK(parse_complex("-i") == cplx(0.0, -1.0));
  CHECK_THROWS_AS(parse_complex("1+"), InvalidInput);
  CHECK_THROWS_AS(parse_complex("abc"), InvalidInput);
  CHECK(parse_complex(format_complex({0.25, -3.0})) == cplx(0.25, -3.0));
}

TEST_CASE("minimal config gets defaults and validates") {
  const auto cfg = with_defaults(parse_config(json{{"experiment", "sv-tail"}}));
  CHECK_NOTHROW(validate(cfg));
  CHECK(cfg.grid.size() == 17);
  REQUIRE(cfg.slope_band.has_value());
  CHECK(cfg.slope_band->lo == doctest::Approx(0.8));

  const auto cx = with_defaults(parse_config(json{{"experiment", "sv-tail"}, {"law", "complex-gaussian"}}));
  CHECK(cx.slope_band->lo == doctest::Approx(1.7));

  const auto cal = with_defaults(parse_config(json{{"experiment", "calibrate"}}));
  CHECK(cal.n_list == std::vector<int>{10, 20});
}

TEST_CASE("validation aggregates every problem") {
  auto cfg = parse_config(json{{"experiment", "gap"}, {"trials", -5}, {"delta", 2.0}, {"n", 0}});
  try {
    validate(with_defaults(cfg));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() >= 3);
  }
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(parse_config(json{{"experiment", "gap"}, {"trails", 10}}), InvalidInput);
  CHECK_THROWS_AS(parse_config(json{{"shift", {{"zz", "1i"}}}}), InvalidInput);
  CHECK_THROWS_AS(parse_config(json{{"law", "bernoulli"}}), InvalidInput);
}

TEST_CASE("config round trips through json") {
  auto cfg = with_defaults(parse_config(json{{"experiment", "shifted-sv"},
                                             {"n", 6},
                                             {"shift", {{"z", "0.1+0.4i"}}},
                                             {"kprime", 2.5}}));
  const auto back = with_defaults(parse_config(to_json(cfg)));
  CHECK(to_json(back) == to_json(cfg));
  CHECK(back.z == cplx(0.1, 0.4));
  CHECK(*back.kprime == 2.5);
}

TEST_CASE("manifest config section is accepted") {
  const json manifest = {{"subcommand", "bench"}, {"config", {{"experiment", "gap"}, {"n", 7}}}};
  const auto cfg = parse_config(manifest);
  CHECK(cfg.experiment == ExperimentKind::Gap);
  CHECK(cfg.n == 7);
}

TEST_CASE("profiles") {
  CHECK(make_profile("zero", 4) == DenseMatrix::zeros(4));
  CHECK(make_profile("jordan", 4) == DenseMatrix::jordan(4));
  const auto d = make_profile("diag-grid", 5);
  CHECK(d(0, 0) == cplx(-1.0));
  CHECK(d(4, 4) == cplx(1.0));
  CHECK_THROWS_AS(make_profile("nope", 4), InvalidInput);
}
