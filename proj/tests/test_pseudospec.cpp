#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "specreg/error.hpp"
#include "specreg/pseudospec.hpp"

using namespace specreg;

namespace {

DenseMatrix tri2() {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 1.0, 0.0, 2.0;
  return DenseMatrix::real(m);
}

}  // namespace

TEST_CASE("grid region validation and geometry") {
  CHECK_THROWS_AS(GridRegion::disc({}, 1.0, 4), InvalidInput);
  CHECK_THROWS_AS(pseudospectrum_volume(tri2(), GridRegion::disc({}, 1.0, 5000), 0.1),
                  InvalidInput);
  CHECK_THROWS_AS(GridRegion::disc({}, -1.0, 64), InvalidInput);
  CHECK_THROWS_AS(GridRegion::rect({1.0, 0.0}, {0.0, 1.0}, 64), InvalidInput);

  const auto d = GridRegion::disc({1.0, 1.0}, 2.0, 100);
  CHECK(d.area() == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(d.cell_width() == doctest::Approx(0.04));
  CHECK(d.cell_diameter() == doctest::Approx(0.04 * std::numbers::sqrt2));
  CHECK(d.contains({2.9, 1.0}));
  CHECK_FALSE(d.contains({2.9, 2.9}));

  const auto r = GridRegion::rect({0.0, 0.0}, {2.0, 1.0}, 10);
  CHECK(r.area() == doctest::Approx(2.0));
}

TEST_CASE("pruned volume equals the full reference") {
  const auto m = DenseMatrix::complex(oracle::random_complex(4, 7, 0.5));
  for (double eps : {0.05, 0.2, 0.6}) {
    const auto region = GridRegion::disc({0.0, 0.0}, 2.5, 256);
    const auto a = pseudospectrum_volume(m, region, eps);
    const auto b = pseudospectrum_volume_reference(m, region, eps);
    CHECK(a.inside_cells == b.inside_cells);
    CHECK(a.perimeter_cells == b.perimeter_cells);
    CHECK(a.volume == b.volume);
    CHECK(a.volume_error_bound == b.volume_error_bound);
  }
  const auto rect = GridRegion::rect({0.5, -0.5}, {2.5, 0.5}, 200);
  const auto a = pseudospectrum_volume(tri2(), rect, 0.1);
  const auto b = pseudospectrum_volume_reference(tri2(), rect, 0.1);
  CHECK(a.inside_cells == b.inside_cells);
}

TEST_CASE("cell classification matches the closed-form 2x2 oracle") {
  const auto m = tri2();
  const auto region = GridRegion::rect({0.0, -1.0}, {3.0, 1.0}, 128);
  const double eps = 0.3;
  std::int64_t inside = 0;
  const double w = region.cell_width(), h = region.cell_height();
  for (int i = 0; i < 128; ++i) {
    for (int j = 0; j < 128; ++j) {
      const cplx z(0.0 + (i + 0.5) * w, -1.0 + (j + 0.5) * h);
      if (oracle::sigma_min_2x2(1.0 - z, 1.0, 0.0, 2.0 - z) <= eps) ++inside;
    }
  }
  const auto est = pseudospectrum_volume_reference(m, region, eps);
  CHECK(std::abs(est.inside_cells - inside) <= 2);
  CHECK(est.volume == doctest::Approx(static_cast<double>(est.inside_cells) * w * h));
}

TEST_CASE("volume bracket contains a finer estimate") {
  const auto m = tri2();
  const auto coarse = pseudospectrum_volume(m, GridRegion::disc({}, 4.0, 512), 0.2);
  const auto fine = pseudospectrum_volume(m, GridRegion::disc({}, 4.0, 4096), 0.2);
  CHECK(std::abs(coarse.volume - fine.volume) <=
        coarse.volume_error_bound + fine.volume_error_bound);
}

TEST_CASE("normal matrix pseudospectrum is a union of discs") {
  CVector d(2);
  d << 0.0, 2.0;
  const auto m = DenseMatrix::diagonal(d);
  const double eps = 0.25;
  const auto est = pseudospectrum_volume(m, GridRegion::disc({1.0, 0.0}, 3.0, 2048), eps);
  const double exact = 2.0 * std::numbers::pi * eps * eps;
  CHECK(std::abs(est.volume - exact) <= est.volume_error_bound);
}

TEST_CASE("in_pseudospectrum") {
  CHECK(in_pseudospectrum(tri2(), {1.0, 0.0}, 1e-12));
  CHECK_FALSE(in_pseudospectrum(tri2(), {5.0, 0.0}, 0.5));
}

TEST_CASE("volume limit: [[1,1],[0,2]] ratio tends to kappa2^2 = 4") {
  const auto region = GridRegion::disc({}, 4.0, 4096);
  const auto r = vol_limit_check(tri2(), region, {0.2, 0.1, 0.05, 0.025, 0.0125});
  CHECK(r.target == doctest::Approx(4.0));
  REQUIRE(r.points.size() == 5);
  // Monotone up to each point's grid error bracket.
  for (std::size_t i = 1; i < r.points.size(); ++i) {
    const auto& a = r.points[i - 1];
    const auto& b = r.points[i];
    CHECK(std::abs(b.ratio - 4.0) - b.ratio_error <= std::abs(a.ratio - 4.0) + a.ratio_error);
  }
  CHECK(std::abs(r.points.back().ratio - 4.0) <= 0.4);
}

TEST_CASE("volume limit preconditions") {
  const auto region = GridRegion::disc({}, 4.0, 512);
  CHECK_THROWS_AS(vol_limit_check(tri2(), region, {1e-3}), ResolutionError);
  CHECK_THROWS_AS(vol_limit_check(tri2(), region, {0.2, 0.3}), InvalidInput);
  CHECK_THROWS_AS(vol_limit_check(tri2(), region, {}), InvalidInput);
  CHECK_THROWS_AS(vol_limit_check(DenseMatrix::jordan(3), region, {0.5}), NearDefective);
}

TEST_CASE("volume lower bound on a well-conditioned instance") {
  const auto r = vol_bound_check(tri2());
  CHECK(r.kappa2 == doctest::Approx(2.0));
  CHECK(r.gap == doctest::Approx(1.0));
  CHECK(r.epsilon == doctest::Approx(1.0 / 8.0));
  CHECK(r.rhs == doctest::Approx(std::numbers::pi / 2.0));
  CHECK(r.lhs_lower <= r.lhs);
  CHECK(r.lhs <= r.lhs_upper);
  CHECK(r.pass);
}

TEST_CASE("volume lower bound resolution guard") {
  VolBoundOptions o;
  o.max_resolution = 64;
  CHECK_THROWS_AS(vol_bound_check(tri2(), o), ResolutionError);
}

TEST_CASE("volume limit: normal matrix has target n") {
  CVector d(3);
  d << 1.0, 2.0, 3.0;
  const auto r = vol_limit_check(DenseMatrix::diagonal(d), GridRegion::disc({}, 5.0, 4096),
                                 {0.2, 0.1, 0.05});
  CHECK(r.target == doctest::Approx(3.0));
  for (const auto& p : r.points) CHECK(std::abs(p.ratio - 3.0) <= p.ratio_error + 1e-12);
}

TEST_CASE("volume limit: region without eigenvalues") {
  const auto r = vol_limit_check(tri2(), GridRegion::disc({10.0, 0.0}, 1.0, 1024), {0.1, 0.05});
  CHECK(r.target == 0.0);
  for (const auto& p : r.points) CHECK(p.ratio == 0.0);
}

TEST_CASE("volume lower bound, normal closed form") {
  CVector d(2);
  d << 0.0, 1.0;
  const auto r = vol_bound_check(DenseMatrix::diagonal(d));
  CHECK(r.kappa2 == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.epsilon == doctest::Approx(1.0 / (4.0 * std::sqrt(2.0))));
  // Two disjoint discs of radius eps: vol / eps^2 = 2 pi.
  CHECK(std::abs(r.lhs - 2.0 * std::numbers::pi) <= r.lhs_upper - r.lhs_lower);
  CHECK(r.rhs == doctest::Approx(std::numbers::pi / 4.0));
  CHECK(r.pass);
}
