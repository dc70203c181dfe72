#include <numbers>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "specreg/error.hpp"
#include "specreg/linalg.hpp"
#include "specreg/noise.hpp"
#include "specreg/perturb.hpp"
#include "specreg/stats.hpp"

using namespace specreg;

TEST_CASE("law catalog") {
  CHECK(NoiseLaw::parse("real-gaussian").density_bound() ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
  CHECK(NoiseLaw::parse("real-uniform").density_bound() ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))));
  CHECK(NoiseLaw::parse("complex-gaussian").density_bound() ==
        doctest::Approx(1.0 / std::numbers::pi));
  CHECK(NoiseLaw::parse("complex-gaussian").is_complex());
  CHECK_THROWS_AS(NoiseLaw::parse("bernoulli"), InvalidInput);
  for (auto name : {"real-gaussian", "real-uniform", "complex-gaussian"}) {
    CHECK(NoiseLaw::parse(name).name() == name);
  }
}

TEST_CASE("streams are deterministic and distinct") {
  StreamRng a(1, {2, 3}), b(1, {2, 3}), c(1, {2, 4}), d(2, {2, 3});
  std::set<double> firsts;
  for (int i = 0; i < 5; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  firsts.insert(StreamRng(1, {2, 3}).uniform());
  firsts.insert(c.uniform());
  firsts.insert(d.uniform());
  CHECK(firsts.size() == 3);
}

namespace {

std::vector<double> real_parts(const NoiseLaw& law, int count, std::uint64_t seed) {
  StreamRng rng(seed, {0x4b53});
  std::vector<double> v(static_cast<std::size_t>(count));
  for (auto& x : v) x = law.sample(rng).real();
  return v;
}

}  // namespace

TEST_CASE("laws pass a Kolmogorov-Smirnov test at 1e5 samples") {
  const int count = 100000;
  const double crit = stats::ks_critical_1pct(count);
  const double s3 = std::sqrt(3.0);

  const auto g = real_parts(NoiseLaw(LawKind::RealGaussian), count, 1);
  CHECK(stats::ks_statistic(g, [](double x) { return oracle::normal_cdf(x); }) < crit);

  const auto u = real_parts(NoiseLaw(LawKind::RealUniform), count, 2);
  CHECK(stats::ks_statistic(u, [&](double x) {
          return std::clamp((x + s3) / (2.0 * s3), 0.0, 1.0);
        }) < crit);

  const auto c = real_parts(NoiseLaw(LawKind::ComplexGaussian), count, 3);
  CHECK(stats::ks_statistic(c, [](double x) { return oracle::normal_cdf(x, std::sqrt(0.5)); }) <
        crit);

  // A wrong law is rejected.
  CHECK(stats::ks_statistic(u, [](double x) { return oracle::normal_cdf(x); }) > crit);
}

TEST_CASE("law cdfs agree with the oracle") {
  for (double x : {-2.0, -0.5, 0.0, 0.7, 1.9}) {
    CHECK(NoiseLaw(LawKind::RealGaussian).real_part_cdf(x) ==
          doctest::Approx(oracle::normal_cdf(x)));
    CHECK(NoiseLaw(LawKind::ComplexGaussian).real_part_cdf(x) ==
          doctest::Approx(oracle::normal_cdf(x, std::sqrt(0.5))));
  }
}

TEST_CASE("complex law has unit variance and independent parts") {
  StreamRng rng(9, {1});
  const NoiseLaw law(LawKind::ComplexGaussian);
  double sum2 = 0.0, cross = 0.0;
  const int count = 100000;
  for (int i = 0; i < count; ++i) {
    const cplx z = law.sample(rng);
    sum2 += std::norm(z);
    cross += z.real() * z.imag();
  }
  CHECK(sum2 / count == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(cross / count) < 0.01);
}

TEST_CASE("sample_gn scaling and tags") {
  const auto g = sample_gn(NoiseLaw(LawKind::RealGaussian), 200, 5);
  CHECK(g.is_real());
  CHECK(g.rows() == 200);
  double fro = 0.0;
  for (std::size_t i = 0; i < 200; ++i)
    for (std::size_t j = 0; j < 200; ++j) fro += std::norm(g(i, j));
  CHECK(fro / 200.0 == doctest::Approx(1.0).epsilon(0.02));
  // ||G_n|| concentrates near 2 for large n.
  CHECK(op_norm(g) == doctest::Approx(2.0).epsilon(0.08));
  CHECK_FALSE(sample_gn(NoiseLaw(LawKind::ComplexGaussian), 4, 5).is_real());
  CHECK(sample_gn(NoiseLaw(LawKind::RealUniform), 4, 5) ==
        sample_gn(NoiseLaw(LawKind::RealUniform), 4, 5));
}

TEST_CASE("kappa thresholds") {
  CHECK(kappa_threshold(ThresholdShape::Complex, 2.0, 10, 0.5) == doctest::Approx(400.0));
  CHECK(kappa_threshold(ThresholdShape::RealLog, 2.0, 10, 0.5) ==
        doctest::Approx(400.0 * std::sqrt(std::log(20.0))));
  CHECK(shape_for(NoiseLaw(LawKind::RealUniform)) == ThresholdShape::RealLog);
  CHECK(shape_for(NoiseLaw(LawKind::ComplexGaussian)) == ThresholdShape::Complex);
  for (auto k : {LawKind::RealGaussian, LawKind::RealUniform, LawKind::ComplexGaussian}) {
    const auto d = default_thresholds(NoiseLaw(k));
    CHECK(d.c1 > 0.0);
    CHECK(d.c2 > 1.0);
  }
}

TEST_CASE("regularize domain checks") {
  RegularizeOptions o;
  o.delta = 0.9;
  CHECK_THROWS_AS(regularize(DenseMatrix::jordan(4), o), InvalidInput);
  o.delta = 0.1;
  CHECK_THROWS_AS(regularize(3.0 * DenseMatrix::jordan(4), o), InvalidInput);
  o.max_attempts = 0;
  CHECK_THROWS_AS(regularize(DenseMatrix::jordan(4), o), InvalidInput);
  o.max_attempts = 4;
  o.law = NoiseLaw(LawKind::ComplexGaussian);
  CHECK_THROWS_AS(regularize(DenseMatrix::jordan(4), o), InvalidInput);
  o.law = NoiseLaw(LawKind::RealGaussian);
  CHECK_THROWS_AS(complex_regularize(DenseMatrix::jordan(4), o), InvalidInput);
}

TEST_CASE("regularize a Jordan block") {
  RegularizeOptions o;
  o.delta = 0.25;
  o.seed = 17;
  const auto a = DenseMatrix::jordan(10);
  const auto r = regularize(a, o);
  CHECK(r.succeeded);
  REQUIRE(r.decomposition.has_value());
  CHECK(r.perturbed == a + r.perturbation);
  CHECK(r.perturbed.is_real());
  CHECK(r.e_norm == doctest::Approx(op_norm(r.perturbation)));
  CHECK(r.e_norm <= r.c2_threshold * o.delta);
  CHECK(r.report.kappa_v_upper <= r.kappa_threshold);
  CHECK(r.attempts >= 1);

  const auto again = regularize(a, o);
  CHECK(again.perturbed == r.perturbed);

  o.law = NoiseLaw(LawKind::ComplexGaussian);
  const auto c = complex_regularize(a, o);
  CHECK_FALSE(c.perturbed.is_real());
  CHECK(c.shape == ThresholdShape::Complex);
}

TEST_CASE("impossible thresholds exhaust the attempts") {
  RegularizeOptions o;
  o.delta = 0.25;
  o.c1_threshold = 1e-9;
  o.max_attempts = 3;
  const auto r = regularize(DenseMatrix::jordan(6), o);
  CHECK_FALSE(r.succeeded);
  CHECK(r.attempts == 3);
}
