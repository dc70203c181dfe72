#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "specreg/eig.hpp"
#include "specreg/error.hpp"
#include "specreg/linalg.hpp"
#include "specreg/matfun.hpp"
#include "specreg/spectral.hpp"

using namespace specreg;

namespace {

DenseMatrix upper2(double a, double b, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, 0.0, d;
  return DenseMatrix::real(m);
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("2x2 upper triangular closed form") {
  const auto dec = eig(upper2(1.0, 1.0, 2.0));
  REQUIRE(dec.size() == 2);
  CHECK(dec.eigenvalues(0) == cplx(1.0));
  CHECK(dec.eigenvalues(1) == cplx(2.0));
  // kappa = sqrt(1 + b^2 / (a - d)^2) for both eigenvalues.
  const auto k = eigenvalue_condition_numbers(dec);
  CHECK(k[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(k[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(kappa2(dec) == doctest::Approx(2.0));
  CHECK(eigenvalue_gap(dec) == doctest::Approx(1.0));
}

TEST_CASE("normal matrices have kappa_V = 1") {
  const CMatrix q = oracle::random_unitary(5, 4);
  CVector d(5);
  d << 1.0, cplx(0, 2), -1.5, cplx(0.5, 0.5), 3.0;
  const CMatrix m = q * d.asDiagonal() * q.adjoint();
  const auto r = condition_report(eig(DenseMatrix::complex(m)));
  CHECK(r.kappa_v_lower == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.kappa_v_upper == doctest::Approx(1.0).epsilon(1e-10));
  for (double k : r.per_eigenvalue) CHECK(k == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigenvalue condition numbers match the adjugate oracle") {
  for (unsigned seed = 30; seed < 40; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const CMatrix m = oracle::random_complex(n, seed);
    const auto dec = eig(DenseMatrix::complex(m));
    const auto k = eigenvalue_condition_numbers(dec);
    const auto roots = oracle::poly_roots(oracle::charpoly(m));
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx lam = dec.eigenvalues(i);
      const auto it = std::min_element(roots.begin(), roots.end(), [&](cplx a, cplx b) {
        return std::abs(a - lam) < std::abs(b - lam);
      });
      CHECK(std::abs(*it - lam) < 1e-9);
      CHECK(k[static_cast<std::size_t>(i)] ==
            doctest::Approx(oracle::eigenvalue_condition(m, *it)).epsilon(1e-7));
    }
  }
}

TEST_CASE("real input keeps conjugate pairs exact and adjacent") {
  Eigen::MatrixXd m(3, 3);
  m << 0.0, -2.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0;
  const auto ev = eigenvalues(DenseMatrix::real(m));
  REQUIRE(ev.size() == 3);
  CHECK(ev(0) == cplx(0.0, 2.0));
  CHECK(ev(1) == cplx(0.0, -2.0));
  CHECK(ev(2) == cplx(1.0, 0.0));

  const auto r = oracle::random_real(7, 5);
  const auto e = eigenvalues(DenseMatrix::real(r));
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    if (e(i).imag() > 0) {
      REQUIRE(i + 1 < e.size());
      CHECK(e(i + 1) == std::conj(e(i)));
    }
  }
}

TEST_CASE("defective and repeated inputs are rejected") {
  CHECK_THROWS_AS(eig(DenseMatrix::jordan(4)), NearDefective);
  CHECK_THROWS_AS(eig(DenseMatrix::identity(3)), NearDefective);
  try {
    eig(DenseMatrix::identity(2));
  } catch (const NearDefective& e) {
    CHECK(e.gap() == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(eig(DenseMatrix::complex(CMatrix::Zero(2, 3))), InvalidInput);
  CHECK_THROWS_AS(eigenvalue_gap(eig(DenseMatrix::identity(1))), InvalidInput);
}

TEST_CASE("1x1 decomposition") {
  const auto dec = eig(DenseMatrix::identity(1));
  CHECK(dec.eigenvalues(0) == cplx(1.0));
  CHECK(eigenvalue_condition_numbers(dec)[0] == doctest::Approx(1.0));
}

TEST_CASE("residuals, biorthogonality and the kappa bracket") {
  for (unsigned seed = 50; seed < 70; ++seed) {
    const int n = 3 + static_cast<int>(seed % 8);
    const CMatrix m = oracle::random_complex(n, seed, 1.0 / std::sqrt(n));
    const auto dec = eig(DenseMatrix::complex(m));
    const double norm = op_norm(DenseMatrix::complex(m));
    const CMatrix resid = m * dec.right - dec.right * dec.eigenvalues.asDiagonal();
    CHECK(max_abs(resid) <= 1e-8 * norm);
    const CMatrix bi = dec.left.adjoint() * dec.right - CMatrix::Identity(n, n);
    CHECK(max_abs(bi) <= 1e-8);
    const CMatrix lresid = dec.left.adjoint() * m - dec.eigenvalues.asDiagonal() * dec.left.adjoint();
    CHECK(max_abs(lresid) <= 1e-8 * norm * max_abs(dec.left));

    const auto b = kappa_v_bracket(dec);
    const double k2 = kappa2(dec);
    CHECK(1.0 <= b.lower * (1 + 1e-12));
    CHECK(b.lower <= b.upper * (1 + 1e-12));
    CHECK(b.upper <= std::sqrt(static_cast<double>(n)) * k2 * (1 + 1e-12));
  }
}

TEST_CASE("condition report is unitarily invariant") {
  for (unsigned seed = 80; seed < 85; ++seed) {
    const int n = 6;
    const CMatrix m = oracle::random_complex(n, seed, 0.4);
    const CMatrix q = oracle::random_unitary(n, seed + 100);
    const auto a = condition_report(eig(DenseMatrix::complex(m)));
    const auto b = condition_report(eig(DenseMatrix::complex(q * m * q.adjoint())));
    auto ka = a.per_eigenvalue, kb = b.per_eigenvalue;
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    for (std::size_t i = 0; i < ka.size(); ++i) CHECK(std::abs(ka[i] - kb[i]) <= 1e-6 * ka[i]);
    CHECK(std::abs(a.kappa2 - b.kappa2) <= 1e-6 * a.kappa2);
    CHECK(std::abs(a.kappa_v_upper - b.kappa_v_upper) <= 1e-6 * a.kappa_v_upper);
    CHECK(std::abs(a.gap - b.gap) <= 1e-6 * a.gap);
  }
}

TEST_CASE("condition numbers are scale invariant") {
  const CMatrix m = oracle::random_complex(5, 91);
  const auto a = condition_report(eig(DenseMatrix::complex(m)));
  const auto b = condition_report(eig(DenseMatrix::complex(7.5 * m)));
  CHECK(a.kappa2 == doctest::Approx(b.kappa2).epsilon(1e-8));
  CHECK(b.gap == doctest::Approx(7.5 * a.gap).epsilon(1e-8));
}

TEST_CASE("matrix function: rotation exponential") {
  for (double theta : {0.3, 1.0, 2.5}) {
    Eigen::MatrixXd r(2, 2);
    r << 0.0, -theta, theta, 0.0;
    const auto e = matrix_function(eig(DenseMatrix::real(r)), builtin_function("exp"));
    CHECK(e.is_real());
    CHECK(std::abs(e(0, 0) - std::cos(theta)) <= 1e-8);
    CHECK(std::abs(e(0, 1) + std::sin(theta)) <= 1e-8);
    CHECK(std::abs(e(1, 0) - std::sin(theta)) <= 1e-8);
    CHECK(std::abs(e(1, 1) - std::cos(theta)) <= 1e-8);
  }
}

TEST_CASE("matrix function: polynomial consistency") {
  for (unsigned seed = 100; seed < 110; ++seed) {
    const CMatrix m = oracle::random_complex(5, seed, 0.5);
    const auto dec = eig(DenseMatrix::complex(m));
    const double norm = op_norm(DenseMatrix::complex(m));
    const auto sq = matrix_function(dec, builtin_function("pow2"));
    CHECK(max_abs(sq.data() - m * m) <= 1e-6 * norm * norm);
    const auto cube = matrix_function(dec, builtin_function("pow3"));
    CHECK(max_abs(cube.data() - m * m * m) <= 1e-6 * norm * norm * norm);
    const auto id = matrix_function(dec, builtin_function("identity"));
    CHECK(max_abs(id.data() - m) <= 1e-8 * norm);
  }
}

TEST_CASE("matrix function: sqrt squares back") {
  Eigen::MatrixXd m(2, 2);
  m << 4.0, 1.0, 0.0, 9.0;
  const auto dec = eig(DenseMatrix::real(m));
  const auto r = matrix_function(dec, builtin_function("sqrt"));
  CHECK(max_abs(r.data() * r.data() - m.cast<cplx>()) <= 1e-12);
}

TEST_CASE("matrix function errors") {
  Eigen::MatrixXd m(2, 2);
  m << 0.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(matrix_function(eig(DenseMatrix::real(m)), builtin_function("log")),
                  EvaluationError);
  CHECK_THROWS_AS(builtin_function("tanh"), InvalidInput);
  CHECK_THROWS_AS(builtin_function("pow"), InvalidInput);
}

TEST_CASE("approx_matfun certificate") {
  MatFunOptions o;
  o.delta = 0.1;
  o.seed = 4;
  o.lipschitz = std::exp(1.0);
  const auto a = 2.0 * DenseMatrix::jordan(6);
  const auto r = approx_matfun(a, builtin_function("exp"), o);
  const auto& c = r.certificate;
  CHECK(c.rescale == doctest::Approx(2.0));
  CHECK(c.e_norm == doctest::Approx(2.0 * r.regularization.e_norm));
  CHECK(c.unit_roundoff == doctest::Approx(std::numeric_limits<double>::epsilon() / 2));
  REQUIRE(c.error_estimate.has_value());
  CHECK(*c.error_estimate == doctest::Approx(c.kappa_v_upper * c.unit_roundoff * c.scale +
                                             *c.lipschitz * c.e_norm));
  // exp of a nilpotent Jordan block is the truncated series; A + E is close.
  CMatrix want = CMatrix::Identity(6, 6), term = CMatrix::Identity(6, 6);
  for (int k = 1; k < 6; ++k) {
    term = term * a.data() / static_cast<double>(k);
    want += term;
  }
  CHECK(max_abs(r.value.data() - want) < 5.0);
}

TEST_CASE("davies envelopes") {
  const auto d = davies_envelopes(4, 1e-6, 0.5, 10.0, 0.01);
  CHECK(d.achieved == doctest::Approx(10.0 * 1e-6 + 0.01));
  CHECK(d.conjecture_target == doctest::Approx(1e-3));
  CHECK(d.davies07_bound == doctest::Approx(5.0 * std::pow(1e-6, 0.4)));
  CHECK(d.bkms_bound == doctest::Approx(96.0));
  CHECK(d.bkms_accuracy == doctest::Approx(96.0 * 1e-6 + 0.5));
  CHECK_THROWS_AS(davies_envelopes(4, 0.0, 0.5, 1.0, 0.0), InvalidInput);
}
