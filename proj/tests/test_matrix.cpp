#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "specreg/error.hpp"
#include "specreg/linalg.hpp"
#include "specreg/matrix.hpp"
#include "specreg/mmio.hpp"

using namespace specreg;

TEST_CASE("dense matrix validation") {
  CMatrix bad(2, 2);
  bad << 1.0, std::nan(""), 0.0, 1.0;
  CHECK_THROWS_AS(DenseMatrix::complex(bad), InvalidInput);

  CMatrix c(1, 1);
  c(0, 0) = cplx(1.0, 2.0);
  CHECK_THROWS_AS(DenseMatrix(c, Field::Real), InvalidInput);
  CHECK_FALSE(DenseMatrix::complex(c).is_real());

  CHECK_THROWS_AS(DenseMatrix::complex(CMatrix(0, 0)), InvalidInput);
  CHECK_THROWS_AS(require_square(DenseMatrix::complex(CMatrix::Zero(2, 3)), "t"), InvalidInput);
}

TEST_CASE("matrix factories") {
  const auto j = DenseMatrix::jordan(4);
  CHECK(j.is_real());
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t s = 0; s < 4; ++s) CHECK(j(r, s) == cplx(s == r + 1 ? 1.0 : 0.0));
  CHECK(DenseMatrix::identity(3) - DenseMatrix::identity(3) == DenseMatrix::zeros(3));
  CHECK((2.0 * DenseMatrix::identity(2))(1, 1) == cplx(2.0));
}

TEST_CASE("real + complex promotes the tag") {
  CMatrix c = CMatrix::Zero(2, 2);
  c(0, 1) = cplx(0.0, 1.0);
  const auto sum = DenseMatrix::identity(2) + DenseMatrix::complex(c);
  CHECK_FALSE(sum.is_real());
  CHECK((DenseMatrix::identity(2) + DenseMatrix::identity(2)).is_real());
}

TEST_CASE("matrix market round trip is exact") {
  const auto a = DenseMatrix::real(oracle::random_real(5, 3));
  std::stringstream ss;
  write_matrix(a, ss);
  const auto b = read_matrix(ss);
  CHECK(b.is_real());
  CHECK(a == b);

  const auto c = DenseMatrix::complex(oracle::random_complex(4, 9, 1e-7));
  std::stringstream cs;
  write_matrix(c, cs);
  const auto d = read_matrix(cs);
  CHECK_FALSE(d.is_real());
  CHECK(c == d);
}

TEST_CASE("matrix market column-major order") {
  std::istringstream in(
      "%%MatrixMarket matrix array integer general\n% comment\n2 2\n1\n3\n2\n4\n");
  const auto m = read_matrix(in);
  CHECK(m(0, 0) == cplx(1.0));
  CHECK(m(1, 0) == cplx(3.0));
  CHECK(m(0, 1) == cplx(2.0));
  CHECK(m(1, 1) == cplx(4.0));
}

TEST_CASE("matrix market errors carry line numbers") {
  std::istringstream bad_header("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n");
  CHECK_THROWS_AS(read_matrix(bad_header), FormatError);

  std::istringstream bad_value("%%MatrixMarket matrix array real general\n2 2\n1\n2\nx\n4\n");
  try {
    read_matrix(bad_value);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 5);
  }

  std::istringstream short_data("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n");
  CHECK_THROWS_AS(read_matrix(short_data), InvalidInput);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 123456789.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("singular values agree with the Jacobi oracle") {
  for (unsigned seed = 1; seed <= 6; ++seed) {
    const int n = 2 + static_cast<int>(seed);
    const CMatrix m = oracle::random_complex(n, seed);
    const auto got = singular_values(DenseMatrix::complex(m)).values;
    const auto want = oracle::singular_values(m);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-9).scale(want[0]));
    }
  }
}

TEST_CASE("op_norm agrees with power iteration") {
  for (unsigned seed = 10; seed < 14; ++seed) {
    const CMatrix m = oracle::random_complex(6, seed);
    CHECK(op_norm(DenseMatrix::complex(m)) ==
          doctest::Approx(oracle::op_norm_power(m)).epsilon(1e-9));
  }
  for (unsigned seed = 20; seed < 24; ++seed) {
    const Eigen::MatrixXd r = oracle::random_real(8, seed);
    CHECK(op_norm(DenseMatrix::real(r)) ==
          doctest::Approx(oracle::op_norm_power(r.cast<cplx>())).epsilon(1e-8));
  }
  CHECK(op_norm(DenseMatrix::jordan(5)) == doctest::Approx(1.0));
}

TEST_CASE("shifted smallest singular value, 2x2 closed form") {
  CMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 2.0;
  for (cplx z : {cplx(0.0, 0.0), cplx(1.5, 0.2), cplx(-0.3, 1.0), cplx(1.0, 0.0)}) {
    const double want = oracle::sigma_min_2x2(m(0, 0) - z, m(0, 1), m(1, 0), m(1, 1) - z);
    CHECK(kernel::shifted_smallest_singular_value(m, z) == doctest::Approx(want).scale(1.0));
  }
}

TEST_CASE("singular values are unitarily invariant") {
  const CMatrix m = oracle::random_complex(5, 21);
  const CMatrix u = oracle::random_unitary(5, 22), v = oracle::random_unitary(5, 23);
  const auto a = singular_values(DenseMatrix::complex(m)).values;
  const auto b = singular_values(DenseMatrix::complex(u * m * v)).values;
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
}
