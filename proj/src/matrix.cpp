#include "specreg/matrix.hpp"

#include <cmath>
#include <string>

#include "specreg/error.hpp"

namespace specreg {

DenseMatrix::DenseMatrix(CMatrix entries, Field field)
    : m_(std::move(entries)), field_(field) {
  if (m_.rows() == 0 || m_.cols() == 0) {
    throw InvalidInput("matrix must have positive dimensions");
  }
  for (Eigen::Index j = 0; j < m_.cols(); ++j) {
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      const cplx v = m_(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw InvalidInput("matrix entry (" + std::to_string(i) + "," +
                           std::to_string(j) + ") is not finite");
      }
      if (field_ == Field::Real && v.imag() != 0.0) {
        throw InvalidInput("real-tagged matrix has a nonzero imaginary part");
      }
    }
  }
}

DenseMatrix DenseMatrix::real(const RMatrix& entries) {
  return DenseMatrix(entries.cast<cplx>(), Field::Real);
}

DenseMatrix DenseMatrix::complex(CMatrix entries) {
  return DenseMatrix(std::move(entries), Field::Complex);
}

DenseMatrix DenseMatrix::zeros(std::size_t n) {
  return real(RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  return real(RMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

DenseMatrix DenseMatrix::jordan(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  RMatrix j = RMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i + 1 < k; ++i) j(i, i + 1) = 1.0;
  return real(j);
}

DenseMatrix DenseMatrix::diagonal(const CVector& d) {
  const bool real_entries = (d.imag().array() == 0.0).all();
  CMatrix m = d.asDiagonal();
  return DenseMatrix(std::move(m), real_entries ? Field::Real : Field::Complex);
}

static Field join(Field a, Field b) {
  return (a == Field::Real && b == Field::Real) ? Field::Real : Field::Complex;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("matrix sum: dimension mismatch");
  }
  return DenseMatrix(a.m_ + b.m_, join(a.field_, b.field_));
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("matrix difference: dimension mismatch");
  }
  return DenseMatrix(a.m_ - b.m_, join(a.field_, b.field_));
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  return DenseMatrix(s * a.m_, a.field_);
}

bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
  return a.field_ == b.field_ && a.m_.rows() == b.m_.rows() &&
         a.m_.cols() == b.m_.cols() && a.m_ == b.m_;
}

void require_square(const DenseMatrix& m, const char* what) {
  if (!m.square()) {
    throw InvalidInput(std::string(what) + ": matrix must be square");
  }
}

}  // namespace specreg
