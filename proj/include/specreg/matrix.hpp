#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace specreg {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

enum class Field { Real, Complex };

/// Dense n x m matrix carrying a real/complex tag.
///
/// Storage is always complex so that every algorithm has a single code path;
/// the tag records whether the imaginary parts are identically zero. Every
/// entry is finite. Instances are immutable values.
class DenseMatrix {
 public:
  /// Validates finiteness; a Field::Real tag additionally requires zero
  /// imaginary parts. Throws InvalidInput otherwise.
  DenseMatrix(CMatrix entries, Field field);

  static DenseMatrix real(const RMatrix& entries);
  static DenseMatrix complex(CMatrix entries);

  static DenseMatrix zeros(std::size_t n);
  static DenseMatrix identity(std::size_t n);
  /// Nilpotent Jordan block: ones on the first superdiagonal.
  static DenseMatrix jordan(std::size_t n);
  static DenseMatrix diagonal(const CVector& d);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(m_.cols()); }
  bool square() const noexcept { return m_.rows() == m_.cols(); }
  Field field() const noexcept { return field_; }
  bool is_real() const noexcept { return field_ == Field::Real; }

  const CMatrix& data() const noexcept { return m_; }
  cplx operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// Real part as a real matrix; only meaningful for real-tagged matrices.
  RMatrix real_part() const { return m_.real(); }

  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator*(double s, const DenseMatrix& a);
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b);

 private:
  CMatrix m_;
  Field field_;
};

/// Throws InvalidInput unless m is square (and non-empty).
void require_square(const DenseMatrix& m, const char* what);

}  // namespace specreg
