#pragma once

#include <vector>

#include "specreg/matrix.hpp"

namespace specreg {

/// Singular values sigma_1 >= ... >= sigma_n >= 0.
struct SingularValues {
  std::vector<double> values;

  double largest() const { return values.front(); }
  double smallest() const { return values.back(); }
  /// sigma_{n-1}; requires n >= 2.
  double second_smallest() const { return values[values.size() - 2]; }
};

SingularValues singular_values(const DenseMatrix& m);

/// Spectral (l2 -> l2) operator norm. Same code path as singular_values.
double op_norm(const DenseMatrix& m);

namespace kernel {

// Unchecked variants used inside Monte Carlo and grid loops, where the
// inputs are constructed by the library and already known to be finite.
SingularValues singular_values(const CMatrix& m);
double smallest_singular_value(const CMatrix& m);
/// sigma_n(m - z I).
double shifted_smallest_singular_value(const CMatrix& m, cplx z);
double op_norm(const CMatrix& m);

}  // namespace kernel

}  // namespace specreg
