#include "specreg/linalg.hpp"

#include <Eigen/SVD>

namespace specreg {

namespace kernel {

SingularValues singular_values(const CMatrix& m) {
  // Two-sided Jacobi keeps high relative accuracy in the small singular
  // values, which is what every tail experiment reads.
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  SingularValues out;
  out.values.assign(s.data(), s.data() + s.size());
  return out;
}

double smallest_singular_value(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double shifted_smallest_singular_value(const CMatrix& m, cplx z) {
  CMatrix shifted = m;
  shifted.diagonal().array() -= z;
  return smallest_singular_value(shifted);
}

double op_norm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace kernel

SingularValues singular_values(const DenseMatrix& m) {
  require_square(m, "singular_values");
  return kernel::singular_values(m.data());
}

double op_norm(const DenseMatrix& m) {
  require_square(m, "op_norm");
  return kernel::singular_values(m.data()).largest();
}

}  // namespace specreg
