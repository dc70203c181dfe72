#pragma once

#include <vector>

#include "specreg/matrix.hpp"

namespace specreg {

/// Spectral expansion M = sum_i lambda_i v_i w_i^H of a matrix with distinct
/// eigenvalues. Right vectors v_i (columns of `right`) have unit 2-norm; left
/// vectors w_i (columns of `left`) satisfy w_i^H v_i = 1, i.e. `left` is the
/// conjugate transpose of right^{-1}.
struct SpectralDecomposition {
  CVector eigenvalues;
  CMatrix right;
  CMatrix left;
  double source_norm = 0.0;
  bool real_source = false;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

struct EigOptions {
  /// Eigenvalues closer than distinct_tol * ||M|| are treated as repeated.
  double distinct_tol = 1e-10;
  /// Bound on ||V D V^{-1} - M|| / ||M||.
  double recon_tol = 1e-7;
};

/// Nonsymmetric eigendecomposition via Hessenberg reduction and shifted QR.
/// Real inputs use the real Schur form so conjugate pairs are exact and are
/// reported adjacently (positive imaginary part first). Throws NearDefective
/// when the eigenvalues are not numerically distinct or the expansion does
/// not reconstruct M.
SpectralDecomposition eig(const DenseMatrix& m, const EigOptions& opts = {});

/// Eigenvalues only, in the same order eig would report them.
CVector eigenvalues(const DenseMatrix& m);

namespace kernel {
CVector eigenvalues(const CMatrix& m, bool real);
}  // namespace kernel

}  // namespace specreg
