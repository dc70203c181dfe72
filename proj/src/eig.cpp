#include "specreg/eig.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "specreg/error.hpp"
#include "specreg/linalg.hpp"

namespace specreg {

namespace {

// Conjugate-closed order: ascending real part, then |imag|, then the member
// with positive imaginary part first.
std::vector<Eigen::Index> spectral_order(const CVector& ev) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(ev.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const cplx x = ev(a), y = ev(b);
    if (x.real() != y.real()) return x.real() < y.real();
    if (std::abs(x.imag()) != std::abs(y.imag())) {
      return std::abs(x.imag()) < std::abs(y.imag());
    }
    return x.imag() > y.imag();
  });
  return idx;
}

struct RawEig {
  CVector values;
  CMatrix vectors;
};

RawEig solve(const CMatrix& m, bool real, bool vectors) {
  RawEig out;
  if (real) {
    Eigen::EigenSolver<RMatrix> es(m.real(), vectors);
    if (es.info() != Eigen::Success) throw Error("eig: QR iteration did not converge");
    out.values = es.eigenvalues();
    if (vectors) out.vectors = es.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<CMatrix> es(m, vectors);
    if (es.info() != Eigen::Success) throw Error("eig: QR iteration did not converge");
    out.values = es.eigenvalues();
    if (vectors) out.vectors = es.eigenvectors();
  }
  return out;
}

double min_gap(const CVector& ev) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    for (Eigen::Index j = i + 1; j < ev.size(); ++j) {
      gap = std::min(gap, std::abs(ev(i) - ev(j)));
    }
  }
  return gap;
}

}  // namespace

namespace kernel {

CVector eigenvalues(const CMatrix& m, bool real) {
  RawEig raw = solve(m, real, false);
  const auto order = spectral_order(raw.values);
  CVector out(raw.values.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = raw.values(order[k]);
  }
  return out;
}

}  // namespace kernel

CVector eigenvalues(const DenseMatrix& m) {
  require_square(m, "eigenvalues");
  return kernel::eigenvalues(m.data(), m.is_real());
}

SpectralDecomposition eig(const DenseMatrix& m, const EigOptions& opts) {
  require_square(m, "eig");
  const Eigen::Index n = m.data().rows();
  const double norm = kernel::op_norm(m.data());

  RawEig raw = solve(m.data(), m.is_real(), true);
  const auto order = spectral_order(raw.values);

  SpectralDecomposition dec;
  dec.source_norm = norm;
  dec.real_source = m.is_real();
  dec.eigenvalues.resize(n);
  dec.right.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    dec.eigenvalues(k) = raw.values(src);
    const double len = raw.vectors.col(src).norm();
    dec.right.col(k) = raw.vectors.col(src) / len;
  }

  const double gap = min_gap(dec.eigenvalues);
  if (n > 1 && gap <= opts.distinct_tol * norm) {
    std::ostringstream msg;
    msg << "eig: eigenvalues not numerically distinct (gap " << gap << ")";
    throw NearDefective(msg.str(), gap);
  }

  Eigen::FullPivLU<CMatrix> lu(dec.right);
  if (!lu.isInvertible()) {
    throw NearDefective("eig: eigenvector matrix is singular", gap);
  }
  const CMatrix inv = lu.inverse();
  dec.left = inv.adjoint();

  const CMatrix recon = dec.right * dec.eigenvalues.asDiagonal() * inv;
  const double residual = kernel::op_norm(recon - m.data());
  if (residual > opts.recon_tol * norm) {
    std::ostringstream msg;
    msg << "eig: spectral expansion residual " << residual << " exceeds "
        << opts.recon_tol << " * ||M||";
    throw NearDefective(msg.str(), residual);
  }
  return dec;
}

}  // namespace specreg
