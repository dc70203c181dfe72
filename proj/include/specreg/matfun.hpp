#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specreg/perturb.hpp"

namespace specreg {

using ScalarFunction = std::function<cplx(cplx)>;

/// Builtin catalog for the CLI: identity, exp, log, sqrt, sin, cos, and
/// integer powers written "pow<k>" (e.g. pow2, pow3).
ScalarFunction builtin_function(std::string_view name);
std::vector<std::string> builtin_function_names();

/// sum_i f(lambda_i) v_i w_i^H. Throws EvaluationError if f is not finite at
/// some eigenvalue.
DenseMatrix matrix_function(const SpectralDecomposition& dec, const ScalarFunction& f);

struct MatFunCertificate {
  double kappa_v_upper = 0.0;
  /// ||E|| measured in the units of the input A (i.e. after undoing the rescale).
  double e_norm = 0.0;
  double unit_roundoff = 0.0;
  /// Factor A was divided by before regularizing (1 when ||A|| <= 1).
  double rescale = 1.0;
  /// max_i |f(lambda_i)|, the magnitude the roundoff term is measured against.
  double scale = 0.0;
  std::optional<double> lipschitz;
  /// kappa_v_upper * u * scale + L_f * e_norm; present iff lipschitz is.
  std::optional<double> error_estimate;
};

struct MatFunResult {
  DenseMatrix value;
  MatFunCertificate certificate;
  RegularizationResult regularization;
};

struct MatFunOptions {
  double delta = 0.1;
  NoiseLaw law{LawKind::RealGaussian};
  std::optional<double> c1_threshold;
  std::optional<double> c2_threshold;
  int max_attempts = 16;
  std::optional<double> lipschitz;
  std::uint64_t seed = 0;
};

/// Approximate diagonalization: regularize A (rescaled to unit norm when
/// ||A|| > 1), diagonalize A + E and return f(A + E) with its certificate.
/// Throws NearDefective only when no attempt produced a decomposition.
MatFunResult approx_matfun(const DenseMatrix& a, const ScalarFunction& f,
                           const MatFunOptions& opts);

/// Scalars for comparing an achieved accuracy with the classical envelopes.
struct DaviesEnvelopes {
  /// kappa_V * eps + ||E||
  double achieved = 0.0;
  /// sqrt(eps): the conjectured c_n sqrt(eps) with c_n = 1.
  double conjecture_target = 0.0;
  /// (1 + n) eps^{2/(n+1)}
  double davies07_bound = 0.0;
  /// 4 n^{3/2} (1 + 1/delta), a bound on kappa_V(A + E) with ||E|| <= delta.
  double bkms_bound = 0.0;
  /// bkms_bound * eps + delta: the accuracy that kappa bound implies.
  double bkms_accuracy = 0.0;
};

DaviesEnvelopes davies_envelopes(std::size_t n, double eps, double delta,
                                 double kappa_v_upper, double e_norm);

}  // namespace specreg
