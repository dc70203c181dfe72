#include "specreg/matfun.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "specreg/error.hpp"
#include "specreg/linalg.hpp"

namespace specreg {

ScalarFunction builtin_function(std::string_view name) {
  if (name == "identity") return [](cplx z) { return z; };
  if (name == "exp") return [](cplx z) { return std::exp(z); };
  if (name == "log") return [](cplx z) { return std::log(z); };
  if (name == "sqrt") return [](cplx z) { return std::sqrt(z); };
  if (name == "sin") return [](cplx z) { return std::sin(z); };
  if (name == "cos") return [](cplx z) { return std::cos(z); };
  if (name.starts_with("pow")) {
    int k = 0;
    const auto digits = name.substr(3);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && k >= 0 && !digits.empty()) {
      return [k](cplx z) {
        cplx acc = 1.0;
        for (int i = 0; i < k; ++i) acc *= z;
        return acc;
      };
    }
  }
  throw InvalidInput("unknown function '" + std::string(name) + "'");
}

std::vector<std::string> builtin_function_names() {
  return {"identity", "exp", "log", "sqrt", "sin", "cos", "pow<k>"};
}

namespace {

CVector evaluate(const CVector& ev, const ScalarFunction& f, double rescale) {
  CVector out(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const cplx lambda = rescale * ev(i);
    const cplx v = f(lambda);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream msg;
      msg << "function is not finite at eigenvalue " << lambda.real()
          << (lambda.imag() < 0 ? "-" : "+") << std::abs(lambda.imag()) << "i";
      throw EvaluationError(msg.str());
    }
    out(i) = v;
  }
  return out;
}

DenseMatrix assemble(const SpectralDecomposition& dec, const CVector& fvals) {
  CMatrix value = dec.right * fvals.asDiagonal() * dec.left.adjoint();
  // A real matrix under a function that is real on its (conjugate-closed)
  // spectrum gives a real result up to rounding; keep the real tag then.
  if (dec.real_source) {
    const double mag = value.cwiseAbs().maxCoeff();
    const double imag = value.imag().cwiseAbs().maxCoeff();
    if (imag <= 1e-12 * std::max(mag, 1.0)) {
      return DenseMatrix::real(value.real());
    }
  }
  return DenseMatrix::complex(std::move(value));
}

}  // namespace

DenseMatrix matrix_function(const SpectralDecomposition& dec, const ScalarFunction& f) {
  return assemble(dec, evaluate(dec.eigenvalues, f, 1.0));
}

MatFunResult approx_matfun(const DenseMatrix& a, const ScalarFunction& f,
                           const MatFunOptions& opts) {
  require_square(a, "approx_matfun");
  if (!(opts.delta > 0.0 && opts.delta < 0.5)) {
    throw InvalidInput("approx_matfun: delta must lie in (0, 1/2)");
  }
  if (opts.lipschitz && !(*opts.lipschitz >= 0.0 && std::isfinite(*opts.lipschitz))) {
    throw InvalidInput("approx_matfun: Lipschitz bound must be finite and nonnegative");
  }
  const double norm = op_norm(a);
  const double rescale = norm > 1.0 ? norm : 1.0;
  const DenseMatrix unit = norm > 1.0 ? (1.0 / norm) * a : a;

  RegularizeOptions ro;
  ro.delta = opts.delta;
  ro.law = opts.law;
  ro.c1_threshold = opts.c1_threshold;
  ro.c2_threshold = opts.c2_threshold;
  ro.max_attempts = opts.max_attempts;
  ro.seed = opts.seed;
  RegularizationResult reg =
      opts.law.is_complex() ? complex_regularize(unit, ro) : regularize(unit, ro);
  if (!reg.decomposition) {
    throw NearDefective("approx_matfun: every regularization attempt was near-defective", 0.0);
  }

  const CVector fvals = evaluate(reg.decomposition->eigenvalues, f, rescale);
  DenseMatrix value = assemble(*reg.decomposition, fvals);

  MatFunCertificate cert;
  cert.kappa_v_upper = reg.report.kappa_v_upper;
  cert.e_norm = rescale * reg.e_norm;
  cert.unit_roundoff = std::numeric_limits<double>::epsilon() / 2.0;
  cert.rescale = rescale;
  cert.scale = fvals.cwiseAbs().maxCoeff();
  cert.lipschitz = opts.lipschitz;
  if (opts.lipschitz) {
    cert.error_estimate =
        cert.kappa_v_upper * cert.unit_roundoff * cert.scale + *opts.lipschitz * cert.e_norm;
  }
  return MatFunResult{std::move(value), cert, std::move(reg)};
}

DaviesEnvelopes davies_envelopes(std::size_t n, double eps, double delta,
                                 double kappa_v_upper, double e_norm) {
  if (n == 0 || !(eps > 0.0) || !(delta > 0.0) || !(kappa_v_upper > 0.0) || !(e_norm >= 0.0)) {
    throw InvalidInput("davies_envelopes: inputs must be positive");
  }
  const double nd = static_cast<double>(n);
  DaviesEnvelopes d;
  d.achieved = kappa_v_upper * eps + e_norm;
  d.conjecture_target = std::sqrt(eps);
  d.davies07_bound = (1.0 + nd) * std::pow(eps, 2.0 / (nd + 1.0));
  d.bkms_bound = 4.0 * std::pow(nd, 1.5) * (1.0 + 1.0 / delta);
  d.bkms_accuracy = d.bkms_bound * eps + delta;
  return d;
}

}  // namespace specreg
