#include "specreg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "specreg/error.hpp"
#include "specreg/linalg.hpp"

namespace specreg {

std::vector<double> eigenvalue_condition_numbers(const SpectralDecomposition& dec) {
  std::vector<double> out(dec.size());
  for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) {
    out[static_cast<std::size_t>(i)] = dec.right.col(i).norm() * dec.left.col(i).norm();
  }
  return out;
}

double kappa2(const SpectralDecomposition& dec) {
  double sum = 0.0;
  for (double k : eigenvalue_condition_numbers(dec)) sum += k * k;
  return std::sqrt(sum);
}

KappaBracket kappa_v_bracket(const SpectralDecomposition& dec) {
  const auto per = eigenvalue_condition_numbers(dec);
  KappaBracket b;
  b.lower = *std::max_element(per.begin(), per.end());
  const SingularValues sv = kernel::singular_values(dec.right);
  if (sv.smallest() < 1e-14) {
    b.upper = std::numeric_limits<double>::infinity();
    b.upper_finite = false;
  } else {
    b.upper = sv.largest() / sv.smallest();
  }
  return b;
}

double eigenvalue_gap(const CVector& ev) {
  if (ev.size() < 2) throw InvalidInput("eigenvalue_gap: need at least two eigenvalues");
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    for (Eigen::Index j = i + 1; j < ev.size(); ++j) {
      gap = std::min(gap, std::abs(ev(i) - ev(j)));
    }
  }
  return gap;
}

double eigenvalue_gap(const SpectralDecomposition& dec) {
  return eigenvalue_gap(dec.eigenvalues);
}

ConditionReport condition_report(const SpectralDecomposition& dec) {
  ConditionReport r;
  r.per_eigenvalue = eigenvalue_condition_numbers(dec);
  double sum = 0.0;
  for (double k : r.per_eigenvalue) sum += k * k;
  r.kappa2 = std::sqrt(sum);
  const KappaBracket b = kappa_v_bracket(dec);
  r.kappa_v_lower = b.lower;
  r.kappa_v_upper = b.upper;
  r.gap = dec.size() >= 2 ? eigenvalue_gap(dec) : 0.0;
  return r;
}

void to_json(nlohmann::json& j, const ConditionReport& r) {
  j = nlohmann::json{{"kappa_per_eigenvalue", r.per_eigenvalue},
                     {"kappa2", r.kappa2},
                     {"kappa_v_lower", r.kappa_v_lower},
                     {"kappa_v_upper", std::isfinite(r.kappa_v_upper)
                                           ? nlohmann::json(r.kappa_v_upper)
                                           : nlohmann::json("inf")},
                     {"gap", r.gap}};
}

}  // namespace specreg
