#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "specreg/eig.hpp"

namespace specreg {

/// Two-sided estimate of the eigenvector condition number kappa_V.
struct KappaBracket {
  double lower = 1.0;
  double upper = 1.0;
  /// False when the unit-column eigenvector matrix is numerically singular;
  /// `upper` is then +infinity.
  bool upper_finite = true;
};

struct ConditionReport {
  std::vector<double> per_eigenvalue;
  double kappa2 = 0.0;
  double kappa_v_lower = 1.0;
  double kappa_v_upper = 1.0;
  double gap = 0.0;
};

/// kappa(lambda_i) = ||v_i|| ||w_i||; with unit right vectors this is ||w_i||.
std::vector<double> eigenvalue_condition_numbers(const SpectralDecomposition& dec);

/// sqrt(sum_i kappa(lambda_i)^2).
double kappa2(const SpectralDecomposition& dec);

/// lower = max_i kappa(lambda_i):
///   for any diagonalization M = W D W^{-1}, the i-th column of W and the
///   i-th row of W^{-1} are (rescaled) v_i and w_i^H with the scale factors
///   cancelling, so kappa(lambda_i) = ||W e_i|| ||e_i^T W^{-1}|| <= ||W|| ||W^{-1}||.
///   Taking the infimum over W gives kappa(lambda_i) <= kappa_V.
/// upper = sigma_1(V) / sigma_n(V) for the unit-column eigenvector matrix V,
///   which is one admissible W and satisfies upper <= sqrt(n) * kappa2.
KappaBracket kappa_v_bracket(const SpectralDecomposition& dec);

/// Minimum pairwise eigenvalue distance; requires n >= 2.
double eigenvalue_gap(const SpectralDecomposition& dec);
double eigenvalue_gap(const CVector& eigenvalues);

ConditionReport condition_report(const SpectralDecomposition& dec);

void to_json(nlohmann::json& j, const ConditionReport& r);

}  // namespace specreg
