#pragma once

#include <cstdint>
#include <optional>

#include "specreg/eig.hpp"
#include "specreg/noise.hpp"
#include "specreg/spectral.hpp"

namespace specreg {

/// How the kappa_V threshold scales with n and delta.
enum class ThresholdShape {
  /// c1 * n^2 / delta * sqrt(log(n / delta)); real perturbations.
  RealLog,
  /// c1 * n^2 / delta; complex perturbations.
  Complex,
};

ThresholdShape shape_for(const NoiseLaw& law);

/// kappa_V threshold for the given shape.
double kappa_threshold(ThresholdShape shape, double c1, std::size_t n, double delta);

/// Calibrated defaults (see `specreg bench calibrate`).
struct DefaultThresholds {
  double c1;
  double c2;
};
DefaultThresholds default_thresholds(const NoiseLaw& law);

struct RegularizeOptions {
  double delta = 0.1;
  NoiseLaw law{LawKind::RealGaussian};
  std::optional<double> c1_threshold;  // defaults from default_thresholds(law)
  std::optional<double> c2_threshold;
  int max_attempts = 16;
  std::uint64_t seed = 0;
};

struct RegularizationResult {
  DenseMatrix perturbation;
  DenseMatrix perturbed;
  double e_norm = 0.0;
  /// Report of `perturbed`. When every attempt was near-defective the kappa
  /// fields are +infinity and `decomposition` is empty.
  ConditionReport report;
  std::optional<SpectralDecomposition> decomposition;
  int attempts = 0;
  bool succeeded = false;
  double c1_threshold = 0.0;
  double c2_threshold = 0.0;
  double kappa_threshold = 0.0;
  ThresholdShape shape = ThresholdShape::RealLog;
};

/// One draw E = delta * G_n(law) from stream (seed, attempt) and its
/// certificate. Domain checks are the caller's job; the harness uses this with
/// delta in (0, 1).
RegularizationResult regularization_attempt(const DenseMatrix& a, double delta,
                                            const NoiseLaw& law, ThresholdShape shape,
                                            double c1, double c2, std::uint64_t seed,
                                            int attempt);

/// Samples E = delta * G_n(xi) until ||E|| <= c2 delta and
/// kappa_V(A + E) <= c1 n^2 delta^{-1} sqrt(log(n / delta)), retrying with
/// independent streams up to max_attempts. Returns the first success, or the
/// attempt with the smallest kappa_V upper bound. Requires a real law,
/// ||A|| <= 1 and delta in (0, 1/2).
RegularizationResult regularize(const DenseMatrix& a, const RegularizeOptions& opts);

/// Same loop with a complex law and the threshold c1 n^2 / delta.
RegularizationResult complex_regularize(const DenseMatrix& a, const RegularizeOptions& opts);

}  // namespace specreg
