#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <vector>

#include "specreg/config.hpp"
#include "specreg/report.hpp"

namespace specreg {

struct RunOptions {
  /// Worker threads; 1 runs the serial reference loop.
  int jobs = 1;
};

/// Runs fn(t) for every trial index t. Each trial must write only to its own
/// slot so the result is independent of scheduling. jobs == 1 is a plain
/// loop; otherwise OpenMP with dynamic scheduling. The first exception thrown
/// by any trial is rethrown after the loop.
template <class Fn>
void for_each_trial(std::int64_t trials, int jobs, Fn&& fn) {
  if (jobs <= 1) {
    for (std::int64_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
#pragma omp parallel for num_threads(jobs) schedule(dynamic, 8)
  for (std::int64_t t = 0; t < trials; ++t) {
    try {
      fn(t);
    } catch (...) {
      std::lock_guard lock(mu);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Empirical q-quantile of ||G_n(law)|| (default: the 99th percentile used as
/// the norm-event threshold K').
double estimate_kprime(const NoiseLaw& law, int n, std::uint64_t seed,
                       std::int64_t samples = 2000, double q = 0.99, int jobs = 1);

/// P[sigma_n(A + delta G_n) <= eps] against the explicit-constant bounds
/// 2 sqrt(2e) K n^2 eps / delta (real law) and pi e K n^3 eps^2 / delta^2
/// (complex law).
ExperimentReport run_sv_tail(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// P[||G_n|| <= K' and sigma_n(A + delta G_n - zI) <= eps] for Im z != 0, with
/// a sweep over Im z at fixed eps.
ExperimentReport run_shifted_sv_tail(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// P[||G_n|| <= K' and eta(A + delta G_n) <= s].
ExperimentReport run_gap(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// E[sum_{lambda_i in B} kappa(lambda_i)^2] against e K n^3 vol(B) / delta^2.
ExperimentReport run_overlap_moment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Single-attempt frequency of the regularization certificate.
ExperimentReport run_regularization_success(const ExperimentConfig& cfg,
                                            const RunOptions& opts = {});

struct CalibrationCell {
  int n = 0;
  double delta = 0.0;
  std::int64_t trials = 0;
  std::int64_t near_defective = 0;
  /// q-quantile of kappa_v_upper / threshold_shape(n, delta).
  double c1 = 0.0;
  /// 99th percentile of ||G_n||; also the cell's K'.
  double c2 = 0.0;
};

struct CalibrationTable {
  NoiseLaw law{LawKind::RealGaussian};
  double quantile = 0.75;
  std::vector<CalibrationCell> cells;
  /// Largest per-cell values: one constant pair valid for the whole sweep.
  double c1 = 0.0;
  double c2 = 0.0;
};

CalibrationTable calibrate(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentReport run_calibrate(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Dispatches on cfg.experiment after applying defaults and validation.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

}  // namespace specreg
