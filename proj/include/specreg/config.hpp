#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "specreg/error.hpp"
#include "specreg/matrix.hpp"
#include "specreg/noise.hpp"

namespace specreg {

enum class ExperimentKind { SvTail, ShiftedSv, Gap, Overlap, Success, Calibrate };

std::string experiment_name(ExperimentKind kind);
ExperimentKind parse_experiment(std::string_view name);

/// Closed interval used for exponent acceptance bands.
struct Band {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Every violation found while validating a config, reported together.
class ConfigError : public InvalidInput {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::SvTail;
  int n = 10;
  double delta = 0.5;
  NoiseLaw law{LawKind::RealGaussian};
  /// zero | jordan | diag-grid | path to a Matrix Market file.
  std::string profile = "zero";
  std::int64_t trials = 1000;
  /// epsilon (sv-tail, shifted-sv) or s (gap) values, ascending.
  std::vector<double> grid;
  std::uint64_t seed = 0;

  // Shifted experiments.
  cplx z{0.0, 0.3};
  std::vector<double> imag_sweep;
  double sweep_epsilon = 1e-2;
  /// Threshold of the norm event ||G_n|| <= K'. Estimated when absent.
  std::optional<double> kprime;

  // Overlap moment region B = D(center, radius).
  cplx region_center{0.0, 0.0};
  double region_radius = 3.0;

  // Regularization success.
  std::optional<double> c1;
  std::optional<double> c2;
  double slack = 0.05;

  // Calibration sweep.
  std::vector<int> n_list;
  std::vector<double> delta_list;
  double quantile = 0.75;

  // Exponent bands; defaults depend on experiment and law.
  std::optional<Band> slope_band;
  std::optional<Band> sweep_band;
};

/// Fills unset grids and bands with the experiment defaults.
ExperimentConfig with_defaults(ExperimentConfig cfg);

/// Throws ConfigError listing every violated invariant.
void validate(const ExperimentConfig& cfg);

/// Parses a JSON config (or a run manifest, whose "config" section is used).
/// Unknown keys are errors. The result is not yet validated so that command
/// line flags can be applied on top.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Log-spaced grid from lo to hi inclusive, `per_decade` points per decade.
std::vector<double> log_grid(double lo, double hi, int per_decade = 8);

/// "a+bi", "a-bi", "bi", "a" (i or j accepted).
cplx parse_complex(std::string_view text);
std::string format_complex(cplx z);

/// Mean profile A for the harness, normalized so that ||A|| <= 1.
DenseMatrix make_profile(const std::string& name, int n);

}  // namespace specreg
