#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specreg/config.hpp"
#include "specreg/pseudospec.hpp"
#include "specreg/stats.hpp"

namespace specreg {

enum class Status { Pass, Fail, Inconclusive };
std::string status_name(Status s);

/// One grid point of a tail experiment.
struct GridRow {
  double x = 0.0;
  std::int64_t count = 0;
  std::int64_t trials = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  /// Bound at x (capped at 1), or the fitted-constant bound for implicit
  /// constants. NaN when the experiment has no bound at this row.
  double bound = 0.0;
  bool pass = true;
};

struct Check {
  std::string name;
  Status status = Status::Pass;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<GridRow> rows;
  std::optional<stats::SlopeFit> slope;
  /// Smallest single constant c with p_hat <= c * bound_shape on the grid
  /// (experiments whose paper constant is implicit).
  std::optional<double> fitted_constant;
  nlohmann::json details = nlohmann::json::object();
  std::vector<Check> checks;
  std::vector<std::string> notes;

  /// Fail if any check failed, else Inconclusive if any was, else Pass.
  Status status() const;
  const Check* find_check(const std::string& name) const;
};

/// Tail counts -> rows with Wilson intervals.
GridRow make_row(double x, std::int64_t count, std::int64_t trials, double bound);

nlohmann::json to_json(const ExperimentReport& r);
void write_csv(const ExperimentReport& r, std::ostream& out);

/// CSV rows (epsilon, volume, error_bound, ratio, target).
void write_csv(const VolLimitResult& r, std::ostream& out);

/// Deterministic JSON text: fixed key order, shortest round-trip numbers.
std::string dump_json(const nlohmann::json& j);

}  // namespace specreg
