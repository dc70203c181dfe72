#include "specreg/report.hpp"

#include <cmath>

#include "specreg/mmio.hpp"

namespace specreg {

using nlohmann::json;

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Inconclusive:
      return "inconclusive";
  }
  return {};
}

Status ExperimentReport::status() const {
  bool inconclusive = false;
  for (const auto& c : checks) {
    if (c.status == Status::Fail) return Status::Fail;
    if (c.status == Status::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Status::Inconclusive : Status::Pass;
}

const Check* ExperimentReport::find_check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

GridRow make_row(double x, std::int64_t count, std::int64_t trials, double bound) {
  GridRow r;
  r.x = x;
  r.count = count;
  r.trials = trials;
  r.p_hat = static_cast<double>(count) / static_cast<double>(trials);
  const auto ci = stats::wilson(count, trials);
  r.ci_lo = ci.lo;
  r.ci_hi = ci.hi;
  r.bound = bound;
  return r;
}

namespace {

json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

json to_json(const ExperimentReport& r) {
  json j;
  j["experiment"] = experiment_name(r.config.experiment);
  j["config"] = to_json(r.config);
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"x", row.x},
                    {"count", row.count},
                    {"trials", row.trials},
                    {"p_hat", row.p_hat},
                    {"ci_lo", row.ci_lo},
                    {"ci_hi", row.ci_hi},
                    {"bound", num(row.bound)},
                    {"pass", row.pass}});
  }
  j["rows"] = rows;
  if (r.slope) {
    j["slope"] = {{"slope", r.slope->slope},
                  {"stderr", r.slope->stderr_},
                  {"intercept", r.slope->intercept},
                  {"points", r.slope->points}};
  } else {
    j["slope"] = nullptr;
  }
  j["fitted_constant"] = r.fitted_constant ? num(*r.fitted_constant) : json(nullptr);
  j["details"] = r.details;
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"status", status_name(c.status)}, {"detail", c.detail}});
  }
  j["checks"] = checks;
  j["notes"] = r.notes;
  j["status"] = status_name(r.status());
  return j;
}

namespace {

std::string csv_num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

}  // namespace

void write_csv(const ExperimentReport& r, std::ostream& out) {
  if (r.config.experiment == ExperimentKind::Calibrate) {
    out << "n,delta,trials,near_defective,c1,c2\n";
    for (const auto& c : r.details.value("cells", json::array())) {
      const json& c1 = c.at("c1");
      out << c.at("n").get<int>() << ',' << csv_num(c.at("delta").get<double>()) << ','
          << c.at("trials").get<std::int64_t>() << ','
          << c.at("near_defective").get<std::int64_t>() << ','
          << (c1.is_string() ? std::string("inf") : csv_num(c1.get<double>())) << ','
          << csv_num(c.at("c2").get<double>()) << '\n';
    }
    return;
  }
  out << "x,count,trials,p_hat,ci_lo,ci_hi,bound,pass\n";
  for (const auto& row : r.rows) {
    out << csv_num(row.x) << ',' << row.count << ',' << row.trials << ',' << csv_num(row.p_hat)
        << ',' << csv_num(row.ci_lo) << ',' << csv_num(row.ci_hi) << ',' << csv_num(row.bound)
        << ',' << (row.pass ? 1 : 0) << '\n';
  }
}

void write_csv(const VolLimitResult& r, std::ostream& out) {
  out << "epsilon,volume,error_bound,ratio,target\n";
  for (const auto& p : r.points) {
    out << csv_num(p.epsilon) << ',' << csv_num(p.estimate.volume) << ','
        << csv_num(p.estimate.volume_error_bound) << ',' << csv_num(p.ratio) << ','
        << csv_num(r.target) << '\n';
  }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace specreg
