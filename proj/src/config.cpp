#include "specreg/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "specreg/linalg.hpp"
#include "specreg/mmio.hpp"

namespace specreg {

using nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::ostringstream s;
  s << "invalid config:";
  for (const auto& p : problems) s << "\n  - " << p;
  return s.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : InvalidInput(join_problems(problems)), problems_(std::move(problems)) {}

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::SvTail:
      return "sv-tail";
    case ExperimentKind::ShiftedSv:
      return "shifted-sv";
    case ExperimentKind::Gap:
      return "gap";
    case ExperimentKind::Overlap:
      return "overlap";
    case ExperimentKind::Success:
      return "success";
    case ExperimentKind::Calibrate:
      return "calibrate";
  }
  return {};
}

ExperimentKind parse_experiment(std::string_view name) {
  for (auto k : {ExperimentKind::SvTail, ExperimentKind::ShiftedSv, ExperimentKind::Gap,
                 ExperimentKind::Overlap, ExperimentKind::Success, ExperimentKind::Calibrate}) {
    if (experiment_name(k) == name) return k;
  }
  throw InvalidInput("unknown experiment '" + std::string(name) + "'");
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) {
    throw InvalidInput("log_grid: need 0 < lo < hi and per_decade >= 1");
  }
  const double decades = std::log10(hi / lo);
  const int steps = std::max(1, static_cast<int>(std::lround(decades * per_decade)));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    out.push_back(lo * std::pow(10.0, decades * static_cast<double>(i) / steps));
  }
  out.back() = hi;
  return out;
}

ExperimentConfig with_defaults(ExperimentConfig cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::SvTail:
      if (cfg.grid.empty()) cfg.grid = log_grid(1e-4, 1e-2);
      if (!cfg.slope_band) {
        cfg.slope_band = cfg.law.is_complex() ? Band{1.7, 2.3} : Band{0.8, 1.2};
      }
      break;
    case ExperimentKind::ShiftedSv:
      if (cfg.grid.empty()) cfg.grid = log_grid(1e-3, 1e-2);
      if (cfg.imag_sweep.empty()) cfg.imag_sweep = {0.05, 0.1, 0.2, 0.4};
      if (!cfg.slope_band) cfg.slope_band = Band{1.7, 2.3};
      if (!cfg.sweep_band) cfg.sweep_band = Band{-1.4, -0.6};
      break;
    case ExperimentKind::Gap:
      if (cfg.grid.empty()) cfg.grid = log_grid(1e-3, 1e-1);
      if (!cfg.slope_band) {
        cfg.slope_band = cfg.law.is_complex() ? Band{1.7, 2.4} : Band{0.8, 1.3};
      }
      break;
    case ExperimentKind::Calibrate:
      if (cfg.n_list.empty()) cfg.n_list = {10, 20};
      if (cfg.delta_list.empty()) cfg.delta_list = {0.1, 0.25};
      break;
    case ExperimentKind::Overlap:
    case ExperimentKind::Success:
      break;
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  std::vector<std::string> p;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) p.push_back(msg);
  };

  need(cfg.trials >= 1, "trials must be at least 1 (got " + std::to_string(cfg.trials) + ")");
  need(cfg.n >= 1, "n must be positive");
  need(cfg.delta > 0.0 && cfg.delta < 1.0, "delta must lie in (0, 1)");
  if (cfg.kprime) need(*cfg.kprime > 0.0, "kprime must be positive");
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    if (!(cfg.grid[i] > 0.0)) {
      p.push_back("grid values must be positive");
      break;
    }
    if (i > 0 && !(cfg.grid[i] > cfg.grid[i - 1])) {
      p.push_back("grid values must be strictly ascending");
      break;
    }
  }
  for (const auto* band : {&cfg.slope_band, &cfg.sweep_band}) {
    if (*band) need((*band)->lo <= (*band)->hi, "band lower end exceeds upper end");
  }

  switch (cfg.experiment) {
    case ExperimentKind::SvTail:
      break;
    case ExperimentKind::ShiftedSv:
      need(!cfg.law.is_complex(), "shifted-sv needs a real law");
      need(cfg.z.imag() != 0.0, "shifted-sv needs Im z != 0");
      need(cfg.sweep_epsilon > 0.0, "sweep_epsilon must be positive");
      for (double y : cfg.imag_sweep) need(y != 0.0, "imag_sweep values must be nonzero");
      break;
    case ExperimentKind::Gap:
      need(cfg.n >= 2, "gap needs n >= 2");
      for (double s : cfg.grid) {
        if (s > 1.0) {
          p.push_back("gap grid values must satisfy s <= 1");
          break;
        }
      }
      break;
    case ExperimentKind::Overlap:
      need(cfg.law.is_complex(), "overlap needs the complex-gaussian law");
      need(cfg.region_radius > 0.0, "region radius must be positive");
      break;
    case ExperimentKind::Success:
      need(cfg.slack >= 0.0 && cfg.slack < 0.5, "slack must lie in [0, 0.5)");
      if (cfg.c1) need(*cfg.c1 > 0.0, "c1 must be positive");
      if (cfg.c2) need(*cfg.c2 > 0.0, "c2 must be positive");
      break;
    case ExperimentKind::Calibrate:
      need(!cfg.n_list.empty(), "calibration n_list must not be empty");
      need(!cfg.delta_list.empty(), "calibration delta_list must not be empty");
      for (int n : cfg.n_list) need(n >= 2, "calibration n values must be at least 2");
      for (double d : cfg.delta_list) {
        need(d > 0.0 && d < 1.0, "calibration delta values must lie in (0, 1)");
      }
      need(cfg.quantile > 0.0 && cfg.quantile < 1.0, "quantile must lie in (0, 1)");
      break;
  }
  if (!p.empty()) throw ConfigError(std::move(p));
}

cplx parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s.push_back(c);
  }
  if (s.empty()) throw InvalidInput("empty complex literal");
  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse complex literal '" + std::string(text) + "'");
    }
    if (used != t.size()) {
      throw InvalidInput("cannot parse complex literal '" + std::string(text) + "'");
    }
    return v;
  };
  const char last = s.back();
  if (last != 'i' && last != 'j') return {number(s), 0.0};
  s.pop_back();
  // Split at the last sign that is not part of an exponent or the leading sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return number(t);
  };
  if (split == std::string::npos) return {0.0, imag_of(s)};
  return {number(s.substr(0, split)), imag_of(s.substr(split))};
}

std::string format_complex(cplx z) {
  std::string out = format_double(z.real());
  out += z.imag() < 0.0 || std::signbit(z.imag()) ? "-" : "+";
  out += format_double(std::abs(z.imag()));
  out += "i";
  return out;
}

DenseMatrix make_profile(const std::string& name, int n) {
  if (n < 1) throw InvalidInput("profile: n must be positive");
  const auto size = static_cast<std::size_t>(n);
  if (name == "zero") return DenseMatrix::zeros(size);
  if (name == "jordan") return DenseMatrix::jordan(size);
  if (name == "diag-grid") {
    CVector d(n);
    for (int i = 0; i < n; ++i) {
      d(i) = n == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / (n - 1);
    }
    return DenseMatrix::diagonal(d);
  }
  DenseMatrix a = read_matrix(std::filesystem::path(name));
  if (!a.square() || a.rows() != size) {
    throw InvalidInput("profile '" + name + "' is not " + std::to_string(n) + "x" +
                       std::to_string(n));
  }
  const double norm = op_norm(a);
  return norm > 1.0 ? (1.0 / norm) * a : a;
}

namespace {

double number_or_inf(const json& v, const std::string& key, std::vector<std::string>& p) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "+inf")) {
    return std::numeric_limits<double>::infinity();
  }
  p.push_back(key + " must be a number");
  return 0.0;
}

json number_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where,
                std::vector<std::string>& p) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.contains(it.key())) {
      p.push_back("unknown key '" + where + it.key() + "'");
    }
  }
}

Band parse_band(const json& v, const std::string& key, std::vector<std::string>& p) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    p.push_back(key + " must be a [lo, hi] pair");
    return {};
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

ExperimentConfig parse_config(const json& root) {
  std::vector<std::string> p;
  if (!root.is_object()) throw ConfigError({"config must be a JSON object"});
  const json& j = (root.contains("subcommand") && root.contains("config")) ? root.at("config") : root;
  if (!j.is_object()) throw ConfigError({"config section must be a JSON object"});

  check_keys(j,
             {"experiment", "n", "delta", "law", "profile", "trials", "grid", "seed", "kprime",
              "shift", "region", "thresholds", "calibration", "bands"},
             "", p);

  ExperimentConfig cfg;
  auto guard = [&](const char* key, auto&& fn) {
    if (!j.contains(key)) return;
    try {
      fn(j.at(key));
    } catch (const json::exception&) {
      p.push_back(std::string("'") + key + "' has the wrong type");
    } catch (const InvalidInput& e) {
      p.push_back(std::string("'") + key + "': " + e.what());
    }
  };

  guard("experiment", [&](const json& v) { cfg.experiment = parse_experiment(v.get<std::string>()); });
  guard("n", [&](const json& v) { cfg.n = v.get<int>(); });
  guard("delta", [&](const json& v) { cfg.delta = v.get<double>(); });
  guard("law", [&](const json& v) { cfg.law = NoiseLaw::parse(v.get<std::string>()); });
  guard("profile", [&](const json& v) { cfg.profile = v.get<std::string>(); });
  guard("trials", [&](const json& v) { cfg.trials = v.get<std::int64_t>(); });
  guard("grid", [&](const json& v) { cfg.grid = v.get<std::vector<double>>(); });
  guard("seed", [&](const json& v) { cfg.seed = v.get<std::uint64_t>(); });
  guard("kprime", [&](const json& v) { cfg.kprime = v.get<double>(); });
  guard("shift", [&](const json& v) {
    check_keys(v, {"z", "imag_sweep", "sweep_epsilon"}, "shift.", p);
    if (v.contains("z")) cfg.z = parse_complex(v.at("z").get<std::string>());
    if (v.contains("imag_sweep")) cfg.imag_sweep = v.at("imag_sweep").get<std::vector<double>>();
    if (v.contains("sweep_epsilon")) cfg.sweep_epsilon = v.at("sweep_epsilon").get<double>();
  });
  guard("region", [&](const json& v) {
    check_keys(v, {"center", "radius"}, "region.", p);
    if (v.contains("center")) cfg.region_center = parse_complex(v.at("center").get<std::string>());
    if (v.contains("radius")) cfg.region_radius = v.at("radius").get<double>();
  });
  guard("thresholds", [&](const json& v) {
    check_keys(v, {"c1", "c2", "slack"}, "thresholds.", p);
    if (v.contains("c1")) cfg.c1 = number_or_inf(v.at("c1"), "thresholds.c1", p);
    if (v.contains("c2")) cfg.c2 = number_or_inf(v.at("c2"), "thresholds.c2", p);
    if (v.contains("slack")) cfg.slack = v.at("slack").get<double>();
  });
  guard("calibration", [&](const json& v) {
    check_keys(v, {"n_list", "delta_list", "quantile"}, "calibration.", p);
    if (v.contains("n_list")) cfg.n_list = v.at("n_list").get<std::vector<int>>();
    if (v.contains("delta_list")) cfg.delta_list = v.at("delta_list").get<std::vector<double>>();
    if (v.contains("quantile")) cfg.quantile = v.at("quantile").get<double>();
  });
  guard("bands", [&](const json& v) {
    check_keys(v, {"slope", "sweep"}, "bands.", p);
    if (v.contains("slope")) cfg.slope_band = parse_band(v.at("slope"), "bands.slope", p);
    if (v.contains("sweep")) cfg.sweep_band = parse_band(v.at("sweep"), "bands.sweep", p);
  });

  if (!p.empty()) throw ConfigError(std::move(p));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config is not valid JSON: ") + e.what(),
                      static_cast<std::size_t>(e.byte));
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = experiment_name(cfg.experiment);
  j["n"] = cfg.n;
  j["delta"] = cfg.delta;
  j["law"] = cfg.law.name();
  j["profile"] = cfg.profile;
  j["trials"] = cfg.trials;
  j["grid"] = cfg.grid;
  j["seed"] = cfg.seed;
  if (cfg.kprime) j["kprime"] = *cfg.kprime;
  j["shift"] = {{"z", format_complex(cfg.z)},
                {"imag_sweep", cfg.imag_sweep},
                {"sweep_epsilon", cfg.sweep_epsilon}};
  j["region"] = {{"center", format_complex(cfg.region_center)}, {"radius", cfg.region_radius}};
  json th = {{"slack", cfg.slack}};
  if (cfg.c1) th["c1"] = number_json(*cfg.c1);
  if (cfg.c2) th["c2"] = number_json(*cfg.c2);
  j["thresholds"] = th;
  j["calibration"] = {
      {"n_list", cfg.n_list}, {"delta_list", cfg.delta_list}, {"quantile", cfg.quantile}};
  json bands = json::object();
  if (cfg.slope_band) bands["slope"] = {cfg.slope_band->lo, cfg.slope_band->hi};
  if (cfg.sweep_band) bands["sweep"] = {cfg.sweep_band->lo, cfg.sweep_band->hi};
  j["bands"] = bands;
  return j;
}

}  // namespace specreg
