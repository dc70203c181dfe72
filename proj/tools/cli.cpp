#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "manifest.hpp"
#include "specreg/config.hpp"
#include "specreg/error.hpp"
#include "specreg/harness.hpp"
#include "specreg/linalg.hpp"
#include "specreg/matfun.hpp"
#include "specreg/mmio.hpp"
#include "specreg/perturb.hpp"
#include "specreg/pseudospec.hpp"
#include "specreg/report.hpp"
#include "specreg/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace specreg::cli {
namespace {

struct Flags {
  std::string in, out, config, profile, law, grid, z, center, function;
  std::string bench_name;
  int n = 0;
  double delta = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  double kprime = 0.0;
  double c1 = 0.0, c2 = 0.0;
  double radius = 0.0;
  double lipschitz = 0.0;
  double eps = 1e-8;
  int jobs = 0;
  int max_attempts = 16;
  int resolution = 512;
  std::int64_t max_resolution = std::int64_t{1} << 22;
  double quantile = 0.0;
  double slack = 0.0;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    double x = 0.0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (item.empty() || ec != std::errc{} || p != item.data() + item.size()) {
      throw InvalidInput("bad number '" + item + "' in list '" + text + "'");
    }
    v.push_back(x);
  }
  if (v.empty()) throw InvalidInput("empty list");
  return v;
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("SPECREG_SEED");
  if (!s || !*s) return std::nullopt;
  std::uint64_t v = 0;
  const std::string_view text(s);
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size()) {
    throw InvalidInput("SPECREG_SEED is not an unsigned integer: '" + std::string(text) + "'");
  }
  return v;
}

int default_jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

bool given(const CLI::App* app, const char* name) { return app->count(name) > 0; }

std::uint64_t resolve_seed(const CLI::App* app, const Flags& f) {
  if (given(app, "--seed")) return f.seed;
  return env_seed().value_or(0);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

std::string sidecar(const std::string& base, const char* suffix) { return base + suffix; }

NoiseLaw law_or(const CLI::App* app, const Flags& f, LawKind fallback) {
  return given(app, "--law") ? NoiseLaw::parse(f.law) : NoiseLaw(fallback);
}

DenseMatrix input_matrix(const CLI::App* app, const Flags& f, RunManifest& m) {
  if (given(app, "--in")) {
    m.inputs.push_back(hash_input(f.in));
    return read_matrix(fs::path(f.in));
  }
  if (given(app, "--profile")) {
    if (fs::exists(f.profile)) m.inputs.push_back(hash_input(f.profile));
    return make_profile(f.profile, given(app, "--n") ? f.n : 10);
  }
  throw InvalidInput(app->get_name() + ": --in (or --profile) is required");
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--in", f.in, "Input matrix (Matrix Market)");
  sub->add_option("--out", f.out, "Output path");
}

void add_regularize_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--profile", f.profile, "Mean generator name or file (instead of --in)");
  sub->add_option("--n", f.n, "Dimension for --profile");
  sub->add_option("--delta", f.delta, "Perturbation size");
  sub->add_option("--law", f.law, "real-gaussian | real-uniform | complex-gaussian");
  sub->add_option("--seed", f.seed, "Base seed (fallback: SPECREG_SEED)");
  sub->add_option("--c1", f.c1, "kappa_V threshold constant");
  sub->add_option("--c2", f.c2, "||E|| <= c2 delta threshold constant");
  sub->add_option("--max-attempts", f.max_attempts, "Independent draws before giving up");
}

json regularize_json(const RegularizationResult& r) {
  json rep;
  to_json(rep, r.report);
  return {{"succeeded", r.succeeded},
          {"attempts", r.attempts},
          {"e_norm", r.e_norm},
          {"c1", r.c1_threshold},
          {"c2", r.c2_threshold},
          {"kappa_threshold", r.kappa_threshold},
          {"threshold_shape", r.shape == ThresholdShape::Complex ? "complex" : "real-log"},
          {"condition", rep}};
}

int cmd_condition(const CLI::App* app, const Flags& f, std::ostream& out) {
  Clock clock;
  RunManifest m;
  m.subcommand = "condition";
  const DenseMatrix a = input_matrix(app, f, m);
  json j;
  to_json(j, condition_report(eig(a)));
  const std::string text = dump_json(j);
  out << text;
  if (given(app, "--out")) {
    write_text(f.out, text);
    m.outputs.push_back(f.out);
    m.wall_seconds = clock.seconds();
    write_manifest(m, sidecar(f.out, ".manifest.json"));
  }
  return kOk;
}

int cmd_regularize(const CLI::App* app, const Flags& f, std::ostream& out) {
  Clock clock;
  RegularizeOptions o;
  o.delta = given(app, "--delta") ? f.delta : o.delta;
  if (!(o.delta > 0.0 && o.delta < 0.5)) {
    throw InvalidInput("regularize: --delta must lie in (0, 1/2), got " + format_double(o.delta));
  }
  o.law = law_or(app, f, LawKind::RealGaussian);
  if (given(app, "--c1")) o.c1_threshold = f.c1;
  if (given(app, "--c2")) o.c2_threshold = f.c2;
  o.max_attempts = f.max_attempts;
  o.seed = resolve_seed(app, f);

  RunManifest m;
  m.subcommand = "regularize";
  m.seed = o.seed;
  const DenseMatrix a = input_matrix(app, f, m);
  const RegularizationResult r = o.law.is_complex() ? complex_regularize(a, o) : regularize(a, o);

  json summary = regularize_json(r);
  const std::string text = dump_json(summary);
  out << text;
  if (given(app, "--out")) {
    write_matrix(r.perturbed, fs::path(f.out));
    write_text(sidecar(f.out, ".json"), text);
    m.outputs = {f.out, sidecar(f.out, ".json")};
    m.config = {{"delta", o.delta},
                {"law", o.law.name()},
                {"c1", r.c1_threshold},
                {"c2", r.c2_threshold},
                {"max_attempts", o.max_attempts}};
    m.wall_seconds = clock.seconds();
    write_manifest(m, sidecar(f.out, ".manifest.json"));
  }
  return r.succeeded ? kOk : kAssertionFailed;
}

int cmd_matfun(const CLI::App* app, const Flags& f, std::ostream& out) {
  Clock clock;
  MatFunOptions o;
  o.delta = given(app, "--delta") ? f.delta : o.delta;
  o.law = law_or(app, f, LawKind::RealGaussian);
  if (given(app, "--c1")) o.c1_threshold = f.c1;
  if (given(app, "--c2")) o.c2_threshold = f.c2;
  if (given(app, "--lipschitz")) o.lipschitz = f.lipschitz;
  o.max_attempts = f.max_attempts;
  o.seed = resolve_seed(app, f);
  const std::string fname = given(app, "--function") ? f.function : "exp";
  const ScalarFunction fn = builtin_function(fname);

  RunManifest m;
  m.subcommand = "matfun";
  m.seed = o.seed;
  const DenseMatrix a = input_matrix(app, f, m);
  const MatFunResult r = approx_matfun(a, fn, o);
  const auto& c = r.certificate;
  const DaviesEnvelopes env =
      davies_envelopes(static_cast<std::size_t>(a.rows()), f.eps, o.delta * c.rescale,
                       c.kappa_v_upper, c.e_norm);

  json cert = {{"function", fname},
               {"kappa_v_upper", c.kappa_v_upper},
               {"e_norm", c.e_norm},
               {"unit_roundoff", c.unit_roundoff},
               {"rescale", c.rescale},
               {"scale", c.scale},
               {"lipschitz", c.lipschitz ? json(*c.lipschitz) : json(nullptr)},
               {"error_estimate", c.error_estimate ? json(*c.error_estimate) : json(nullptr)},
               {"regularization", regularize_json(r.regularization)},
               {"envelopes",
                {{"eps", f.eps},
                 {"achieved", env.achieved},
                 {"conjecture_target", env.conjecture_target},
                 {"davies07_bound", env.davies07_bound},
                 {"bkms_bound", env.bkms_bound},
                 {"bkms_accuracy", env.bkms_accuracy}}}};

  if (given(app, "--out")) {
    write_matrix(r.value, fs::path(f.out));
    write_text(sidecar(f.out, ".cert.json"), dump_json(cert));
    m.outputs = {f.out, sidecar(f.out, ".cert.json")};
    m.config = {{"function", fname}, {"delta", o.delta}, {"law", o.law.name()},
                {"max_attempts", o.max_attempts}, {"eps", f.eps}};
    if (o.lipschitz) m.config["lipschitz"] = *o.lipschitz;
    m.wall_seconds = clock.seconds();
    write_manifest(m, sidecar(f.out, ".manifest.json"));
    out << dump_json(cert);
  } else {
    write_matrix(r.value, out);
  }
  return r.regularization.succeeded ? kOk : kAssertionFailed;
}

int cmd_pseudospec(const CLI::App* app, const Flags& f, std::ostream& out) {
  Clock clock;
  RunManifest m;
  m.subcommand = "pseudospec";
  const DenseMatrix a = input_matrix(app, f, m);
  if (!given(app, "--grid")) throw InvalidInput("pseudospec: --grid (descending epsilons) is required");
  const std::vector<double> eps = parse_list(f.grid);
  const cplx center = given(app, "--center") ? parse_complex(f.center) : cplx{};
  const double radius = given(app, "--radius") ? f.radius : 2.0 * std::max(op_norm(a), 1e-300);
  const GridRegion region = GridRegion::disc(center, radius, f.resolution);
  const VolLimitResult r = vol_limit_check(a, region, eps);

  std::ostringstream csv;
  write_csv(r, csv);
  if (given(app, "--out")) {
    write_text(f.out, csv.str());
    m.outputs.push_back(f.out);
    m.config = {{"grid", eps}, {"center", format_complex(center)},
                {"radius", radius}, {"resolution", f.resolution}};
    m.wall_seconds = clock.seconds();
    write_manifest(m, sidecar(f.out, ".manifest.json"));
  }
  out << csv.str();
  return kOk;
}

int cmd_vol_check(const CLI::App* app, const Flags& f, std::ostream& out) {
  Clock clock;
  RunManifest m;
  m.subcommand = "vol-check";
  const DenseMatrix a = input_matrix(app, f, m);
  VolBoundOptions o;
  o.max_resolution = f.max_resolution;
  const VolBoundResult r = vol_bound_check(a, o);
  const json j = {{"pass", r.pass},
                  {"epsilon", r.epsilon},
                  {"lhs", r.lhs},
                  {"lhs_lower", r.lhs_lower},
                  {"lhs_upper", r.lhs_upper},
                  {"rhs", r.rhs},
                  {"kappa2", r.kappa2},
                  {"gap", r.gap},
                  {"region_radius", r.region_radius},
                  {"resolution", r.resolution},
                  {"volume", r.estimate.volume},
                  {"volume_error_bound", r.estimate.volume_error_bound}};
  const std::string text = dump_json(j);
  out << text;
  if (given(app, "--out")) {
    write_text(f.out, text);
    m.outputs.push_back(f.out);
    m.config = {{"max_resolution", o.max_resolution}};
    m.wall_seconds = clock.seconds();
    write_manifest(m, sidecar(f.out, ".manifest.json"));
  }
  return r.pass ? kOk : kAssertionFailed;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("config " + path + ": " + e.what());
  }
}

int cmd_bench(const CLI::App* app, const Flags& f, std::ostream& out) {
  Clock clock;
  RunManifest m;
  m.subcommand = "bench";
  ExperimentConfig cfg;
  bool seed_in_file = false;
  if (given(app, "--config")) {
    const json raw = read_json_file(f.config);
    cfg = parse_config(raw);
    const json& body = raw.contains("subcommand") && raw.contains("config") ? raw.at("config") : raw;
    seed_in_file = body.contains("seed");
    m.inputs.push_back(hash_input(f.config));
  } else if (f.bench_name.empty()) {
    throw InvalidInput("bench: an experiment name or --config is required");
  }
  if (!f.bench_name.empty()) cfg.experiment = parse_experiment(f.bench_name);

  if (given(app, "--n")) cfg.n = f.n;
  if (given(app, "--delta")) cfg.delta = f.delta;
  if (given(app, "--law")) cfg.law = NoiseLaw::parse(f.law);
  if (given(app, "--profile")) cfg.profile = f.profile;
  if (given(app, "--trials")) cfg.trials = f.trials;
  if (given(app, "--grid")) cfg.grid = parse_list(f.grid);
  if (given(app, "--z")) cfg.z = parse_complex(f.z);
  if (given(app, "--kprime")) cfg.kprime = f.kprime;
  if (given(app, "--c1")) cfg.c1 = f.c1;
  if (given(app, "--c2")) cfg.c2 = f.c2;
  if (given(app, "--center")) cfg.region_center = parse_complex(f.center);
  if (given(app, "--radius")) cfg.region_radius = f.radius;
  if (given(app, "--quantile")) cfg.quantile = f.quantile;
  if (given(app, "--slack")) cfg.slack = f.slack;
  if (given(app, "--seed")) {
    cfg.seed = f.seed;
  } else if (!seed_in_file) {
    cfg.seed = env_seed().value_or(0);
  }
  cfg = with_defaults(cfg);
  validate(cfg);
  if (fs::exists(cfg.profile)) m.inputs.push_back(hash_input(cfg.profile));

  const int jobs = given(app, "--jobs") ? f.jobs : default_jobs();
  if (jobs < 1) throw InvalidInput("--jobs must be at least 1");
  const ExperimentReport report = run_experiment(cfg, RunOptions{jobs});

  const fs::path dir = given(app, "--out") ? fs::path(f.out) : fs::path(".");
  fs::create_directories(dir);
  const std::string stem = experiment_name(cfg.experiment) + "-seed" + std::to_string(cfg.seed);
  const fs::path json_path = dir / (stem + ".json");
  const fs::path csv_path = dir / (stem + ".csv");
  write_text(json_path, dump_json(to_json(report)));
  std::ostringstream csv;
  write_csv(report, csv);
  write_text(csv_path, csv.str());

  m.config = to_json(report.config);
  m.seed = report.config.seed;
  m.jobs = jobs;
  m.outputs = {json_path.string(), csv_path.string()};
  m.wall_seconds = clock.seconds();
  write_manifest(m, dir / (stem + ".manifest.json"));

  const Status status = report.status();
  out << experiment_name(cfg.experiment) << ": " << status_name(status) << "\n";
  for (const auto& c : report.checks) {
    out << "  " << c.name << ": " << status_name(c.status) << " (" << c.detail << ")\n";
  }
  out << "  report: " << json_path.string() << "\n";
  return status == Status::Fail ? kAssertionFailed : kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized regularization of non-normal matrices", "specreg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());
  Flags f;

  auto* condition = app.add_subcommand("condition", "Eigenvalue and eigenvector condition report");
  add_common(condition, f);
  condition->add_option("--profile", f.profile, "Mean generator name or file (instead of --in)");
  condition->add_option("--n", f.n, "Dimension for --profile");

  auto* regularize = app.add_subcommand("regularize", "Perturb and certify kappa_V(A + E)");
  add_common(regularize, f);
  add_regularize_flags(regularize, f);

  auto* matfun = app.add_subcommand("matfun", "f(A + E) with an accuracy certificate");
  add_common(matfun, f);
  add_regularize_flags(matfun, f);
  std::string names;
  for (const auto& s : builtin_function_names()) names += (names.empty() ? "" : ", ") + s;
  matfun->add_option("--function", f.function, "Builtin function: " + names);
  matfun->add_option("--lipschitz", f.lipschitz, "Lipschitz constant of f near the spectrum");
  matfun->add_option("--eps", f.eps, "Accuracy parameter for the envelope comparison");

  auto* pseudospec = app.add_subcommand("pseudospec", "Pseudospectral volume ratios");
  add_common(pseudospec, f);
  pseudospec->add_option("--profile", f.profile, "Mean generator name or file (instead of --in)");
  pseudospec->add_option("--n", f.n, "Dimension for --profile");
  pseudospec->add_option("--grid", f.grid, "Descending epsilon list (comma separated)");
  pseudospec->add_option("--center", f.center, "Disc center (a+bi)");
  pseudospec->add_option("--radius", f.radius, "Disc radius (default 2||A||)");
  pseudospec->add_option("--resolution", f.resolution, "Cells per axis");

  auto* volcheck = app.add_subcommand("vol-check", "Pseudospectral volume lower bound");
  add_common(volcheck, f);
  volcheck->add_option("--profile", f.profile, "Mean generator name or file (instead of --in)");
  volcheck->add_option("--n", f.n, "Dimension for --profile");
  volcheck->add_option("--max-resolution", f.max_resolution, "Largest lattice size per axis");

  auto* bench = app.add_subcommand("bench", "Monte Carlo experiments");
  std::vector<std::string> experiments;
  for (auto k : {ExperimentKind::SvTail, ExperimentKind::ShiftedSv, ExperimentKind::Gap,
                 ExperimentKind::Overlap, ExperimentKind::Success, ExperimentKind::Calibrate}) {
    experiments.push_back(experiment_name(k));
  }
  bench->add_option("name", f.bench_name, "Experiment")->check(CLI::IsMember(experiments));
  bench->add_option("--config", f.config, "JSON config or run manifest");
  bench->add_option("--out", f.out, "Report directory (default .)");
  bench->add_option("--n", f.n, "Dimension");
  bench->add_option("--delta", f.delta, "Perturbation size");
  bench->add_option("--law", f.law, "real-gaussian | real-uniform | complex-gaussian");
  bench->add_option("--profile", f.profile, "zero | jordan | diag-grid | Matrix Market file");
  bench->add_option("--trials", f.trials, "Monte Carlo trials");
  bench->add_option("--seed", f.seed, "Base seed (fallback: SPECREG_SEED)");
  bench->add_option("--grid", f.grid, "Comma-separated eps or s values");
  bench->add_option("--z", f.z, "Shift a+bi");
  bench->add_option("--kprime", f.kprime, "Norm-event threshold K'");
  bench->add_option("--c1", f.c1, "kappa_V threshold constant");
  bench->add_option("--c2", f.c2, "||E|| threshold constant");
  bench->add_option("--center", f.center, "Overlap region center a+bi");
  bench->add_option("--radius", f.radius, "Overlap region radius");
  bench->add_option("--quantile", f.quantile, "Calibration quantile");
  bench->add_option("--slack", f.slack, "Success-frequency slack below 1/2");
  bench->add_option("--jobs", f.jobs, "Worker threads (default: hardware concurrency)");

  std::vector<std::string> argv_store{"specreg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(e.what()) + "\n"
                                                           : app.help());
      return kOk;
    }
    err << "specreg: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (condition->parsed()) return cmd_condition(condition, f, out);
    if (regularize->parsed()) return cmd_regularize(regularize, f, out);
    if (matfun->parsed()) return cmd_matfun(matfun, f, out);
    if (pseudospec->parsed()) return cmd_pseudospec(pseudospec, f, out);
    if (volcheck->parsed()) return cmd_vol_check(volcheck, f, out);
    if (bench->parsed()) return cmd_bench(bench, f, out);
  } catch (const ConfigError& e) {
    err << "specreg: invalid config:\n";
    for (const auto& p : e.problems()) err << "  - " << p << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "specreg: " << e.what() << "\n";
    return kUsage;
  }
  err << app.help();
  return kUsage;
}

}  // namespace specreg::cli
