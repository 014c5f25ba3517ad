#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "bosonet/network_io.hpp"
#include "bosonet/simulation.hpp"
#include "bosonet/state_io.hpp"
#include "bosonet/topology.hpp"

namespace bosonet::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

struct Options {
  std::string network;
  std::string state;
  double t0 = 0.0;
  double t1 = 0.0;
  double dt = 0.1;
  bool t1_given = false;
  std::string out;
  int cutoff = 0;
  double tolerance = 1e-5;
  std::string kernel = "adjoint";
  int workers = 0;
  int focus = 1;
  std::vector<std::string> observables;
  bool no_symmetrize = false;
  std::string rate_evaluation = "normal_modes";
  std::size_t max_dimension = 4096;
  // sweep
  std::vector<std::string> params;
  std::size_t max_points = 1000;
  // compare-oracle
  std::vector<double> times;
  double oracle_dt = 0.0;
  std::string theta_sign = "minus";
  // topology generate
  std::string kind;
  int n = 2;
  double omega = 1.0;
  double lambda = 0.1;
  std::optional<double> white_noise;
};

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << text;
  if (!f) throw ParseError("write to '" + path + "' failed");
}

json matrix_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("bosonet", sink);
  log->set_pattern("bosonet: %l: %v");
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("BOSONET_LOG"); env && *env) {
    level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"
    if (level == spdlog::level::off && std::string(env) != "off") {
      level = spdlog::level::warn;
      log->set_level(level);
      log->warn("BOSONET_LOG='{}' not recognized; using warn", env);
    }
  }
  log->set_level(level);
  return log;
}

EntropyKernel parse_kernel(const std::string& s) {
  const auto k = entropy_kernel_from_string(s);
  if (!k) throw ValidationError("--entropy-kernel: expected paper or adjoint");
  return *k;
}

DampingOptions damping_options(const Options& o) {
  DampingOptions d;
  d.symmetrize = !o.no_symmetrize;
  if (o.rate_evaluation == "normal_modes")
    d.evaluation = RateEvaluation::normal_modes;
  else if (o.rate_evaluation == "bare_frequency")
    d.evaluation = RateEvaluation::bare_frequency;
  else
    throw ValidationError("--rate-evaluation: expected normal_modes or bare_frequency");
  return d;
}

SimulationSettings simulation_settings(const Options& o, int n) {
  if (o.focus < 1 || o.focus > n)
    throw ValidationError("--focus: expected an oscillator index in [1, " + std::to_string(n) + "]");
  SimulationSettings s;
  s.focus = o.focus - 1;
  s.kernel = parse_kernel(o.kernel);
  s.damping = damping_options(o);
  s.cutoff = o.cutoff;
  s.max_dimension = o.max_dimension;
  s.observables = o.observables;
  if (o.workers < 0) throw ValidationError("--workers: must be >= 0");
  s.workers = o.workers;
  return s;
}

struct Inputs {
  std::string network_text;
  std::string state_text;
  NetworkSpec spec;
  InitialState state;
};

Inputs load_inputs(const Options& o) {
  Inputs in;
  in.network_text = slurp(o.network);
  in.spec = parse_network(in.network_text);
  in.state_text = slurp(o.state);
  in.state = parse_state(in.state_text, in.spec.n);
  return in;
}

json inputs_json(const Options& o, const Inputs& in) {
  return {{"network", {{"path", o.network}, {"fnv1a64", hex64(fnv1a64(in.network_text))}}},
          {"state", {{"path", o.state}, {"fnv1a64", hex64(fnv1a64(in.state_text))}}}};
}

json settings_json(const Options& o, const SimulationSettings& s,
                   const std::vector<std::string>& groups) {
  return {{"t0", o.t0},
          {"t1", o.t1},
          {"dt", o.dt},
          {"focus", s.focus + 1},
          {"entropy_kernel", to_string(s.kernel)},
          {"symmetrize_gamma", s.damping.symmetrize},
          {"gamma_symmetry_tolerance", s.damping.symmetry_tol},
          {"rate_evaluation", o.rate_evaluation},
          {"fock_cutoff", s.cutoff},
          {"observables", groups},
          {"spectral_tolerances",
           {{"degeneracy", s.spectral.degeneracy},
            {"max_condition", s.spectral.max_condition},
            {"normal_residual", s.spectral.normal_residual}}},
          {"seed", nullptr}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty())
    out << text;
  else
    write_text(o.out, text);
}

int cmd_simulate(const Options& o, std::ostream& out, spdlog::logger& log) {
  const auto start = std::chrono::steady_clock::now();
  const auto in = load_inputs(o);
  const auto settings = simulation_settings(o, in.spec.n);
  const auto times = make_time_grid({o.t0, o.t1, o.dt});
  log.info("simulate: N={} points={}", in.spec.n, times.size());
  const auto res = simulate(in.spec, in.state, times, settings);
  for (const auto& w : res.warnings) log.warn("{}", w);
  const std::string csv = to_csv(res.table);
  emit(o, csv, out);
  if (!o.out.empty()) {
    json m = {{"tool", "bosonet"},
              {"version", kVersion},
              {"command", "simulate"},
              {"inputs", inputs_json(o, in)},
              {"parameters", settings_json(o, settings, res.observables)},
              {"network_matrices",
               {{"gamma", matrix_json(res.matrices.damping.gamma)},
                {"gamma_symmetrized", res.matrices.damping.symmetrized},
                {"gamma_asymmetry", res.matrices.damping.asymmetry},
                {"gamma_psd", res.matrices.psd.is_psd},
                {"gamma_min_eigenvalue", res.matrices.psd.min_eigenvalue},
                {"hd_condition", res.dm.condition},
                {"hd_normal", res.dm.normal},
                {"hd_matrix_exponential", res.dm.use_expm}}},
              {"entropy_kernels_agree", res.kernels_agree},
              {"warnings", res.warnings},
              {"output",
               {{"path", o.out},
                {"rows", res.table.rows.size()},
                {"columns", res.table.columns},
                {"fnv1a64", hex64(fnv1a64(csv))}}},
              {"wall_clock_seconds", seconds_since(start)}};
    write_text(o.out + ".manifest.json", m.dump(2) + "\n");
    log.info("wrote {} rows to {}", res.table.rows.size(), o.out);
  }
  return Exit::ok;
}

int cmd_sweep(const Options& o, std::ostream& out, spdlog::logger& log) {
  const auto start = std::chrono::steady_clock::now();
  const auto in = load_inputs(o);
  const auto settings = simulation_settings(o, in.spec.n);
  const auto times = make_time_grid({o.t0, o.t1, o.dt});
  std::vector<SweepParameter> params;
  for (const auto& p : o.params) params.push_back(parse_sweep_parameter(p));
  const auto res = sweep(in.spec, in.state, params, times, settings, o.max_points);
  const std::string csv = to_csv(res.table);
  emit(o, csv, out);
  if (!o.out.empty()) {
    json points = json::array();
    for (const auto& p : res.points) {
      for (const auto& w : p.warnings) log.warn("{}", w);
      json values = json::object();
      for (std::size_t i = 0; i < params.size(); ++i) values[params[i].name] = p.values[i];
      points.push_back({{"values", values},
                        {"gamma", matrix_json(p.gamma)},
                        {"gamma_psd", p.gamma_psd},
                        {"entropy_kernels_agree", p.kernels_agree},
                        {"warnings", p.warnings}});
    }
    json param_list = json::array();
    for (const auto& p : params) param_list.push_back({{"name", p.name}, {"values", p.values}});
    json m = {{"tool", "bosonet"},
              {"version", kVersion},
              {"command", "sweep"},
              {"inputs", inputs_json(o, in)},
              {"parameters", settings_json(o, settings, {})},
              {"sweep", {{"parameters", param_list}, {"max_points", o.max_points}}},
              {"points", points},
              {"output",
               {{"path", o.out},
                {"rows", res.table.rows.size()},
                {"columns", res.table.columns},
                {"fnv1a64", hex64(fnv1a64(csv))}}},
              {"wall_clock_seconds", seconds_since(start)}};
    write_text(o.out + ".manifest.json", m.dump(2) + "\n");
  }
  log.info("sweep: {} points, {} rows", res.points.size(), res.table.rows.size());
  return Exit::ok;
}

int cmd_compare(const Options& o, std::ostream& out, spdlog::logger& log) {
  const auto start = std::chrono::steady_clock::now();
  const auto in = load_inputs(o);
  CompareSettings s;
  s.cutoff = o.cutoff;
  s.tolerance = o.tolerance;
  s.dt = o.oracle_dt;
  s.max_dimension = o.max_dimension;
  s.damping = damping_options(o);
  if (o.theta_sign == "minus")
    s.flip_theta = false;
  else if (o.theta_sign == "plus")
    s.flip_theta = true;
  else
    throw ValidationError("--theta-sign: expected minus or plus");
  std::vector<double> times = o.times;
  if (times.empty()) {
    if (!o.t1_given) throw ValidationError("compare-oracle: give --times or a --t0/--t1/--dt grid");
    times = make_time_grid({o.t0, o.t1, o.dt});
  }
  const auto rep = compare_with_oracle(in.spec, in.state, times, s);
  json report = {{"tool", "bosonet"},
                 {"version", kVersion},
                 {"command", "compare-oracle"},
                 {"inputs", inputs_json(o, in)},
                 {"theta_sign", o.theta_sign},
                 {"times", rep.times},
                 {"trace_distance", rep.trace_distance},
                 {"max_trace_distance", rep.max_trace_distance},
                 {"tolerance", rep.tolerance},
                 {"pass", rep.pass},
                 {"cutoff", rep.cutoff},
                 {"dimension", rep.dimension},
                 {"closed_form_truncation", rep.closed_form_truncation},
                 {"oracle",
                  {{"frame", rep.frame},
                   {"dt", rep.dt},
                   {"steps", rep.oracle_stats.steps},
                   {"max_trace_drift", rep.oracle_stats.max_trace_drift},
                   {"min_eigenvalue", rep.oracle_stats.min_eigenvalue}}},
                 {"wall_clock_seconds", seconds_since(start)}};
  emit(o, report.dump(2) + "\n", out);
  if (!rep.pass) {
    log.error("closed form deviates from the oracle: max trace distance {:.3e} > {:.1e}",
              rep.max_trace_distance, rep.tolerance);
    return Exit::comparison_failed;
  }
  log.info("compare-oracle passed: max trace distance {:.3e}", rep.max_trace_distance);
  return Exit::ok;
}

int cmd_topology(const Options& o, std::ostream& out, spdlog::logger& log) {
  const auto kind = topology_kind_from_string(o.kind);
  if (!kind) throw ValidationError("--kind: expected symmetric, central, circular or linear");
  NetworkSpec spec = generate_topology(*kind, o.n, o.omega, o.lambda);
  if (o.white_noise) attach_white_noise(spec, *o.white_noise);
  validate(spec);
  emit(o, serialize_network(spec), out);
  log.info("generated {} network with {} couplings", to_string(*kind), spec.couplings.size());
  return Exit::ok;
}

int cmd_validate(const Options& o, std::ostream& out, spdlog::logger& log) {
  const std::string text = slurp(o.network);
  const NetworkSpec spec = parse_network(text);
  const auto nm = assemble(spec, damping_options(o));
  const auto dm = build_hd(nm.h, nm.damping.gamma);
  json report = {{"network", {{"path", o.network}, {"fnv1a64", hex64(fnv1a64(text))}}},
                 {"n", spec.n},
                 {"couplings", spec.couplings.size()},
                 {"normal_mode_frequencies",
                  std::vector<double>(nm.modes.frequencies.data(),
                                      nm.modes.frequencies.data() + nm.modes.frequencies.size())},
                 {"gamma", matrix_json(nm.damping.gamma)},
                 {"gamma_symmetrized", nm.damping.symmetrized},
                 {"gamma_psd", nm.psd.is_psd},
                 {"gamma_min_eigenvalue", nm.psd.min_eigenvalue},
                 {"hd_condition", dm.condition},
                 {"hd_normal", dm.normal},
                 {"hd_matrix_exponential", dm.use_expm}};
  if (!o.state.empty()) {
    const auto state = parse_state(slurp(o.state), spec.n);
    report["state"] = {{"path", o.state},
                       {"kind", std::holds_alternative<CoherentSuperposition>(state)
                                    ? "coherent_superposition"
                                    : "fock_superposition"}};
  }
  if (!nm.psd.is_psd) log.warn("damping matrix is not positive semidefinite");
  emit(o, report.dump(2) + "\n", out);
  return Exit::ok;
}

void add_time_flags(CLI::App* c, Options& o, bool t1_required) {
  c->add_option("--t0", o.t0, "First sample time")->capture_default_str();
  auto* t1 = c->add_option_function<double>(
      "--t1", [&o](double v) { o.t1 = v, o.t1_given = true; }, "Last sample time");
  if (t1_required) t1->required();
  c->add_option("--dt", o.dt, "Sample spacing")->capture_default_str();
}

void add_model_flags(CLI::App* c, Options& o) {
  c->add_option("--network", o.network, "Network JSON file")->required();
  c->add_option("--state", o.state, "Initial state JSON file")->required();
  c->add_option("--out", o.out, "Output path (stdout when omitted)");
  c->add_flag("--no-symmetrize", o.no_symmetrize, "Keep an asymmetric damping matrix as is");
  c->add_option("--rate-evaluation", o.rate_evaluation,
                "normal_modes or bare_frequency (weak-coupling limit)")
      ->capture_default_str();
}

void add_simulation_flags(CLI::App* c, Options& o) {
  add_model_flags(c, o);
  add_time_flags(c, o, true);
  c->add_option("--focus", o.focus, "Source oscillator (1-based)")->capture_default_str();
  c->add_option("--entropy-kernel", o.kernel, "paper or adjoint")->capture_default_str();
  c->add_option("--observables", o.observables,
                "Groups: P_R, P_T, entropy, coherence, populations")
      ->delimiter(',');
  c->add_option("--cutoff", o.cutoff, "Fock levels per oscillator (Fock states)");
  c->add_option("--max-dimension", o.max_dimension, "Bound on the Fock space dimension")
      ->capture_default_str();
  c->add_option("--workers", o.workers, "Worker threads (0 = all)")->capture_default_str();
}

CLI::App* deepest(CLI::App* app) {
  for (auto* sub : app->get_subcommands()) return deepest(sub);
  return app;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Dissipative coupled-oscillator network simulator", "bosonet"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* simulate_cmd = app.add_subcommand("simulate", "Closed-form time series to CSV");
  add_simulation_flags(simulate_cmd, o);

  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep to long-format CSV");
  add_simulation_flags(sweep_cmd, o);
  sweep_cmd
      ->add_option("--param", o.params,
                   "name=v1,v2,... or name=start:stop:count; name is lambda, omega, overlap "
                   "or gamma:<model>")
      ->required();
  sweep_cmd->add_option("--max-points", o.max_points, "Cap on parameter tuples")
      ->capture_default_str();

  auto* compare_cmd =
      app.add_subcommand("compare-oracle", "Closed form against the Lindblad integrator");
  add_model_flags(compare_cmd, o);
  add_time_flags(compare_cmd, o, false);
  compare_cmd->add_option("--times", o.times, "Comparison times")->delimiter(',');
  compare_cmd->add_option("--cutoff", o.cutoff, "Fock levels per oscillator (0 = automatic)");
  compare_cmd->add_option("--tolerance", o.tolerance, "Trace-distance tolerance")
      ->capture_default_str();
  compare_cmd->add_option("--oracle-dt", o.oracle_dt, "Integrator step (0 = automatic)");
  compare_cmd->add_option("--max-dimension", o.max_dimension, "Bound on the oracle dimension")
      ->capture_default_str();
  compare_cmd->add_option("--theta-sign", o.theta_sign,
                          "minus: exp(-H^D t); plus: sign-flipped negative control")
      ->capture_default_str();
  compare_cmd->add_option("--workers", o.workers, "Accepted for symmetry; the kernel uses OpenMP");

  auto* topology_cmd = app.add_subcommand("topology", "Network generators");
  topology_cmd->require_subcommand(1);
  auto* generate_cmd = topology_cmd->add_subcommand("generate", "Write a network JSON file");
  generate_cmd->add_option("--kind", o.kind, "symmetric, central, circular or linear")->required();
  generate_cmd->add_option("--n", o.n, "Number of oscillators")->required();
  generate_cmd->add_option("--omega", o.omega, "Oscillator frequency")->capture_default_str();
  generate_cmd->add_option("--lambda", o.lambda, "Coupling strength")->capture_default_str();
  generate_cmd->add_option("--white-noise", o.white_noise,
                           "Attach a distinct white-noise reservoir of this rate to every oscillator");
  generate_cmd->add_option("--out", o.out, "Output path (stdout when omitted)");

  auto* validate_cmd = app.add_subcommand("validate", "Check a network (and optional state)");
  validate_cmd->add_option("--network", o.network, "Network JSON file")->required();
  validate_cmd->add_option("--state", o.state, "Initial state JSON file");
  validate_cmd->add_option("--out", o.out, "Report path (stdout when omitted)");
  validate_cmd->add_flag("--no-symmetrize", o.no_symmetrize, "Keep an asymmetric damping matrix");
  validate_cmd->add_option("--rate-evaluation", o.rate_evaluation,
                           "normal_modes or bare_frequency")
      ->capture_default_str();

  auto log = make_logger(err);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << deepest(&app)->help();
    return Exit::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Exit::ok;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return Exit::ok;
  } catch (const CLI::ParseError& e) {
    err << "bosonet: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return Exit::parse_error;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(o, out, *log);
    if (sweep_cmd->parsed()) return cmd_sweep(o, out, *log);
    if (compare_cmd->parsed()) return cmd_compare(o, out, *log);
    if (generate_cmd->parsed()) return cmd_topology(o, out, *log);
    if (validate_cmd->parsed()) return cmd_validate(o, out, *log);
  } catch (const ParseError& e) {
    log->error("{}", e.what());
    return Exit::parse_error;
  } catch (const ValidationError& e) {
    log->error("invalid input: {}", e.what());
    return Exit::validation_error;
  } catch (const NumericalError& e) {
    log->error("numerical failure: {}", e.what());
    return Exit::numerical_error;
  } catch (const std::exception& e) {
    log->error("internal failure: {}", e.what());
    return Exit::numerical_error;
  }
  return Exit::parse_error;
}

}  // namespace bosonet::cli
