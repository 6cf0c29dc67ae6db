#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <icp/error.hpp>
#include <icp/existence.hpp>
#include <icp/fixtures.hpp>
#include <icp/flow.hpp>
#include <icp/io.hpp>

namespace icp::cli {

namespace {

using nlohmann::json;

struct FlowOptions {
  std::string input;
  std::string flow = "calabi";
  std::string geometry = "hyperbolic";
  std::string r0;
  std::string method = "rk4";
  std::string out;
  std::string summary;
  double dt = FlowConfig{}.dt;
  double tol = FlowConfig{}.tol;
  long max_steps = FlowConfig{}.max_steps;
  int record_every = 1;
  int max_samples = FlowConfig{}.max_samples;
};

struct CheckOptions {
  std::string input;
  bool h3 = false;
  long samples = H3Options{}.random_subsets;
  std::uint64_t seed = H3Options{}.seed;
};

struct ReportOptions {
  std::string input;
  std::string prefix;
};

struct GenerateOptions {
  int vertices = 25;
  std::uint64_t seed = 1;
  std::string out;
};

std::string fixed(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

Geometry parse_geometry(const std::string& s) {
  if (s == "euclidean") return Geometry::Euclidean;
  return Geometry::Hyperbolic;
}

// --r0 is either a single number (constant radii) or a file holding a JSON
// array or whitespace-separated list of radii.
Vector initial_radii(const std::string& arg, int n) {
  if (arg.empty()) return Vector::Ones(n);
  try {
    std::size_t used = 0;
    const double value = std::stod(arg, &used);
    if (used == arg.size()) return Vector::Constant(n, value);
  } catch (const std::exception&) {
  }
  std::ifstream in(arg);
  if (!in) throw Error(ErrorCode::MalformedInput, "--r0: '" + arg + "' is neither a number nor a readable file");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<double> values;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      values = json::parse(text).get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedInput, "--r0: " + std::string(e.what()));
    }
  } else {
    std::istringstream is(text);
    std::string token;
    while (is >> token) {
      std::size_t used = 0;
      try {
        values.push_back(std::stod(token, &used));
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || used == 0) throw Error(ErrorCode::MalformedInput, "--r0: bad value '" + token + "'");
    }
  }
  if (static_cast<int>(values.size()) != n) {
    throw Error(ErrorCode::MalformedInput, "--r0 has " + std::to_string(values.size()) + " radii for " +
                                               std::to_string(n) + " vertices");
  }
  return Eigen::Map<const Vector>(values.data(), n);
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void print_star(const CellComplex& c, const std::vector<FaceStarVerdict>& verdicts, std::ostream& out) {
  out << "vertices " << c.num_vertices() << "\n"
      << "edges " << c.num_edges() << "\n"
      << "faces " << c.num_faces() << "\n"
      << "euler_characteristic " << euler_characteristic(c) << "\n"
      << "genus " << genus(c) << "\n";
  for (const FaceStarVerdict& v : verdicts) {
    out << "face " << v.face << ": slots " << v.slots << ", residual " << fixed(v.residual, 17) << ", tolerance "
        << v.tolerance << (v.exact ? " (exact)" : " (float)") << ", " << (v.pass ? "pass" : "FAIL") << "\n";
  }
  out << "star condition: " << (all_pass(verdicts) ? "pass" : "FAIL") << "\n";
}

int cmd_validate(const std::string& input, std::ostream& out) {
  const CellComplex c = load_complex(input);
  const auto verdicts = check_star(c);
  print_star(c, verdicts, out);
  return all_pass(verdicts) ? kOk : kStarViolated;
}

int cmd_flow(const FlowOptions& o, std::ostream& out, std::ostream& err) {
  const CellComplex c = load_complex(o.input);
  const auto verdicts = check_star(c);
  if (!all_pass(verdicts)) {
    print_star(c, verdicts, err);
    return kStarViolated;
  }
  const Triangulation t = triangulate(c);
  const Geometry g = parse_geometry(o.geometry);

  FlowConfig cfg;
  cfg.kind = flow_kind(o.flow == "calabi", g);
  cfg.dt = o.dt;
  cfg.tol = o.tol;
  cfg.max_steps = o.max_steps;
  cfg.method = o.method == "euler" ? Integrator::Euler : Integrator::RK4;
  cfg.record_every = o.record_every;
  cfg.max_samples = o.max_samples;

  const PatternState s0 = PatternState::from_radii(g, initial_radii(o.r0, c.num_vertices()));
  const Trajectory tr = run(cfg, t, s0);

  if (!o.out.empty()) {
    std::ofstream csv(o.out);
    if (!csv) throw Error(ErrorCode::MalformedInput, "cannot write '" + o.out + "'");
    write_trajectory_csv(csv, tr);
  }

  json summary;
  summary["stop_reason"] = to_string(tr.stop_reason);
  summary["steps"] = tr.steps;
  summary["final_residual"] = tr.final_residual;
  summary["energy0"] = tr.front().energy;
  summary["energyT"] = tr.back().energy;
  summary["lambda_fit"] = tr.fitted_rate ? json(tr.fitted_rate->lambda) : json(nullptr);
  summary["r2_fit"] = tr.fitted_rate ? json(tr.fitted_rate->r2) : json(nullptr);
  summary["flow"] = to_string(cfg.kind);
  summary["geometry"] = to_string(g);
  summary["time"] = tr.back().t;
  summary["final_dt"] = tr.final_dt;
  summary["max_radius"] = tr.max_radius;
  summary["final_K"] = to_std(tr.back().K);
  summary["final_r"] = to_std(tr.back().r);
  summary["spectral_gap"] = spectral_gap(jacobian(t, tr.final_state()), g);
  const std::string text = summary.dump(2) + "\n";
  out << text;
  if (!o.summary.empty()) {
    std::ofstream file(o.summary);
    if (!file) throw Error(ErrorCode::MalformedInput, "cannot write '" + o.summary + "'");
    file << text;
  }

  switch (tr.stop_reason) {
    case StopReason::Converged: return kOk;
    case StopReason::StepUnderflow: return kStepUnderflow;
    case StopReason::MaxSteps: return kBudgetExhausted;
  }
  return kOk;
}

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  if (!o.h3) {
    err << "check: nothing to check (pass --h3)\n";
    return kInvalidInput;
  }
  const CellComplex c = load_complex(o.input);
  H3Options opts;
  opts.random_subsets = o.samples;
  opts.seed = o.seed;
  const H3Verdict v = check_h3(c, opts);
  out << "H3: " << (v.pass ? "pass" : "FAIL") << " (" << (v.exhaustive ? "exact" : "sampled") << ", "
      << v.subsets_checked << " subsets checked)\n";
  if (!v.pass) {
    out << "witness {";
    for (std::size_t k = 0; k < v.witness.size(); ++k) out << (k ? ", " : "") << "v" << v.witness[k];
    out << "}: weight " << fixed(v.witness_weight, 17) << " <= " << fixed(v.witness_bound, 17) << "\n";
  }
  return kOk;
}

int cmd_report(const ReportOptions& o, std::ostream& out) {
  std::ifstream in(o.input);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open '" + o.input + "'");
  const TrajectoryTable table = read_trajectory_csv(in);

  std::vector<double> t, energy;
  for (const Sample& s : table.rows) {
    t.push_back(s.t);
    energy.push_back(s.energy);
  }
  const RateFit fit = fit_rate(t, energy);

  std::string prefix = o.prefix;
  if (prefix.empty()) {
    prefix = o.input;
    if (prefix.size() > 4 && prefix.compare(prefix.size() - 4, 4, ".csv") == 0) prefix.resize(prefix.size() - 4);
  }
  const std::string log_path = prefix + ".log_energy.tsv";
  const std::string k_path = prefix + ".max_curvature.tsv";
  std::ofstream log_out(log_path), k_out(k_path);
  if (!log_out || !k_out) throw Error(ErrorCode::MalformedInput, "cannot write under prefix '" + prefix + "'");
  char line[96];
  log_out << "t\tln_energy\n";
  k_out << "t\tmax_abs_K\n";
  for (const Sample& s : table.rows) {
    if (s.energy > 0.0) {
      std::snprintf(line, sizeof line, "%.17g\t%.17g\n", s.t, std::log(s.energy));
      log_out << line;
    }
    std::snprintf(line, sizeof line, "%.17g\t%.17g\n", s.t, s.K.size() ? s.K.cwiseAbs().maxCoeff() : 0.0);
    k_out << line;
  }

  json report;
  report["samples"] = table.rows.size();
  report["lambda_fit"] = fit.lambda;
  report["r2_fit"] = fit.r2;
  report["log_energy_tsv"] = log_path;
  report["max_curvature_tsv"] = k_path;
  out << report.dump(2) << "\n";
  return kOk;
}

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
  const std::string text = complex_to_json(fixtures::random_stacked_sphere(o.vertices, o.seed));
  if (o.out.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream file(o.out);
  if (!file) throw Error(ErrorCode::MalformedInput, "cannot write '" + o.out + "'");
  file << text;
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ideal circle patterns by combinatorial Calabi and Ricci flows", "icp"};
  app.require_subcommand(1);

  std::string validate_input;
  auto* validate = app.add_subcommand("validate", "Check a complex and its per-face angle sums");
  validate->add_option("input", validate_input, "Instance JSON")->required();

  FlowOptions fo;
  auto* flow = app.add_subcommand("flow", "Integrate a Calabi or Ricci flow");
  flow->add_option("input", fo.input, "Instance JSON")->required();
  flow->add_option("--flow", fo.flow, "calabi or ricci")->check(CLI::IsMember({"calabi", "ricci"}))->capture_default_str();
  flow->add_option("--geometry", fo.geometry, "euclidean or hyperbolic")
      ->check(CLI::IsMember({"euclidean", "hyperbolic"}))
      ->capture_default_str();
  flow->add_option("--r0", fo.r0, "Initial radii: a constant, or a file with one radius per vertex (default 1)");
  flow->add_option("--dt", fo.dt, "Initial step size")->check(CLI::PositiveNumber)->capture_default_str();
  flow->add_option("--tol", fo.tol, "Stop when max |K - K_target| falls below this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  flow->add_option("--max-steps", fo.max_steps, "Step budget")->check(CLI::PositiveNumber)->capture_default_str();
  flow->add_option("--method", fo.method, "rk4 or euler")->check(CLI::IsMember({"rk4", "euler"}))->capture_default_str();
  flow->add_option("--record-every", fo.record_every, "Sampling stride")->check(CLI::PositiveNumber)->capture_default_str();
  flow->add_option("--max-samples", fo.max_samples, "Thin the samples beyond twice this many (0 keeps all)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  flow->add_option("--out", fo.out, "Trajectory CSV");
  flow->add_option("--summary", fo.summary, "Also write the summary JSON here");

  CheckOptions co;
  auto* check = app.add_subcommand("check", "Check existence conditions");
  check->add_option("input", co.input, "Instance JSON")->required();
  check->add_flag("--h3", co.h3, "Total weight of edges meeting A exceeds pi |A| for every vertex subset A");
  check->add_option("--samples", co.samples, "Random subsets beyond singletons and pairs for large complexes")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  check->add_option("--seed", co.seed, "Seed for the random subsets");

  ReportOptions ro;
  auto* report = app.add_subcommand("report", "Turn a trajectory CSV into plot-ready TSVs and a rate fit");
  report->add_option("trajectory", ro.input, "Trajectory CSV")->required();
  report->add_option("--prefix", ro.prefix, "Output prefix (default: the CSV path without .csv)");

  GenerateOptions go;
  auto* generate = app.add_subcommand("generate", "Write a random stacked triangulation of the sphere");
  generate->add_option("--vertices", go.vertices, "Vertex count (>= 4)")->check(CLI::Range(4, 1 << 20))->capture_default_str();
  generate->add_option("--seed", go.seed, "Random seed")->capture_default_str();
  generate->add_option("--out", go.out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*validate) return cmd_validate(validate_input, out);
    if (*flow) return cmd_flow(fo, out, err);
    if (*check) return cmd_check(co, out, err);
    if (*report) return cmd_report(ro, out);
    if (*generate) return cmd_generate(go, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace icp::cli
