#include "icp/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "icp/error.hpp"

namespace icp {

const char* to_string(FlowKind k) {
  switch (k) {
    case FlowKind::CalabiHyperbolic: return "calabi-hyperbolic";
    case FlowKind::CalabiEuclidean: return "calabi-euclidean";
    case FlowKind::RicciHyperbolic: return "ricci-hyperbolic";
    case FlowKind::RicciEuclidean: return "ricci-euclidean";
  }
  return "unknown";
}

const char* to_string(StopReason s) {
  switch (s) {
    case StopReason::Converged: return "Converged";
    case StopReason::MaxSteps: return "MaxSteps";
    case StopReason::StepUnderflow: return "StepUnderflow";
  }
  return "Unknown";
}

Geometry geometry_of(FlowKind k) {
  return k == FlowKind::CalabiEuclidean || k == FlowKind::RicciEuclidean ? Geometry::Euclidean
                                                                          : Geometry::Hyperbolic;
}

bool is_calabi(FlowKind k) { return k == FlowKind::CalabiHyperbolic || k == FlowKind::CalabiEuclidean; }

FlowKind flow_kind(bool calabi, Geometry g) {
  if (g == Geometry::Euclidean) return calabi ? FlowKind::CalabiEuclidean : FlowKind::RicciEuclidean;
  return calabi ? FlowKind::CalabiHyperbolic : FlowKind::RicciHyperbolic;
}

Vector target_curvature(const Triangulation& t, Geometry g) {
  const double level = g == Geometry::Euclidean ? k_average(t.complex()) : 0.0;
  return Vector::Constant(t.num_primal_vertices(), level);
}

namespace {

void require_geometry(FlowKind kind, const PatternState& s) {
  if (geometry_of(kind) != s.geometry()) {
    throw Error(ErrorCode::GeometryMismatch,
                std::string(to_string(kind)) + " flow on a " + to_string(s.geometry()) + " state");
  }
}

Vector rhs_with(FlowKind kind, const Triangulation& t, const PatternState& s, const Vector& K_target) {
  const Vector excess = curvature(t, s) - K_target;
  if (is_calabi(kind)) return -(jacobian(t, s).L * excess);
  return -excess;
}

Vector advance(const FlowConfig& cfg, const Triangulation& t, const PatternState& s, const Vector& K_target,
               const Vector& k1, double h) {
  const Geometry g = s.geometry();
  auto f = [&](const Vector& u) { return rhs_with(cfg.kind, t, PatternState::from_u(g, u), K_target); };
  const Vector& u = s.u();
  if (cfg.method == Integrator::Euler) return u + h * k1;
  const Vector k2 = f(u + 0.5 * h * k1);
  const Vector k3 = f(u + 0.5 * h * k2);
  const Vector k4 = f(u + h * k3);
  return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Fraction of the first-order energy decrease a step must achieve.
constexpr double kSufficientDecrease = 1e-4;

StepResult step_from(const FlowConfig& cfg, const Triangulation& t, const PatternState& s, const Vector& K_target,
                     double energy0, double dt) {
  require_geometry(cfg.kind, s);
  const Vector excess = curvature(t, s) - K_target;
  const Matrix L = jacobian(t, s).L;
  const Vector k1 = is_calabi(cfg.kind) ? Vector(-(L * excess)) : Vector(-excess);
  // dC/dt = 2 (K - K_target)^T L du/dt <= 0 along every flow
  const double decay_rate = std::min(0.0, 2.0 * excess.dot(L * k1));
  double h = dt;
  int rejections = 0;
  while (true) {
    if (!(h >= cfg.dt_floor)) {
      std::ostringstream msg;
      msg << "step size fell below " << cfg.dt_floor << " after " << rejections << " rejections";
      throw Error(ErrorCode::StepUnderflow, msg.str());
    }
    try {
      const Vector u_next = advance(cfg, t, s, K_target, k1, h);
      if (u_next.allFinite()) {
        PatternState next = PatternState::from_u(s.geometry(), u_next);
        Vector K = curvature(t, next);
        const double energy = (K - K_target).squaredNorm();
        const double allowed = energy0 * (1.0 + 1e-9) + 1e-24 + kSufficientDecrease * h * decay_rate;
        if (energy <= allowed) return StepResult{std::move(next), std::move(K), energy, h, rejections};
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DomainViolation) throw;
    }
    h *= 0.5;
    ++rejections;
  }
}

}  // namespace

Vector rhs(FlowKind kind, const Triangulation& t, const PatternState& s) {
  require_geometry(kind, s);
  return rhs_with(kind, t, s, target_curvature(t, s.geometry()));
}

Vector rhs_radii(FlowKind kind, const Triangulation& t, const PatternState& s) {
  const Vector du = rhs(kind, t, s);
  // dr/du = r (Euclidean) or sinh r (hyperbolic)
  const Vector drdu = s.geometry() == Geometry::Euclidean ? Vector(s.r()) : Vector(s.r().array().sinh().matrix());
  return du.cwiseProduct(drdu);
}

StepResult step(const FlowConfig& cfg, const Triangulation& t, const PatternState& s, double dt) {
  require_geometry(cfg.kind, s);
  const Vector K_target = target_curvature(t, s.geometry());
  const double energy0 = (curvature(t, s) - K_target).squaredNorm();
  return step_from(cfg, t, s, K_target, energy0, dt);
}

PatternState Trajectory::final_state() const {
  return PatternState::from_radii(geometry_of(kind), samples.back().r);
}

PatternState normalize_gauge(const PatternState& s, double total) {
  const double shift = (total - s.u().sum()) / static_cast<double>(s.size());
  return PatternState::from_u(s.geometry(), s.u().array() + shift);
}

Trajectory run(const FlowConfig& cfg, const Triangulation& t, const PatternState& s0) {
  require_geometry(cfg.kind, s0);
  if (!(cfg.dt > 0.0) || !(cfg.tol > 0.0) || cfg.max_steps < 1 || cfg.record_every < 1) {
    throw Error(ErrorCode::MalformedInput, "flow config needs dt > 0, tol > 0, max_steps >= 1, record_every >= 1");
  }
  const Geometry g = s0.geometry();
  const Vector K_target = target_curvature(t, g);
  const double gauge = s0.u().sum();

  Trajectory tr;
  tr.kind = cfg.kind;
  PatternState state = s0;
  Vector K = curvature(t, state);
  double energy = (K - K_target).squaredNorm();
  double time = 0.0;
  double dt = cfg.dt;
  long stride = cfg.record_every;
  long last_recorded = -1;
  tr.max_radius = state.r().maxCoeff();

  auto record = [&] {
    tr.samples.push_back(Sample{time, state.r(), K, energy});
    last_recorded = tr.steps;
    if (cfg.max_samples > 0 && tr.samples.size() >= 2 * static_cast<std::size_t>(cfg.max_samples)) {
      std::vector<Sample> kept;
      kept.reserve(tr.samples.size() / 2 + 1);
      for (std::size_t k = 0; k < tr.samples.size(); k += 2) kept.push_back(std::move(tr.samples[k]));
      tr.samples = std::move(kept);
      stride *= 2;
    }
  };
  record();

  while (true) {
    if ((K - K_target).cwiseAbs().maxCoeff() < cfg.tol) {
      tr.stop_reason = StopReason::Converged;
      break;
    }
    if (tr.steps >= cfg.max_steps) {
      tr.stop_reason = StopReason::MaxSteps;
      break;
    }
    std::optional<StepResult> res;
    try {
      res = step_from(cfg, t, state, K_target, energy, dt);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StepUnderflow) throw;
      tr.stop_reason = StopReason::StepUnderflow;
      break;
    }
    state = g == Geometry::Euclidean ? normalize_gauge(res->state, gauge) : std::move(res->state);
    K = std::move(res->K);
    energy = res->energy;
    dt = res->dt;
    time += res->dt;
    ++tr.steps;
    tr.max_radius = std::max(tr.max_radius, state.r().maxCoeff());
    if (tr.steps % stride == 0) record();
  }
  if (last_recorded != tr.steps) record();

  tr.final_residual = (K - K_target).cwiseAbs().maxCoeff();
  tr.final_dt = dt;
  try {
    tr.fitted_rate = fit_rate(tr);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientSamples) throw;
  }
  return tr;
}

RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& energy) {
  std::vector<double> ts, ys;
  for (std::size_t k = 0; k < t.size() && k < energy.size(); ++k) {
    if (energy[k] > 0.0 && std::isfinite(energy[k])) {
      ts.push_back(t[k]);
      ys.push_back(std::log(energy[k]));
    }
  }
  if (ts.size() < 10) {
    throw Error(ErrorCode::InsufficientSamples,
                "need at least 10 samples with positive energy, have " + std::to_string(ts.size()));
  }
  const double mid = 0.5 * (ts.front() + ts.back());
  double n = 0, sx = 0, sy = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (ts[k] < mid) continue;
    n += 1;
    sx += ts[k];
    sy += ys[k];
  }
  if (n < 2) throw Error(ErrorCode::InsufficientSamples, "trajectory tail has fewer than two samples");
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (ts[k] < mid) continue;
    sxx += (ts[k] - mx) * (ts[k] - mx);
    sxy += (ts[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InsufficientSamples, "trajectory tail spans zero time");
  const double slope = sxy / sxx;
  const double ss_res = syy - slope * sxy;
  RateFit fit;
  fit.lambda = -slope;
  // A flat tail leaves only rounding noise in syy; treat it as a perfect fit.
  const double noise = n * std::pow(8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(my)), 2);
  fit.r2 = syy > noise ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

RateFit fit_rate(const Trajectory& traj) {
  std::vector<double> t, e;
  t.reserve(traj.samples.size());
  e.reserve(traj.samples.size());
  for (const Sample& s : traj.samples) {
    t.push_back(s.t);
    e.push_back(s.energy);
  }
  return fit_rate(t, e);
}

CrossValidation cross_validate(const Triangulation& t, const PatternState& s0, double agreement, FlowConfig base) {
  const Geometry g = s0.geometry();
  CrossValidation cv;
  base.kind = flow_kind(true, g);
  cv.calabi = run(base, t, s0);
  base.kind = flow_kind(false, g);
  cv.ricci = run(base, t, s0);
  for (const Trajectory* tr : {&cv.calabi, &cv.ricci}) {
    if (tr->stop_reason != StopReason::Converged) {
      throw Error(ErrorCode::NonConvergence, std::string(to_string(tr->kind)) + " stopped with " +
                                                 to_string(tr->stop_reason) + ", residual " +
                                                 std::to_string(tr->final_residual));
    }
  }
  PatternState a = cv.calabi.final_state();
  PatternState b = cv.ricci.final_state();
  if (g == Geometry::Euclidean) {
    a = normalize_gauge(a, s0.u().sum());
    b = normalize_gauge(b, s0.u().sum());
  }
  cv.max_radius_gap = (a.r() - b.r()).cwiseAbs().maxCoeff();
  cv.agree = cv.max_radius_gap <= agreement;
  return cv;
}

namespace {

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const Eigen::Index n = traj.samples.empty() ? 0 : traj.samples.front().r.size();
  os << "t";
  for (Eigen::Index i = 0; i < n; ++i) os << ",r_" << i;
  for (Eigen::Index i = 0; i < n; ++i) os << ",K_" << i;
  os << ",energy\n";
  for (const Sample& s : traj.samples) {
    os << format17(s.t);
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format17(s.r(i));
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format17(s.K(i));
    os << ',' << format17(s.energy) << '\n';
  }
}

TrajectoryTable read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::MalformedInput, "trajectory CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  if (header.size() < 4 || (header.size() - 2) % 2 != 0 || header.front() != "t" || header.back() != "energy") {
    throw Error(ErrorCode::MalformedInput, "trajectory CSV header must be t,r_0..,K_0..,energy");
  }
  TrajectoryTable table;
  table.num_vertices = static_cast<int>((header.size() - 2) / 2);
  for (int i = 0; i < table.num_vertices; ++i) {
    if (header[1 + i] != "r_" + std::to_string(i) || header[1 + table.num_vertices + i] != "K_" + std::to_string(i)) {
      throw Error(ErrorCode::MalformedInput, "unexpected trajectory CSV column names");
    }
  }
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::MalformedInput, "line " + std::to_string(lineno) + " has " +
                                                 std::to_string(cells.size()) + " fields, expected " +
                                                 std::to_string(header.size()));
    }
    std::vector<double> values(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      std::size_t used = 0;
      try {
        values[k] = std::stod(cells[k], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cells[k].size()) {
        throw Error(ErrorCode::MalformedInput, "line " + std::to_string(lineno) + ": '" + cells[k] +
                                                   "' is not a number");
      }
    }
    Sample s;
    const int n = table.num_vertices;
    s.t = values[0];
    s.r = Eigen::Map<const Vector>(values.data() + 1, n);
    s.K = Eigen::Map<const Vector>(values.data() + 1 + n, n);
    s.energy = values.back();
    table.rows.push_back(std::move(s));
  }
  return table;
}

}  // namespace icp
