// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is the number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <icp/error.hpp>
#include <icp/existence.hpp>
#include <icp/fixtures.hpp>
#include <icp/flow.hpp>

#include "support/oracles.hpp"

using namespace icp;

namespace {

constexpr Geometry E = Geometry::Euclidean;
constexpr Geometry H = Geometry::Hyperbolic;

// Criterion 1
constexpr int kStatesPerFixture = 100;
constexpr double kFdStep = 1e-6;
constexpr double kJacobianRelTol = 1e-5;
// Entries are compared relative to max(|entry|, kRelFloor * max |L|, kAbsFloor)
// so that structurally tiny or identically zero entries (the flat Euclidean
// torus has L = 0) are judged against the scale of the matrix rather than the
// ~1e-10 truncation noise of the difference quotient.
constexpr double kRelFloor = 1e-3;
constexpr double kAbsFloor = 1e-3;
constexpr double kJacobianSeconds = 10.0;
// Criterion 2
constexpr double kSymmetryTol = 1e-12;
constexpr double kKernelTol = 1e-10;
// Criterion 3
constexpr double kGaussBonnetTol = 1e-9;
constexpr double kAreaTol = 1e-6;
// Criterion 4
constexpr double kConvergenceTol = 1e-10;
constexpr long kStepBudget = 1'000'000;
constexpr double kFixedPointAngleTol = 1e-9;
// Criterion 5
constexpr double kGaugeTol = 1e-9;
// Criterion 6
constexpr double kRateDt = 1e-4;
constexpr double kMinR2 = 0.99;
constexpr double kRateSlack = 0.10;
// Criterion 7
constexpr double kRigidityTol = 1e-6;
// Criterion 8
constexpr double kEnergySlack = 1e-9;
constexpr int kConfigsPerGeometry = 1000;
constexpr double kIdentityTol = 1e-12;
// Criterion 9
constexpr long kNonexistenceBudget = 20'000;
// Criterion 10
constexpr double kScaleTol = 1e-12;
constexpr double kGaugeShapeTol = 1e-9;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct RandomState {
  std::string fixture;
  Triangulation t;
  PatternState s;
};

struct Named {
  std::string name;
  CellComplex c;
};

std::vector<Named> jacobian_fixtures() {
  return {{"torus", fixtures::square_torus()}, {"octagon", fixtures::genus2_octagon()}, {"cube", fixtures::cube()}};
}

std::vector<RandomState> random_states() {
  std::mt19937_64 rng(2024);
  std::vector<RandomState> out;
  for (const auto& [name, c] : jacobian_fixtures()) {
    const Triangulation t = triangulate(c);
    for (Geometry g : {E, H}) {
      for (int k = 0; k < kStatesPerFixture; ++k) {
        out.push_back({name, t, PatternState::from_radii(g, oracle::random_radii(rng, c.num_vertices(), 0.2, 3.0))});
      }
    }
  }
  return out;
}

// Every trajectory the suite integrates, for the monotonicity check.
std::vector<Trajectory>& recorded_runs() {
  static std::vector<Trajectory> runs;
  return runs;
}

Trajectory record(Trajectory tr) {
  recorded_runs().push_back(tr);
  return tr;
}

FlowConfig flow_config(FlowKind kind, double dt = FlowConfig{}.dt) {
  FlowConfig cfg;
  cfg.kind = kind;
  cfg.dt = dt;
  cfg.max_steps = kStepBudget;
  cfg.tol = kConvergenceTol;
  return cfg;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

void criterion1(Verdict& v, const std::vector<RandomState>& states) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const RandomState& st : states) {
    const Matrix L = jacobian(st.t, st.s).L;
    const Matrix fd = oracle::fd_jacobian(st.t, st.s, kFdStep);
    const double floor = kRelFloor * max_abs(fd);
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
      for (Eigen::Index j = 0; j < L.cols(); ++j) {
        const double denom = std::max({std::abs(fd(i, j)), floor, kAbsFloor});
        const double err = L(i, j) == fd(i, j) ? 0.0 : std::abs(L(i, j) - fd(i, j)) / denom;
        worst = std::max(worst, err);
      }
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.detail << states.size() << " states, worst relative entry error " << worst << ", " << seconds << " s";
  v.require(worst < kJacobianRelTol, "entry error");
  v.require(seconds < kJacobianSeconds, "runtime");
}

void criterion2(Verdict& v, const std::vector<RandomState>& states) {
  double asym = 0.0, kernel = 0.0, min_hyp = INFINITY, min_euc = INFINITY;
  for (const RandomState& st : states) {
    const JacobianMatrix J = jacobian(st.t, st.s);
    asym = std::max(asym, max_abs(J.L - J.L.transpose()));
    if (st.s.geometry() == H) {
      min_hyp = std::min(min_hyp, spectral_gap(J, H));
    } else {
      kernel = std::max(kernel, max_abs(J.L * Vector::Ones(st.s.size())));
      if (st.s.size() > 1) min_euc = std::min(min_euc, spectral_gap(J, E));
    }
  }
  v.detail << "max |L - L^T| " << asym << ", min hyperbolic eigenvalue " << min_hyp << ", max |L 1| " << kernel
           << ", min Euclidean second eigenvalue " << min_euc;
  v.require(asym < kSymmetryTol, "symmetry");
  v.require(min_hyp > 0.0, "hyperbolic definiteness");
  v.require(kernel < kKernelTol, "Euclidean kernel");
  v.require(min_euc > 0.0, "Euclidean second eigenvalue");
}

void criterion3(Verdict& v, const std::vector<RandomState>& states) {
  double worst = 0.0;
  for (const RandomState& st : states) worst = std::max(worst, std::abs(curvature_map(st.t, st.s).gauss_bonnet_residual));
  const Triangulation oct = triangulate(fixtures::genus2_octagon());
  const Trajectory tr = record(run(flow_config(FlowKind::CalabiHyperbolic), oct, PatternState::constant(H, 1, 1.0)));
  const double area = *curvature_map(oct, tr.final_state()).total_area;
  v.detail << "max residual " << worst << ", converged octagon area - 4 pi = " << area - 4 * kPi;
  v.require(worst < kGaussBonnetTol, "Gauss-Bonnet residual");
  v.require(tr.stop_reason == StopReason::Converged, "octagon convergence");
  v.require(std::abs(area - 4 * kPi) < kAreaTol, "area");
}

void criterion4(Verdict& v) {
  const Triangulation oct = triangulate(fixtures::genus2_octagon());
  FlowConfig cfg = flow_config(FlowKind::CalabiHyperbolic);
  cfg.method = Integrator::RK4;
  const Trajectory tr = record(run(cfg, oct, PatternState::constant(H, 1, 1.0)));
  const double r = tr.back().r(0);
  const double theta = inner_angle({H, r, r, 3 * kPi / 4});
  v.detail << to_string(tr.stop_reason) << " after " << tr.steps << " steps, |K|_inf " << tr.final_residual
           << ", r* " << r << ", theta(r*, r*, 3pi/4) - pi/8 = " << theta - kPi / 8;
  v.require(tr.stop_reason == StopReason::Converged && tr.final_residual < kConvergenceTol, "convergence");
  v.require(std::abs(theta - kPi / 8) < kFixedPointAngleTol, "fixed-point angle");
}

void criterion5(Verdict& v) {
  std::mt19937_64 rng(55);
  const Triangulation cube = triangulate(fixtures::cube());
  const Triangulation torus = triangulate(fixtures::square_torus());
  double cube_err = 0.0, torus_err = 0.0, gauge = 0.0;
  bool converged = true;
  auto gauge_drift = [](const Trajectory& tr, double total) {
    double worst = 0.0;
    for (const Sample& s : tr.samples) worst = std::max(worst, std::abs(to_u(E, s.r).sum() - total));
    return worst;
  };
  for (FlowKind kind : {FlowKind::CalabiEuclidean, FlowKind::RicciEuclidean}) {
    for (int k = 0; k < 5; ++k) {
      const PatternState s0 = PatternState::from_radii(E, oracle::random_radii(rng, 8, 0.3, 3.0));
      const Trajectory tr = record(run(flow_config(kind), cube, s0));
      converged = converged && tr.stop_reason == StopReason::Converged;
      cube_err = std::max(cube_err, (tr.back().K.array() - kPi / 2).abs().maxCoeff());
      gauge = std::max(gauge, gauge_drift(tr, s0.u().sum()));
    }
    for (double r : {1.0, 0.3, 4.0}) {
      const PatternState s0 = PatternState::constant(E, 1, r);
      const Trajectory tr = record(run(flow_config(kind), torus, s0));
      converged = converged && tr.stop_reason == StopReason::Converged;
      torus_err = std::max(torus_err, tr.back().K.cwiseAbs().maxCoeff());
      gauge = std::max(gauge, gauge_drift(tr, s0.u().sum()));
    }
  }
  v.detail << "cube max |K - pi/2| " << cube_err << ", torus max |K| " << torus_err << ", max sum-u drift " << gauge;
  v.require(converged, "convergence");
  v.require(cube_err < kConvergenceTol, "cube curvature");
  v.require(torus_err < kConvergenceTol, "torus curvature");
  v.require(gauge < kGaugeTol, "gauge conservation");
}

void criterion6(Verdict& v) {
  const Triangulation oct = triangulate(fixtures::genus2_octagon());
  const Trajectory tr = record(run(flow_config(FlowKind::CalabiHyperbolic, kRateDt), oct, PatternState::constant(H, 1, 1.0)));
  const RateFit fit = fit_rate(tr);
  const double gap = spectral_gap(jacobian(oct, tr.final_state()), H);
  const double predicted = 2 * gap * gap;
  v.detail << "dt " << kRateDt << ", " << tr.steps << " steps, fitted rate " << fit.lambda << ", r^2 " << fit.r2
           << ", 2 lambda_1^2 = " << predicted << " (lambda_1 = " << gap << ")";
  v.require(tr.stop_reason == StopReason::Converged, "convergence");
  v.require(fit.r2 > kMinR2, "r^2");
  v.require(fit.lambda > 0.0, "negative slope");
  v.require(fit.lambda >= (1.0 - kRateSlack) * predicted, "rate");
}

void criterion7(Verdict& v) {
  std::mt19937_64 rng(77);
  double gap = 0.0, cross = 0.0;
  bool converged = true;
  for (const CellComplex& c : {fixtures::genus2_octagon(), fixtures::genus2_two_vertex()}) {
    const Triangulation t = triangulate(c);
    const int n = c.num_vertices();
    const Trajectory a = record(run(flow_config(FlowKind::CalabiHyperbolic), t, PatternState::constant(H, n, 1.0)));
    for (int k = 0; k < 3; ++k) {
      const PatternState s0 = PatternState::from_radii(H, oracle::random_radii(rng, n, 0.5, 2.0));
      const Trajectory b = record(run(flow_config(FlowKind::CalabiHyperbolic), t, s0));
      converged = converged && a.stop_reason == StopReason::Converged && b.stop_reason == StopReason::Converged;
      gap = std::max(gap, (a.back().r - b.back().r).cwiseAbs().maxCoeff());
      const CrossValidation cv = cross_validate(t, s0, kRigidityTol, flow_config(FlowKind::CalabiHyperbolic));
      record(cv.calabi);
      record(cv.ricci);
      cross = std::max(cross, cv.max_radius_gap);
      converged = converged && cv.agree;
    }
  }
  v.detail << "octagon and two-vertex genus 2: max radius gap r=1 vs random " << gap << ", Calabi vs Ricci " << cross;
  v.require(converged, "convergence");
  v.require(gap < kRigidityTol, "start independence");
  v.require(cross < kRigidityTol, "Calabi/Ricci agreement");
}

void criterion8(Verdict& v) {
  long samples = 0;
  double worst_rise = 0.0;
  bool monotone = true;
  for (const Trajectory& tr : recorded_runs()) {
    for (std::size_t k = 1; k < tr.samples.size(); ++k) {
      ++samples;
      const double prev = tr.samples[k - 1].energy, cur = tr.samples[k].energy;
      if (cur > prev * (1 + kEnergySlack) + 1e-24) monotone = false;
      if (prev > 0) worst_rise = std::max(worst_rise, cur / prev - 1.0);
    }
  }
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> R(0.05, 10.0), T(1e-3, kPi - 1e-3);
  long violations = 0;
  double worst_identity = 0.0;
  for (Geometry g : {E, H}) {
    for (int k = 0; k < kConfigsPerGeometry; ++k) {
      const TwoCircleConfig c{g, R(rng), R(rng), T(rng)};
      const AnglePartials p = angle_partials(c);
      if (!(p.dthi_dri < 0 && p.dthi_drj > 0 && p.dthj_drj < 0 && p.dthj_dri > 0)) ++violations;
      const double wi = g == E ? c.r_i : std::sinh(c.r_i);
      const double wj = g == E ? c.r_j : std::sinh(c.r_j);
      worst_identity = std::max(worst_identity, oracle::rel_err(p.dthi_drj * wj, p.dthj_dri * wi));
      const double l = edge_length(c);
      const double lhs = (g == E ? l : std::sinh(l)) * std::sin(inner_angle(c));
      const double rhs = wj * std::sin(c.theta);
      worst_identity = std::max(worst_identity, oracle::rel_err(lhs, rhs));
    }
  }
  v.detail << recorded_runs().size() << " runs / " << samples << " sample pairs, worst relative energy rise "
           << worst_rise << "; " << 2 * kConfigsPerGeometry << " configs, sign violations " << violations
           << ", worst symmetry/sine-law error " << worst_identity;
  v.require(monotone, "energy monotonicity");
  v.require(violations == 0, "derivative signs");
  v.require(worst_identity < kIdentityTol, "identities");
}

void criterion9(Verdict& v) {
  const CellComplex torus = fixtures::square_torus();
  const H3Verdict ht = check_h3(torus);
  const EmpiricalVerdict et = classify_empirical(torus, H, kNonexistenceBudget);
  const CellComplex oct = fixtures::genus2_octagon();
  const H3Verdict ho = check_h3(oct);
  const EmpiricalVerdict eo = classify_empirical(oct, H, kStepBudget);
  v.detail << "torus: H3 " << (ht.pass ? "pass" : "fail") << " witness size " << ht.witness.size() << ", flow "
           << to_string(et.stop_reason) << " after " << et.steps << " steps (residual " << et.final_residual
           << "); octagon: H3 " << (ho.pass ? "pass" : "fail") << (ho.exhaustive ? " (exact)" : " (sampled)")
           << ", flow " << to_string(eo.stop_reason);
  v.require(!ht.pass && ht.witness == std::vector<int>{0}, "torus H3 witness");
  v.require(et.outcome == EmpiricalOutcome::Inconclusive, "torus flow");
  v.require(ho.pass && ho.exhaustive, "octagon H3");
  v.require(eo.outcome == EmpiricalOutcome::Converged, "octagon flow");
}

void criterion10(Verdict& v) {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> lambda(0.1, 10.0);
  double worst = 0.0;
  for (const CellComplex& c : {fixtures::square_torus(), fixtures::cube(), fixtures::genus2_octagon(),
                               fixtures::random_stacked_sphere(20, 3)}) {
    const Triangulation t = triangulate(c);
    for (int k = 0; k < 50; ++k) {
      const Vector r = oracle::random_radii(rng, c.num_vertices(), 0.2, 3.0);
      const Vector K = curvature(t, PatternState::from_radii(E, r));
      worst = std::max(worst, max_abs(curvature(t, PatternState::from_radii(E, lambda(rng) * r)) - K));
    }
  }
  // the same starting shape in different gauges converges to the same shape
  const Triangulation cube = triangulate(fixtures::cube());
  const Vector r0 = oracle::random_radii(rng, 8, 0.3, 3.0);
  double shape = 0.0, scale_err = 0.0;
  bool converged = true;
  const Trajectory base = record(run(flow_config(FlowKind::CalabiEuclidean), cube, PatternState::from_radii(E, r0)));
  for (int k = 0; k < 3; ++k) {
    const double c = lambda(rng);
    const Trajectory tr = record(run(flow_config(FlowKind::CalabiEuclidean), cube, PatternState::from_radii(E, c * r0)));
    converged = converged && tr.stop_reason == StopReason::Converged && base.stop_reason == StopReason::Converged;
    const Vector ua = to_u(E, base.back().r), ub = to_u(E, tr.back().r);
    shape = std::max(shape, max_abs((ua.array() - ua.mean()) - (ub.array() - ub.mean())));
    scale_err = std::max(scale_err, std::abs((ub.mean() - ua.mean()) - std::log(c)));
  }
  v.detail << "max |K(lambda r) - K(r)| " << worst << "; gauge runs: shape gap " << shape << ", scale error "
           << scale_err;
  v.require(worst < kScaleTol, "scale invariance");
  v.require(converged, "convergence");
  v.require(shape < kGaugeShapeTol && scale_err < kGaugeShapeTol, "gauge reproduction");
}

}  // namespace

int main() {
  const std::vector<RandomState> states = random_states();
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
      {"Jacobian oracle equivalence", [&](Verdict& v) { criterion1(v, states); }},
      {"Symmetry and definiteness", [&](Verdict& v) { criterion2(v, states); }},
      {"Gauss-Bonnet", [&](Verdict& v) { criterion3(v, states); }},
      {"Hyperbolic convergence", criterion4},
      {"Euclidean convergence", criterion5},
      {"Exponential decay rate", criterion6},
      {"Rigidity", criterion7},
      {"Monotonicity suites", criterion8},
      {"H3 consistency", criterion9},
      {"Scale invariance", criterion10},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, body] : criteria) {
    Verdict v;
    try {
      body(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", index, name.c_str(), v.detail.str().c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
    ++index;
  }
  return failures;
}
