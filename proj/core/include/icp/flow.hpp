#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "icp/curvature.hpp"

namespace icp {

enum class FlowKind { CalabiHyperbolic, CalabiEuclidean, RicciHyperbolic, RicciEuclidean };
enum class Integrator { RK4, Euler };
enum class StopReason { Converged, MaxSteps, StepUnderflow };

const char* to_string(FlowKind k);
const char* to_string(StopReason s);
Geometry geometry_of(FlowKind k);
bool is_calabi(FlowKind k);
FlowKind flow_kind(bool calabi, Geometry g);

struct FlowConfig {
  FlowKind kind = FlowKind::CalabiHyperbolic;
  double dt = 1e-2;
  double tol = 1e-10;           // on max |K - K_target|
  long max_steps = 1'000'000;
  Integrator method = Integrator::RK4;
  int record_every = 1;
  // When the sample list reaches twice this size, every other sample is
  // dropped and the stride doubles. 0 keeps everything.
  int max_samples = 10'000;
  double dt_floor = 1e-12;
};

// Curvature the flow drives towards: 0 (hyperbolic) or K_av (Euclidean).
Vector target_curvature(const Triangulation& t, Geometry g);

// du/dt in u-coordinates for every flow kind:
//   Calabi: -L (K - K_target);  Ricci hyperbolic: -K;  Ricci Euclidean: K_av - K.
// Since L 1 = 0 in the Euclidean case, -L (K - K_av) = -L K.
Vector rhs(FlowKind kind, const Triangulation& t, const PatternState& s);
// The same vector field as dr/dt.
Vector rhs_radii(FlowKind kind, const Triangulation& t, const PatternState& s);

struct StepResult {
  PatternState state;
  Vector K;
  double energy = 0.0;  // |K - K_target|^2
  double dt = 0.0;      // step actually taken
  int rejections = 0;
};

// One integrator step from `s`. Candidates leaving the domain, or failing to
// lower the energy by a small fraction of its first-order decrease, are
// rejected and dt is halved; below cfg.dt_floor this throws StepUnderflow.
StepResult step(const FlowConfig& cfg, const Triangulation& t, const PatternState& s, double dt);

struct Sample {
  double t = 0.0;
  Vector r;
  Vector K;
  double energy = 0.0;
};

struct RateFit {
  double lambda = 0.0;  // decay rate of the energy, -d ln C / dt
  double r2 = 0.0;
};

struct Trajectory {
  FlowKind kind = FlowKind::CalabiHyperbolic;
  std::vector<Sample> samples;
  StopReason stop_reason = StopReason::MaxSteps;
  long steps = 0;
  double final_residual = 0.0;  // max |K - K_target| at the final state
  double final_dt = 0.0;
  double max_radius = 0.0;      // over every accepted step
  std::optional<RateFit> fitted_rate;

  const Sample& front() const { return samples.front(); }
  const Sample& back() const { return samples.back(); }
  PatternState final_state() const;
};

Trajectory run(const FlowConfig& cfg, const Triangulation& t, const PatternState& s0);

// Least-squares line through ln C(t) on the second half of the time span.
// Needs at least 10 samples with positive energy; throws InsufficientSamples.
RateFit fit_rate(const Trajectory& traj);
RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& energy);

struct CrossValidation {
  Trajectory calabi;
  Trajectory ricci;
  double max_radius_gap = 0.0;  // after gauge normalisation in the Euclidean case
  bool agree = false;
};

// Runs Calabi and Ricci flows from s0 and compares their limits. Throws
// NonConvergence if either flow does not converge within the budget.
CrossValidation cross_validate(const Triangulation& t, const PatternState& s0, double agreement = 1e-6,
                               FlowConfig base = {});

// Shift u so that sum(u) equals `total` (Euclidean scale gauge).
PatternState normalize_gauge(const PatternState& s, double total);

// CSV: header t,r_0..,K_0..,energy; 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

struct TrajectoryTable {
  int num_vertices = 0;
  std::vector<Sample> rows;
};

// Throws MalformedInput on a bad header or row.
TrajectoryTable read_trajectory_csv(std::istream& is);

}  // namespace icp
