#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "icp/complex.hpp"
#include "icp/flow.hpp"

namespace icp {

struct H3Options {
  int exhaustive_limit = 20;      // enumerate all subsets up to this many vertices
  long random_subsets = 100'000;  // extra samples beyond singletons and pairs
  std::uint64_t seed = 0x1cc5eedULL;
  double tolerance = 1e-12;       // slack on the strict inequality for float weights
};

struct H3Verdict {
  bool pass = true;
  bool exhaustive = true;  // false: the subsets were sampled
  long subsets_checked = 0;
  // Failing subset A with sum over edges meeting A of Theta <= pi |A|.
  std::vector<int> witness;
  double witness_weight = 0.0;
  double witness_bound = 0.0;
};

// For every nonempty A of V: total weight of edges with an end in A > pi |A|.
// Each edge counts once, loops included.
H3Verdict check_h3(const CellComplex& c, const H3Options& opts = {});

enum class EmpiricalOutcome { Converged, Inconclusive };

struct EmpiricalVerdict {
  EmpiricalOutcome outcome = EmpiricalOutcome::Inconclusive;
  StopReason stop_reason = StopReason::MaxSteps;
  long steps = 0;
  double final_residual = 0.0;
  std::optional<Vector> radii;  // the witnessing pattern when converged
};

// Calabi flow from r = 1 with `budget` steps. Running out of budget is
// reported as inconclusive, never as nonexistence.
EmpiricalVerdict classify_empirical(const CellComplex& c, Geometry g, long budget, FlowConfig base = {});

struct ExistenceVerdict {
  std::vector<FaceStarVerdict> star;
  std::optional<H3Verdict> h3;  // hyperbolic only
  std::optional<EmpiricalVerdict> empirical;
};

ExistenceVerdict assess_existence(const CellComplex& c, Geometry g, long budget, const H3Options& opts = {});

}  // namespace icp
