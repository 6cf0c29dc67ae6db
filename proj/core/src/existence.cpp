#include "icp/existence.hpp"

#include <algorithm>
#include <bit>
#include <future>
#include <numeric>
#include <random>
#include <thread>

#include "icp/error.hpp"

namespace icp {

namespace {

// Edge weights as integers over a common denominator, when every weight is
// an exact pi fraction and the denominator stays small.
struct ExactWeights {
  std::int64_t denominator = 1;
  std::vector<std::int64_t> scaled;
};

std::optional<ExactWeights> exact_weights(const CellComplex& c) {
  ExactWeights w;
  for (const Edge& e : c.edges()) {
    if (!e.theta.exact) return std::nullopt;
    w.denominator = std::lcm(w.denominator, e.theta.exact->den);
    if (w.denominator > (std::int64_t{1} << 32)) return std::nullopt;
  }
  for (const Edge& e : c.edges()) w.scaled.push_back(e.theta.exact->num * (w.denominator / e.theta.exact->den));
  return w;
}

class SubsetTester {
 public:
  SubsetTester(const CellComplex& c, const H3Options& opts) : c_(c), exact_(exact_weights(c)), tol_(opts.tolerance) {}

  // Returns true when the H3 inequality holds for the subset.
  template <typename Member>
  bool holds(Member in_subset, int size, double* weight) const {
    std::int64_t exact_sum = 0;
    double sum = 0.0;
    for (std::size_t e = 0; e < c_.edges().size(); ++e) {
      const Edge& edge = c_.edges()[e];
      if (in_subset(edge.tail) || in_subset(edge.head)) {
        sum += edge.theta.radians;
        if (exact_) exact_sum += exact_->scaled[e];
      }
    }
    *weight = sum;
    if (exact_) return exact_sum > static_cast<std::int64_t>(size) * exact_->denominator;
    return sum > kPi * size + tol_ * std::max(1, size);
  }

 private:
  const CellComplex& c_;
  std::optional<ExactWeights> exact_;
  double tol_;
};

void set_witness(H3Verdict& v, std::vector<int> subset, double weight) {
  v.pass = false;
  v.witness_bound = kPi * static_cast<double>(subset.size());
  v.witness = std::move(subset);
  v.witness_weight = weight;
}

}  // namespace

H3Verdict check_h3(const CellComplex& c, const H3Options& opts) {
  const int n = c.num_vertices();
  const SubsetTester tester(c, opts);
  H3Verdict verdict;

  if (n <= opts.exhaustive_limit && n < 31) {
    verdict.exhaustive = true;
    const std::uint32_t end = std::uint32_t{1} << n;
    const unsigned workers = n >= 16 ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
    const std::uint32_t block = (end + workers - 1) / workers;
    // Each worker reports its first failing mask; the smallest one wins.
    auto scan = [&](std::uint32_t lo, std::uint32_t hi) -> std::uint32_t {
      for (std::uint32_t mask = std::max(lo, 1u); mask < hi; ++mask) {
        double weight = 0.0;
        auto member = [mask](int v) { return (mask >> v) & 1u; };
        if (!tester.holds(member, std::popcount(mask), &weight)) return mask;
      }
      return 0;
    };
    std::vector<std::future<std::uint32_t>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint32_t lo = w * block;
      const std::uint32_t hi = std::min(end, lo + block);
      jobs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, scan, lo, hi));
    }
    std::uint32_t failing = 0;
    for (auto& job : jobs) {
      const std::uint32_t m = job.get();
      if (m != 0 && failing == 0) failing = m;
    }
    verdict.subsets_checked = static_cast<long>(end - 1);
    if (failing != 0) {
      std::vector<int> subset;
      for (int v = 0; v < n; ++v) {
        if ((failing >> v) & 1u) subset.push_back(v);
      }
      double weight = 0.0;
      tester.holds([failing](int v) { return (failing >> v) & 1u; }, static_cast<int>(subset.size()), &weight);
      set_witness(verdict, std::move(subset), weight);
    }
    return verdict;
  }

  verdict.exhaustive = false;
  std::vector<char> member(static_cast<std::size_t>(n), 0);
  auto test_current = [&](int size) {
    ++verdict.subsets_checked;
    double weight = 0.0;
    if (tester.holds([&](int v) { return member[static_cast<std::size_t>(v)] != 0; }, size, &weight)) return true;
    std::vector<int> subset;
    for (int v = 0; v < n; ++v) {
      if (member[static_cast<std::size_t>(v)]) subset.push_back(v);
    }
    set_witness(verdict, std::move(subset), weight);
    return false;
  };
  for (int a = 0; a < n; ++a) {
    member[static_cast<std::size_t>(a)] = 1;
    const bool ok = test_current(1);
    member[static_cast<std::size_t>(a)] = 0;
    if (!ok) return verdict;
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      member[static_cast<std::size_t>(a)] = member[static_cast<std::size_t>(b)] = 1;
      const bool ok = test_current(2);
      member[static_cast<std::size_t>(a)] = member[static_cast<std::size_t>(b)] = 0;
      if (!ok) return verdict;
    }
  }
  std::mt19937_64 rng(opts.seed);
  std::bernoulli_distribution coin(0.5);
  for (long k = 0; k < opts.random_subsets; ++k) {
    int size = 0;
    for (int v = 0; v < n; ++v) {
      member[static_cast<std::size_t>(v)] = coin(rng) ? 1 : 0;
      size += member[static_cast<std::size_t>(v)];
    }
    if (size == 0) continue;
    if (!test_current(size)) return verdict;
  }
  return verdict;
}

EmpiricalVerdict classify_empirical(const CellComplex& c, Geometry g, long budget, FlowConfig base) {
  const Triangulation t = triangulate(c);
  base.kind = flow_kind(true, g);
  base.max_steps = budget;
  const Trajectory tr = run(base, t, PatternState::constant(g, c.num_vertices()));
  EmpiricalVerdict v;
  v.stop_reason = tr.stop_reason;
  v.steps = tr.steps;
  v.final_residual = tr.final_residual;
  if (tr.stop_reason == StopReason::Converged) {
    v.outcome = EmpiricalOutcome::Converged;
    v.radii = tr.back().r;
  }
  return v;
}

ExistenceVerdict assess_existence(const CellComplex& c, Geometry g, long budget, const H3Options& opts) {
  ExistenceVerdict v;
  v.star = check_star(c);
  if (g == Geometry::Hyperbolic) v.h3 = check_h3(c, opts);
  if (all_pass(v.star)) v.empirical = classify_empirical(c, g, budget);
  return v;
}

}  // namespace icp
