#include "icp/complex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <sstream>

#include "icp/error.hpp"

namespace icp {

PiFraction PiFraction::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::MalformedInput, "pi fraction with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return PiFraction{num, den};
}

Weight Weight::from_pi_fraction(std::int64_t num, std::int64_t den) {
  const PiFraction f = PiFraction::make(num, den);
  return Weight{f.radians(), f};
}

int CellComplex::edge_end_degree(int v) const {
  int d = 0;
  for (const Edge& e : edges_) {
    if (e.tail == v) ++d;
    if (e.head == v) ++d;
  }
  return d;
}

namespace {

bool weight_in_range(const Weight& w) {
  if (w.exact) return w.exact->num > 0 && w.exact->num < w.exact->den;
  return std::isfinite(w.radians) && w.radians > 0.0 && w.radians < kPi;
}

struct Occurrence {
  int face;
  bool forward;
};

}  // namespace

CellComplex build_complex(RawComplex raw) {
  const int nv = raw.num_vertices;
  const int ne = static_cast<int>(raw.edges.size());
  if (nv < 1) throw Error(ErrorCode::MalformedInput, "complex needs at least one vertex");
  if (raw.faces.empty()) throw Error(ErrorCode::MalformedInput, "complex needs at least one face");

  for (int e = 0; e < ne; ++e) {
    const Edge& edge = raw.edges[static_cast<std::size_t>(e)];
    if (edge.tail < 0 || edge.tail >= nv || edge.head < 0 || edge.head >= nv) {
      std::ostringstream msg;
      msg << "edge " << e << " has an endpoint outside [0, " << nv << ")";
      throw Error(ErrorCode::MalformedInput, msg.str());
    }
    if (!weight_in_range(edge.theta)) {
      std::ostringstream msg;
      msg << "edge " << e << " weight " << edge.theta.radians << " is not inside (0, pi)";
      throw Error(ErrorCode::WeightOutOfRange, msg.str());
    }
  }

  std::vector<std::vector<Occurrence>> occurrences(static_cast<std::size_t>(ne));
  for (std::size_t f = 0; f < raw.faces.size(); ++f) {
    const FaceBoundary& face = raw.faces[f];
    if (face.empty()) throw Error(ErrorCode::MalformedInput, "face " + std::to_string(f) + " is empty");
    for (const DirectedEdge& d : face) {
      if (d.edge < 0 || d.edge >= ne) {
        throw Error(ErrorCode::MalformedInput,
                    "face " + std::to_string(f) + " references unknown edge " + std::to_string(d.edge));
      }
      occurrences[static_cast<std::size_t>(d.edge)].push_back({static_cast<int>(f), d.forward});
    }
  }
  for (int e = 0; e < ne; ++e) {
    const auto n = occurrences[static_cast<std::size_t>(e)].size();
    if (n != 2) {
      throw Error(ErrorCode::EdgeUsedOnceOrThrice,
                  "edge " + std::to_string(e) + " appears " + std::to_string(n) + " times in face boundaries");
    }
  }

  auto tail = [&](const DirectedEdge& d) {
    const Edge& e = raw.edges[static_cast<std::size_t>(d.edge)];
    return d.forward ? e.tail : e.head;
  };
  auto head = [&](const DirectedEdge& d) {
    const Edge& e = raw.edges[static_cast<std::size_t>(d.edge)];
    return d.forward ? e.head : e.tail;
  };
  for (std::size_t f = 0; f < raw.faces.size(); ++f) {
    const FaceBoundary& face = raw.faces[f];
    for (std::size_t k = 0; k < face.size(); ++k) {
      const DirectedEdge& next = face[(k + 1) % face.size()];
      if (head(face[k]) != tail(next)) {
        throw Error(ErrorCode::BrokenFaceWalk, "face " + std::to_string(f) + " is not a closed walk at slot " +
                                                   std::to_string(k));
      }
    }
  }

  // Two-colour faces by "reversed or not". Two faces sharing an edge must
  // traverse it in opposite directions after reorientation.
  const int nf = static_cast<int>(raw.faces.size());
  std::vector<int> flip(static_cast<std::size_t>(nf), -1);
  std::vector<std::vector<std::pair<int, int>>> constraints(static_cast<std::size_t>(nf));
  for (int e = 0; e < ne; ++e) {
    const auto& occ = occurrences[static_cast<std::size_t>(e)];
    const int parity = occ[0].forward == occ[1].forward ? 1 : 0;
    if (occ[0].face == occ[1].face) {
      if (parity == 1) {
        throw Error(ErrorCode::NonOrientable,
                    "face " + std::to_string(occ[0].face) + " traverses edge " + std::to_string(e) +
                        " twice in the same direction");
      }
      continue;
    }
    constraints[static_cast<std::size_t>(occ[0].face)].emplace_back(occ[1].face, parity);
    constraints[static_cast<std::size_t>(occ[1].face)].emplace_back(occ[0].face, parity);
  }
  std::queue<int> pending;
  flip[0] = 0;
  pending.push(0);
  while (!pending.empty()) {
    const int f = pending.front();
    pending.pop();
    for (const auto& [g, parity] : constraints[static_cast<std::size_t>(f)]) {
      const int want = flip[static_cast<std::size_t>(f)] ^ parity;
      int& have = flip[static_cast<std::size_t>(g)];
      if (have < 0) {
        have = want;
        pending.push(g);
      } else if (have != want) {
        throw Error(ErrorCode::NonOrientable, "no consistent orientation exists for faces " + std::to_string(f) +
                                                  " and " + std::to_string(g));
      }
    }
  }
  for (int f = 0; f < nf; ++f) {
    if (flip[static_cast<std::size_t>(f)] < 0) {
      throw Error(ErrorCode::DisconnectedComplex, "face " + std::to_string(f) + " is not reachable from face 0");
    }
  }
  std::vector<bool> touched(static_cast<std::size_t>(nv), false);
  for (const Edge& e : raw.edges) {
    touched[static_cast<std::size_t>(e.tail)] = true;
    touched[static_cast<std::size_t>(e.head)] = true;
  }
  for (int v = 0; v < nv; ++v) {
    if (!touched[static_cast<std::size_t>(v)]) {
      throw Error(ErrorCode::DisconnectedComplex, "vertex " + std::to_string(v) + " has no incident edge");
    }
  }

  for (int f = 0; f < nf; ++f) {
    if (flip[static_cast<std::size_t>(f)] == 1) {
      FaceBoundary& face = raw.faces[static_cast<std::size_t>(f)];
      std::reverse(face.begin(), face.end());
      for (DirectedEdge& d : face) d.forward = !d.forward;
    }
  }

  CellComplex c;
  c.num_vertices_ = nv;
  c.edges_ = std::move(raw.edges);
  c.faces_ = std::move(raw.faces);
  return c;
}

int euler_characteristic(const CellComplex& c) { return c.num_vertices() - c.num_edges() + c.num_faces(); }

int genus(const CellComplex& c) { return (2 - euler_characteristic(c)) / 2; }

std::vector<FaceStarVerdict> check_star(const CellComplex& c, const StarCheckOptions& opts) {
  std::vector<FaceStarVerdict> out;
  out.reserve(c.faces().size());
  for (int f = 0; f < c.num_faces(); ++f) {
    const FaceBoundary& face = c.face(f);
    const int m = static_cast<int>(face.size());
    FaceStarVerdict v;
    v.face = f;
    v.slots = m;
    v.exact = std::all_of(face.begin(), face.end(),
                          [&](const DirectedEdge& d) { return c.edge(d.edge).theta.exact.has_value(); });
    if (v.exact) {
      // sum p/q - (m - 2), kept as a reduced fraction
      std::int64_t num = -(m - 2);
      std::int64_t den = 1;
      for (const DirectedEdge& d : face) {
        const PiFraction& w = *c.edge(d.edge).theta.exact;
        const std::int64_t l = std::lcm(den, w.den);
        num = num * (l / den) + w.num * (l / w.den);
        den = l;
        const std::int64_t g = std::gcd(num, den);
        if (g > 1) {
          num /= g;
          den /= g;
        }
      }
      v.residual = std::abs(kPi * static_cast<double>(num) / static_cast<double>(den));
    } else {
      double sum = 0.0;
      for (const DirectedEdge& d : face) sum += c.edge(d.edge).theta.radians;
      v.residual = std::abs(sum - (m - 2) * kPi);
    }
    v.tolerance = opts.tolerance.value_or(v.exact ? opts.exact_tolerance : opts.float_tolerance);
    v.pass = v.residual <= v.tolerance;
    out.push_back(v);
  }
  return out;
}

bool all_pass(const std::vector<FaceStarVerdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const FaceStarVerdict& v) { return v.pass; });
}

double Triangulation::star_cone_angle(int face) const {
  double angle = 0.0;
  for (const DirectedEdge& d : complex_.face(face)) angle += kPi - complex_.edge(d.edge).theta.radians;
  return angle;
}

Triangulation triangulate(const CellComplex& c, const StarCheckOptions& opts) {
  for (const FaceStarVerdict& v : check_star(c, opts)) {
    if (!v.pass) {
      std::ostringstream msg;
      msg << "face " << v.face << " has angle-sum residual " << v.residual;
      throw Error(ErrorCode::StarConditionViolated, msg.str());
    }
  }
  Triangulation t;
  t.complex_ = c;
  t.by_vertex_.resize(static_cast<std::size_t>(c.num_vertices()));
  for (int f = 0; f < c.num_faces(); ++f) {
    const FaceBoundary& face = c.face(f);
    for (int s = 0; s < static_cast<int>(face.size()); ++s) {
      const DirectedEdge& d = face[static_cast<std::size_t>(s)];
      const int i = c.tail_of(d);
      const int j = c.head_of(d);
      t.wedges_.push_back({i, j, d.edge, f, c.edge(d.edge).theta.radians});
      for (const auto& [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
        t.by_vertex_[static_cast<std::size_t>(a)].push_back(static_cast<int>(t.corners_.size()));
        t.corners_.push_back({a, b, d.edge, f, s});
      }
    }
  }
  return t;
}

}  // namespace icp
