#pragma once

// Weighted cellular decompositions of closed oriented surfaces, stored as a
// combinatorial map: faces are cyclic sequences of directed edge references,
// so one-vertex gluings (loops, doubled edges) are representable.

#include <cstdint>
#include <optional>
#include <vector>

namespace icp {

inline constexpr double kPi = 3.14159265358979323846;

// Exact rational multiple of pi, p/q with q > 0 and gcd(p, q) = 1.
struct PiFraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static PiFraction make(std::int64_t num, std::int64_t den);
  double radians() const { return kPi * static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const PiFraction&, const PiFraction&) = default;
};

// Edge weight Theta in radians. Weights read as "p/q pi" keep their exact form
// so the face angle condition can be checked without rounding noise.
struct Weight {
  double radians = 0.0;
  std::optional<PiFraction> exact;

  static Weight from_radians(double value) { return Weight{value, std::nullopt}; }
  static Weight from_pi_fraction(std::int64_t num, std::int64_t den);
};

struct Edge {
  int tail = 0;
  int head = 0;
  Weight theta;

  bool is_loop() const { return tail == head; }
  int other(int v) const { return v == tail ? head : tail; }
};

struct DirectedEdge {
  int edge = 0;
  bool forward = true;

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

using FaceBoundary = std::vector<DirectedEdge>;

struct RawComplex {
  int num_vertices = 0;
  std::vector<Edge> edges;
  std::vector<FaceBoundary> faces;
};

// Validated complex. Faces are coherently oriented: every edge is traversed
// once forward and once backward across all face boundaries.
class CellComplex {
 public:
  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  const std::vector<FaceBoundary>& faces() const { return faces_; }
  const FaceBoundary& face(int f) const { return faces_[static_cast<std::size_t>(f)]; }

  int tail_of(const DirectedEdge& d) const { return d.forward ? edge(d.edge).tail : edge(d.edge).head; }
  int head_of(const DirectedEdge& d) const { return d.forward ? edge(d.edge).head : edge(d.edge).tail; }

  // Number of edge ends at v; a loop contributes two.
  int edge_end_degree(int v) const;

 private:
  friend CellComplex build_complex(RawComplex raw);

  int num_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<FaceBoundary> faces_;
};

// Validates closedness, face walks, connectivity, orientability and weight
// range. Faces whose orientation disagrees with the first face are reversed.
// Throws icp::Error on rejection.
CellComplex build_complex(RawComplex raw);

int euler_characteristic(const CellComplex& c);
int genus(const CellComplex& c);

struct FaceStarVerdict {
  int face = 0;
  int slots = 0;
  double residual = 0.0;   // |sum Theta(e_i) - (m - 2) pi|
  double tolerance = 0.0;
  bool exact = false;      // every slot weight was an exact pi fraction
  bool pass = false;
};

struct StarCheckOptions {
  std::optional<double> tolerance;  // overrides the defaults below
  double exact_tolerance = 1e-12;
  double float_tolerance = 1e-9;
};

std::vector<FaceStarVerdict> check_star(const CellComplex& c, const StarCheckOptions& opts = {});
bool all_pass(const std::vector<FaceStarVerdict>& verdicts);

// One corner of the triangle (i, j, face star) at the primal vertex i, where
// {i, j} are the ends of edge slot `slot` of `face`. For loops i == j.
struct Corner {
  int vertex = 0;
  int other = 0;
  int edge = 0;
  int face = 0;
  int slot = 0;
};

// Edge slot of a face; one triangle (tail, head, face star) each.
struct Wedge {
  int tail = 0;
  int head = 0;
  int edge = 0;
  int face = 0;
  double theta = 0.0;
};

class Triangulation {
 public:
  const CellComplex& complex() const { return complex_; }
  int num_primal_vertices() const { return complex_.num_vertices(); }
  int num_star_vertices() const { return complex_.num_faces(); }

  const std::vector<Corner>& corners() const { return corners_; }
  const std::vector<Wedge>& wedges() const { return wedges_; }
  // Corner indices grouped by primal vertex.
  const std::vector<int>& corners_at(int v) const { return by_vertex_[static_cast<std::size_t>(v)]; }
  double theta(const Corner& c) const { return complex_.edge(c.edge).theta.radians; }

  // Cone angle at a star vertex: sum over slots of (pi - Theta).
  double star_cone_angle(int face) const;

 private:
  friend Triangulation triangulate(const CellComplex& c, const StarCheckOptions& opts);

  CellComplex complex_;
  std::vector<Corner> corners_;
  std::vector<Wedge> wedges_;
  std::vector<std::vector<int>> by_vertex_;
};

// Adds one star vertex per face. Throws StarConditionViolated when a face
// fails the angle-sum condition.
Triangulation triangulate(const CellComplex& c, const StarCheckOptions& opts = {});

}  // namespace icp
