#include "icp/fixtures.hpp"

#include <array>
#include <map>
#include <random>

#include "icp/error.hpp"

namespace icp::fixtures {

namespace {

CellComplex one_vertex_gluing(int loops, Weight w, const FaceBoundary& face) {
  RawComplex raw;
  raw.num_vertices = 1;
  raw.edges.assign(static_cast<std::size_t>(loops), Edge{0, 0, w});
  raw.faces.push_back(face);
  return build_complex(std::move(raw));
}

}  // namespace

CellComplex square_torus() {
  return one_vertex_gluing(2, Weight::from_pi_fraction(1, 2), {{0, true}, {1, true}, {0, false}, {1, false}});
}

CellComplex genus2_octagon() {
  return one_vertex_gluing(4, Weight::from_pi_fraction(3, 4),
                           {{0, true}, {1, true}, {0, false}, {1, false}, {2, true}, {3, true}, {2, false}, {3, false}});
}

CellComplex genus2_two_vertex() {
  const Weight w = Weight::from_pi_fraction(4, 5);
  RawComplex raw;
  raw.num_vertices = 2;
  // edge a of the octagon split at vertex 1 into a1 = (0, 1), a2 = (1, 0)
  raw.edges = {{0, 1, w}, {1, 0, w}, {0, 0, w}, {0, 0, w}, {0, 0, w}};
  raw.faces = {{{0, true}, {1, true}, {2, true}, {1, false}, {0, false}, {2, false}, {3, true}, {4, true},
                {3, false}, {4, false}}};
  return build_complex(std::move(raw));
}

CellComplex polygon_complex(int num_vertices, const std::vector<std::vector<int>>& cycles, Weight w) {
  RawComplex raw;
  raw.num_vertices = num_vertices;
  std::map<std::pair<int, int>, int> edge_of;
  for (const auto& cycle : cycles) {
    FaceBoundary face;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const int a = cycle[k];
      const int b = cycle[(k + 1) % cycle.size()];
      const auto key = std::minmax(a, b);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        it = edge_of.emplace(key, static_cast<int>(raw.edges.size())).first;
        raw.edges.push_back(Edge{a, b, w});
      }
      face.push_back({it->second, raw.edges[static_cast<std::size_t>(it->second)].tail == a});
    }
    raw.faces.push_back(std::move(face));
  }
  return build_complex(std::move(raw));
}

CellComplex cube() {
  return polygon_complex(8,
                         {{0, 2, 6, 4}, {1, 5, 7, 3}, {0, 4, 5, 1}, {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 6, 7, 5}},
                         Weight::from_pi_fraction(1, 2));
}

CellComplex tetrahedron(Weight w) {
  return polygon_complex(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}}, w);
}

CellComplex triangle_pillow(Weight w) { return polygon_complex(3, {{0, 1, 2}, {0, 2, 1}}, w); }

CellComplex random_stacked_sphere(int num_vertices, std::uint64_t seed) {
  if (num_vertices < 4) throw Error(ErrorCode::MalformedInput, "a stacked sphere needs at least 4 vertices");
  std::vector<std::array<int, 3>> faces = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  std::mt19937_64 rng(seed);
  for (int v = 4; v < num_vertices; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, faces.size() - 1);
    const std::size_t f = pick(rng);
    const auto [a, b, c] = faces[f];
    faces[f] = {a, b, v};
    faces.push_back({b, c, v});
    faces.push_back({c, a, v});
  }
  std::vector<std::vector<int>> cycles;
  cycles.reserve(faces.size());
  for (const auto& f : faces) cycles.push_back({f[0], f[1], f[2]});
  return polygon_complex(num_vertices, cycles, Weight::from_pi_fraction(1, 3));
}

}  // namespace icp::fixtures
