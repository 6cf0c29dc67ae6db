#pragma once

// Small named complexes used by the tests, benchmarks and the CLI generator.

#include <cstdint>
#include <vector>

#include "icp/complex.hpp"

namespace icp::fixtures {

// One vertex, loops a, b with weight pi/2, face a b a^-1 b^-1.
CellComplex square_torus();
// One vertex, loops a..d with weight 3pi/4, face a b a^-1 b^-1 c d c^-1 d^-1.
CellComplex genus2_octagon();
// The octagon with edge a subdivided by a second vertex: two vertices, five
// edges, one decagon face, all weights 4pi/5.
CellComplex genus2_two_vertex();
// Cube graph on the sphere, all weights pi/2.
CellComplex cube();
// Tetrahedron on the sphere with a uniform weight (pi/3 satisfies the face condition).
CellComplex tetrahedron(Weight w);
// Two triangles glued along their boundary (3 vertices, sphere).
CellComplex triangle_pillow(Weight w);

// Simple-graph complex from vertex cycles; edges are created on first use.
CellComplex polygon_complex(int num_vertices, const std::vector<std::vector<int>>& cycles, Weight w);

// Stacked triangulation of the sphere: a tetrahedron with random faces split
// until it has `num_vertices` vertices. All weights pi/3. Deterministic in seed.
CellComplex random_stacked_sphere(int num_vertices, std::uint64_t seed);

}  // namespace icp::fixtures
