#pragma once

// JSON instance files:
//   {"vertices": n,
//    "edges": [{"id": k, "ends": [u, v], "theta": 1.5707963 | "1/2 pi"}, ...],
//    "faces": [[1, 2, -1, -2], ...]}
// Edge ids are nonzero integers; a negative reference in a face traverses the
// edge from its second end to its first.

#include <iosfwd>
#include <string>
#include <string_view>

#include "icp/complex.hpp"

namespace icp {

// "p/q pi", "p pi", "pi", "p/q*pi", "3pi/4" style angle strings. Throws MalformedInput.
Weight parse_angle(std::string_view text);

// Throws MalformedInput for JSON or schema problems; build_complex errors
// propagate unchanged.
RawComplex parse_raw_complex(std::istream& is);
CellComplex parse_complex(std::istream& is);
CellComplex load_complex(const std::string& path);

// Edge ids are written 1-based in edge order. Exact weights are written as strings.
std::string complex_to_json(const CellComplex& c);

}  // namespace icp
