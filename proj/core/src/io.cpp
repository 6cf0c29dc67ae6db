#include "icp/io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "icp/error.hpp"

namespace icp {

using nlohmann::json;

Weight parse_angle(std::string_view text) {
  static const std::regex pi_form(R"(^\s*([+-]?\d+)?\s*(?:/\s*(\d+))?\s*\*?\s*pi\s*(?:/\s*(\d+))?\s*$)",
                                  std::regex::icase);
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, pi_form)) {
    if (m[2].matched && m[3].matched) {
      throw Error(ErrorCode::MalformedInput, "angle '" + s + "' has two denominators");
    }
    try {
      const std::int64_t num = m[1].matched ? std::stoll(m[1].str()) : 1;
      const std::int64_t den = m[2].matched ? std::stoll(m[2].str()) : m[3].matched ? std::stoll(m[3].str()) : 1;
      return Weight::from_pi_fraction(num, den);
    } catch (const std::out_of_range&) {
      throw Error(ErrorCode::MalformedInput, "angle '" + s + "' does not fit in 64-bit integers");
    }
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used == 0 || used != s.size()) throw Error(ErrorCode::MalformedInput, "cannot parse angle '" + s + "'");
  return Weight::from_radians(value);
}

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::MalformedInput, what); }

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where + " must be an integer");
  return j.get<int>();
}

}  // namespace

RawComplex parse_raw_complex(std::istream& is) {
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    schema_error(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) schema_error("top level must be an object");
  for (const char* key : {"vertices", "edges", "faces"}) {
    if (!doc.contains(key)) schema_error(std::string("missing key '") + key + "'");
  }
  RawComplex raw;
  raw.num_vertices = as_int(doc["vertices"], "'vertices'");
  if (!doc["edges"].is_array()) schema_error("'edges' must be an array");
  if (!doc["faces"].is_array()) schema_error("'faces' must be an array");

  std::map<int, int> index_of;
  for (std::size_t k = 0; k < doc["edges"].size(); ++k) {
    const json& e = doc["edges"][k];
    const std::string where = "edges[" + std::to_string(k) + "]";
    if (!e.is_object() || !e.contains("id") || !e.contains("ends") || !e.contains("theta")) {
      schema_error(where + " needs 'id', 'ends' and 'theta'");
    }
    const int id = as_int(e["id"], where + ".id");
    if (id == 0) schema_error(where + ".id must be nonzero");
    if (id < 0) schema_error(where + ".id must be positive");
    if (!index_of.emplace(id, static_cast<int>(k)).second) schema_error("duplicate edge id " + std::to_string(id));
    const json& ends = e["ends"];
    if (!ends.is_array() || ends.size() != 2) schema_error(where + ".ends must be a pair");
    Edge edge;
    edge.tail = as_int(ends[0], where + ".ends[0]");
    edge.head = as_int(ends[1], where + ".ends[1]");
    const json& th = e["theta"];
    if (th.is_number()) {
      edge.theta = Weight::from_radians(th.get<double>());
    } else if (th.is_string()) {
      edge.theta = parse_angle(th.get<std::string>());
    } else {
      schema_error(where + ".theta must be a number or a string like \"1/2 pi\"");
    }
    raw.edges.push_back(edge);
  }
  for (std::size_t f = 0; f < doc["faces"].size(); ++f) {
    const json& face = doc["faces"][f];
    const std::string where = "faces[" + std::to_string(f) + "]";
    if (!face.is_array()) schema_error(where + " must be an array of signed edge ids");
    FaceBoundary boundary;
    for (const json& ref : face) {
      const int id = as_int(ref, where + " entry");
      const auto it = index_of.find(id < 0 ? -id : id);
      if (it == index_of.end()) schema_error(where + " references unknown edge id " + std::to_string(id));
      boundary.push_back({it->second, id > 0});
    }
    raw.faces.push_back(std::move(boundary));
  }
  return raw;
}

CellComplex parse_complex(std::istream& is) { return build_complex(parse_raw_complex(is)); }

CellComplex load_complex(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open '" + path + "'");
  return parse_complex(in);
}

std::string complex_to_json(const CellComplex& c) {
  json doc;
  doc["vertices"] = c.num_vertices();
  doc["edges"] = json::array();
  for (int e = 0; e < c.num_edges(); ++e) {
    const Edge& edge = c.edge(e);
    json j;
    j["id"] = e + 1;
    j["ends"] = {edge.tail, edge.head};
    if (edge.theta.exact) {
      j["theta"] = std::to_string(edge.theta.exact->num) + "/" + std::to_string(edge.theta.exact->den) + " pi";
    } else {
      j["theta"] = edge.theta.radians;
    }
    doc["edges"].push_back(j);
  }
  doc["faces"] = json::array();
  for (const FaceBoundary& face : c.faces()) {
    json refs = json::array();
    for (const DirectedEdge& d : face) refs.push_back(d.forward ? d.edge + 1 : -(d.edge + 1));
    doc["faces"].push_back(refs);
  }
  return doc.dump(2) + "\n";
}

}  // namespace icp
