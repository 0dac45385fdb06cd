#include <fstream>
#include <sstream>

#include <json.hpp>

#include "loadcap/errors.hpp"
#include "loadcap/mesh.hpp"

namespace loadcap {

namespace {

using nlohmann::json;

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing key \"" + key + "\"");
  return *it;
}

const json& require_array(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require_key(obj, key, where);
  if (!v.is_array()) throw ParseError(where + "." + key + ": expected an array");
  return v;
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  return v.get<double>();
}

std::size_t as_index(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParseError(where + ": expected a non-negative integer node index");
  }
  return v.get<std::size_t>();
}

std::vector<std::size_t> index_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array of node indices");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_index(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ElementKind parse_kind(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + ": expected a string");
  const auto s = v.get<std::string>();
  for (ElementKind k : {ElementKind::Bar, ElementKind::Triangle, ElementKind::Tetrahedron}) {
    if (to_string(k) == s) return k;
  }
  throw ParseError(where + ": unknown element kind \"" + s +
                   "\" (allowed: bar, triangle, tetrahedron)");
}

FacetLabel parse_label(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + ": expected a string");
  const auto s = v.get<std::string>();
  if (s == "gamma0") return FacetLabel::Gamma0;
  if (s == "gammaT") return FacetLabel::GammaT;
  throw ParseError(where + ": unknown facet label \"" + s + "\" (allowed: gamma0, gammaT)");
}

}  // namespace

Mesh parse_mesh(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("mesh file: ") + e.what());
  }
  const std::string root = "mesh";
  Mesh m;
  const json& dim = require_key(doc, "dim", root);
  if (!dim.is_number_integer()) throw ParseError("mesh.dim: expected an integer");
  m.dim = dim.get<int>();
  if (m.dim < 1 || m.dim > 3) throw ParseError("mesh.dim: must be 1, 2 or 3");

  const json& nodes = require_array(doc, "nodes", root);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "mesh.nodes[" + std::to_string(i) + "]";
    if (!nodes[i].is_array() || nodes[i].size() != static_cast<std::size_t>(m.dim)) {
      throw ParseError(where + ": expected " + std::to_string(m.dim) + " coordinates");
    }
    Point p{0.0, 0.0, 0.0};
    for (std::size_t c = 0; c < nodes[i].size(); ++c) {
      p[c] = as_number(nodes[i][c], where + "[" + std::to_string(c) + "]");
    }
    m.nodes.push_back(p);
  }

  const json& elements = require_array(doc, "elements", root);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string where = "mesh.elements[" + std::to_string(i) + "]";
    Element e;
    e.kind = parse_kind(require_key(elements[i], "kind", where), where + ".kind");
    e.nodes = index_list(require_key(elements[i], "nodes", where), where + ".nodes");
    if (e.kind == ElementKind::Bar) {
      e.area = as_number(require_key(elements[i], "area", where), where + ".area");
    } else if (elements[i].contains("area")) {
      throw ParseError(where + ".area: only bar elements carry a cross-section area");
    }
    m.elements.push_back(std::move(e));
  }

  const json& facets = require_array(doc, "facets", root);
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const std::string where = "mesh.facets[" + std::to_string(i) + "]";
    Facet f;
    f.nodes = index_list(require_key(facets[i], "nodes", where), where + ".nodes");
    f.label = parse_label(require_key(facets[i], "label", where), where + ".label");
    m.facets.push_back(std::move(f));
  }

  require_valid(m);
  return m;
}

Mesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_mesh(buf.str());
  } catch (const InvalidMeshError&) {
    throw;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_mesh(const Mesh& mesh) {
  json doc = json::object();
  doc["dim"] = mesh.dim;
  json nodes = json::array();
  for (const Point& p : mesh.nodes) {
    json row = json::array();
    for (int c = 0; c < mesh.dim; ++c) row.push_back(p[static_cast<std::size_t>(c)]);
    nodes.push_back(std::move(row));
  }
  doc["nodes"] = std::move(nodes);
  json elements = json::array();
  for (const Element& e : mesh.elements) {
    json el = {{"kind", std::string(to_string(e.kind))}, {"nodes", e.nodes}};
    if (e.kind == ElementKind::Bar) el["area"] = e.area;
    elements.push_back(std::move(el));
  }
  doc["elements"] = std::move(elements);
  json facets = json::array();
  for (const Facet& f : mesh.facets) {
    facets.push_back({{"nodes", f.nodes}, {"label", std::string(to_string(f.label))}});
  }
  doc["facets"] = std::move(facets);
  return doc.dump(1) + "\n";
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write mesh file " + path.string());
  out << format_mesh(mesh);
  if (!out) throw ValidationError("error while writing mesh file " + path.string());
}

}  // namespace loadcap
