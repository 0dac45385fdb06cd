#include "loadcap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "loadcap/errors.hpp"

namespace loadcap {

namespace {

std::string join_nodes(const std::vector<std::size_t>& nodes) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) os << ", ";
    os << nodes[i];
  }
  os << ')';
  return os.str();
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

double distance(const Point& a, const Point& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool structurally_ok(const Mesh& mesh, const Element& e) {
  if (e.kind != simplex_kind(mesh.dim)) return false;
  if (e.nodes.size() != node_count(e.kind)) return false;
  return std::all_of(e.nodes.begin(), e.nodes.end(),
                     [&](std::size_t n) { return n < mesh.nodes.size(); });
}

}  // namespace

InvalidMeshError::InvalidMeshError(std::vector<std::string> violations)
    : ValidationError([&] {
        std::string msg = "invalid mesh:";
        for (const auto& v : violations) msg += "\n  " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Bar:
      return "bar";
    case ElementKind::Triangle:
      return "triangle";
    case ElementKind::Tetrahedron:
      return "tetrahedron";
  }
  return "?";
}

std::string_view to_string(FacetLabel label) {
  return label == FacetLabel::Gamma0 ? "gamma0" : "gammaT";
}

std::string_view to_string(Edge edge) {
  switch (edge) {
    case Edge::Left:
      return "left";
    case Edge::Right:
      return "right";
    case Edge::Bottom:
      return "bottom";
    case Edge::Top:
      return "top";
  }
  return "?";
}

Edge parse_edge(std::string_view text) {
  for (Edge e : {Edge::Left, Edge::Right, Edge::Bottom, Edge::Top}) {
    if (to_string(e) == text) return e;
  }
  throw std::invalid_argument("unknown edge '" + std::string(text) +
                              "' (allowed: left, right, bottom, top)");
}

std::vector<std::size_t> Mesh::facets_with(FacetLabel label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < facets.size(); ++i) {
    if (facets[i].label == label) out.push_back(i);
  }
  return out;
}

std::size_t node_count(ElementKind kind) {
  switch (kind) {
    case ElementKind::Bar:
      return 2;
    case ElementKind::Triangle:
      return 3;
    case ElementKind::Tetrahedron:
      return 4;
  }
  return 0;
}

ElementKind simplex_kind(int dim) {
  switch (dim) {
    case 1:
      return ElementKind::Bar;
    case 2:
      return ElementKind::Triangle;
    case 3:
      return ElementKind::Tetrahedron;
    default:
      throw std::invalid_argument("dim must be 1, 2 or 3");
  }
}

std::size_t facet_node_count(int dim) { return static_cast<std::size_t>(dim); }

double element_measure(const Mesh& mesh, const Element& element) {
  const auto& x = mesh.nodes;
  const auto& n = element.nodes;
  switch (element.kind) {
    case ElementKind::Bar:
      return distance(x[n[0]], x[n[1]]);
    case ElementKind::Triangle: {
      const double ax = x[n[1]][0] - x[n[0]][0], ay = x[n[1]][1] - x[n[0]][1];
      const double bx = x[n[2]][0] - x[n[0]][0], by = x[n[2]][1] - x[n[0]][1];
      return 0.5 * std::abs(ax * by - ay * bx);
    }
    case ElementKind::Tetrahedron: {
      std::array<std::array<double, 3>, 3> j{};
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) j[r][c] = x[n[r + 1]][c] - x[n[0]][c];
      }
      const double det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) -
                         j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
                         j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
      return std::abs(det) / 6.0;
    }
  }
  return 0.0;
}

std::vector<std::vector<std::size_t>> element_faces(const Element& element) {
  const auto& n = element.nodes;
  std::vector<std::vector<std::size_t>> faces;
  // each face omits one vertex
  for (std::size_t skip = 0; skip < n.size(); ++skip) {
    std::vector<std::size_t> f;
    for (std::size_t k = 0; k < n.size(); ++k) {
      if (k != skip) f.push_back(n[k]);
    }
    faces.push_back(sorted(std::move(f)));
  }
  return faces;
}

std::vector<std::string> validate(const Mesh& mesh) {
  std::vector<std::string> out;
  if (mesh.dim < 1 || mesh.dim > 3) {
    out.push_back("dim must be 1, 2 or 3 (got " + std::to_string(mesh.dim) + ")");
    return out;
  }
  if (mesh.elements.empty()) out.push_back("mesh has no elements");

  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    for (int c = 0; c < mesh.dim; ++c) {
      if (!std::isfinite(mesh.nodes[i][static_cast<std::size_t>(c)])) {
        out.push_back("node " + std::to_string(i) + " has a non-finite coordinate");
        break;
      }
    }
  }

  const ElementKind kind = simplex_kind(mesh.dim);
  std::map<std::vector<std::size_t>, int> face_use;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const Element& el = mesh.elements[e];
    const std::string name = "element " + std::to_string(e);
    if (el.kind != kind) {
      out.push_back(name + " is a " + std::string(to_string(el.kind)) +
                    " but a mesh of dim " + std::to_string(mesh.dim) + " needs " +
                    std::string(to_string(kind)) + " elements");
      continue;
    }
    if (el.nodes.size() != node_count(el.kind)) {
      out.push_back(name + " has " + std::to_string(el.nodes.size()) +
                    " nodes, expected " + std::to_string(node_count(el.kind)));
      continue;
    }
    bool in_range = true;
    for (std::size_t n : el.nodes) {
      if (n >= mesh.nodes.size()) {
        out.push_back(name + " references node " + std::to_string(n) +
                      " which is out of range");
        in_range = false;
      }
    }
    if (el.kind == ElementKind::Bar && !(el.area > 0.0 && std::isfinite(el.area))) {
      out.push_back(name + " has a non-positive cross-section area");
    }
    if (!in_range) continue;

    double h = 0.0;
    for (std::size_t a = 0; a < el.nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < el.nodes.size(); ++b) {
        h = std::max(h, distance(mesh.nodes[el.nodes[a]], mesh.nodes[el.nodes[b]]));
      }
    }
    const double measure = element_measure(mesh, el);
    if (!(measure > 1e-14 * std::pow(h, mesh.dim))) {
      out.push_back(name + " has zero measure");
    }
    for (auto& f : element_faces(el)) ++face_use[f];
  }

  std::map<std::vector<std::size_t>, std::size_t> facet_of_face;
  bool has_gamma0 = false, has_gamma_t = false;
  for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
    const Facet& fc = mesh.facets[f];
    const std::string name = "facet " + std::to_string(f);
    (fc.label == FacetLabel::Gamma0 ? has_gamma0 : has_gamma_t) = true;
    if (fc.nodes.size() != facet_node_count(mesh.dim)) {
      out.push_back(name + " has " + std::to_string(fc.nodes.size()) +
                    " nodes, expected " + std::to_string(facet_node_count(mesh.dim)));
      continue;
    }
    bool in_range = true;
    for (std::size_t n : fc.nodes) {
      if (n >= mesh.nodes.size()) {
        out.push_back(name + " references node " + std::to_string(n) +
                      " which is out of range");
        in_range = false;
      }
    }
    if (!in_range) continue;
    const auto key = sorted(fc.nodes);
    auto it = face_use.find(key);
    if (it == face_use.end() || it->second != 1) {
      out.push_back(name + " " + join_nodes(fc.nodes) +
                    " is not a face of exactly one element");
    }
    auto [pos, inserted] = facet_of_face.emplace(key, f);
    if (!inserted) {
      out.push_back("facets " + std::to_string(pos->second) + " and " +
                    std::to_string(f) + " describe the same face");
    }
  }
  if (!has_gamma0) out.push_back("gamma0 is empty");
  if (!has_gamma_t) out.push_back("gammaT is empty");

  // every boundary face must carry a label so that gamma0 and gammaT cover it
  bool elements_ok = std::all_of(mesh.elements.begin(), mesh.elements.end(),
                                 [&](const Element& e) { return structurally_ok(mesh, e); });
  if (elements_ok) {
    for (const auto& [face, uses] : face_use) {
      if (uses == 1 && !facet_of_face.contains(face)) {
        out.push_back("boundary face " + join_nodes(face) + " has no facet record");
      } else if (uses > 2) {
        out.push_back("face " + join_nodes(face) + " is shared by " +
                      std::to_string(uses) + " elements");
      }
    }
  }
  return out;
}

void require_valid(const Mesh& mesh) {
  auto violations = validate(mesh);
  if (!violations.empty()) throw InvalidMeshError(std::move(violations));
}

Mesh generate_bar(double length, double area, int n_elements) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("generate_bar: length must be positive");
  }
  if (!(area > 0.0) || !std::isfinite(area)) {
    throw std::invalid_argument("generate_bar: area must be positive");
  }
  if (n_elements < 1) {
    throw std::invalid_argument("generate_bar: need at least one element");
  }
  Mesh m;
  m.dim = 1;
  const auto n = static_cast<std::size_t>(n_elements);
  for (std::size_t i = 0; i <= n; ++i) {
    m.nodes.push_back({length * static_cast<double>(i) / static_cast<double>(n), 0.0, 0.0});
  }
  for (std::size_t i = 0; i < n; ++i) {
    m.elements.push_back({ElementKind::Bar, {i, i + 1}, area});
  }
  m.facets.push_back({{0}, FacetLabel::Gamma0});
  m.facets.push_back({{n}, FacetLabel::GammaT});
  return m;
}

Mesh generate_rectangle(double width, double height, int nx, int ny,
                        Edge support_edge, Edge load_edge) {
  if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) ||
      !std::isfinite(height)) {
    throw std::invalid_argument("generate_rectangle: sizes must be positive");
  }
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("generate_rectangle: need at least one cell per direction");
  }
  if (support_edge == load_edge) {
    throw std::invalid_argument("generate_rectangle: support and load edge must differ");
  }
  Mesh m;
  m.dim = 2;
  const auto cx = static_cast<std::size_t>(nx), cy = static_cast<std::size_t>(ny);
  auto id = [&](std::size_t i, std::size_t j) { return j * (cx + 1) + i; };
  for (std::size_t j = 0; j <= cy; ++j) {
    for (std::size_t i = 0; i <= cx; ++i) {
      m.nodes.push_back({width * static_cast<double>(i) / static_cast<double>(cx),
                         height * static_cast<double>(j) / static_cast<double>(cy), 0.0});
    }
  }
  for (std::size_t j = 0; j < cy; ++j) {
    for (std::size_t i = 0; i < cx; ++i) {
      const std::size_t a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1),
                        d = id(i, j + 1);
      m.elements.push_back({ElementKind::Triangle, {a, b, c}, 0.0});
      m.elements.push_back({ElementKind::Triangle, {a, c, d}, 0.0});
    }
  }

  auto edge_facets = [&](Edge edge) {
    std::vector<std::vector<std::size_t>> out;
    switch (edge) {
      case Edge::Bottom:
        for (std::size_t i = 0; i < cx; ++i) out.push_back({id(i, 0), id(i + 1, 0)});
        break;
      case Edge::Right:
        for (std::size_t j = 0; j < cy; ++j) out.push_back({id(cx, j), id(cx, j + 1)});
        break;
      case Edge::Top:
        for (std::size_t i = cx; i > 0; --i) out.push_back({id(i, cy), id(i - 1, cy)});
        break;
      case Edge::Left:
        for (std::size_t j = cy; j > 0; --j) out.push_back({id(0, j), id(0, j - 1)});
        break;
    }
    return out;
  };

  for (auto& f : edge_facets(load_edge)) m.facets.push_back({f, FacetLabel::GammaT});
  for (Edge e : {Edge::Bottom, Edge::Right, Edge::Top, Edge::Left}) {
    if (e == load_edge || e == support_edge) continue;
    for (auto& f : edge_facets(e)) m.facets.push_back({f, FacetLabel::GammaT});
  }
  for (auto& f : edge_facets(support_edge)) m.facets.push_back({f, FacetLabel::Gamma0});
  return m;
}

}  // namespace loadcap
