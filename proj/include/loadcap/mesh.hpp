#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace loadcap {

using Point = std::array<double, 3>;

enum class ElementKind { Bar, Triangle, Tetrahedron };
enum class FacetLabel { Gamma0, GammaT };
enum class Edge { Left, Right, Bottom, Top };

std::string_view to_string(ElementKind kind);
std::string_view to_string(FacetLabel label);
std::string_view to_string(Edge edge);
Edge parse_edge(std::string_view text);

/// Constant-strain element. `area` is the cross-section of a bar and unused
/// (zero) for simplices.
struct Element {
  ElementKind kind = ElementKind::Triangle;
  std::vector<std::size_t> nodes;
  double area = 0.0;

  bool operator==(const Element&) const = default;
};

/// Boundary facet: a point (1D), edge (2D) or triangle (3D).
struct Facet {
  std::vector<std::size_t> nodes;
  FacetLabel label = FacetLabel::GammaT;

  bool operator==(const Facet&) const = default;
};

/// Discrete body with its boundary split into a supported part (gamma0) and a
/// loaded part (gammaT). Traction-free surface belongs to gammaT.
struct Mesh {
  int dim = 2;
  std::vector<Point> nodes;  // unused coordinates are zero
  std::vector<Element> elements;
  std::vector<Facet> facets;

  bool operator==(const Mesh&) const = default;

  /// Facet indices carrying `label`, in file order.
  std::vector<std::size_t> facets_with(FacetLabel label) const;
};

/// Nodes per element kind, and the element kind / facet size for a dimension.
std::size_t node_count(ElementKind kind);
ElementKind simplex_kind(int dim);
std::size_t facet_node_count(int dim);

/// Length, area or volume of the simplex (bars: length, without cross-section).
double element_measure(const Mesh& mesh, const Element& element);

/// Faces of an element as sorted node lists.
std::vector<std::vector<std::size_t>> element_faces(const Element& element);

/// All invariant violations; empty when the mesh is valid.
std::vector<std::string> validate(const Mesh& mesh);

/// Throws InvalidMeshError when validate() is non-empty.
void require_valid(const Mesh& mesh);

/// 1D chain of `n_elements` bars; left end supported, right end loaded.
Mesh generate_bar(double length, double area, int n_elements);

/// Structured triangulation of [0,width] x [0,height], two triangles per cell.
/// Facet order: load edge, the remaining traction-free edges, support edge.
Mesh generate_rectangle(double width, double height, int nx, int ny,
                        Edge support_edge, Edge load_edge);

/// Mesh file I/O (JSON). Reading validates; see docs/file_formats.md.
Mesh read_mesh(const std::filesystem::path& path);
Mesh parse_mesh(std::string_view text);
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);
std::string format_mesh(const Mesh& mesh);

}  // namespace loadcap
