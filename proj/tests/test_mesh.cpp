#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "loadcap/errors.hpp"
#include "loadcap/mesh.hpp"
#include "oracles.hpp"

using namespace loadcap;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("generated bar") {
  const Mesh m = generate_bar(2.0, 3.0, 4);
  CHECK(m.dim == 1);
  CHECK(m.nodes.size() == 5);
  CHECK(m.elements.size() == 4);
  CHECK(m.nodes[4][0] == doctest::Approx(2.0));
  CHECK(m.elements[0].area == 3.0);
  CHECK(m.facets_with(FacetLabel::Gamma0).size() == 1);
  CHECK(m.facets_with(FacetLabel::GammaT).size() == 1);
  CHECK(validate(m).empty());
  CHECK_THROWS_AS(generate_bar(1.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_bar(-1.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(generate_bar(1.0, 0.0, 2), std::invalid_argument);
}

TEST_CASE("generated rectangle") {
  const Mesh m = generate_rectangle(2.0, 1.0, 2, 1, Edge::Left, Edge::Right);
  CHECK(m.elements.size() == 4);
  CHECK(m.nodes.size() == 6);
  CHECK(validate(m).empty());
  // load edge first, support edge last
  CHECK(m.facets.front().label == FacetLabel::GammaT);
  CHECK(m.facets.back().label == FacetLabel::Gamma0);
  CHECK(m.facets_with(FacetLabel::GammaT).size() == 5);
  CHECK(m.facets_with(FacetLabel::Gamma0).size() == 1);
  double area = 0.0;
  for (const auto& e : m.elements) area += element_measure(m, e);
  CHECK(area == doctest::Approx(2.0));
  CHECK_THROWS_AS(generate_rectangle(1.0, 1.0, 1, 1, Edge::Left, Edge::Left), std::invalid_argument);
  CHECK_THROWS_AS(generate_rectangle(0.0, 1.0, 1, 1, Edge::Left, Edge::Right), std::invalid_argument);
  CHECK(parse_edge("top") == Edge::Top);
  CHECK_THROWS(parse_edge("middle"));
}

TEST_CASE("validation reports each violation") {
  Mesh m = generate_rectangle(1.0, 1.0, 1, 1, Edge::Left, Edge::Right);

  SUBCASE("degenerate element") {
    m.nodes[3] = m.nodes[0];
    CHECK(mentions(validate(m), "zero measure"));
  }
  SUBCASE("missing gamma0") {
    m.facets.pop_back();
    const auto v = validate(m);
    CHECK(mentions(v, "gamma0 is empty"));
    CHECK(mentions(v, "has no facet record"));
  }
  SUBCASE("facet that is not an element face") {
    m.facets[0].nodes = {0, 3};  // diagonal: interior edge
    CHECK(mentions(validate(m), "not a face of exactly one element"));
  }
  SUBCASE("node index out of range") {
    m.elements[0].nodes[1] = 17;
    CHECK(!validate(m).empty());
  }
  SUBCASE("duplicate facet") {
    m.facets.push_back(m.facets[0]);
    CHECK(mentions(validate(m), "describe the same face"));
  }
  SUBCASE("wrong element kind for the dimension") {
    m.elements[0].kind = ElementKind::Tetrahedron;
    CHECK(!validate(m).empty());
  }
  CHECK_THROWS_AS(require_valid(m), InvalidMeshError);
}

TEST_CASE("bars need a positive cross-section") {
  Mesh m = generate_bar(1.0, 1.0, 2);
  m.elements[1].area = 0.0;
  CHECK(!validate(m).empty());
}

TEST_CASE("mesh json round trip and parse errors") {
  const Mesh m = generate_rectangle(1.5, 1.0, 2, 2, Edge::Bottom, Edge::Top);
  CHECK(parse_mesh(format_mesh(m)) == m);
  const Mesh bar = generate_bar(2.0, 0.5, 3);
  CHECK(parse_mesh(format_mesh(bar)) == bar);

  const auto tmp = std::filesystem::temp_directory_path() / "loadcap_test_mesh.json";
  write_mesh(m, tmp);
  CHECK(read_mesh(tmp) == m);
  std::filesystem::remove(tmp);

  CHECK_THROWS_AS(parse_mesh("{"), ParseError);
  CHECK_THROWS_WITH_AS(parse_mesh(R"({"dim": 2, "elements": [], "facets": []})"),
                       doctest::Contains("missing key \"nodes\""), ParseError);
  std::string text = format_mesh(m);
  text.replace(text.find("gamma0"), 6, "gamma9");
  CHECK_THROWS_WITH_AS(parse_mesh(text), doctest::Contains("unknown facet label"), ParseError);
  CHECK_THROWS_AS(read_mesh("/nonexistent/mesh.json"), ValidationError);
}

TEST_CASE("shipped meshes are valid") {
  for (const char* name : {"bar.json", "rect_1x1.json", "rect_2x1.json", "two_tet.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(read_mesh(oracle::data_path(name)));
  }
  const Mesh tet = read_mesh(oracle::data_path("two_tet.json"));
  CHECK(tet.dim == 3);
  CHECK(element_faces(tet.elements[0]).size() == 4);
}
