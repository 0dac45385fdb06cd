#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "cli_runner.hpp"

namespace {

const std::string kExe = LOADCAP_CLI;

std::string data(const char* name) { return "'" + oracle::data_path(name) + "'"; }

nlohmann::json parse(const cli::Run& r) { return nlohmann::json::parse(r.out); }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / (std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << content;
  return p.string();
}

}  // namespace

TEST_CASE("analyze a bar") {
  const auto r = cli::run(kExe, "analyze --mesh " + data("bar.json") + " --traction " + data("bar_unit.traction.json"));
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["command"] == "analyze");
  CHECK(j["mode"] == "elastic");
  CHECK(j["norms"]["strain"] == "l1");
  CHECK(j["result"]["sigma_opt"].get<double>() == doctest::Approx(1.0));
  CHECK(j["result"]["duality_gap"].get<double>() <= 1e-6);
  CHECK(j["result"]["equilibrium"]["ok"] == true);
  CHECK(j["inputs"]["mesh"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  CHECK(r.err.find("wall time") != std::string::npos);
  CHECK(r.out.find("wall") == std::string::npos);
}

TEST_CASE("analyze failures map to exit codes") {
  auto r = cli::run(kExe, "analyze --mesh " + data("bar.json") + " --traction /nonexistent.json");
  CHECK(r.code == 2);
  CHECK(r.err.find("cannot open") != std::string::npos);
  r = cli::run(kExe, "analyze --mesh " + data("bar.json") + " --traction " + data("bar_unit.traction.json") +
                         " --mode plastic");
  CHECK(r.code == 2);
  CHECK(r.err.find("isochoric") != std::string::npos);
  r = cli::run(kExe, "analyze --mesh " + data("bar.json") + " --traction " + data("bar_unit.traction.json") +
                         " --norm l2");
  CHECK(r.code == 2);
  r = cli::run(kExe, "analyze --mesh " + data("bar.json"));
  CHECK(r.code == 2);
  r = cli::run(kExe, "frobnicate");
  CHECK(r.code == 2);
  const std::string wrong = temp_file("wrong.json", R"({"facets": [[1.0], [2.0]]})");
  r = cli::run(kExe, "analyze --mesh " + data("bar.json") + " --traction '" + wrong + "'");
  CHECK(r.code == 2);
  std::filesystem::remove(wrong);
}

TEST_CASE("capacity reports") {
  auto r = cli::run(kExe, "capacity --mesh " + data("bar.json") + " --method exact");
  REQUIRE(r.code == 0);
  auto j = parse(r);
  CHECK(j["result"]["K"].get<double>() == doctest::Approx(1.0));
  CHECK(j["result"]["C"].get<double>() == doctest::Approx(1.0));
  CHECK(j["result"]["method"] == "exact_vertex_enumeration");
  CHECK(j["result"]["caps_hit"] == false);
  CHECK(j["result"]["dual_check"]["K_prime"].get<double>() == doctest::Approx(1.0));

  r = cli::run(kExe, "capacity --mesh " + data("rect_2x1.json") + " --mode plastic --method heuristic");
  REQUIRE(r.code == 0);
  j = parse(r);
  CHECK(j["result"]["lower_bound"] == true);
  CHECK(j["result"]["method"] == "alternating_heuristic");
  CHECK_FALSE(j["result"].contains("dual_check"));
}

TEST_CASE("capacity beyond the enumeration cap") {
  const std::string mesh = (std::filesystem::temp_directory_path() /
                            (std::to_string(::getpid()) + "_r33.json")).string();
  REQUIRE(cli::run(kExe, "generate rectangle --nx 3 --ny 3 --out '" + mesh + "'").code == 0);
  auto r = cli::run(kExe, "capacity --mesh '" + mesh + "' --method exact");
  CHECK(r.code == 2);
  CHECK(r.err.find("capped at 16") != std::string::npos);
  r = cli::run(kExe, "capacity --mesh '" + mesh + "'");
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["result"]["caps_hit"] == true);
  CHECK(j["result"]["lower_bound"] == true);
  std::filesystem::remove(mesh);
}

TEST_CASE("limit report") {
  const auto r = cli::run(kExe, "limit --mesh " + data("rect_2x1.json") + " --traction " +
                                    data("rect_2x1.traction.json") + " --y0 2");
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  const double lambda = j["result"]["lambda_star"].get<double>();
  CHECK(lambda * j["result"]["sigma_opt"].get<double>() == doctest::Approx(2.0));
  CHECK(j["result"]["kinematic"]["gap"].get<double>() <= 1e-6);
  CHECK(j["result"]["state"] == "safe");
  CHECK(cli::run(kExe, "limit --mesh " + data("rect_2x1.json") + " --traction " +
                           data("rect_2x1.traction.json") + " --y0 -1")
            .code == 2);
}

TEST_CASE("verify") {
  auto r = cli::run(kExe, "verify --mesh " + data("bar.json") + " --seed 1 --trials 20");
  CHECK(r.code == 0);
  CHECK(parse(r)["passed"] == true);
  const std::string bad = temp_file("bad_mesh.json", R"({"dim": 2, "nodes": [[0,0],[1,0],[0,1]],
    "elements": [{"kind": "triangle", "nodes": [0, 1, 2]}], "facets": []})");
  r = cli::run(kExe, "verify --mesh '" + bad + "'");
  CHECK(r.code == 2);
  CHECK(r.err.find("gamma0 is empty") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::string a = "analyze --mesh " + data("rect_2x1.json") + " --traction " + data("rect_2x1.traction.json") +
                        " --mode plastic";
  CHECK(cli::run(kExe, a).out == cli::run(kExe, a).out);
  const std::string c = "capacity --mesh " + data("two_tet.json") + " --mode plastic";
  CHECK(cli::run(kExe, c).out == cli::run(kExe, c).out);
}

TEST_CASE("generate writes a valid mesh") {
  const auto r = cli::run(kExe, "generate bar --length 2 --area 3 --elements 4");
  REQUIRE(r.code == 0);
  CHECK(loadcap::parse_mesh(r.out).elements.size() == 4);
  CHECK(cli::run(kExe, "generate rectangle --support left --load left").code == 2);
  CHECK(cli::run(kExe, "generate disk").code == 2);
}
