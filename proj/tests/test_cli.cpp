#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pssa/cli.hpp"
#include "pssa/manifold.hpp"

namespace fs = std::filesystem;
using pssa::Json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pssa_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

int run(std::initializer_list<std::string> args) {
  return pssa::cli::run(std::vector<std::string>(args));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Json read_json(const std::string& path) {
  Json doc;
  std::ifstream in(path);
  REQUIRE(in);
  in >> doc;
  return doc;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("synth is deterministic and declares its manifold") {
  TempDir dir;
  const auto a = dir.file("a.csv");
  const auto b = dir.file("b.csv");
  CHECK(run({"synth", "--example", "sphere-1", "--seed", "1", "--output", a}) ==
        0);
  CHECK(run({"synth", "--example", "sphere-1", "--seed", "1", "--output", b}) ==
        0);
  CHECK(slurp(a) == slurp(b));
  const std::string text = slurp(a);
  CHECK(text.find("manifold=sphere") != std::string::npos);
  // 20 data rows in R^4
  int rows = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++rows;
  CHECK(rows == 20);

  const auto other = dir.file("c.csv");
  CHECK(run({"synth", "--example", "sphere-1", "--seed", "2", "--output",
             other}) == 0);
  CHECK(slurp(a) != slurp(other));
}

TEST_CASE("synth rejects unknown examples with a validation exit code") {
  TempDir dir;
  CHECK(run({"synth", "--example", "nope", "--seed", "1", "--output",
             dir.file("x.csv")}) == 2);
}

TEST_CASE("fit sphere on equatorial data reports a zero-error circle") {
  TempDir dir;
  const auto input = dir.file("pts.csv");
  write_file(input,
             "1,0,0\n0,1,0\n-1,0,0\n0,-1,0\n"
             "0.7071067811865476,0.7071067811865476,0\n");
  const auto report = dir.file("report.json");
  CHECK(run({"fit", "--manifold", "sphere", "--input", input, "--output",
             report}) == 0);
  const Json doc = read_json(report);
  CHECK(doc.at("schema") == "pssa-report/1");
  CHECK(doc.at("manifold").at("type") == "sphere");
  const auto& chain = doc.at("results").at("chain");
  REQUIRE(chain.size() == 1);
  CHECK(chain.at(0).at("dim").get<int>() == 1);
  CHECK(chain.at(0).at("total_error").get<double>() < 1e-10);
}

TEST_CASE("fit rejects non-unit sphere rows unless --renormalize") {
  TempDir dir;
  const auto input = dir.file("bad.csv");
  write_file(input, "2,0,0\n0,1,0\n");
  CHECK(run({"fit", "--manifold", "sphere", "--input", input, "--output",
             dir.file("r.json")}) == 2);
  CHECK(run({"fit", "--manifold", "sphere", "--input", input, "--output",
             dir.file("r.json"), "--renormalize"}) == 0);
}

TEST_CASE("fit torus ranks the generating resonance first") {
  TempDir dir;
  const auto input = dir.file("angles.csv");
  CHECK(run({"synth", "--example", "torus-25", "--seed", "1", "--output",
             input}) == 0);
  const auto report = dir.file("report.json");
  CHECK(run({"fit", "--manifold", "torus", "--input", input,
             "--resonance-bound", "10", "--output", report}) == 0);
  const Json doc = read_json(report);
  const auto& best = doc.at("results").at("ranking").at(0).at("A");
  CHECK(best == Json::array({Json::array({2, 5})}));
}

TEST_CASE("fit grassmann on a constant plane reports zero error") {
  TempDir dir;
  const auto input = dir.file("planes.csv");
  // three copies of span(e1,e2) in R^4, blank-line separated
  write_file(input,
             "1,0,0,0\n0,1,0,0\n\n"
             "1,0,0,0\n0,1,0,0\n\n"
             "0,1,0,0\n1,0,0,0\n");
  const auto report = dir.file("report.json");
  CHECK(run({"fit", "--manifold", "grassmann", "--input", input, "--output",
             report}) == 0);
  const Json doc = read_json(report);
  const auto& chain = doc.at("results").at("chain");
  REQUIRE(chain.size() == 2);
  CHECK(chain.at(1).at("codim").get<int>() == 2);
  CHECK(chain.at(1).at("total_error").get<double>() < 1e-10);
}

TEST_CASE("fit polysphere selects the coupled model on coupled data") {
  TempDir dir;
  const auto input = dir.file("poly.csv");
  CHECK(run({"synth", "--example", "poly-coupled", "--seed", "1", "--output",
             input}) == 0);
  const auto report = dir.file("report.json");
  CHECK(run({"fit", "--manifold", "polysphere", "--input", input, "--output",
             report}) == 0);
  const Json doc = read_json(report);
  const auto& ranking = doc.at("results").at("ranking");
  REQUIRE(ranking.size() >= 1);
  bool coupled_first_among_dim2 = false;
  for (const auto& entry : ranking) {
    if (entry.at("dim").get<int>() == 2) {
      coupled_first_among_dim2 = entry.at("label") == "S2";
      break;
    }
  }
  CHECK(coupled_first_among_dim2);
}

TEST_CASE("tree command writes a parseable deterministic report") {
  TempDir dir;
  const auto input = dir.file("angles.csv");
  CHECK(run({"synth", "--example", "torus-25", "--seed", "3", "--output",
             input}) == 0);
  const auto r1 = dir.file("t1.json");
  const auto r2 = dir.file("t2.json");
  CHECK(run({"tree", "--manifold", "torus", "--input", input,
             "--resonance-bound", "4", "--output", r1}) == 0);
  CHECK(run({"tree", "--manifold", "torus", "--input", input,
             "--resonance-bound", "4", "--output", r2}) == 0);
  CHECK(slurp(r1) == slurp(r2));
  const Json doc = read_json(r1);
  CHECK(doc.at("schema") == "pssa-tree/1");
  CHECK(doc.at("tree").at("label") == "T2");
  REQUIRE_FALSE(doc.at("tree").at("children").empty());
}

TEST_CASE("plotdata emits unit-norm circle samples from a sphere report") {
  TempDir dir;
  const auto input = dir.file("pts.csv");
  CHECK(run({"synth", "--example", "sphere-1", "--seed", "1", "--output",
             input}) == 0);
  const auto report = dir.file("report.json");
  CHECK(run({"fit", "--manifold", "sphere", "--input", input, "--output",
             report}) == 0);
  CHECK(run({"plotdata", "--report", report, "--what", "best-circle",
             "--output-dir", dir.file("plots")}) == 0);
  std::ifstream in(dir.file("plots") + "/circle.csv");
  REQUIRE(in);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string cell;
    Eigen::Vector4d v;
    for (int j = 0; j < 4; ++j) {
      std::getline(cells, cell, ',');
      v(j) = std::stod(cell);
    }
    CHECK(std::abs(v.norm() - 1.0) < 1e-10);
  }
  CHECK(rows == 512);
}

TEST_CASE("plotdata winds satisfy the resonance constraint") {
  TempDir dir;
  const auto input = dir.file("angles.csv");
  CHECK(run({"synth", "--example", "torus-25", "--seed", "1", "--output",
             input}) == 0);
  const auto report = dir.file("report.json");
  CHECK(run({"fit", "--manifold", "torus", "--input", input,
             "--resonance-bound", "10", "--output", report}) == 0);
  CHECK(run({"plotdata", "--report", report, "--what", "winds",
             "--output-dir", dir.file("plots")}) == 0);

  const Json doc = read_json(report);
  const double c = doc.at("results").at("best").at("offset").at(0);
  std::ifstream in(dir.file("plots") + "/winds_0.csv");
  REQUIRE(in);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto comma = line.find(',');
    const double x1 = std::stod(line.substr(0, comma));
    const double x2 = std::stod(line.substr(comma + 1));
    double r = 2 * x1 + 5 * x2 - c;
    r -= std::round(r);
    CHECK(std::abs(r) < 1e-9);
  }
  CHECK(rows >= 512);
}

TEST_CASE("plotdata rejects sections that do not exist") {
  TempDir dir;
  const auto input = dir.file("pts.csv");
  CHECK(run({"synth", "--example", "sphere-1", "--seed", "1", "--output",
             input}) == 0);
  const auto report = dir.file("report.json");
  CHECK(run({"fit", "--manifold", "sphere", "--input", input, "--output",
             report}) == 0);
  CHECK(run({"plotdata", "--report", report, "--what", "winds",
             "--output-dir", dir.file("plots")}) == 2);
}

TEST_CASE("fit reports are byte-identical across runs") {
  TempDir dir;
  const auto input = dir.file("angles.csv");
  CHECK(run({"synth", "--example", "torus-25", "--seed", "7", "--output",
             input}) == 0);
  const auto r1 = dir.file("r1.json");
  const auto r2 = dir.file("r2.json");
  CHECK(run({"fit", "--manifold", "torus", "--input", input, "--output", r1}) ==
        0);
  CHECK(run({"fit", "--manifold", "torus", "--input", input, "--output", r2}) ==
        0);
  CHECK(slurp(r1) == slurp(r2));
}

TEST_CASE("dataset header manifold is honored without a flag") {
  TempDir dir;
  const auto input = dir.file("angles.csv");
  CHECK(run({"synth", "--example", "torus-25", "--seed", "1", "--output",
             input}) == 0);
  CHECK(run({"fit", "--input", input, "--output", dir.file("r.json")}) == 0);
  // a conflicting flag is rejected
  CHECK(run({"fit", "--manifold", "sphere", "--input", input, "--output",
             dir.file("r.json")}) == 2);
}

namespace {

// minimal structural validation of the versioned report schema
void validate_fit_report(const Json& doc) {
  REQUIRE(doc.at("schema") == "pssa-report/1");
  REQUIRE(doc.at("command") == "fit");
  for (const char* key : {"manifold", "config", "input", "results"})
    REQUIRE(doc.contains(key));
  REQUIRE(doc.at("manifold").contains("type"));
  for (const char* key : {"path", "points", "data"})
    REQUIRE(doc.at("input").contains(key));
  for (const char* key : {"seed", "resonance_bound", "selection",
                          "renormalize", "top"})
    REQUIRE(doc.at("config").contains(key));
}

}  // namespace

TEST_CASE("fit reports validate against the schema") {
  TempDir dir;
  const auto sphere_in = dir.file("s.csv");
  const auto torus_in = dir.file("t.csv");
  CHECK(run({"synth", "--example", "sphere-2", "--seed", "4", "--output",
             sphere_in}) == 0);
  CHECK(run({"synth", "--example", "torus-25", "--seed", "4", "--output",
             torus_in}) == 0);
  const auto r1 = dir.file("r1.json");
  const auto r2 = dir.file("r2.json");
  CHECK(run({"fit", "--input", sphere_in, "--output", r1}) == 0);
  CHECK(run({"fit", "--input", torus_in, "--output", r2}) == 0);
  validate_fit_report(read_json(r1));
  validate_fit_report(read_json(r2));
  const Json tree_doc = [&] {
    const auto rt = dir.file("rt.json");
    CHECK(run({"tree", "--input", torus_in, "--resonance-bound", "4",
               "--output", rt}) == 0);
    return read_json(rt);
  }();
  REQUIRE(tree_doc.at("schema") == "pssa-tree/1");
  for (const char* key : {"manifold", "provenance", "tree"})
    REQUIRE(tree_doc.contains(key));
}

TEST_CASE("numerical failures exit with code 3") {
  TempDir dir;
  const auto input = dir.file("frames.csv");
  // two parallel rows cannot be orthonormalized even with --renormalize
  write_file(input, "1,0,0\n1,0,0\n");
  CHECK(run({"fit", "--manifold", "grassmann", "--input", input,
             "--renormalize", "--output", dir.file("r.json")}) == 3);
}

TEST_CASE("polysphere plot data matches angles_on_circle") {
  TempDir dir;
  const auto input = dir.file("poly.csv");
  // factor 0 sweeps the whole sphere (no structure), factor 1 sits on a
  // tilted great circle: the unambiguous best template is S2 x S1
  {
    std::ostringstream rows;
    const Eigen::Vector3d axis = Eigen::Vector3d(1, 1, 1).normalized();
    const Eigen::Vector3d u = axis.unitOrthogonal();
    const Eigen::Vector3d v = axis.cross(u);
    for (int i = 0; i < 20; ++i) {
      const double z = -0.9 + 1.8 * i / 19.0;
      const double r = std::sqrt(1.0 - z * z);
      const double a = 2.399963 * i;  // golden-angle sweep
      const double t = 2 * M_PI * i / 20.0;
      const Eigen::Vector3d p(r * std::cos(a), r * std::sin(a), z);
      const Eigen::Vector3d q = std::cos(t) * u + std::sin(t) * v;
      rows << p(0) << "," << p(1) << "," << p(2) << "," << q(0) << ","
           << q(1) << "," << q(2) << "\n";
    }
    write_file(input, "# manifold=polysphere n=2\n" + rows.str());
  }
  const auto report = dir.file("report.json");
  CHECK(run({"fit", "--manifold", "polysphere", "--input", input,
             "--renormalize", "--output", report}) == 0);
  const Json doc = read_json(report);
  CHECK(doc.at("results").at("ranking").at(0).at("label") == "S2xS1");

  CHECK(run({"plotdata", "--report", report, "--what", "factor-circles",
             "--output-dir", dir.file("plots")}) == 0);
  CHECK(run({"plotdata", "--report", report, "--what", "projection",
             "--output-dir", dir.file("plots")}) == 0);

  std::vector<std::pair<int, Eigen::Vector3d>> circles;
  for (const auto& c : doc.at("results").at("best").at("constraints"))
    if (c.at("type") == "circle_factor")
      circles.emplace_back(
          c.at("i").get<int>(),
          Eigen::Vector3d(c.at("axis").at(0), c.at("axis").at(1),
                          c.at("axis").at(2)));
  REQUIRE(circles.size() == 1);
  CHECK(circles.front().first == 1);

  // circle samples exist and are unit norm
  for (const auto& [factor, axis] : circles) {
    std::ifstream in(dir.file("plots") + "/circle_factor_" +
                     std::to_string(factor) + ".csv");
    REQUIRE(in);
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream cells(line);
      Eigen::Vector3d v;
      std::string cell;
      for (int j = 0; j < 3; ++j) {
        std::getline(cells, cell, ',');
        v(j) = std::stod(cell);
      }
      CHECK(std::abs(v.norm() - 1.0) < 1e-10);
      CHECK(std::abs(v.dot(axis)) < 1e-10);
    }
  }

  // projected angles reproduce angles_on_circle on the embedded data
  const auto& pts = doc.at("input").at("data").at("points");
  std::ifstream in(dir.file("plots") + "/projection.csv");
  REQUIRE(in);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    for (std::size_t ci = 0; ci < circles.size(); ++ci) {
      std::string cell;
      std::getline(cells, cell, ',');
      Eigen::Matrix3Xd point(3, 1);
      for (int j = 0; j < 3; ++j)
        point(j, 0) = pts.at(row).at(3 * circles[ci].first + j).get<double>();
      const double expected =
          pssa::poly::angles_on_circle(point, circles[ci].second)(0);
      CHECK(std::stod(cell) == doctest::Approx(expected).epsilon(1e-12));
    }
    ++row;
  }
  CHECK(row == 20);
}

TEST_CASE("JSON datasets round-trip through synth and fit") {
  TempDir dir;
  const auto input = dir.file("pts.json");
  CHECK(run({"synth", "--example", "sphere-1", "--seed", "6", "--output",
             input}) == 0);
  const Json data = read_json(input);
  CHECK(data.at("schema") == "pssa-dataset/1");
  CHECK(data.at("manifold").at("type") == "sphere");
  CHECK(data.at("points").size() == 20);
  const auto report = dir.file("r.json");
  CHECK(run({"fit", "--input", input, "--output", report}) == 0);
  CHECK(read_json(report).at("results").at("chain").size() == 2);
}

TEST_CASE("training-error selection ranks by the fitted residual") {
  TempDir dir;
  const auto input = dir.file("angles.csv");
  CHECK(run({"synth", "--example", "torus-25", "--seed", "1", "--output",
             input}) == 0);
  const auto report = dir.file("r.json");
  CHECK(run({"fit", "--input", input, "--selection", "training",
             "--resonance-bound", "10", "--output", report}) == 0);
  const Json doc = read_json(report);
  const auto& ranking = doc.at("results").at("ranking");
  CHECK(ranking.at(0).contains("training_error"));
  CHECK(ranking.at(0).at("A") == Json::array({Json::array({2, 5})}));
}
