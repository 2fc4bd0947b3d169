#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <filesystem>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "coseg/mesh.hpp"
#include "synthetic_meshes.hpp"

using namespace coseg;
namespace mg = coseg::testmesh;

namespace {
std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

namespace {

TriMesh load_off_text(const std::string& text) {
  std::ofstream(tmp_path("tmp_mesh.off")) << text;
  return load_mesh(tmp_path("tmp_mesh.off"), MeshFormat::Off);
}

TriMesh load_obj_text(const std::string& text) {
  std::ofstream(tmp_path("tmp_mesh.obj")) << text;
  return load_mesh(tmp_path("tmp_mesh.obj"), MeshFormat::Obj);
}

// Minimal ASCII PLY reader for round-trip checks (positions, faces, colors).
struct PlyData {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<int, 3>> colors;
};

PlyData read_ply(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  int nv = 0, nf = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string a, b;
    ls >> a >> b;
    if (a == "element" && b == "vertex") ls >> nv;
    if (a == "element" && b == "face") ls >> nf;
    if (a == "end_header") break;
  }
  PlyData d;
  for (int i = 0; i < nv; ++i) {
    double x, y, z;
    int r, g, bl;
    in >> x >> y >> z >> r >> g >> bl;
    d.vertices.emplace_back(x, y, z);
    d.colors.push_back({r, g, bl});
  }
  for (int i = 0; i < nf; ++i) {
    int deg, a, b, c;
    in >> deg >> a >> b >> c;
    REQUIRE(deg == 3);
    d.faces.push_back({a, b, c});
  }
  return d;
}

}  // namespace

TEST_CASE("OFF tetrahedron loads with 4 vertices and 4 faces") {
  mg::write_off(mg::tetrahedron(), tmp_path("tmp_tet.off"));
  TriMesh m = load_mesh(tmp_path("tmp_tet.off"), MeshFormat::Off);
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_faces() == 4);
}

TEST_CASE("OBJ quad face fan-triangulates into 2 triangles") {
  TriMesh m = load_obj_text(
      "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
      "f 1 2 3 4\n");
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_faces() == 2);
  CHECK(m.faces[0] == std::array<int, 3>{0, 1, 2});
  CHECK(m.faces[1] == std::array<int, 3>{0, 2, 3});
}

TEST_CASE("OBJ vertex references with texture/normal slashes parse") {
  TriMesh m = load_obj_text(
      "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
      "f 1/1 2/2/2 3//3\nf 1 2 4\n");
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_faces() == 2);
}

TEST_CASE("icosphere level 3 area approximates the unit sphere") {
  TriMesh m = mg::icosphere(3);
  CHECK(m.n_vertices() == 642);
  double area = m.total_area();
  CHECK(area == doctest::Approx(4.0 * std::numbers::pi).epsilon(0.02));
  CHECK(area < 4.0 * std::numbers::pi);  // inscribed polyhedron deficit
}

TEST_CASE("lumped mass on the regular tetrahedron") {
  Eigen::VectorXd m = vertex_lumped_mass(mg::tetrahedron(1.0));
  // each vertex touches 3 faces of area sqrt(3)/4
  for (int i = 0; i < 4; ++i)
    CHECK(m[i] == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("single face distributes a third of its area to each corner") {
  TriMesh t;
  t.vertices = {Vec3(0, 0, 0), Vec3(4, 0, 0), Vec3(0, 3, 0)};  // area 6
  t.faces = {{0, 1, 2}};
  Eigen::VectorXd m = vertex_lumped_mass(t);
  for (int i = 0; i < 3; ++i) CHECK(m[i] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("lumped masses sum to the total area") {
  TriMesh m = mg::icosphere(2);
  double total = vertex_lumped_mass(m).sum();
  CHECK(total == doctest::Approx(m.total_area()).epsilon(1e-12));
}

TEST_CASE("face areas are rigid-motion invariant") {
  TriMesh a = mg::icosphere(1);
  TriMesh b = mg::rigidly_moved(a);
  for (int f = 0; f < a.n_faces(); ++f)
    CHECK(b.face_area(f) == doctest::Approx(a.face_area(f)).epsilon(1e-12));
}

TEST_CASE("labeled PLY export round-trips") {
  TriMesh m = mg::tetrahedron();
  std::vector<int> labels = {0, 1, 0, 1};
  std::map<int, std::array<std::uint8_t, 3>> palette = {{0, {255, 0, 0}},
                                                        {1, {0, 0, 255}}};
  export_labeled_mesh(m, labels, palette, tmp_path("tmp_tet.ply"));
  PlyData d = read_ply(tmp_path("tmp_tet.ply"));
  REQUIRE(d.vertices.size() == 4);
  REQUIRE(d.faces.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK((d.vertices[i] - m.vertices[i]).norm() <
          1e-6 * (m.vertices[i].norm() + 1.0));
    CHECK(d.faces[i] == m.faces[i]);
    CHECK(d.colors[i][0] == (labels[i] == 0 ? 255 : 0));
    CHECK(d.colors[i][2] == (labels[i] == 0 ? 0 : 255));
  }
}

TEST_CASE("uniform labels give a single-color PLY") {
  TriMesh m = mg::tetrahedron();
  export_labeled_mesh(m, {0, 0, 0, 0}, {{0, {10, 20, 30}}}, tmp_path("tmp_tet1.ply"));
  PlyData d = read_ply(tmp_path("tmp_tet1.ply"));
  for (const auto& c : d.colors) CHECK(c == std::array<int, 3>{10, 20, 30});
}

TEST_CASE("missing palette entry is an error") {
  TriMesh m = mg::tetrahedron();
  CHECK_THROWS_AS(export_labeled_mesh(m, {0, 1, 0, 0}, {{0, {1, 2, 3}}}, "tmp.ply"),
                  MissingPaletteEntry);
}

TEST_CASE("out-of-range face index is rejected") {
  CHECK_THROWS_AS(load_off_text("OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 9\n"),
                  IndexOutOfRange);
}

TEST_CASE("repeated vertex in a face is rejected") {
  CHECK_THROWS_AS(load_off_text("OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 1\n"),
                  DegenerateGeometry);
}

TEST_CASE("zero-area face is rejected") {
  CHECK_THROWS_AS(
      load_off_text("OFF\n4 1 0\n0 0 0\n1 0 0\n2 0 0\n0 0 1\n3 0 1 2\n"),
      DegenerateGeometry);
}

TEST_CASE("malformed OFF header is a parse error") {
  CHECK_THROWS_AS(load_off_text("FFO\n1 1 1\n"), ParseError);
}

TEST_CASE("isolated vertices are pruned with reindexing") {
  // 5 vertices, the middle one unused
  TriMesh m = load_off_text(
      "OFF\n6 4 0\n"
      "0.35 0.35 0.35\n0.35 -0.35 -0.35\n9 9 9\n-0.35 0.35 -0.35\n"
      "-0.35 -0.35 0.35\n8 8 8\n"
      "3 0 1 3\n3 0 4 1\n3 0 3 4\n3 1 4 3\n");
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_faces() == 4);
  CHECK_NOTHROW(vertex_lumped_mass(m));
}

TEST_CASE("connected component counting") {
  CHECK(mg::tetrahedron().connected_components() == 1);
  CHECK(mg::two_tets().connected_components() == 2);
}

TEST_CASE("content hash tracks geometry") {
  TriMesh a = mg::icosphere(1);
  TriMesh b = a;
  CHECK(a.content_hash() == b.content_hash());
  b.vertices[0].x() += 1e-9;
  CHECK(a.content_hash() != b.content_hash());
}
