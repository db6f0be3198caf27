#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "stabtrace/surface.hpp"

using namespace stabtrace;

namespace {

Surface theta_graph_sphere() {
  // two vertices joined by three parallel edges; on the sphere F=3
  SurfaceBuilder b;
  b.vertex(0).vertex(1);
  b.edge(0, 1).edge(2, 3).edge(4, 5);
  b.rotation(0, {0, 2, 4});
  b.rotation(1, {1, 5, 3});
  return b.build();
}

}  // namespace

TEST_CASE("one-vertex torus gluing") {
  Surface s = surface_from_word("abAB");
  auto e = euler_genus(s);
  CHECK(e.vertices == 1);
  CHECK(e.edges == 2);
  CHECK(e.interior_faces == 1);
  CHECK(e.chi == 0);
  CHECK(e.genus == 1);
  CHECK(e.boundary_faces == 0);
}

TEST_CASE("theta graph on sphere") {
  Surface s = theta_graph_sphere();
  auto e = euler_genus(s);
  CHECK(e.interior_faces == 3);
  CHECK(e.chi == 2);
  CHECK(e.genus == 0);
}

TEST_CASE("octagon gives genus 2") {
  Surface s = surface_from_word("abABcdCD");
  auto e = euler_genus(s);
  CHECK(e.chi == -2);
  CHECK(e.genus == 2);
}

TEST_CASE("genus 3 one-vertex gluing") {
  Surface s = surface_from_word("abABcdCDefEF");
  auto e = euler_genus(s);
  CHECK(e.chi == -4);
  CHECK(e.genus == 3);
  CHECK(e.boundary_faces == 0);
}

TEST_CASE("disc: one vertex, one loop, one boundary face") {
  SurfaceBuilder b;
  b.vertex(0).edge(0, 1).rotation(0, {0, 1}).boundary_face(1);
  Surface s = b.build();
  auto e = euler_genus(s);
  CHECK(e.vertices == 1);
  CHECK(e.edges == 1);
  CHECK(e.interior_faces == 1);
  CHECK(e.boundary_faces == 1);
  CHECK(e.chi == 1);
  CHECK(e.genus == 0);
}

TEST_CASE("standard surfaces satisfy chi = 2-2g-b") {
  for (int g = 0; g <= 5; ++g) {
    for (int b = 0; b <= 2; ++b) {
      Surface s = standard_surface(g, b);
      auto e = euler_genus(s);
      CHECK(e.genus == g);
      CHECK(e.boundary_faces == b);
      CHECK(e.chi == 2 - 2 * g - b);
    }
  }
}

TEST_CASE("gluing errors") {
  CHECK_THROWS_AS(surface_from_word("aa"), Error);
  CHECK_THROWS_AS(surface_from_word("abA"), Error);
  try {
    surface_from_word("aa");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_orientable);
  }
  // dart used twice
  SurfaceBuilder b;
  b.vertex(0).edge(0, 1).edge(1, 2);
  CHECK_THROWS_AS(b.build(), Error);
  // disconnected: two separate loops on separate vertices
  SurfaceBuilder b2;
  b2.vertex(0).vertex(1);
  b2.edge(0, 1).edge(2, 3);
  b2.rotation(0, {0, 1}).rotation(1, {2, 3});
  CHECK_THROWS_AS(b2.build(), Error);
}

TEST_CASE("non-integer genus flags corrupt boundary data") {
  // torus with its single face marked as boundary: 2 - chi - b = 2
  // stays even, so corrupt data needs a hacked face count instead.
  Surface s = surface_from_word("abAB");
  s.boundary_marks.push_back(0);  // one boundary face, chi drops to -1
  auto e = euler_genus(s);        // (2+1-1)/2 = 1, still integral
  CHECK(e.genus == 1);
  // duplicate mark on both faces of the sphere loop map leaves nothing
  Surface d = standard_surface(0, 0);
  d.boundary_marks = {0, 1};
  auto e2 = euler_genus(d);
  CHECK(e2.genus == 0);
  CHECK(e2.chi == 0);
  // hacked: pretend an extra vertex exists -> odd count
  Surface c = surface_from_word("abAB");
  c.vertex_alive.push_back(1);
  c.vertex_anchor.push_back(0);
  CHECK_THROWS_AS(euler_genus(c), Error);
}

TEST_CASE("subdivision keeps chi and face count") {
  Surface s = surface_from_word("abAB");
  SubdivisionLog log;
  Surface t = subdivide(s, 0, &log);
  auto e = euler_genus(t);
  CHECK(t.vertex_count() == 2);
  CHECK(t.edge_count() == 3);
  CHECK(e.interior_faces == 1);
  CHECK(e.chi == 0);

  SUBCASE("repeated subdivision") {
    Surface u = s;
    SubdivisionLog l2;
    for (int k = 0; k < 100; ++k) {
      auto ds = u.all_darts();
      u = subdivide(u, ds[static_cast<size_t>(k * 7) % ds.size()], &l2);
      CHECK(euler_genus(u).chi == 0);
    }
  }
}

TEST_CASE("subdivide a disc boundary edge") {
  SurfaceBuilder b;
  b.vertex(0).edge(0, 1).rotation(0, {0, 1}).boundary_face(1);
  Surface s = b.build();
  Surface t = subdivide(s, 0, nullptr);
  auto e = euler_genus(t);
  CHECK(e.chi == 1);
  CHECK(e.boundary_faces == 1);
}

TEST_CASE("path refresh across subdivision") {
  Surface s = theta_graph_sphere();
  Path p{{0, 3}};  // 0 -> 1 -> 0
  CHECK(path_is_walk(s, p));
  SubdivisionLog log;
  Surface t = subdivide(s, 0, &log);
  Path q = refresh_path(log, p);
  CHECK(path_is_walk(t, q));
  CHECK(path_source(t, q) == 0);
  CHECK(path_target(t, q) == 0);
  CHECK(q.darts.size() == 3);
}

TEST_CASE("refine_round preserves chi and creates room") {
  for (int g = 0; g <= 2; ++g) {
    Surface s = standard_surface(g, g == 1 ? 1 : 0);
    auto before = euler_genus(s);
    SubdivisionLog log;
    Surface t = refine_round(s, &log);
    auto after = euler_genus(t);
    CHECK(after.chi == before.chi);
    CHECK(after.genus == before.genus);
    CHECK(after.boundary_faces == before.boundary_faces);
    CHECK(t.vertex_count() > s.vertex_count());
  }
}

TEST_CASE("refine_near only grows the star") {
  Surface s = refine_round(standard_surface(1, 0), nullptr);
  int before = s.vertex_count();
  SubdivisionLog log;
  Surface t = refine_near(s, {0}, &log);
  CHECK(euler_genus(t).chi == 0);
  CHECK(t.vertex_count() > before);
  CHECK(t.vertex_count() < 6 * before);
}

TEST_CASE("transversality detection") {
  // 4-valent vertex: two paths crossing at vertex 2 of a refined square
  SurfaceBuilder b;
  // star: center 0, leaves 1..4, rotation order (n, e, s, w)
  b.vertex(0).vertex(1).vertex(2).vertex(3).vertex(4);
  b.edge(0, 1).edge(2, 3).edge(4, 5).edge(6, 7);
  b.rotation(0, {0, 2, 4, 6});
  b.rotation(1, {1});
  b.rotation(2, {3});
  b.rotation(3, {5});
  b.rotation(4, {7});
  Surface s = b.build();
  Path ns{{1, 4}};  // leaf1 -> center -> leaf3
  Path ew{{3, 6}};  // leaf2 -> center -> leaf4
  Path ne{{1, 2}};  // leaf1 -> center -> leaf2
  CHECK(paths_cross_at(s, ns, ew, 0));
  Path sw{{5, 6}};
  CHECK_FALSE(paths_cross_at(s, ne, sw, 0));
}

TEST_CASE("surf io round trip") {
  Surface s = standard_surface(2, 1);
  std::string text = write_surf(s);
  Surface t = parse_surf(text);
  auto e1 = euler_genus(s);
  auto e2 = euler_genus(t);
  CHECK(e1.chi == e2.chi);
  CHECK(e1.genus == e2.genus);
  CHECK(e1.boundary_faces == e2.boundary_faces);
  CHECK(write_surf(t) == text);
}

TEST_CASE("surf parse errors carry position info") {
  CHECK_THROWS_AS(parse_surf("vertex x"), Error);
  CHECK_THROWS_AS(parse_surf("frob 1 2"), Error);
}
