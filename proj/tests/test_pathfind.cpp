#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "stabtrace/pathfind.hpp"

using namespace stabtrace;

namespace {

// Brute-force oracle: enumerate all simple walks avoiding the forbidden
// set; report whether any reaches `to`.
bool oracle_path_exists(const Surface& s, VertexId from, VertexId to,
                        const std::set<VertexId>& blocked) {
  std::set<VertexId> visited{from};
  std::vector<VertexId> stack{from};
  bool found = false;
  std::function<void(VertexId)> dfs = [&](VertexId v) {
    if (found) return;
    if (v == to) {
      found = true;
      return;
    }
    for (DartId d : s.darts_at(v)) {
      VertexId w = s.target(d);
      if (w == to) {
        found = true;
        return;
      }
      if (blocked.count(w) || visited.count(w)) continue;
      visited.insert(w);
      dfs(w);
      visited.erase(w);
    }
  };
  dfs(from);
  return found;
}

Surface disc_with_chord() {
  // boundary square 0-1-2-3 with chord 0-2; outer face is the boundary.
  SurfaceBuilder b;
  b.vertex(0).vertex(1).vertex(2).vertex(3);
  b.edge(0, 1).edge(2, 3).edge(4, 5).edge(6, 7);  // rim edges
  b.edge(8, 9);                                   // chord 0-2
  b.rotation(0, {0, 8, 7});
  b.rotation(1, {1, 2});
  b.rotation(2, {4, 9, 3});
  b.rotation(3, {5, 6});
  // faces traced; the rim face gets marked below.
  Surface s = b.build();
  // find the face of length 4 that walks the rim only (no chord darts)
  auto faces = trace_faces(s);
  for (size_t i = 0; i < faces.size(); ++i) {
    bool has_chord = false;
    for (DartId d : faces[i].darts)
      if (d == 8 || d == 9) has_chord = true;
    if (!has_chord && faces[i].darts.size() == 4) {
      s.boundary_marks.push_back(faces[i].darts.front());
      break;
    }
  }
  REQUIRE(!s.boundary_marks.empty());
  return s;
}

}  // namespace

TEST_CASE("separating chord is a proven disconnection") {
  Surface s = disc_with_chord();
  PathQuery q;
  q.from = 1;
  q.to = 3;
  q.forbidden_paths = {Path{{8}}};  // the chord, endpoints included
  q.refinement_budget = 2;
  auto out = find_disjoint_path(s, q);
  CHECK(out.status == PathSearchOutcome::Status::disconnected);
  REQUIRE(out.proof.has_value());
  CHECK(out.proof->from_component != out.proof->to_component);
}

TEST_CASE("empty forbidden set yields a shortest walk") {
  Surface s = refine_round(standard_surface(0, 0), nullptr);
  auto vs = s.all_vertices();
  PathQuery q;
  q.from = vs.front();
  q.to = vs.back();
  auto out = find_disjoint_path(s, q);
  REQUIRE(out.status == PathSearchOutcome::Status::found);
  CHECK(path_is_simple(out.surface, *out.path));
  CHECK(out.rounds_used == 0);
}

TEST_CASE("search agrees with brute force on small surfaces") {
  std::vector<Surface> corpus;
  corpus.push_back(surface_from_word("abAB"));
  corpus.push_back(standard_surface(0, 0));
  corpus.push_back(standard_surface(0, 1));
  corpus.push_back(refine_near(standard_surface(0, 0), {0}, nullptr));
  corpus.push_back(disc_with_chord());
  {
    SurfaceBuilder b;
    b.vertex(0).vertex(1);
    b.edge(0, 1).edge(2, 3).edge(4, 5);
    b.rotation(0, {0, 2, 4}).rotation(1, {1, 5, 3});
    corpus.push_back(b.build());
  }
  for (const Surface& s : corpus) {
    REQUIRE(s.edge_count() <= 12);
    auto vs = s.all_vertices();
    for (VertexId from : vs) {
      for (VertexId to : vs) {
        if (from == to) continue;
        for (int mask = 0; mask < (1 << std::min<size_t>(vs.size(), 4));
             ++mask) {
          std::set<VertexId> blocked;
          for (size_t i = 0; i < std::min<size_t>(vs.size(), 4); ++i)
            if (mask & (1 << i)) blocked.insert(vs[i]);
          if (blocked.count(from) || blocked.count(to)) continue;
          PathQuery q;
          q.from = from;
          q.to = to;
          q.forbidden_vertices.assign(blocked.begin(), blocked.end());
          q.refinement_budget = 0;  // pure skeleton search matches oracle
          auto out = find_disjoint_path(s, q);
          bool expect = oracle_path_exists(s, from, to, blocked);
          bool got = out.status == PathSearchOutcome::Status::found;
          CHECK(got == expect);
          if (got) {
            CHECK(path_is_simple(out.surface, *out.path));
            for (VertexId v : path_vertices(out.surface, *out.path))
              CHECK(!blocked.count(v));
          }
        }
      }
    }
  }
}

TEST_CASE("forbidden arc on the sphere is routed around after refinement") {
  Surface s = refine_round(standard_surface(0, 0), nullptr);
  // pick a forbidden path through the middle of the refined sphere
  auto vs = s.all_vertices();
  PathQuery probe;
  probe.from = vs[0];
  probe.to = vs[vs.size() / 2];
  auto base = find_disjoint_path(s, probe);
  REQUIRE(base.status == PathSearchOutcome::Status::found);
  Path wall = *base.path;
  s = base.surface;

  // endpoints off the wall
  std::set<VertexId> wall_verts;
  for (VertexId v : path_vertices(s, wall)) wall_verts.insert(v);
  std::vector<VertexId> free;
  for (VertexId v : s.all_vertices())
    if (!wall_verts.count(v)) free.push_back(v);
  REQUIRE(free.size() >= 2);

  PathQuery q;
  q.from = free.front();
  q.to = free.back();
  q.forbidden_paths = {wall};
  q.refinement_budget = 1;
  auto out = find_disjoint_path(s, q);
  REQUIRE(out.status == PathSearchOutcome::Status::found);
  CHECK(out.rounds_used <= 1);
  Path refreshed_wall = refresh_path(out.log, wall);
  CHECK(shared_interior_vertices(out.surface, *out.path, refreshed_wall, false)
            .empty());
}

TEST_CASE("reroute removes one crossing and keeps endpoints") {
  // build a refined sphere, route a target, then force a crossing path
  Surface s = refine_round(refine_round(standard_surface(0, 0), nullptr),
                           nullptr);
  auto vs = s.all_vertices();
  Path target;
  for (size_t k = 2; k < vs.size(); ++k) {
    PathQuery probe;
    probe.from = vs[1];
    probe.to = vs[vs.size() - k];
    auto base = find_disjoint_path(s, probe);
    REQUIRE(base.status == PathSearchOutcome::Status::found);
    if (base.path->darts.size() >= 2) {
      target = *base.path;
      break;
    }
  }
  REQUIRE(target.darts.size() >= 2);
  auto tv = path_vertices(s, target);
  REQUIRE(tv.size() >= 3);
  VertexId mid = tv[tv.size() / 2];

  // a path crossing `target` transversally at `mid`
  auto at_mid = s.darts_at(mid);
  auto [tin, tout] = path_darts_at(s, target, mid);
  // find two darts interleaving (tin,tout)
  DartId a = -1, b = -1;
  for (DartId d1 : at_mid) {
    if (d1 == tin || d1 == tout) continue;
    for (DartId d2 : at_mid) {
      if (d2 == d1 || d2 == tin || d2 == tout) continue;
      if (darts_interleave(s, d1, d2, tin, tout)) {
        a = d1;
        b = d2;
        break;
      }
    }
    if (a >= 0) break;
  }
  REQUIRE(a >= 0);
  Path crosser{{s.theta(a), b}};
  REQUIRE(path_is_simple(s, crosser));
  REQUIRE(paths_cross_at(s, crosser, target, mid));

  std::vector<const Path*> registry{&crosser, &target};
  Path moved = crosser;
  for (int attempt = 0;; ++attempt) {
    REQUIRE(attempt < 6);
    try {
      moved = reroute_around_end(s, moved, target, mid, tv.front(), registry);
      break;
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::needs_refinement);
      SubdivisionLog log;
      std::set<VertexId> zone(tv.begin(), tv.end());
      s = refine_near(s, {zone.begin(), zone.end()}, &log);
      moved = refresh_path(log, moved);
      target = refresh_path(log, target);
      tv = path_vertices(s, target);
    }
  }
  CHECK(path_source(s, moved) == path_source(s, crosser));
  CHECK(path_is_simple(s, moved));
  CHECK(shared_interior_vertices(s, moved, target, false).empty());
}
