#include <doctest.h>

#include <algorithm>

#include "stabtrace/tubing.hpp"
#include "testutil.hpp"

using namespace stabtrace;
using namespace stabtrace::testutil;

namespace {

bool cost_is_stab_destab(const CostList& c) {
  return c.size() == 2 && c[0].kind == CostKind::stabilise &&
         c[1].kind == CostKind::destabilise;
}

int crossings_with(const TubingDiagram& d, const Path& target) {
  int n = 0;
  for (const auto& a : d.arcs)
    n += static_cast<int>(
        shared_interior_vertices(d.surface, a.path, target).size());
  return n;
}

}  // namespace

TEST_CASE("empty diagram is valid and has surface genus") {
  TubingDiagram d = empty_diagram(standard_surface(3, 0));
  CHECK(validate_diagram(d).ok());
  CHECK(associated_genus(d) == 3);
}

TEST_CASE("associated genus counts pairs") {
  Rng rng(7);
  auto d = random_diagram(rng, 0, 2);
  REQUIRE(d.has_value());
  CHECK(associated_genus(*d) == 2);
}

TEST_CASE("validation catches shared vertices and marked interiors") {
  Rng rng(11);
  auto d = random_diagram(rng, 0, 2);
  REQUIRE(d.has_value());

  SUBCASE("two arcs sharing a vertex") {
    TubingDiagram bad = *d;
    bad.arcs[1].path = bad.arcs[0].path;
    bad.pairs[1].x_plus = bad.pairs[0].x_plus;
    bad.pairs[1].x_minus = bad.pairs[0].x_minus;
    auto r = validate_diagram(bad);
    CHECK(!r.ok());
    bool found = false;
    for (auto& v : r.items)
      if (v.clause == "arcs-disjoint" || v.clause == "pair-overlap")
        found = true;
    CHECK(found);
  }

  SUBCASE("arc through a marked vertex") {
    TubingDiagram bad = *d;
    // reroute arc 0 through y1+ by splicing: force the violation instead by
    // marking one of the arc's interior vertices as a pair vertex
    auto vs = path_vertices(bad.surface, bad.arcs[0].path);
    REQUIRE(vs.size() >= 3);
    bad.pairs[1].y_plus = vs[1];
    bad.surface.set_marked(vs[1], true);
    auto r = validate_diagram(bad);
    CHECK(!r.ok());
    bool found = false;
    for (auto& v : r.items)
      if (v.clause == "arc-interior-marked") found = true;
    CHECK(found);
  }
}

TEST_CASE("tube swap exchanges roles at cost (stab, destab)") {
  Rng rng(3);
  auto d0 = random_diagram(rng, 0, 1);
  REQUIRE(d0.has_value());
  TubingDiagram d = *d0;
  auto beta = route_clear(d, d.pairs[0].y_plus, d.pairs[0].y_minus);
  REQUIRE(beta.has_value());
  CostList cost;
  TubingDiagram e = tube_swap(d, 0, *beta, &cost);
  CHECK(cost_is_stab_destab(cost));
  CHECK(e.pairs[0].x_plus == d.pairs[0].y_plus);
  CHECK(e.pairs[0].y_plus == d.pairs[0].x_plus);
  CHECK(e.pairs[0].x_minus == d.pairs[0].y_minus);
  CHECK(e.pairs[0].y_minus == d.pairs[0].x_minus);
  CHECK(associated_genus(e) == associated_genus(d));
  CHECK(validate_diagram(e).ok());
}

TEST_CASE("tube swap rejects beta meeting another arc") {
  Rng rng(5);
  TubingDiagram d;
  std::vector<VertexId> arc1;
  for (int attempt = 0; attempt < 50; ++attempt) {
    auto d0 = random_diagram(rng, 0, 2);
    if (!d0) continue;
    auto vs = path_vertices(d0->surface, d0->arcs[1].path);
    if (vs.size() >= 3) {
      d = *d0;
      arc1 = vs;
      break;
    }
  }
  // beta deliberately routed through a vertex of arc 1
  REQUIRE(arc1.size() >= 3);
  VertexId via = arc1[arc1.size() / 2];
  PathQuery q1;
  q1.from = d.pairs[0].y_plus;
  q1.to = via;
  for (VertexId v : d.surface.marked)
    if (v != q1.from) q1.forbidden_vertices.push_back(v);
  q1.refinement_budget = 0;
  auto leg1 = find_disjoint_path(d.surface, q1);
  if (leg1.status != PathSearchOutcome::Status::found) return;  // rare layout
  PathQuery q2;
  q2.from = via;
  q2.to = d.pairs[0].y_minus;
  for (VertexId v : d.surface.marked)
    if (v != q2.to) q2.forbidden_vertices.push_back(v);
  for (VertexId v : path_vertices(d.surface, *leg1.path))
    if (v != via) q2.forbidden_vertices.push_back(v);
  q2.refinement_budget = 0;
  auto leg2 = find_disjoint_path(d.surface, q2);
  if (leg2.status != PathSearchOutcome::Status::found) return;
  Path beta = path_concat(d.surface, *leg1.path, *leg2.path);
  CHECK_THROWS_AS(tube_swap(d, 0, beta, nullptr), Error);
  try {
    tube_swap(d, 0, beta, nullptr);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::beta_not_disjoint);
  }
}

TEST_CASE("tube move accepts crossings with its own arc") {
  Rng rng(9);
  auto d0 = random_diagram(rng, 1, 1);
  REQUIRE(d0.has_value());
  TubingDiagram d = *d0;

  SUBCASE("identity rewrite costs (stab, destab)") {
    CostList cost;
    TubingDiagram e = tube_move(d, 0, d.arcs[0].path, &cost);
    CHECK(cost_is_stab_destab(cost));
    CHECK(path_equal_undirected(e.surface, e.arcs[0].path, d.arcs[0].path));
  }

  SUBCASE("alpha through a marked vertex is rejected") {
    // straight line to y+ then onward: passes a marked vertex
    auto leg = route_clear(d, d.pairs[0].x_plus, d.pairs[0].y_plus);
    REQUIRE(leg.has_value());
    auto leg2 = route_clear(d, d.pairs[0].y_plus, d.pairs[0].x_minus);
    if (!leg2) return;
    Path alpha = path_concat(d.surface, *leg, *leg2);
    CHECK_THROWS_AS(tube_move(d, 0, alpha, nullptr), Error);
  }

  SUBCASE("wrong endpoints rejected") {
    auto beta = route_clear(d, d.pairs[0].y_plus, d.pairs[0].y_minus);
    REQUIRE(beta.has_value());
    CHECK_THROWS_AS(tube_move(d, 0, *beta, nullptr), Error);
  }
}

TEST_CASE("randomized swaps and moves preserve validity and pair count") {
  Rng rng(2024);
  int done = 0;
  for (int trial = 0; trial < 400 && done < 200; ++trial) {
    auto d0 = random_diagram(rng, trial % 2, 1 + trial % 3);
    if (!d0) continue;
    TubingDiagram d = *d0;
    int i = trial % d.pair_count();
    CostList cost;
    if (trial % 2 == 0) {
      auto beta = route_clear(d, d.pairs[i].y_plus, d.pairs[i].y_minus);
      if (!beta) continue;
      TubingDiagram e = tube_swap(d, i, *beta, &cost);
      CHECK(cost_is_stab_destab(cost));
      CHECK(validate_diagram(e).ok());
      CHECK(e.pair_count() == d.pair_count());
      CHECK(associated_genus(e) == associated_genus(d));
    } else {
      auto alpha = route_clear(d, d.pairs[i].x_plus, d.pairs[i].x_minus);
      if (!alpha) continue;
      TubingDiagram e = tube_move(d, i, *alpha, &cost);
      CHECK(cost_is_stab_destab(cost));
      CHECK(validate_diagram(e).ok());
      CHECK(e.pair_count() == d.pair_count());
    }
    done++;
  }
  CHECK(done >= 200);
}

TEST_CASE("clear_path with no crossings is the identity") {
  Rng rng(17);
  auto d0 = random_diagram(rng, 0, 1);
  REQUIRE(d0.has_value());
  TubingDiagram d = *d0;
  auto target = route_clear(d, d.pairs[0].y_plus, d.pairs[0].y_minus);
  REQUIRE(target.has_value());
  CostList cost;
  TubingDiagram e =
      clear_path(d, *target, path_source(d.surface, *target),
                 ClearMode::costed, &cost);
  CHECK(cost.empty());
  CHECK(write_tub(e) == write_tub(d));
}

TEST_CASE("clear_path pays one (stab,destab) per crossing") {
  // construct a diagram plus a target crossing its arcs
  Rng rng(23);
  for (int attempt = 0; attempt < 40; ++attempt) {
    auto d0 = random_diagram(rng, 0, 2);
    if (!d0) continue;
    TubingDiagram d = *d0;
    // route a target from two fresh endpoints, allowed to cross arcs
    auto pool = free_vertices(d);
    if (pool.size() < 2) continue;
    auto ends = pick_distinct(rng, pool, 2);
    PathQuery q;
    q.from = ends[0];
    q.to = ends[1];
    for (VertexId v : d.surface.marked) q.forbidden_vertices.push_back(v);
    for (const auto& a : d.arcs) q.crossable_paths.push_back(a.path);
    q.refinement_budget = 0;
    auto out = find_disjoint_path(d.surface, q);
    if (out.status != PathSearchOutcome::Status::found) continue;
    Path target = *out.path;
    int k = crossings_with(d, target);
    if (k == 0) continue;

    CostList cost;
    Path target_after;
    TubingDiagram e = clear_path(d, target, q.from, ClearMode::costed, &cost,
                                 {}, &target_after);
    CHECK(static_cast<int>(cost.size()) == 2 * k);
    for (size_t m = 0; m < cost.size(); m += 2) {
      CHECK(cost[m].kind == CostKind::stabilise);
      CHECK(cost[m + 1].kind == CostKind::destabilise);
    }
    CHECK(crossings_with(e, target_after) == 0);
    CHECK(validate_diagram(e).ok());
    CHECK(e.pair_count() == d.pair_count());

    // isotopy mode on the same input: single isotopy event
    CostList iso;
    TubingDiagram e2 =
        clear_path(d, target, q.from, ClearMode::isotopy, &iso);
    CHECK(iso.size() == 1);
    CHECK(iso[0].kind == CostKind::isotopy);
    CHECK(validate_diagram(e2).ok());
    return;  // one constructed scenario suffices
  }
  FAIL("could not construct a crossing scenario");
}

TEST_CASE("tub io round trip") {
  Rng rng(31);
  auto d = random_diagram(rng, 1, 2);
  REQUIRE(d.has_value());
  std::string text = write_tub(*d);
  TubingDiagram back = parse_tub(text);
  CHECK(validate_diagram(back).ok());
  CHECK(write_tub(back) == text);
  CHECK(diagram_digest(back) == diagram_digest(*d));
}
