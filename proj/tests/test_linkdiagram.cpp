#include <doctest.h>

#include "stabtrace/linkdiagram.hpp"

using namespace stabtrace;

namespace {

LinkDiagram hopf_link() {
  LinkDiagram d;
  d.n_edges = 4;
  d.xings.push_back({{0, 3, 1, 2}, 0});
  d.xings.push_back({{3, 0, 2, 1}, 0});
  return d;
}

LinkDiagram trefoil() {
  LinkDiagram d;
  d.n_edges = 6;
  d.xings.push_back({{0, 3, 1, 4}, 1});
  d.xings.push_back({{2, 5, 3, 0}, 1});
  d.xings.push_back({{4, 1, 5, 2}, 1});
  return d;
}

LinkDiagram kinked_unknot() {
  LinkDiagram d;
  d.n_edges = 2;
  d.xings.push_back({{0, 0, 1, 1}, 0});
  return d;
}

}  // namespace

TEST_CASE("hopf link structure") {
  LinkDiagram d = hopf_link();
  validate_link(d);
  auto comp = link_components(d);
  CHECK(comp.count == 2);
  auto lk = linking_numbers(d);
  REQUIRE(lk.size() == 1);
  CHECK(std::abs(lk.begin()->second) == 1);
  auto res = is_unlink(d);
  CHECK(res.status == UnlinkResult::Status::refuted);
}

TEST_CASE("trefoil is refuted by colorings") {
  LinkDiagram d = trefoil();
  validate_link(d);
  CHECK(link_components(d).count == 1);
  CHECK(tricolor_nullity(d) == 2);
  auto res = is_unlink(d);
  CHECK(res.status == UnlinkResult::Status::refuted);
}

TEST_CASE("kinked unknot reduces by R1") {
  LinkDiagram d = kinked_unknot();
  validate_link(d);
  auto sites = r1_sites(d);
  REQUIRE(!sites.empty());
  LinkDiagram r = apply_r1(d, sites.front());
  CHECK(r.crossing_count() == 0);
  CHECK(r.loop_edges.size() == 1);
  auto res = is_unlink(d);
  CHECK(res.status == UnlinkResult::Status::verified);
}

TEST_CASE("crossingless diagrams verify immediately") {
  LinkDiagram d;
  d.n_edges = 3;
  d.loop_edges = {0, 1, 2};
  validate_link(d);
  CHECK(link_components(d).count == 3);
  auto res = is_unlink(d);
  CHECK(res.status == UnlinkResult::Status::verified);
  CHECK(tricolor_nullity(d) == 3);
}

TEST_CASE("R2 push and pull round trip") {
  LinkDiagram d;
  d.n_edges = 2;
  d.loop_edges = {0, 1};
  // cannot push across loop edges (no faces); build from the hopf instead
  LinkDiagram h = hopf_link();
  auto sites = r2plus_sites(h);
  REQUIRE(!sites.empty());
  LinkDiagram pushed = apply_r2plus(h, sites.front());
  validate_link(pushed);
  CHECK(pushed.crossing_count() == 4);
  CHECK(link_components(pushed).count == 2);
  // the new bigon is removable again
  auto back = r2_sites(pushed);
  REQUIRE(!back.empty());
  bool restored = false;
  for (const auto& s : back) {
    LinkDiagram popped = apply_r2(pushed, s);
    if (canonical_key(popped) == canonical_key(h)) restored = true;
  }
  CHECK(restored);
}

TEST_CASE("R3 preserves the invariants on the trefoil") {
  LinkDiagram d = trefoil();
  auto sites = r3_sites(d);
  if (sites.empty()) return;  // depends on which faces are triangles
  LinkDiagram moved = apply_r3(d, sites.front());
  validate_link(moved);
  CHECK(moved.crossing_count() == 3);
  CHECK(link_components(moved).count == 1);
  CHECK(tricolor_nullity(moved) == tricolor_nullity(d));
}

TEST_CASE("six-crossing unknot verifies within the depth budget") {
  // grow an unknot diagram by R2 pushes (and keep it genuinely tangled)
  LinkDiagram d = kinked_unknot();
  int guard = 0;
  while (d.crossing_count() < 6 && guard++ < 20) {
    auto sites = r2plus_sites(d);
    bool grown = false;
    for (const auto& s : sites) {
      try {
        LinkDiagram next = apply_r2plus(d, s);
        // avoid immediately-trivial pushes when possible
        d = next;
        grown = true;
        break;
      } catch (const Error&) {
      }
    }
    if (!grown) break;
  }
  validate_link(d);
  REQUIRE(d.crossing_count() >= 5);
  CHECK(link_components(d).count == 1);
  auto res = is_unlink(d, 12);
  CHECK(res.status == UnlinkResult::Status::verified);
}

TEST_CASE("canonical keys are label invariant") {
  LinkDiagram d = trefoil();
  // relabel edges consistently: swap 0 <-> 5, 1 <-> 4, 2 <-> 3
  LinkDiagram r = d;
  for (auto& x : r.xings)
    for (auto& e : x.e) e = 5 - e;
  CHECK(canonical_key(d) == canonical_key(r));
  CHECK(canonical_key(d) != canonical_key(hopf_link()));
}
