#include <doctest.h>

#include <random>

#include "stabtrace/banded.hpp"
#include "stabtrace/fixtures.hpp"

using namespace stabtrace;

namespace {

BandedLink standard_disc() {
  BandedLink b;
  b.diagram.n_edges = 1;
  b.diagram.loop_edges = {0};
  b.comp_flags = {'L'};
  b.maxima = 1;
  return b;
}

BandedLink two_circles_joined() {
  BandedLink b;
  b.diagram.n_edges = 2;
  b.diagram.loop_edges = {0, 1};
  b.comp_flags = {'L', 'U'};
  b.maxima = 1;
  Band j;
  j.id = 0;
  j.end0 = {0, 0.5, 'l'};
  j.end1 = {1, 0.5, 'l'};
  b.bands = {j};
  return b;
}

BandedLink split_band_circle(int framing = 0) {
  BandedLink b;
  b.diagram.n_edges = 1;
  b.diagram.loop_edges = {0};
  b.comp_flags = {'L'};
  b.maxima = framing % 2 == 0 ? 2 : 1;
  Band s;
  s.id = 0;
  s.end0 = {0, 0.3, 'l'};
  s.end1 = {0, 0.6, 'l'};
  s.framing = framing;
  b.bands = {s};
  return b;
}

}  // namespace

TEST_CASE("standard disc is valid with stats (0,0,1)") {
  BandedLink b = standard_disc();
  auto st = stats(b);
  CHECK(st.minima == 0);
  CHECK(st.saddles == 0);
  CHECK(st.maxima == 1);
  CHECK(st.chi == 1);
  CHECK(st.boundary == 1);
  CHECK(st.genus == 0);
  auto rep = validate_banded(b);
  CHECK(rep.ok());
  CHECK(rep.resolved_components == 1);
}

TEST_CASE("resolution with no bands is the identity") {
  BandedLink b = standard_disc();
  LinkDiagram r = resolve_bands(b);
  CHECK(r.crossing_count() == 0);
  CHECK(r.loop_edges.size() == 1);
}

TEST_CASE("a band joining two circles yields one circle") {
  BandedLink b = two_circles_joined();
  LinkDiagram r = resolve_bands(b);
  validate_link(r);
  CHECK(link_components(r).count == 1);
  CHECK(r.crossing_count() == 0);
  CHECK(validate_banded(b).ok());
}

TEST_CASE("a same-side band splits a circle in two") {
  BandedLink b = split_band_circle();
  LinkDiagram r = resolve_bands(b);
  validate_link(r);
  CHECK(link_components(r).count == 2);
  CHECK(validate_banded(b).ok());
}

TEST_CASE("framing realises as twist crossings") {
  SUBCASE("two half twists make a hopf link") {
    BandedLink b = split_band_circle(2);
    LinkDiagram r = resolve_bands(b);
    validate_link(r);
    CHECK(r.crossing_count() == 2);
    CHECK(link_components(r).count == 2);
    auto lk = linking_numbers(r);
    REQUIRE(lk.size() == 1);
    CHECK(std::abs(lk.begin()->second) == 1);
    auto rep = validate_banded(b);
    CHECK(!rep.ok());  // surgery does not give an unlink
    CHECK(rep.unlink.status == UnlinkResult::Status::refuted);
  }
  SUBCASE("one half twist keeps one circle") {
    BandedLink b = split_band_circle(1);
    LinkDiagram r = resolve_bands(b);
    validate_link(r);
    CHECK(link_components(r).count == 1);
    CHECK(r.crossing_count() == 1);
    CHECK(validate_banded(b).ok());
  }
}

TEST_CASE("stabilisation gadget adds a handle and keeps the link") {
  BandedLink b = standard_disc();
  BandMove stab;
  stab.kind = BandMove::Kind::stabilise;
  stab.edge = 0;
  stab.pos = 0.25;
  BandedLink s = apply_move(b, stab);
  auto st = stats(s);
  CHECK(st.saddles == 2);
  CHECK(st.maxima == 1);
  CHECK(st.chi == -1);
  CHECK(st.genus == 1);
  auto rep = validate_banded(s);
  CHECK(rep.ok());
  CHECK(rep.resolved_components == 1);

  SUBCASE("and the dual pair destabilises back") {
    BandMove destab;
    destab.kind = BandMove::Kind::destabilise;
    destab.band = s.bands[0].id;
    destab.band2 = s.bands[1].id;
    BandedLink back = apply_move(s, destab);
    CHECK(back.bands.empty());
    CHECK(stats(back).genus == 0);
  }
}

TEST_CASE("builtin K satisfies the pinned statistics") {
  BandedLink k = builtin_k();
  auto st = stats(k);
  CHECK(st.minima == 1);
  CHECK(st.saddles == 4);
  CHECK(st.maxima == 2);
  CHECK(st.chi == -1);
  CHECK(st.boundary == 1);
  CHECK(st.genus == 1);
}

TEST_CASE("builtin K validates and resolves to two circles") {
  BandedLink k = builtin_k();
  auto rep = validate_banded(k);
  INFO(rep.to_string());
  CHECK(rep.ok());
  CHECK(rep.resolved_components == 2);
}

TEST_CASE("builtin K' differs from K only in crossing data") {
  BandedLink k = builtin_k();
  BandedLink kp = builtin_k_prime();
  CHECK(k.comp_flags == kp.comp_flags);
  CHECK(k.maxima == kp.maxima);
  REQUIRE(k.bands.size() == kp.bands.size());
  for (size_t i = 0; i < k.bands.size(); ++i) {
    CHECK(k.bands[i].end0.edge == kp.bands[i].end0.edge);
    CHECK(k.bands[i].end0.pos == kp.bands[i].end0.pos);
    CHECK(k.bands[i].end0.side == kp.bands[i].end0.side);
    CHECK(k.bands[i].end1.edge == kp.bands[i].end1.edge);
    CHECK(k.bands[i].end1.pos == kp.bands[i].end1.pos);
    CHECK(k.bands[i].end1.side == kp.bands[i].end1.side);
  }
  auto rep = validate_banded(kp);
  INFO(rep.to_string());
  CHECK(rep.ok());
}

TEST_CASE("figure script on K follows the pinned profile") {
  BandedLink k = builtin_k();
  auto moves = k_simplification_moves();
  REQUIRE(moves.size() == 9);
  RunResult run = run_script(k, moves);
  std::vector<int> profile;
  for (auto& st : run.per_step) profile.push_back(st.genus);
  CHECK(profile == std::vector<int>{1, 1, 1, 1, 1, 1, 1, 0, 0});
  CHECK(run.destab_count == 1);
  CHECK(run.final.bands.empty());
  auto st = stats(run.final);
  CHECK(st.minima == 0);
  CHECK(st.saddles == 0);
  CHECK(st.maxima == 1);

  SUBCASE("cancel moves change the counts by their declared deltas") {
    auto before = stats(k);
    auto after5 = run.per_step[4];
    CHECK(after5.minima == before.minima - 1);
    CHECK(after5.saddles == before.saddles - 1);
    CHECK(after5.maxima == before.maxima);
    auto after8 = run.per_step[7];
    CHECK(after8.saddles == run.per_step[6].saddles - 2);
    auto after9 = run.per_step[8];
    CHECK(after9.maxima == run.per_step[7].maxima - 1);
    CHECK(after9.saddles == run.per_step[7].saddles - 1);
  }
}

TEST_CASE("out-of-order cancel fails fast with a step index") {
  BandedLink k = builtin_k();
  auto moves = k_simplification_moves();
  std::swap(moves[0], moves[4]);  // cancelmin first: its band still carries
                                  // the bulge
  try {
    run_script(k, moves);
    FAIL("expected a pattern mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::pattern_mismatch);
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("verify_k_lemma certifies both surfaces deterministically") {
  auto c1 = verify_k_lemma();
  CHECK(c1.ok);
  auto c2 = verify_k_lemma();
  CHECK(c1.digest == c2.digest);
  CHECK(c1.report == c2.report);
  CHECK(c1.report.find("K:") != std::string::npos);
  CHECK(c1.report.find("K':") != std::string::npos);
}

TEST_CASE("destabilise refuses to disconnect the surface") {
  // circle 0 carries the dual pair; the threading band's far end is the
  // only thing holding circle 1
  BandedLink b;
  b.diagram.n_edges = 2;
  b.diagram.loop_edges = {0, 1};
  b.comp_flags = {'L', 'U'};
  b.maxima = 2;
  Band bridge;
  bridge.id = 0;
  bridge.end0 = {0, 0.40, 'l'};
  bridge.end1 = {0, 0.50, 'l'};
  Band thread;
  thread.id = 1;
  thread.end0 = {0, 0.45, 'l'};
  thread.end1 = {1, 0.50, 'l'};
  thread.core = {{'b', 0, 0.5, false, 'r'}};
  b.bands = {bridge, thread};
  BandMove destab;
  destab.kind = BandMove::Kind::destabilise;
  destab.band = 0;
  destab.band2 = 1;
  CHECK_THROWS_AS(apply_move(b, destab), Error);
  try {
    apply_move(b, destab);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::would_disconnect);
  }
}

TEST_CASE("bld round trip") {
  for (const BandedLink& b :
       {builtin_k(), builtin_k_prime(), split_band_circle(2)}) {
    std::string text = write_bld(b);
    BandedLink back = parse_bld(text);
    CHECK(write_bld(back) == text);
    CHECK(stats(back).genus == stats(b).genus);
  }
}

TEST_CASE("bmv round trip") {
  auto moves = k_simplification_moves();
  std::string text = write_bmv(moves);
  auto back = parse_bmv(text);
  CHECK(write_bmv(back) == text);
  auto moves2 = k_prime_simplification_moves();
  CHECK(write_bmv(parse_bmv(write_bmv(moves2))) == write_bmv(moves2));
}

TEST_CASE("slides and swims preserve stats and the resolved link") {
  std::mt19937 rng(99);
  int tested = 0;
  for (int trial = 0; trial < 300 && tested < 50; ++trial) {
    // seed corpus: stabilised discs and K-like fixtures
    BandedLink b = trial % 2 == 0 ? builtin_k() : standard_disc();
    if (trial % 2 == 1) {
      BandMove stab;
      stab.kind = BandMove::Kind::stabilise;
      stab.edge = 0;
      stab.pos = 0.2 + 0.1 * (trial % 5);
      b = apply_move(b, stab);
    }
    auto before = stats(b);
    auto before_rep = validate_banded(b);
    REQUIRE(before_rep.ok());
    // try a random slide
    std::uniform_int_distribution<int> pick(0, static_cast<int>(b.bands.size()) - 1);
    BandMove m;
    m.kind = BandMove::Kind::slide;
    m.band = b.bands[pick(rng)].id;
    m.end = rng() % 2;
    m.dir = rng() % 2 ? 1 : -1;
    m.under = rng() % 2;
    BandedLink after;
    try {
      after = apply_move(b, m);
    } catch (const Error&) {
      continue;  // no adjacent feature; fine
    }
    auto st = stats(after);
    CHECK(st.minima == before.minima);
    CHECK(st.saddles == before.saddles);
    CHECK(st.maxima == before.maxima);
    auto rep = validate_banded(after);
    INFO(write_bld(after));
    CHECK(rep.ok());
    tested++;
  }
  CHECK(tested >= 30);
}
