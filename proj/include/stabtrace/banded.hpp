#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stabtrace/linkdiagram.hpp"

namespace stabtrace {

// A band end glued to the link: a point along an edge, leaving from its
// left or right side (relative to the edge's traversal orientation).
struct BandAttach {
  EdgeId edge = -1;
  double pos = 0.0;  // in (0,1); orders features along the edge
  char side = 'l';   // 'l' or 'r'
};

// One transversal passage of a band's ribbon over or under something. The
// crossing is recorded on the band that "moves": `over` says this band's
// ribbon is on top, `from` names the side of the target it approaches from,
// `pos` places the passage along the target (edge parameter, or core
// parameter of the target band, where a band's own k-th core item sits at
// (k+1)/(n+1)).
struct CoreItem {
  char kind = 'e';  // 'e' edge, 'b' band
  int id = -1;
  double pos = 0.0;
  bool over = true;
  char from = 'l';
};

struct Band {
  int id = -1;
  BandAttach end0, end1;
  std::vector<CoreItem> core;  // ordered from end0 to end1
  int framing = 0;             // signed half twists, realised at resolve time
};

// A banded link presentation: the link L' = L u U_n with its saddle bands.
// Minima are the U-flagged circles, saddles the bands, maxima the declared
// caps (validated against the band surgery's component count).
struct BandedLink {
  LinkDiagram diagram;
  std::vector<char> comp_flags;  // 'L' or 'U' per component, traced order
  std::vector<Band> bands;
  int maxima = 0;

  const Band* find_band(int id) const;
};

// Replaces every band by its two sides, realising framing half twists and
// all recorded ribbon passages as crossings. The result is the link that
// must be an unlink for the presentation to be valid.
LinkDiagram resolve_bands(const BandedLink& b);

struct SurfaceStats {
  int minima = 0;
  int saddles = 0;
  int maxima = 0;
  int chi = 0;
  int boundary = 0;
  int genus = 0;
};

// chi = minima - saddles + maxima; genus from the connected surface.
SurfaceStats stats(const BandedLink& b);

struct BandedReport {
  std::vector<std::string> violations;
  int resolved_components = -1;
  UnlinkResult unlink;
  bool structurally_ok() const { return violations.empty(); }
  bool ok() const {
    return violations.empty() &&
           unlink.status == UnlinkResult::Status::verified;
  }
  std::string to_string() const;
};

BandedReport validate_banded(const BandedLink& b, int budget = 12);

// ---------------------------------------------------------------------------
// Moves.

struct BandMove {
  enum class Kind {
    slide,        // band end hops the adjacent feature along its edge
    swim,         // remove (or insert) a cancelling ribbon-passage pair
    cancel_min,   // U circle with a single clean band: both vanish
    cancel_max,   // band whose surgery splits off a plain capped circle
    stabilise,    // attach the dual-band gadget at a site
    destabilise,  // remove a dual-band pair
    r1,
    r2,
    r3,
    planar_iso,
  };
  Kind kind = Kind::planar_iso;
  int band = -1;       // slide/swim/cancel*/destab first band
  int band2 = -1;      // destab second band
  int end = 0;         // slide: which end (0/1)
  int dir = 1;         // slide: +1 toward larger positions
  bool under = false;  // slide: pass under instead of over
  int core_index = -1; // swim: first record of the pair
  std::optional<CoreItem> insert_first;   // swim insertion
  std::optional<CoreItem> insert_second;
  int u_component = -1;  // cancel_min
  EdgeId edge = -1;      // stabilise site
  double pos = 0.0;      // stabilise site
  int site_index = -1;   // r1/r2/r3: index into the deterministic site list
  std::string label;     // planar_iso
};

// Applies one move; throws pattern_mismatch (or would_disconnect) when the
// move's local pattern is absent. Surface counts change exactly by the
// move's declared delta.
BandedLink apply_move(const BandedLink& b, const BandMove& m);

struct RunResult {
  BandedLink final;
  std::vector<SurfaceStats> per_step;
  int destab_count = 0;
};

// Replays moves, failing fast at the first illegal one (the error message
// carries the 1-based step index).
RunResult run_script(const BandedLink& b, const std::vector<BandMove>& moves);

// Mirror image in the record sense: every over/under flips, framings
// negate. Planar structure and attachment data stay fixed.
BandedLink mirror_banded(const BandedLink& b);
BandMove mirror_move(const BandMove& m);

// ---------------------------------------------------------------------------
// Text formats.
//
// `.bld`:
//   component <id> L|U [edge=<eid>]     (edge= declares a crossingless circle)
//   crossing <id> <e1> <e2> <e3> <e4> over=<1|3>
//   band <id> attach <edge>@<pos>/<l|r> <edge>@<pos>/<l|r> frame=<k>
//        core: [<edge|band>:<id>@<pos> <over|under>/<l|r> ...]
//   maxima <n>
//
// `.bmv`, one move per line:
//   slide <band>.<end><+|->[u]
//   swim <band>@<k>
//   swim <band>@<k>+<edge|band>:<id>:<o|u>:<l|r>@<p1>,<p2>
//   cancelmin <u-component> <band>
//   cancelmax <band>
//   stab <edge>@<pos>
//   destab <band> <band>
//   r1|r2|r3 <site-index>
//   iso <relabel>
BandedLink parse_bld(const std::string& text);
std::string write_bld(const BandedLink& b);
std::vector<BandMove> parse_bmv(const std::string& text);
std::string write_bmv(const std::vector<BandMove>& moves);

}  // namespace stabtrace
