#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stabtrace/error.hpp"

namespace stabtrace {

using EdgeId = int32_t;

// A link diagram as a 4-valent map on the sphere. A crossing's four
// edge-ends are listed in counterclockwise slot order 0..3; the strand
// through slots {0,2} is "diagonal 0", through {1,3} "diagonal 1", and
// over_diag names the one passing over. Closed circles meeting no crossing
// are listed separately as free loops.
struct LinkDiagram {
  struct Xing {
    std::array<EdgeId, 4> e{-1, -1, -1, -1};
    int over_diag = 0;
  };
  std::vector<Xing> xings;
  EdgeId n_edges = 0;                // edge ids are 0..n_edges-1
  std::vector<EdgeId> loop_edges;    // edges forming crossingless circles

  int crossing_count() const { return static_cast<int>(xings.size()); }
  bool is_loop_edge(EdgeId e) const {
    for (EdgeId l : loop_edges)
      if (l == e) return true;
    return false;
  }
};

// An edge end: which crossing and slot it occupies.
struct EndRef {
  int xing = -1;
  int slot = -1;
  bool operator==(const EndRef& o) const {
    return xing == o.xing && slot == o.slot;
  }
};

// ends[e] has exactly two entries for every non-loop edge; loop edges have
// no crossing ends.
std::vector<std::array<EndRef, 2>> edge_ends(const LinkDiagram& d);

// Structural validation: every edge id used exactly twice, faces traceable,
// each connected piece satisfies V - E + F = 2 (the planarity witness).
void validate_link(const LinkDiagram& d);

// Faces as orbits of darts; a dart is an (xing, slot) edge-end.
std::vector<std::vector<EndRef>> link_faces(const LinkDiagram& d);

struct LinkComponents {
  int count = 0;                  // includes free loops
  std::vector<int> edge_comp;     // component id per edge
  std::vector<int> edge_dir;      // 1 if traversed end0 -> end1, else -1
};

LinkComponents link_components(const LinkDiagram& d);

// Pairwise linking numbers (absolute structure matters only up to global
// sign convention). Entry {a,b} for a<b.
std::map<std::pair<int, int>, int> linking_numbers(const LinkDiagram& d);

// Rank-based count of Fox 3-colorings: returns the GF(3) nullity of the
// coloring system. An n-component unlink has nullity exactly n.
int tricolor_nullity(const LinkDiagram& d);

// ---------------------------------------------------------------------------
// Reidemeister moves. Each apply returns a rebuilt (compacted) diagram.

struct R1Site {
  int xing;
  int kink_slot;  // kink loop occupies slots (kink_slot-1, kink_slot)
};
struct R2Site {
  EndRef d1, d2;  // the two darts of a removable bigon face
};
struct R3Site {
  std::array<EndRef, 3> darts;  // triangle face darts in face order
  int mover;                    // 0..2: which triangle strand slides
};
struct R2PlusSite {
  EndRef d1, d2;  // push d1's edge across d2's edge within their face
  bool over;
};

std::vector<R1Site> r1_sites(const LinkDiagram& d);
std::vector<R2Site> r2_sites(const LinkDiagram& d);
std::vector<R3Site> r3_sites(const LinkDiagram& d);
std::vector<R2PlusSite> r2plus_sites(const LinkDiagram& d);

// The optional edge_map receives, for every old edge id, the id it ends up
// carrying in the new diagram (merged chains map every member to the merged
// id; vanished edges map to -1).
LinkDiagram apply_r1(const LinkDiagram& d, const R1Site& site,
                     std::vector<EdgeId>* edge_map = nullptr);
LinkDiagram apply_r2(const LinkDiagram& d, const R2Site& site,
                     std::vector<EdgeId>* edge_map = nullptr);
LinkDiagram apply_r3(const LinkDiagram& d, const R3Site& site,
                     std::vector<EdgeId>* edge_map = nullptr);
LinkDiagram apply_r2plus(const LinkDiagram& d, const R2PlusSite& site);

// Removes the named crossings and re-splices each strand straight through
// (the two diagonals of a removed crossing are glued). Chains that close up
// become free loops. Edge ids are renumbered compactly.
LinkDiagram splice_out(const LinkDiagram& d, const std::vector<int>& removed,
                       std::vector<EdgeId>* edge_map = nullptr);

// Label-invariant canonical encoding (minimum over traversal starts).
std::string canonical_key(const LinkDiagram& d);

// ---------------------------------------------------------------------------
// Bounded unlink verification.

struct UnlinkResult {
  enum class Status { verified, refuted, unknown };
  Status status = Status::unknown;
  std::string reason;           // refutation witness or budget note
  std::vector<std::string> reduction;  // move descriptions when verified
};

// Verified: a Reidemeister reduction to a crossingless diagram within the
// depth budget (crossing count capped at input + 4). Refuted: a nonzero
// pairwise linking number or a coloring-count mismatch. Unknown otherwise.
UnlinkResult is_unlink(const LinkDiagram& d, int budget = 12);

}  // namespace stabtrace
