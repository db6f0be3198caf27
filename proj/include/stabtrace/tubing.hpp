#pragma once

#include <string>
#include <vector>

#include "stabtrace/pathfind.hpp"
#include "stabtrace/surface.hpp"

namespace stabtrace {

// One cancelling pair of double-point preimages. The first entry of each
// ordered pair is where the tube arc attaches; a tube swap exchanges the
// orderings, which is how the swap's role-exchange is recorded.
struct MarkedPair {
  int index = -1;
  VertexId x_plus = -1;   // first preimage of the positive point
  VertexId y_plus = -1;   // second preimage of the positive point
  VertexId x_minus = -1;
  VertexId y_minus = -1;

  std::vector<VertexId> vertices() const {
    return {x_plus, y_plus, x_minus, y_minus};
  }
};

struct TubeArc {
  int index = -1;
  Path path;  // from x_plus to x_minus
};

// Abstract surface, paired signed marked points, one disjoint tube arc per
// pair. Valid diagrams have pairwise disjoint simple arcs whose interiors
// avoid every marked vertex.
struct TubingDiagram {
  Surface surface;
  std::vector<MarkedPair> pairs;
  std::vector<TubeArc> arcs;
  std::string immersion_label = "f0";

  const MarkedPair* find_pair(int index) const;
  const TubeArc* find_arc(int index) const;
  int pair_count() const { return static_cast<int>(pairs.size()); }
};

struct Violation {
  std::string clause;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> items;
  bool ok() const { return items.empty(); }
  std::string to_string() const;
};

// Empty diagram on the given surface.
TubingDiagram empty_diagram(Surface s);

// Recomputes the surface's marked set from the pairs.
void resync_marks(TubingDiagram& d);

ValidationReport validate_diagram(const TubingDiagram& d);
void require_valid(const TubingDiagram& d);

// genus(surface) + number of pairs.
int associated_genus(const TubingDiagram& d);

enum class CostKind { stabilise, destabilise, isotopy };

struct CostEvent {
  CostKind kind;
  std::string label;
};

using CostList = std::vector<CostEvent>;

// Replaces arc i by `beta` (an arc from y_i+ to y_i-, disjoint from every
// arc and marked point except its endpoints) and swaps both pair orderings.
// Cost is exactly one stabilisation followed by one destabilisation.
TubingDiagram tube_swap(const TubingDiagram& d, int i, const Path& beta,
                        CostList* cost);

// Replaces arc i by `alpha` (an arc from x_i+ to x_i-, disjoint from the
// other arcs and marked points; transversal crossings with arc i itself are
// fine). Cost is one stabilisation followed by one destabilisation.
TubingDiagram tube_move(const TubingDiagram& d, int i, const Path& alpha,
                        CostList* cost);

enum class ClearMode { costed, isotopy };

// Removes every crossing of tube arcs with `target`, nearest-to-`near_end`
// first. Costed mode pays one (stab, destab) pair per crossing via tube
// moves; isotopy mode slides arcs off for a single isotopy event. The
// surface may be refined; refreshed copies of the paths in `watch` are
// maintained and `target` is returned refreshed via `target_out`.
TubingDiagram clear_path(const TubingDiagram& d, const Path& target,
                         VertexId near_end, ClearMode mode, CostList* cost,
                         std::vector<Path*> watch = {},
                         Path* target_out = nullptr,
                         SubdivisionLog* log = nullptr);

// `.tub` text format: a `.surf` block plus
//   pair <i> x+ <v> y+ <v> x- <v> y- <v>
//   arc <i>: <dart> <dart> ...
TubingDiagram parse_tub(const std::string& text);
std::string write_tub(const TubingDiagram& d);

// Stable content digest (FNV-1a over the canonical rendering).
uint64_t diagram_digest(const TubingDiagram& d);
uint64_t fnv1a(const std::string& bytes);

}  // namespace stabtrace
