#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stabtrace/script.hpp"
#include "stabtrace/tubing.hpp"

namespace stabtrace {

enum class TraceKind { stabilise, destabilise, isotopy };

struct TraceEntry {
  TraceKind kind;
  std::string label;       // isotopy label; source tag otherwise
  int genus_after = 0;     // associated genus after this event
  uint64_t digest = 0;     // digest of the diagram in force after the event
};

// A verified stabilisation trace: the sequence of surface moves shadowing a
// homotopy script, with genus bookkeeping and the checked bound.
struct Certificate {
  int start_genus = 0;   // associated genus before any event
  int declared_bound = 0;
  int start_pairs = 0;
  int bound = 0;         // start_genus + (declared_bound - start_pairs) + 1
  int max_genus = 0;
  bool ok = false;
  std::vector<TraceEntry> trace;
  std::string case2_license;  // "K-or-K'" plus lemma digest when used
  uint64_t digest = 0;
};

// genus before any event, then after each event (trace length + 1 entries).
std::vector<int> genus_profile(const Certificate& c);

// `.trace` rendering:
//   events=<n> genus=<g>
//   STAB genus=<k> | DESTAB genus=<k> | ISO <label> genus=<k>
//   max_genus=<m> bound=<b> ok=<true|false>
// An empty trace renders the header line only.
std::string render_trace(const Certificate& c);

// Whitney case analysis: which of the four endpoint patterns the event arcs
// realize. x/y roles are read off the current pair orderings, so a prior
// tube swap changes the classification, which is exactly what Case 4 uses.
struct WhitneyCase {
  int case_no = 0;  // 1..4
  int i = -1;       // pair of the positive double point
  int j = -1;       // pair of the negative double point (== i in 1,2)
  Path xarc;        // from x_i+ (cases 1,3: to x_j-; cases 2,4: to y_j-)
  Path yarc;        // from y_i+ (cases 1,3: to y_j-; cases 2,4: to x_j-)
};

WhitneyCase classify_whitney(const TubingDiagram& d, const Path& arc1,
                             const Path& arc2);

// Incremental replay of a homotopy script. Events may be built
// programmatically against the current surface (see `diagram`), or parsed
// from text with stale dart lists expanded via the internal log.
class ShadowRun {
 public:
  ShadowRun(int genus, int declared_bound);             // empty start diagram
  ShadowRun(TubingDiagram initial, int declared_bound); // immersed start

  void apply(const HomotopyEvent& e);

  const TubingDiagram& diagram() const { return diagram_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }
  int live_pairs() const { return diagram_.pair_count(); }
  int current_genus() const { return genus_; }
  int fresh_pair_index() const { return next_pair_; }

  Path expand(const std::vector<DartId>& dartlist) const;

  // Validates the end state (expected live pairs) and the genus bound.
  Certificate finish(int expected_final_pairs) const;

 private:
  void emit(TraceKind kind, const std::string& label);
  void emit_costs(const CostList& costs);
  void apply_isotopy(const HomotopyEvent& e);
  void apply_finger(const HomotopyEvent& e);
  void apply_whitney(const HomotopyEvent& e);
  void run_case1(const WhitneyCase& w);
  void run_case2(const WhitneyCase& w);
  void run_case3(const WhitneyCase& w);
  void run_case4(const WhitneyCase& w);
  void remove_pair(int index);
  Path search_arc(VertexId from, VertexId to,
                  const std::vector<Path>& forbidden,
                  const std::vector<Path>& crossable,
                  std::vector<Path*> watch, int line);

  TubingDiagram diagram_;
  SubdivisionLog log_;  // cumulative, for expand()
  std::vector<TraceEntry> trace_;
  int declared_bound_ = 0;
  int start_genus_ = 0;
  int start_pairs_ = 0;
  int genus_ = 0;
  int max_genus_ = 0;
  int next_pair_ = 0;
  bool used_case2_ = false;
  int current_line_ = 0;
};

// Shadows a script that starts and ends at embeddings: certificate genus
// profile starts and ends at the script genus, max_genus <= g + n + 1.
Certificate compile_shadow(const HomotopyScript& script);

// Immersed-to-immersed variant. The initial diagram carries half the
// singularities; the final diagram must carry the same number, and the
// certificate's excess over the common associated genus is at most
// n - sing/2 + 1.
Certificate shadow_between(const TubingDiagram& initial,
                           const HomotopyScript& script,
                           int final_sing_count);

// Digest of a successful Lemma verification run (banded-link module),
// computed once per process; licenses the Case 2 destabilisation.
uint64_t case2_license_digest();

}  // namespace stabtrace
