#pragma once

#include <string>
#include <vector>

#include "stabtrace/surface.hpp"

namespace stabtrace {

// One step of a regular-homotopy script. Arc data is given as dart lists on
// the script's working surface; the compiler re-expresses stale darts over
// later refinements automatically, so a dart list stays valid once written.
// A script's initial surface is the standard closed surface of the declared
// genus, refined (at least twice, until 40 vertices exist) so arcs have
// room; the construction is deterministic, so dart ids are reproducible.
//
// Finger convention: the new tube arc is `beta`, so the new pair reads
//   x+ = beta front, x- = beta back, y+ = alpha front, y- = alpha back.
struct HomotopyEvent {
  enum class Kind { isotopy, finger, whitney };
  Kind kind = Kind::isotopy;
  std::string label;            // isotopy only
  std::vector<DartId> alpha;    // finger: alpha; whitney: arc1
  std::vector<DartId> beta;     // finger: beta;  whitney: arc2
  int pair_index = -1;          // finger only
  int line = 0;                 // source line for diagnostics
};

struct HomotopyScript {
  int genus = 0;
  int bound = 0;  // declared maximum of simultaneous live pairs
  std::vector<HomotopyEvent> events;
};

// `.htpy` grammar (line-based, `#` comments):
//   genus <g>
//   bound <n>
//   isotopy <label>
//   finger alpha=<dartlist> beta=<dartlist> pair=<i>
//   whitney arc1=<dartlist> arc2=<dartlist>
// Dart lists are comma-separated dart ids. Parsing is syntactic; replay
// errors (unknown marked vertices, bound violations) surface when the
// script is compiled, tagged with the event's line.
HomotopyScript parse_script(const std::string& text);
std::string write_script(const HomotopyScript& s);

}  // namespace stabtrace
