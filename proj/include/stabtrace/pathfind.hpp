#pragma once

#include <optional>

#include "stabtrace/surface.hpp"

namespace stabtrace {

// Path search in the complement of a forbidden subcomplex.
//
// Forbidden vertices and forbidden paths may not be touched at all (the
// query endpoints are exempt). Crossable paths may be crossed, but only
// transversally: a passage through one of their interior vertices must
// interleave their darts in the rotation. When no route exists the engine
// refines (full rounds, up to the budget) to open corridors; only after a
// full round does a failed search count as a proven disconnection.
struct PathQuery {
  VertexId from = -1;
  VertexId to = -1;
  std::vector<VertexId> forbidden_vertices;
  std::vector<Path> forbidden_paths;
  std::vector<Path> crossable_paths;
  int refinement_budget = 2;
};

struct DisconnectionProof {
  int component_count = 0;
  int from_component = -1;
  int to_component = -1;
  int free_vertices = 0;
};

struct PathSearchOutcome {
  enum class Status { found, disconnected, budget_exhausted };
  Status status = Status::budget_exhausted;
  Surface surface;        // refined surface the result lives on
  SubdivisionLog log;     // re-expresses caller paths over `surface`
  std::optional<Path> path;
  std::optional<DisconnectionProof> proof;
  int rounds_used = 0;
};

PathSearchOutcome find_disjoint_path(const Surface& s, const PathQuery& q);

// Replaces `path`'s passage through `crossing` (a transversal crossing with
// `target`) by a detour through free vertices in the star of the segment of
// `target` between `crossing` and the chosen endpoint, rounding that end.
// The crossing count with `target` drops by exactly one and no new shared
// vertices with any path in `registry` are introduced. Throws
// needs_refinement when no corridor exists yet.
Path reroute_around_end(const Surface& s, const Path& path, const Path& target,
                        VertexId crossing, VertexId end_vertex,
                        const std::vector<const Path*>& registry);

}  // namespace stabtrace
