#pragma once

#include <optional>
#include <random>
#include <set>
#include <vector>

#include "stabtrace/pathfind.hpp"
#include "stabtrace/tubing.hpp"

namespace stabtrace::testutil {

using Rng = std::mt19937;

inline Surface room_surface(int genus, int rounds = 2) {
  Surface s = standard_surface(genus, 0);
  for (int i = 0; i < rounds; ++i) s = refine_round(s, nullptr);
  return s;
}

inline std::vector<VertexId> free_vertices(const TubingDiagram& d) {
  std::set<VertexId> used(d.surface.marked.begin(), d.surface.marked.end());
  for (const auto& a : d.arcs)
    for (VertexId v : path_vertices(d.surface, a.path)) used.insert(v);
  std::vector<VertexId> out;
  for (VertexId v : d.surface.all_vertices())
    if (!used.count(v)) out.push_back(v);
  return out;
}

inline std::vector<VertexId> pick_distinct(Rng& rng,
                                           const std::vector<VertexId>& pool,
                                           size_t k) {
  std::vector<VertexId> p = pool;
  std::shuffle(p.begin(), p.end(), rng);
  if (p.size() < k) return {};
  p.resize(k);
  return p;
}

// Routes from `from` to `to` avoiding all marked vertices (except the
// endpoints), all tube arcs, and all `avoid` paths. Refreshes the diagram
// and avoid paths if the search refines.
inline std::optional<Path> route_clear(TubingDiagram& d, VertexId from,
                                       VertexId to,
                                       std::vector<Path*> avoid = {},
                                       int budget = 1) {
  PathQuery q;
  q.from = from;
  q.to = to;
  for (VertexId v : d.surface.marked)
    if (v != from && v != to) q.forbidden_vertices.push_back(v);
  for (const auto& a : d.arcs) q.forbidden_paths.push_back(a.path);
  for (Path* p : avoid) q.forbidden_paths.push_back(*p);
  q.refinement_budget = budget;
  auto out = find_disjoint_path(d.surface, q);
  if (out.status != PathSearchOutcome::Status::found) return std::nullopt;
  if (out.rounds_used > 0) {
    d.surface = out.surface;
    for (auto& a : d.arcs) a.path = refresh_path(out.log, a.path);
    for (Path* p : avoid) *p = refresh_path(out.log, *p);
  }
  return out.path;
}

// A random valid diagram with `n` pairs on a roomy genus-g surface.
inline std::optional<TubingDiagram> random_diagram(Rng& rng, int genus,
                                                   int n_pairs) {
  TubingDiagram d = empty_diagram(room_surface(genus));
  for (int i = 0; i < n_pairs; ++i) {
    auto pool = free_vertices(d);
    auto picks = pick_distinct(rng, pool, 4);
    if (picks.size() < 4) return std::nullopt;
    MarkedPair p;
    p.index = i;
    p.x_plus = picks[0];
    p.y_plus = picks[1];
    p.x_minus = picks[2];
    p.y_minus = picks[3];
    d.pairs.push_back(p);
    for (VertexId v : p.vertices()) d.surface.set_marked(v, true);
    auto arc = route_clear(d, p.x_plus, p.x_minus);
    if (!arc) return std::nullopt;
    d.arcs.push_back({i, *arc});
  }
  require_valid(d);
  return d;
}

}  // namespace stabtrace::testutil
