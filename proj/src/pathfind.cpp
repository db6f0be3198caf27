#include "stabtrace/pathfind.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace stabtrace {

namespace {

enum class Cell { free_cell, blocked, crossable, endpoint };

struct Terrain {
  std::vector<Cell> cell;                  // per vertex id
  std::vector<int> crossable_index;        // which crossable path, -1
};

Terrain classify(const Surface& s, const PathQuery& q) {
  size_t n = s.vertex_alive.size();
  Terrain t;
  t.cell.assign(n, Cell::free_cell);
  t.crossable_index.assign(n, -1);
  for (size_t v = 0; v < n; ++v)
    if (!s.vertex_alive[v]) t.cell[v] = Cell::blocked;
  for (size_t i = 0; i < q.crossable_paths.size(); ++i) {
    auto vs = path_vertices(s, q.crossable_paths[i]);
    for (size_t k = 0; k < vs.size(); ++k) {
      VertexId v = vs[k];
      bool interior = k > 0 && k + 1 < vs.size();
      if (!interior || t.crossable_index[v] >= 0) {
        t.cell[v] = Cell::blocked;  // endpoints and double-covered: blocked
      } else if (t.cell[v] == Cell::free_cell) {
        t.cell[v] = Cell::crossable;
        t.crossable_index[v] = static_cast<int>(i);
      }
    }
  }
  for (const Path& p : q.forbidden_paths)
    for (VertexId v : path_vertices(s, p)) t.cell[v] = Cell::blocked;
  for (VertexId v : q.forbidden_vertices) t.cell[v] = Cell::blocked;
  t.cell[q.from] = Cell::endpoint;
  t.cell[q.to] = Cell::endpoint;
  return t;
}

// BFS for a shortest simple walk from q.from to q.to. States are
// (vertex, arrival dart) so transversality at crossable vertices can be
// enforced; free vertices are visited once.
std::optional<Path> bfs_route(const Surface& s, const PathQuery& q,
                              const Terrain& t) {
  using StateKey = std::pair<VertexId, DartId>;  // (vertex, arrival dart)
  struct Edge {
    StateKey prev;
    DartId via;  // dart traversed to reach this state, -1 at start
  };
  std::map<StateKey, Edge> parent;
  std::deque<StateKey> queue;
  StateKey start{q.from, -1};
  parent[start] = {start, -1};
  queue.push_back(start);

  std::optional<StateKey> goal;
  while (!queue.empty() && !goal) {
    StateKey st = queue.front();
    queue.pop_front();
    auto out_darts = s.darts_at(st.first);
    std::sort(out_darts.begin(), out_darts.end());
    for (DartId e : out_darts) {
      if (st.first != q.from && t.cell[st.first] == Cell::crossable) {
        const Path& cp = q.crossable_paths[t.crossable_index[st.first]];
        auto [c1, c2] = path_darts_at(s, cp, st.first);
        if (!darts_interleave(s, st.second, e, c1, c2)) continue;
      }
      VertexId w = s.target(e);
      StateKey next{w, s.theta(e)};
      if (w == q.to) {
        if (!parent.count(next)) {
          parent[next] = {st, e};
          goal = next;
        }
        break;
      }
      if (w == q.from) continue;
      if (t.cell[w] == Cell::free_cell) {
        // free vertices carry one state; normalize the arrival key
        StateKey canon{w, -2};
        if (parent.count(canon)) continue;
        parent[canon] = {st, e};
        // remember the true arrival separately for transversality-free cells
        queue.push_back(canon);
      } else if (t.cell[w] == Cell::crossable) {
        if (parent.count(next)) continue;
        parent[next] = {st, e};
        queue.push_back(next);
      }
    }
  }
  if (!goal) return std::nullopt;

  std::vector<DartId> rev;
  StateKey cur = *goal;
  while (true) {
    const Edge& ed = parent.at(cur);
    if (ed.via < 0) break;
    rev.push_back(ed.via);
    cur = ed.prev;
    if (rev.size() > s.darts.size() + 1) return std::nullopt;
  }
  std::reverse(rev.begin(), rev.end());
  Path p{rev};
  if (!path_is_walk(s, p)) return std::nullopt;
  if (!path_is_simple(s, p)) return std::nullopt;
  if (path_source(s, p) != q.from || path_target(s, p) != q.to)
    return std::nullopt;
  return p;
}

DisconnectionProof component_proof(const Surface& s, const PathQuery& q,
                                   const Terrain& t) {
  // Optimistic complement: crossable vertices count as free.
  DisconnectionProof proof;
  std::map<VertexId, int> comp;
  int n_comp = 0;
  for (VertexId v0 : s.all_vertices()) {
    if (t.cell[v0] == Cell::blocked) continue;
    if (comp.count(v0)) continue;
    int id = n_comp++;
    std::vector<VertexId> stack{v0};
    comp[v0] = id;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (DartId d : s.darts_at(v)) {
        VertexId w = s.target(d);
        if (t.cell[w] == Cell::blocked) continue;
        if (!comp.count(w)) {
          comp[w] = id;
          stack.push_back(w);
        }
      }
    }
  }
  proof.component_count = n_comp;
  proof.from_component = comp.count(q.from) ? comp[q.from] : -1;
  proof.to_component = comp.count(q.to) ? comp[q.to] : -1;
  for (auto& [v, c] : comp) {
    (void)v;
    (void)c;
    proof.free_vertices++;
  }
  return proof;
}

}  // namespace

PathSearchOutcome find_disjoint_path(const Surface& s, const PathQuery& q0) {
  if (q0.from == q0.to)
    throw Error(ErrorKind::invalid_path, "from == to in path query");
  for (VertexId v : q0.forbidden_vertices)
    if (v == q0.from || v == q0.to)
      throw Error(ErrorKind::invalid_path, "query endpoint is forbidden");

  PathSearchOutcome out;
  out.surface = s;
  PathQuery q = q0;
  int rounds = 0;
  while (true) {
    Terrain t = classify(out.surface, q);
    auto p = bfs_route(out.surface, q, t);
    if (p) {
      out.status = PathSearchOutcome::Status::found;
      out.path = std::move(*p);
      out.rounds_used = rounds;
      return out;
    }
    if (rounds >= 1) {
      // One full round was performed; the optimistic complement decides.
      auto proof = component_proof(out.surface, q, t);
      if (proof.from_component != proof.to_component ||
          proof.from_component < 0) {
        out.status = PathSearchOutcome::Status::disconnected;
        out.proof = proof;
        out.rounds_used = rounds;
        return out;
      }
    }
    if (rounds >= q.refinement_budget) {
      if (rounds >= 1) {
        // complement connected but constrained routing failed; report the
        // budget rather than a bogus proof
        out.status = PathSearchOutcome::Status::budget_exhausted;
        out.rounds_used = rounds;
        return out;
      }
      out.status = PathSearchOutcome::Status::budget_exhausted;
      out.rounds_used = rounds;
      return out;
    }
    SubdivisionLog log;
    out.surface = refine_round(out.surface, &log);
    for (Path& fp : q.forbidden_paths) fp = refresh_path(log, fp);
    for (Path& cp : q.crossable_paths) cp = refresh_path(log, cp);
    out.log.append(log);
    rounds++;
  }
}

Path reroute_around_end(const Surface& s, const Path& path, const Path& target,
                        VertexId crossing, VertexId end_vertex,
                        const std::vector<const Path*>& registry) {
  auto tv = path_vertices(s, target);
  auto pv = path_vertices(s, path);
  if (end_vertex != tv.front() && end_vertex != tv.back())
    throw Error(ErrorKind::invalid_path, "end_vertex not a target endpoint");
  auto find_idx = [](const std::vector<VertexId>& vs, VertexId v) {
    for (size_t i = 0; i < vs.size(); ++i)
      if (vs[i] == v) return static_cast<int>(i);
    return -1;
  };
  int ct = find_idx(tv, crossing);
  int cp = find_idx(pv, crossing);
  if (ct <= 0 || ct + 1 >= static_cast<int>(tv.size()) || cp <= 0 ||
      cp + 1 >= static_cast<int>(pv.size()))
    throw Error(ErrorKind::invalid_path, "crossing not interior");
  if (!paths_cross_at(s, path, target, crossing))
    throw Error(ErrorKind::invalid_path, "paths do not cross transversally");

  // Zone: target vertices from the chosen end to the crossing, inclusive.
  std::set<VertexId> zone;
  if (end_vertex == tv.front())
    for (int i = 0; i <= ct; ++i) zone.insert(tv[i]);
  else
    for (int i = ct; i < static_cast<int>(tv.size()); ++i) zone.insert(tv[i]);

  // Sleeve: every vertex of a face meeting the zone.
  std::set<VertexId> sleeve;
  for (const Face& f : trace_faces(s)) {
    bool touches = false;
    for (DartId d : f.darts)
      if (zone.count(s.origin(d))) {
        touches = true;
        break;
      }
    if (!touches) continue;
    for (DartId d : f.darts) sleeve.insert(s.origin(d));
  }

  std::set<VertexId> occupied(s.marked.begin(), s.marked.end());
  for (const Path* r : registry)
    for (VertexId v : path_vertices(s, *r)) occupied.insert(v);
  for (VertexId v : path_vertices(s, target)) occupied.insert(v);
  for (VertexId v : pv) occupied.insert(v);

  VertexId u = pv[cp - 1];
  VertexId w = pv[cp + 1];
  if (u == w)
    throw Error(ErrorKind::invalid_path, "degenerate crossing neighborhood");

  // BFS from u to w through free sleeve vertices.
  std::map<VertexId, DartId> parent;
  std::deque<VertexId> queue;
  parent[u] = -1;
  queue.push_back(u);
  bool reached = false;
  while (!queue.empty() && !reached) {
    VertexId v = queue.front();
    queue.pop_front();
    auto ds = s.darts_at(v);
    std::sort(ds.begin(), ds.end());
    for (DartId e : ds) {
      VertexId x = s.target(e);
      if (parent.count(x)) continue;
      if (x == w) {
        parent[x] = e;
        reached = true;
        break;
      }
      if (!sleeve.count(x) || occupied.count(x)) continue;
      parent[x] = e;
      queue.push_back(x);
    }
  }
  if (!reached)
    throw Error(ErrorKind::needs_refinement, "no corridor in target star");

  std::vector<DartId> detour;
  VertexId v = w;
  while (parent[v] >= 0) {
    DartId e = parent[v];
    detour.push_back(e);
    v = s.origin(e);
  }
  std::reverse(detour.begin(), detour.end());

  Path result;
  result.darts.assign(path.darts.begin(), path.darts.begin() + (cp - 1));
  result.darts.insert(result.darts.end(), detour.begin(), detour.end());
  result.darts.insert(result.darts.end(), path.darts.begin() + (cp + 1),
                      path.darts.end());
  if (!path_is_simple(s, result))
    throw Error(ErrorKind::needs_refinement, "detour not simple");
  return result;
}

}  // namespace stabtrace
