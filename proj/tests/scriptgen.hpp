#pragma once

#include <map>
#include <optional>

#include "stabtrace/shadow.hpp"
#include "testutil.hpp"

namespace stabtrace::testutil {

// Builds homotopy scripts incrementally against a live replay, so every
// event's dart lists are valid on the surface they will meet when the
// script is compiled from scratch.
class ScriptGen {
 public:
  ScriptGen(uint32_t seed, int genus, int bound)
      : rng_(seed), run_(genus, bound) {
    script_.genus = genus;
    script_.bound = bound;
  }

  ScriptGen(uint32_t seed, TubingDiagram initial, int genus, int bound)
      : rng_(seed), run_(std::move(initial), bound) {
    script_.genus = genus;
    script_.bound = bound;
  }

  const ShadowRun& run() const { return run_; }
  const HomotopyScript& script() const { return script_; }
  const std::map<int, int>& case_counts() const { return case_counts_; }
  int live() const { return run_.live_pairs(); }

  std::vector<VertexId> free_vertices() const {
    const TubingDiagram& d = run_.diagram();
    std::set<VertexId> used(d.surface.marked.begin(), d.surface.marked.end());
    for (const auto& a : d.arcs)
      for (VertexId v : path_vertices(d.surface, a.path)) used.insert(v);
    std::vector<VertexId> out;
    for (VertexId v : d.surface.all_vertices())
      if (!used.count(v)) out.push_back(v);
    return out;
  }

  // Routes on the current surface only (no refinement), so the dart list
  // stays expressible in the script.
  std::optional<Path> route(VertexId from, VertexId to,
                            const std::vector<Path>& forbidden,
                            bool may_cross_arcs) {
    const TubingDiagram& d = run_.diagram();
    PathQuery q;
    q.from = from;
    q.to = to;
    for (VertexId v : d.surface.marked)
      if (v != from && v != to) q.forbidden_vertices.push_back(v);
    q.forbidden_paths = forbidden;
    if (may_cross_arcs)
      for (const auto& a : d.arcs) q.crossable_paths.push_back(a.path);
    else
      for (const auto& a : d.arcs) q.forbidden_paths.push_back(a.path);
    q.refinement_budget = 0;
    auto out = find_disjoint_path(d.surface, q);
    if (out.status != PathSearchOutcome::Status::found) return std::nullopt;
    return out.path;
  }

  // Routes a path forced to cross the named tube arc exactly once,
  // transversally, staying clear of the other arcs.
  std::optional<Path> route_through_arc(VertexId from, VertexId to,
                                        int arc_index,
                                        const std::vector<Path>& forbidden) {
    const TubingDiagram& d = run_.diagram();
    const TubeArc* arc = d.find_arc(arc_index);
    if (!arc) return std::nullopt;
    const Surface& s = d.surface;
    auto vs = path_vertices(s, arc->path);
    std::vector<size_t> order;
    for (size_t k = 1; k + 1 < vs.size(); ++k) order.push_back(k);
    std::shuffle(order.begin(), order.end(), rng_);
    std::set<VertexId> busy(s.marked.begin(), s.marked.end());
    for (const auto& a : d.arcs)
      for (VertexId v : path_vertices(s, a.path)) busy.insert(v);
    for (const Path& f : forbidden)
      for (VertexId v : path_vertices(s, f)) busy.insert(v);
    for (size_t k : order) {
      VertexId v = vs[k];
      auto [tin, tout] = path_darts_at(s, arc->path, v);
      auto at_v = s.darts_at(v);
      for (DartId p : at_v) {
        if (p == tin || p == tout || s.theta(p) == tin || s.theta(p) == tout)
          continue;
        for (DartId q : at_v) {
          if (q == p || q == tin || q == tout) continue;
          if (!darts_interleave(s, p, q, tin, tout)) continue;
          VertexId up = s.target(p), uq = s.target(q);
          if (up == uq || busy.count(up) || busy.count(uq)) continue;
          if (up == from || uq == to || up == to || uq == from) continue;
          auto fb1 = forbidden;
          auto leg1 = route(from, up, fb1, false);
          if (!leg1) continue;
          auto fb2 = forbidden;
          fb2.push_back(*leg1);
          auto leg2 = route(uq, to, fb2, false);
          if (!leg2) continue;
          Path mid{{s.theta(p), q}};
          Path composite = path_concat(s, *leg1, mid);
          composite = path_concat(s, composite, *leg2);
          if (!path_is_simple(s, composite)) continue;
          return composite;
        }
      }
    }
    return std::nullopt;
  }

  bool add_isotopy(const std::string& label) {
    HomotopyEvent e;
    e.kind = HomotopyEvent::Kind::isotopy;
    e.label = label;
    run_.apply(e);
    script_.events.push_back(e);
    return true;
  }

  // A free degree-4 vertex with four distinct free neighbours: two paths
  // can be driven through it on interleaving dart pairs, giving a
  // transversal crossing by construction.
  struct CrossingSite {
    VertexId v = -1;
    std::array<DartId, 4> darts{};  // rotation order
  };

  std::optional<CrossingSite> find_crossing_site(
      const std::set<VertexId>& extra_busy = {}) {
    const TubingDiagram& d = run_.diagram();
    const Surface& s = d.surface;
    std::set<VertexId> busy(s.marked.begin(), s.marked.end());
    for (const auto& a : d.arcs)
      for (VertexId v : path_vertices(s, a.path)) busy.insert(v);
    for (VertexId v : extra_busy) busy.insert(v);
    auto verts = s.all_vertices();
    std::shuffle(verts.begin(), verts.end(), rng_);
    for (VertexId v : verts) {
      if (busy.count(v)) continue;
      auto ds = s.darts_at(v);
      if (ds.size() != 4) continue;
      std::set<VertexId> targets;
      bool ok = true;
      for (DartId dd : ds) {
        VertexId t = s.target(dd);
        if (busy.count(t) || t == v || !targets.insert(t).second) ok = false;
      }
      if (!ok) continue;
      CrossingSite site;
      site.v = v;
      for (int i = 0; i < 4; ++i) site.darts[i] = ds[i];
      return site;
    }
    return std::nullopt;
  }

  // from -> ... -> target(d_in) -> v -> target(d_out) -> ... -> to, where
  // d_in and d_out are opposite darts of the site.
  std::optional<Path> route_via(VertexId from, VertexId to,
                                const CrossingSite& site, int which_diagonal,
                                std::vector<Path> forbidden) {
    const Surface& s = run_.diagram().surface;
    DartId d_in = site.darts[which_diagonal];
    DartId d_out = site.darts[which_diagonal + 2];
    VertexId a = s.target(d_in), b = s.target(d_out);
    if (a == from || a == to || b == from || b == to) return std::nullopt;
    // blocking the other diagonal's darts also blocks the site vertex
    forbidden.push_back(Path{{site.darts[(which_diagonal + 1) % 4]}});
    forbidden.push_back(Path{{site.darts[(which_diagonal + 3) % 4]}});
    auto leg1 = route(from, a, forbidden, false);
    if (!leg1) return std::nullopt;
    forbidden.push_back(*leg1);
    auto leg2 = route(b, to, forbidden, false);
    if (!leg2) return std::nullopt;
    Path mid{{s.theta(d_in), d_out}};
    Path out = path_concat(s, *leg1, mid);
    out = path_concat(s, out, *leg2);
    if (!path_is_simple(s, out)) return std::nullopt;
    return out;
  }

  // Applies an externally constructed event; false when it is rejected.
  bool add_event(const HomotopyEvent& e) {
    try {
      run_.apply(e);
    } catch (const Error&) {
      return false;
    }
    script_.events.push_back(e);
    return true;
  }

  Rng& rng() { return rng_; }

  bool add_finger(bool spicy = false) {
    if (run_.live_pairs() + 1 > script_.bound) return false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      auto pool = free_vertices();
      auto picks = pick_distinct(rng_, pool, 4);
      if (picks.size() < 4) return false;
      auto beta = route(picks[0], picks[1], {}, spicy);
      if (!beta) continue;
      auto alpha = route(picks[2], picks[3], {*beta}, false);
      if (!alpha) continue;
      HomotopyEvent e;
      e.kind = HomotopyEvent::Kind::finger;
      e.alpha = alpha->darts;
      e.beta = beta->darts;
      e.pair_index = run_.fresh_pair_index();
      try {
        run_.apply(e);
      } catch (const Error&) {
        continue;
      }
      script_.events.push_back(e);
      return true;
    }
    return false;
  }

  // wanted: 1..4 selects a case, 0 takes anything available
  bool add_whitney(int wanted = 0) {
    const TubingDiagram& d0 = run_.diagram();
    if (d0.pair_count() == 0) return false;
    for (int attempt = 0; attempt < 16; ++attempt) {
      const TubingDiagram& d = run_.diagram();
      int case_no = wanted ? wanted : 1 + static_cast<int>(rng_() % 4);
      if (case_no >= 3 && d.pair_count() < 2) case_no -= 2;
      std::vector<int> ids;
      for (const auto& p : d.pairs) ids.push_back(p.index);
      std::shuffle(ids.begin(), ids.end(), rng_);
      const MarkedPair* pi = d.find_pair(ids[0]);
      const MarkedPair* pj =
          case_no >= 3 ? d.find_pair(ids[1]) : pi;
      VertexId x1, x2, y1, y2;
      if (case_no == 1 || case_no == 3) {
        x1 = pi->x_plus;
        x2 = pj->x_minus;
        y1 = pi->y_plus;
        y2 = pj->y_minus;
      } else {  // crossed patterns
        x1 = pi->x_plus;
        x2 = pj->y_minus;
        y1 = pi->y_plus;
        y2 = pj->x_minus;
      }
      bool spicy = rng_() % 3 == 0;
      auto arc1 = route(x1, x2, {}, spicy);
      if (!arc1) continue;
      auto arc2 = route(y1, y2, {*arc1}, spicy);
      if (!arc2) continue;
      HomotopyEvent e;
      e.kind = HomotopyEvent::Kind::whitney;
      e.alpha = arc1->darts;
      e.beta = arc2->darts;
      try {
        WhitneyCase w = classify_whitney(d, *arc1, *arc2);
        run_.apply(e);
        case_counts_[w.case_no]++;
      } catch (const Error&) {
        continue;
      }
      script_.events.push_back(e);
      return true;
    }
    return false;
  }

  // Drives the script to a given number of live pairs, then returns it.
  std::optional<HomotopyScript> finish_script(int target_pairs = 0) {
    int guard = 0;
    while (run_.live_pairs() > target_pairs) {
      if (!add_whitney(0) && ++guard > 20) return std::nullopt;
    }
    return script_;
  }

 private:
  Rng rng_;
  ShadowRun run_;
  HomotopyScript script_;
  std::map<int, int> case_counts_;
};

}  // namespace stabtrace::testutil
