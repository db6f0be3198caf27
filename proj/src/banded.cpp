#include "stabtrace/banded.hpp"

#include "stabtrace/banded_detail.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace stabtrace {

const Band* BandedLink::find_band(int id) const {
  for (const auto& b : bands)
    if (b.id == id) return &b;
  return nullptr;
}

namespace detail {

std::map<EdgeId, std::vector<Feature>> edge_features(const BandedLink& b) {
  std::map<EdgeId, std::vector<Feature>> out;
  for (const auto& band : b.bands) {
    out[band.end0.edge].push_back({band.end0.pos, true, band.id, 0, -1});
    out[band.end1.edge].push_back({band.end1.pos, true, band.id, 1, -1});
    for (size_t k = 0; k < band.core.size(); ++k)
      if (band.core[k].kind == 'e')
        out[band.core[k].id].push_back(
            {band.core[k].pos, false, band.id, -1, static_cast<int>(k)});
  }
  for (auto& [e, fs] : out) {
    (void)e;
    std::sort(fs.begin(), fs.end());
  }
  return out;
}

// core parameter of a band's own k-th item
double own_param(const Band& b, int k) {
  return (k + 1) / static_cast<double>(b.core.size() + 1);
}

std::vector<BandEvent> band_events(const BandedLink& bl, const Band& b) {
  std::vector<BandEvent> ev;
  for (int t = 0; t < std::abs(b.framing); ++t)
    ev.push_back({-1.0 + t * 1e-6, 0, t, -1, -1});
  for (size_t k = 0; k < b.core.size(); ++k)
    ev.push_back({own_param(b, k), 1, static_cast<int>(k), -1, -1});
  for (const auto& other : bl.bands) {
    if (other.id == b.id) continue;
    for (size_t k = 0; k < other.core.size(); ++k)
      if (other.core[k].kind == 'b' && other.core[k].id == b.id)
        ev.push_back({other.core[k].pos, 2, -1, other.id,
                      static_cast<int>(k)});
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace detail

using detail::band_events;
using detail::edge_features;
using detail::Feature;
using detail::own_param;

// ---------------------------------------------------------------------------
// Resolution.

namespace {

struct Passage {
  int xing;
  int in_slot;
  int out_slot;
};

// interval endpoint: an original-crossing port, a junction, or none (closed)
struct IEnd {
  enum class Kind { anchor, junction } kind = Kind::junction;
  int xing = -1, slot = -1;  // anchor
  int junction = -1;
};

struct Interval {
  IEnd e0, e1;
  std::vector<Passage> passages;
  bool closed = false;
};

struct Allocated {
  // per (band id, own core item): the generated crossings
  // edge item: [near, far] along the target edge is not needed; store by
  // mover side: first = the crossing of the mover's positional-L side
  std::map<std::pair<int, int>, std::array<int, 4>> item_xings;
  // per (band id, twist index): crossing
  std::map<std::pair<int, int>, int> twist_xings;
};

}  // namespace

LinkDiagram resolve_bands(const BandedLink& bl) {
  const LinkDiagram& base = bl.diagram;
  LinkDiagram out;
  out.xings.resize(base.xings.size());
  for (size_t x = 0; x < base.xings.size(); ++x)
    out.xings[x].over_diag = base.xings[x].over_diag;

  // twist parity per band (all twists sit before every core event)
  auto parity = [&](const Band& b) { return std::abs(b.framing) % 2 == 1; };

  // --- phase A: allocate generated crossings ------------------------------
  Allocated alloc;
  auto new_xing = [&](int over_diag) {
    out.xings.push_back({});
    out.xings.back().over_diag = over_diag;
    return static_cast<int>(out.xings.size()) - 1;
  };
  std::vector<Band> bands_sorted = bl.bands;
  std::sort(bands_sorted.begin(), bands_sorted.end(),
            [](const Band& a, const Band& b) { return a.id < b.id; });
  for (const auto& b : bands_sorted) {
    for (int t = 0; t < std::abs(b.framing); ++t)
      alloc.twist_xings[{b.id, t}] = new_xing(b.framing > 0 ? 1 : 0);
    for (size_t k = 0; k < b.core.size(); ++k) {
      const CoreItem& it = b.core[k];
      int od = it.over ? 1 : 0;  // mover diagonal has parity 1
      if (it.kind == 'e') {
        // two crossings: mover positional-L side and positional-R side
        int xl = new_xing(od), xr = new_xing(od);
        alloc.item_xings[{b.id, static_cast<int>(k)}] = {xl, xr, -1, -1};
      } else {
        // four: (mover L x target posL), (L x posR), (R x posL), (R x posR)
        int a0 = new_xing(od), a1 = new_xing(od), a2 = new_xing(od),
            a3 = new_xing(od);
        alloc.item_xings[{b.id, static_cast<int>(k)}] = {a0, a1, a2, a3};
      }
    }
  }

  // --- phase B: build intervals -------------------------------------------
  // slot convention for a generated crossing between a target strand
  // (travelling "east", slots W=2 in, E=0 out) and a mover strand:
  // from 'l': mover enters N=1, leaves S=3; from 'r': enters S=3, leaves N=1.
  auto mover_passage = [&](int xing, char from) {
    return from == 'l' ? Passage{xing, 1, 3} : Passage{xing, 3, 1};
  };
  auto target_passage = [&](int xing) { return Passage{xing, 2, 0}; };

  std::vector<Interval> intervals;
  // junction ends per attachment: [band][end] -> {j_upstream, j_downstream}
  std::map<std::pair<int, int>, std::pair<int, int>> attach_junctions;
  int next_junction = 0;

  auto feats = edge_features(bl);

  // helper: expand an edge's ribbon-crossing feature into its two passages
  // in increasing-position order along the edge
  auto edge_feature_passages = [&](const Feature& f) {
    const Band& mover = *bl.find_band(f.band);
    const CoreItem& it = mover.core[f.item_idx];
    auto ids = alloc.item_xings[{f.band, f.item_idx}];
    int xl = ids[0], xr = ids[1];
    // from 'l': positional-R side crosses upstream of positional-L
    std::vector<Passage> ps;
    if (it.from == 'l') {
      ps.push_back(target_passage(xr));
      ps.push_back(target_passage(xl));
    } else {
      ps.push_back(target_passage(xl));
      ps.push_back(target_passage(xr));
    }
    return ps;
  };

  // edge intervals
  auto ends = edge_ends(base);
  for (EdgeId e = 0; e < base.n_edges; ++e) {
    bool loop = base.is_loop_edge(e);
    auto fit = feats.find(e);
    std::vector<Feature> fs = fit == feats.end() ? std::vector<Feature>{}
                                                 : fit->second;
    // expand into an ordered list of "tokens": passages and junction cuts
    struct Token {
      bool cut;
      std::pair<int, int> cut_j;  // upstream, downstream junction ids
      std::vector<Passage> ps;
    };
    std::vector<Token> tokens;
    for (const auto& f : fs) {
      if (f.is_attach) {
        int ju = next_junction++;
        int jd = next_junction++;
        attach_junctions[{f.band, f.end}] = {ju, jd};
        tokens.push_back({true, {ju, jd}, {}});
      } else {
        tokens.push_back({false, {}, edge_feature_passages(f)});
      }
    }
    if (loop) {
      bool any_cut = false;
      for (auto& t : tokens) any_cut |= t.cut;
      if (tokens.empty()) {
        Interval iv;
        iv.closed = true;
        intervals.push_back(iv);
        continue;
      }
      if (!any_cut) {
        Interval iv;
        iv.closed = true;
        for (auto& t : tokens)
          iv.passages.insert(iv.passages.end(), t.ps.begin(), t.ps.end());
        intervals.push_back(iv);
        continue;
      }
      // rotate so the list starts right after a cut, then walk linearly
      size_t first_cut = 0;
      for (size_t i = 0; i < tokens.size(); ++i)
        if (tokens[i].cut) {
          first_cut = i;
          break;
        }
      std::rotate(tokens.begin(), tokens.begin() + first_cut, tokens.end());
      // tokens[0] is a cut; segments run between consecutive cuts (wrap)
      Interval cur;
      cur.e0 = {IEnd::Kind::junction, -1, -1, tokens[0].cut_j.second};
      for (size_t i = 1; i < tokens.size(); ++i) {
        if (tokens[i].cut) {
          cur.e1 = {IEnd::Kind::junction, -1, -1, tokens[i].cut_j.first};
          intervals.push_back(cur);
          cur = Interval{};
          cur.e0 = {IEnd::Kind::junction, -1, -1, tokens[i].cut_j.second};
        } else {
          cur.passages.insert(cur.passages.end(), tokens[i].ps.begin(),
                              tokens[i].ps.end());
        }
      }
      cur.e1 = {IEnd::Kind::junction, -1, -1, tokens[0].cut_j.first};
      intervals.push_back(cur);
      continue;
    }
    // open edge: anchored at its two original-crossing ports
    Interval cur;
    cur.e0 = {IEnd::Kind::anchor, ends[e][0].xing, ends[e][0].slot, -1};
    for (auto& t : tokens) {
      if (t.cut) {
        cur.e1 = {IEnd::Kind::junction, -1, -1, t.cut_j.first};
        intervals.push_back(cur);
        cur = Interval{};
        cur.e0 = {IEnd::Kind::junction, -1, -1, t.cut_j.second};
      } else {
        cur.passages.insert(cur.passages.end(), t.ps.begin(), t.ps.end());
      }
    }
    cur.e1 = {IEnd::Kind::anchor, ends[e][1].xing, ends[e][1].slot, -1};
    intervals.push_back(cur);
  }

  // band side intervals
  for (const auto& b : bands_sorted) {
    auto ev = band_events(bl, b);
    Interval sideA, sideB;  // A = positional left at end0
    bool swapped = false;   // after odd twists so far
    auto posL = [&]() -> Interval& { return swapped ? sideB : sideA; };
    auto posR = [&]() -> Interval& { return swapped ? sideA : sideB; };
    for (const auto& e : ev) {
      if (e.kind == 0) {
        int x = alloc.twist_xings[{b.id, e.item_idx}];
        // table [R_after, L_before, R_before, L_after]
        posL().passages.push_back({x, 1, 3});
        posR().passages.push_back({x, 2, 0});
        swapped = !swapped;
      } else if (e.kind == 1) {
        const CoreItem& it = b.core[e.item_idx];
        auto ids = alloc.item_xings[{b.id, e.item_idx}];
        if (it.kind == 'e') {
          posL().passages.push_back(mover_passage(ids[0], it.from));
          posR().passages.push_back(mover_passage(ids[1], it.from));
        } else {
          // crossing a band: each side crosses the target's near side first
          const Band& tgt = *bl.find_band(it.id);
          bool tgt_par = parity(tgt);
          (void)tgt_par;
          // ids: (L x posL), (L x posR), (R x posL), (R x posR)
          if (it.from == 'l') {
            posL().passages.push_back(mover_passage(ids[0], it.from));
            posL().passages.push_back(mover_passage(ids[1], it.from));
            posR().passages.push_back(mover_passage(ids[2], it.from));
            posR().passages.push_back(mover_passage(ids[3], it.from));
          } else {
            posL().passages.push_back(mover_passage(ids[1], it.from));
            posL().passages.push_back(mover_passage(ids[0], it.from));
            posR().passages.push_back(mover_passage(ids[3], it.from));
            posR().passages.push_back(mover_passage(ids[2], it.from));
          }
        }
      } else {
        // a foreign band crosses us at this point; we act as the target
        const Band& mover = *bl.find_band(e.other_band);
        const CoreItem& it = mover.core[e.other_idx];
        auto ids = alloc.item_xings[{e.other_band, e.other_idx}];
        // along the target, the mover's positional-R side comes first when
        // approaching from 'l'
        if (it.from == 'l') {
          posL().passages.push_back(target_passage(ids[2]));  // R x posL
          posL().passages.push_back(target_passage(ids[0]));  // L x posL
          posR().passages.push_back(target_passage(ids[3]));
          posR().passages.push_back(target_passage(ids[1]));
        } else {
          posL().passages.push_back(target_passage(ids[0]));
          posL().passages.push_back(target_passage(ids[2]));
          posR().passages.push_back(target_passage(ids[1]));
          posR().passages.push_back(target_passage(ids[3]));
        }
      }
    }
    // splice to the attachments
    auto j0 = attach_junctions.at({b.id, 0});
    auto j1 = attach_junctions.at({b.id, 1});
    Interval& L0 = sideA;  // positional left at end0 is always sideA
    Interval& R0 = sideB;
    Interval& L1 = swapped ? sideB : sideA;  // positional left at end1
    Interval& R1 = swapped ? sideA : sideB;
    // end0 depart: side 'l': up-L0, dn-R0; side 'r': up-R0, dn-L0
    if (b.end0.side == 'l') {
      L0.e0 = {IEnd::Kind::junction, -1, -1, j0.first};
      R0.e0 = {IEnd::Kind::junction, -1, -1, j0.second};
    } else {
      R0.e0 = {IEnd::Kind::junction, -1, -1, j0.first};
      L0.e0 = {IEnd::Kind::junction, -1, -1, j0.second};
    }
    // end1 arrive: side 'l': up-R1, dn-L1; side 'r': up-L1, dn-R1
    if (b.end1.side == 'l') {
      R1.e1 = {IEnd::Kind::junction, -1, -1, j1.first};
      L1.e1 = {IEnd::Kind::junction, -1, -1, j1.second};
    } else {
      L1.e1 = {IEnd::Kind::junction, -1, -1, j1.first};
      R1.e1 = {IEnd::Kind::junction, -1, -1, j1.second};
    }
    intervals.push_back(sideA);
    intervals.push_back(sideB);
  }

  // --- phase C: merge intervals through junctions, emit edges -------------
  // junction id -> (interval index, which end)
  std::map<int, std::vector<std::pair<size_t, int>>> at_junction;
  for (size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].closed) continue;
    if (intervals[i].e0.kind == IEnd::Kind::junction)
      at_junction[intervals[i].e0.junction].push_back({i, 0});
    if (intervals[i].e1.kind == IEnd::Kind::junction)
      at_junction[intervals[i].e1.junction].push_back({i, 1});
  }
  for (auto& [j, ids] : at_junction)
    if (ids.size() != 2)
      throw Error(ErrorKind::io_error,
                  "junction " + std::to_string(j) + " joins " +
                      std::to_string(ids.size()) + " ends");

  std::vector<char> used(intervals.size(), 0);
  auto emit_strand = [&](const std::vector<Passage>& ps,
                         std::optional<EndRef> a0, std::optional<EndRef> a1) {
    // allocate edges between consecutive ports; anchors cap the ends
    if (ps.empty()) {
      if (!a0 && !a1) {
        out.loop_edges.push_back(out.n_edges++);
        return;
      }
      // a strand with no passages joining two original ports
      EdgeId id = out.n_edges++;
      out.xings[a0->xing].e[a0->slot] = id;
      out.xings[a1->xing].e[a1->slot] = id;
      return;
    }
    size_t n = ps.size();
    for (size_t i = 0; i + 1 < n; ++i) {
      EdgeId id = out.n_edges++;
      out.xings[ps[i].xing].e[ps[i].out_slot] = id;
      out.xings[ps[i + 1].xing].e[ps[i + 1].in_slot] = id;
    }
    if (a0 && a1) {
      EdgeId first = out.n_edges++;
      out.xings[a0->xing].e[a0->slot] = first;
      out.xings[ps.front().xing].e[ps.front().in_slot] = first;
      EdgeId last = out.n_edges++;
      out.xings[ps.back().xing].e[ps.back().out_slot] = last;
      out.xings[a1->xing].e[a1->slot] = last;
    } else {
      // closed: tie the last passage back to the first
      EdgeId id = out.n_edges++;
      out.xings[ps.back().xing].e[ps.back().out_slot] = id;
      out.xings[ps.front().xing].e[ps.front().in_slot] = id;
    }
  };

  for (size_t i0 = 0; i0 < intervals.size(); ++i0) {
    if (used[i0]) continue;
    if (intervals[i0].closed) {
      used[i0] = 1;
      emit_strand(intervals[i0].passages, std::nullopt, std::nullopt);
      continue;
    }
    // start from an anchored end when there is one, else walk a cycle
    int start_end = -1;
    if (intervals[i0].e0.kind == IEnd::Kind::anchor)
      start_end = 0;
    else if (intervals[i0].e1.kind == IEnd::Kind::anchor)
      start_end = 1;
    if (start_end < 0) {
      // might still be reachable from an anchored chain later; defer
      bool reachable_anchor = false;
      // quick scan: walk the cycle/chain to see if an anchor appears
      size_t cur = i0;
      int into = 0;  // entering via e0
      std::set<std::pair<size_t, int>> seen;
      while (true) {
        int out_end = 1 - into;
        const IEnd& e = out_end == 0 ? intervals[cur].e0 : intervals[cur].e1;
        if (e.kind == IEnd::Kind::anchor) {
          reachable_anchor = true;
          break;
        }
        auto& pair = at_junction[e.junction];
        auto next = pair[0].first == cur && pair[0].second == out_end
                        ? pair[1]
                        : pair[0];
        if (next.first == i0 || seen.count(next)) break;
        seen.insert(next);
        cur = next.first;
        into = next.second;
      }
      if (reachable_anchor) continue;  // handled when we reach its anchor
    }

    // walk from this interval, concatenating through junctions
    std::vector<Passage> ps;
    std::optional<EndRef> a0, a1;
    size_t cur = i0;
    int into = start_end < 0 ? 0 : start_end;  // the end we "enter" from
    if (start_end >= 0) {
      const IEnd& e = start_end == 0 ? intervals[cur].e0 : intervals[cur].e1;
      a0 = EndRef{e.xing, e.slot};
    }
    bool cycle = start_end < 0;
    while (true) {
      used[cur] = 1;
      const Interval& iv = intervals[cur];
      if (into == 0) {
        ps.insert(ps.end(), iv.passages.begin(), iv.passages.end());
      } else {
        for (auto it = iv.passages.rbegin(); it != iv.passages.rend(); ++it)
          ps.push_back({it->xing, it->out_slot, it->in_slot});
      }
      const IEnd& e = into == 0 ? iv.e1 : iv.e0;
      if (e.kind == IEnd::Kind::anchor) {
        a1 = EndRef{e.xing, e.slot};
        break;
      }
      auto& pair = at_junction[e.junction];
      auto next = pair[0].first == cur && pair[0].second == (1 - into)
                      ? pair[1]
                      : pair[0];
      if (cycle && next.first == i0 && next.second == 0) break;
      cur = next.first;
      into = next.second;
      if (cycle && used[cur]) break;
    }
    if (cycle)
      emit_strand(ps, std::nullopt, std::nullopt);
    else
      emit_strand(ps, a0, a1);
  }

  return out;
}

// ---------------------------------------------------------------------------

SurfaceStats stats(const BandedLink& b) {
  SurfaceStats st;
  auto comp = link_components(b.diagram);
  if (static_cast<int>(b.comp_flags.size()) != comp.count)
    throw Error(ErrorKind::io_error, "component flags out of sync");
  for (char f : b.comp_flags) {
    if (f == 'U') st.minima++;
    if (f == 'L') st.boundary++;
  }
  st.saddles = static_cast<int>(b.bands.size());
  st.maxima = b.maxima;
  st.chi = st.minima - st.saddles + st.maxima;
  // surface connectivity: circles joined by bands (caps never connect)
  {
    int n = comp.count;
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int v) {
      return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (const auto& band : b.bands) {
      int c0 = comp.edge_comp[band.end0.edge];
      int c1 = comp.edge_comp[band.end1.edge];
      parent[find(c0)] = find(c1);
    }
    std::set<int> roots;
    for (int i = 0; i < n; ++i) roots.insert(find(i));
    if (roots.size() > 1)
      throw Error(ErrorKind::disconnected_surface,
                  std::to_string(roots.size()) + " surface pieces");
  }
  int num = 2 - st.chi - st.boundary;
  if (num < 0 || num % 2 != 0)
    throw Error(ErrorKind::non_integer_genus,
                "2 - chi - b = " + std::to_string(num));
  st.genus = num / 2;
  return st;
}

std::string BandedReport::to_string() const {
  std::ostringstream out;
  if (violations.empty()) {
    out << "structure ok\n";
  } else {
    for (const auto& v : violations) out << "violation: " << v << "\n";
  }
  out << "resolved_components=" << resolved_components << "\n";
  switch (unlink.status) {
    case UnlinkResult::Status::verified:
      out << "unlink=verified (" << unlink.reason << ")\n";
      break;
    case UnlinkResult::Status::refuted:
      out << "unlink=refuted (" << unlink.reason << ")\n";
      break;
    case UnlinkResult::Status::unknown:
      out << "unlink=unknown (" << unlink.reason << ")\n";
      break;
  }
  return out.str();
}

BandedReport validate_banded(const BandedLink& b, int budget) {
  BandedReport rep;
  try {
    validate_link(b.diagram);
  } catch (const Error& e) {
    rep.violations.push_back(std::string("diagram: ") + e.what());
    return rep;
  }
  auto comp = link_components(b.diagram);
  if (static_cast<int>(b.comp_flags.size()) != comp.count)
    rep.violations.push_back("component flag count " +
                             std::to_string(b.comp_flags.size()) +
                             " != component count " +
                             std::to_string(comp.count));
  for (char f : b.comp_flags)
    if (f != 'L' && f != 'U')
      rep.violations.push_back("component flag must be L or U");
  std::set<int> band_ids;
  for (const auto& band : b.bands) {
    std::string tag = "band " + std::to_string(band.id);
    if (!band_ids.insert(band.id).second)
      rep.violations.push_back("duplicate " + tag);
    for (const BandAttach* a : {&band.end0, &band.end1}) {
      if (a->edge < 0 || a->edge >= b.diagram.n_edges)
        rep.violations.push_back(tag + ": attaches to missing edge");
      if (!(a->pos > 0.0 && a->pos < 1.0))
        rep.violations.push_back(tag + ": attach position out of range");
      if (a->side != 'l' && a->side != 'r')
        rep.violations.push_back(tag + ": attach side must be l or r");
    }
    if (band.end0.edge == band.end1.edge &&
        band.end0.pos == band.end1.pos)
      rep.violations.push_back(tag + ": attach sites coincide");
    for (const auto& it : band.core) {
      if (it.kind == 'e') {
        if (it.id < 0 || it.id >= b.diagram.n_edges)
          rep.violations.push_back(tag + ": core names missing edge");
      } else if (it.kind == 'b') {
        if (!b.find_band(it.id) || it.id == band.id)
          rep.violations.push_back(tag + ": core names bad band");
      } else {
        rep.violations.push_back(tag + ": core item kind must be e or b");
      }
      if (!(it.pos > 0.0 && it.pos < 1.0))
        rep.violations.push_back(tag + ": core position out of range");
    }
  }
  if (!rep.violations.empty()) return rep;

  LinkDiagram resolved = resolve_bands(b);
  try {
    validate_link(resolved);
  } catch (const Error& e) {
    rep.violations.push_back(std::string("resolution: ") + e.what());
    return rep;
  }
  rep.resolved_components = link_components(resolved).count;
  if (rep.resolved_components != b.maxima)
    rep.violations.push_back(
        "band surgery yields " + std::to_string(rep.resolved_components) +
        " circles but " + std::to_string(b.maxima) + " maxima are declared");
  rep.unlink = is_unlink(resolved, budget);
  return rep;
}

// ---------------------------------------------------------------------------
// Text formats.

namespace {

std::string fmt_pos(double p) {
  std::ostringstream s;
  s.precision(10);
  s << p;
  return s.str();
}

}  // namespace

BandedLink parse_bld(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  struct CompDecl {
    int id;
    char flag;
    EdgeId loop_edge;
  };
  std::vector<CompDecl> comps;
  std::vector<std::pair<int, LinkDiagram::Xing>> xings;
  std::vector<Band> bands;
  std::optional<int> maxima;
  EdgeId max_edge = -1;

  auto syntax = [&](const std::string& msg) {
    return Error(ErrorKind::syntax_error,
                 "line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "component") {
      CompDecl c{-1, 'L', -1};
      std::string flag;
      if (!(ls >> c.id >> flag) || (flag != "L" && flag != "U"))
        throw syntax("component <id> L|U");
      c.flag = flag[0];
      std::string extra;
      if (ls >> extra) {
        if (extra.rfind("edge=", 0) != 0) throw syntax("expected edge=<id>");
        c.loop_edge = std::stoi(extra.substr(5));
        max_edge = std::max(max_edge, c.loop_edge);
      }
      comps.push_back(c);
    } else if (kw == "crossing") {
      int id;
      LinkDiagram::Xing x;
      std::string over;
      if (!(ls >> id >> x.e[0] >> x.e[1] >> x.e[2] >> x.e[3] >> over))
        throw syntax("crossing <id> <e1..e4> over=<k>");
      if (over.rfind("over=", 0) != 0) throw syntax("expected over=<k>");
      int k = std::stoi(over.substr(5));
      if (k < 1 || k > 4) throw syntax("over slot must be 1..4");
      x.over_diag = (k - 1) % 2;
      for (EdgeId e : x.e) max_edge = std::max(max_edge, e);
      xings.push_back({id, x});
    } else if (kw == "band") {
      Band b;
      std::string kwa;
      if (!(ls >> b.id >> kwa) || kwa != "attach")
        throw syntax("band <id> attach ...");
      auto parse_attach = [&](const std::string& tok) {
        BandAttach a;
        auto at = tok.find('@');
        auto sl = tok.find('/');
        if (at == std::string::npos || sl == std::string::npos || sl < at)
          throw syntax("attach must be <edge>@<pos>/<l|r>");
        a.edge = std::stoi(tok.substr(0, at));
        a.pos = std::stod(tok.substr(at + 1, sl - at - 1));
        std::string side = tok.substr(sl + 1);
        if (side != "l" && side != "r") throw syntax("side must be l or r");
        a.side = side[0];
        max_edge = std::max(max_edge, a.edge);
        return a;
      };
      std::string t0, t1, frame;
      if (!(ls >> t0 >> t1 >> frame)) throw syntax("band attach fields");
      b.end0 = parse_attach(t0);
      b.end1 = parse_attach(t1);
      if (frame.rfind("frame=", 0) != 0) throw syntax("expected frame=<k>");
      b.framing = std::stoi(frame.substr(6));
      std::string core_kw;
      if (ls >> core_kw) {
        if (core_kw != "core:") throw syntax("expected core:");
        std::string item_tok, ou_tok;
        while (ls >> item_tok >> ou_tok) {
          CoreItem it;
          // <edge|band>:<id>@<pos>  <over|under>/<l|r>
          auto colon = item_tok.find(':');
          auto at = item_tok.find('@');
          if (colon == std::string::npos || at == std::string::npos)
            throw syntax("core item must be kind:<id>@<pos>");
          std::string kind = item_tok.substr(0, colon);
          if (kind == "edge")
            it.kind = 'e';
          else if (kind == "band")
            it.kind = 'b';
          else
            throw syntax("core item kind must be edge or band");
          it.id = std::stoi(item_tok.substr(colon + 1, at - colon - 1));
          it.pos = std::stod(item_tok.substr(at + 1));
          auto sl = ou_tok.find('/');
          if (sl == std::string::npos) throw syntax("expected over|under/l|r");
          std::string ou = ou_tok.substr(0, sl);
          std::string fr = ou_tok.substr(sl + 1);
          if (ou != "over" && ou != "under") throw syntax("over|under");
          if (fr != "l" && fr != "r") throw syntax("side l|r");
          it.over = ou == "over";
          it.from = fr[0];
          if (it.kind == 'e') max_edge = std::max(max_edge, it.id);
          b.core.push_back(it);
        }
      }
      bands.push_back(std::move(b));
    } else if (kw == "maxima") {
      int m;
      if (!(ls >> m)) throw syntax("maxima <n>");
      maxima = m;
    } else {
      throw syntax("unknown record " + kw);
    }
  }

  BandedLink b;
  b.diagram.n_edges = max_edge + 1;
  std::sort(xings.begin(), xings.end(),
            [](auto& a, auto& c) { return a.first < c.first; });
  for (auto& [id, x] : xings) {
    (void)id;
    b.diagram.xings.push_back(x);
  }
  for (const auto& c : comps)
    if (c.loop_edge >= 0) b.diagram.loop_edges.push_back(c.loop_edge);
  std::sort(b.diagram.loop_edges.begin(), b.diagram.loop_edges.end());

  validate_link(b.diagram);
  auto comp = link_components(b.diagram);
  if (static_cast<int>(comps.size()) != comp.count)
    throw Error(ErrorKind::io_error,
                "declared " + std::to_string(comps.size()) +
                    " components, diagram has " + std::to_string(comp.count));
  b.comp_flags.assign(comp.count, 'L');
  for (const auto& c : comps) {
    if (c.id < 0 || c.id >= comp.count)
      throw Error(ErrorKind::io_error, "component id out of range");
    b.comp_flags[c.id] = c.flag;
  }
  b.bands = std::move(bands);
  std::sort(b.bands.begin(), b.bands.end(),
            [](const Band& x, const Band& y) { return x.id < y.id; });
  if (maxima) {
    b.maxima = *maxima;
  } else {
    LinkDiagram resolved = resolve_bands(b);
    b.maxima = link_components(resolved).count;
  }
  return b;
}

std::string write_bld(const BandedLink& b) {
  std::ostringstream out;
  auto comp = link_components(b.diagram);
  // loop edges in component order
  std::map<int, EdgeId> loop_of_comp;
  for (EdgeId l : b.diagram.loop_edges) loop_of_comp[comp.edge_comp[l]] = l;
  for (int c = 0; c < comp.count; ++c) {
    out << "component " << c << " " << b.comp_flags[c];
    auto it = loop_of_comp.find(c);
    if (it != loop_of_comp.end()) out << " edge=" << it->second;
    out << "\n";
  }
  for (int x = 0; x < b.diagram.crossing_count(); ++x) {
    const auto& xing = b.diagram.xings[x];
    out << "crossing " << x << " " << xing.e[0] << " " << xing.e[1] << " "
        << xing.e[2] << " " << xing.e[3]
        << " over=" << (xing.over_diag == 0 ? 1 : 2) << "\n";
  }
  for (const auto& band : b.bands) {
    out << "band " << band.id << " attach " << band.end0.edge << "@"
        << fmt_pos(band.end0.pos) << "/" << band.end0.side << " "
        << band.end1.edge << "@" << fmt_pos(band.end1.pos) << "/"
        << band.end1.side << " frame=" << band.framing;
    if (!band.core.empty()) {
      out << " core:";
      for (const auto& it : band.core)
        out << " " << (it.kind == 'e' ? "edge" : "band") << ":" << it.id << "@"
            << fmt_pos(it.pos) << " " << (it.over ? "over" : "under") << "/"
            << it.from;
    }
    out << "\n";
  }
  out << "maxima " << b.maxima << "\n";
  return out.str();
}

std::vector<BandMove> parse_bmv(const std::string& text) {
  std::vector<BandMove> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto syntax = [&](const std::string& msg) {
    return Error(ErrorKind::syntax_error,
                 "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    BandMove m;
    if (kw == "slide") {
      std::string site;
      if (!(ls >> site)) throw syntax("slide <band>.<end><+|->[u]");
      m.kind = BandMove::Kind::slide;
      auto dot = site.find('.');
      if (dot == std::string::npos) throw syntax("slide site needs '.'");
      m.band = std::stoi(site.substr(0, dot));
      size_t i = dot + 1;
      size_t j = i;
      while (j < site.size() && std::isdigit(site[j])) j++;
      m.end = std::stoi(site.substr(i, j - i));
      if (j >= site.size() || (site[j] != '+' && site[j] != '-'))
        throw syntax("slide direction must be + or -");
      m.dir = site[j] == '+' ? 1 : -1;
      m.under = (j + 1 < site.size() && site[j + 1] == 'u');
    } else if (kw == "swim") {
      std::string site;
      if (!(ls >> site)) throw syntax("swim <band>@<k>[+item]");
      m.kind = BandMove::Kind::swim;
      auto at = site.find('@');
      if (at == std::string::npos) throw syntax("swim site needs '@'");
      m.band = std::stoi(site.substr(0, at));
      auto plus = site.find('+', at);
      m.core_index = std::stoi(site.substr(at + 1, plus == std::string::npos
                                                       ? std::string::npos
                                                       : plus - at - 1));
      if (plus != std::string::npos) {
        // kind:id:o|u:l|r@p1,p2
        std::string spec = site.substr(plus + 1);
        auto p1 = spec.find(':');
        auto p2 = spec.find(':', p1 + 1);
        auto p3 = spec.find(':', p2 + 1);
        auto pat = spec.find('@', p3 + 1);
        auto pc = spec.find(',', pat + 1);
        if (p1 == std::string::npos || p2 == std::string::npos ||
            p3 == std::string::npos || pat == std::string::npos ||
            pc == std::string::npos)
          throw syntax("swim insert spec kind:id:o|u:l|r@p1,p2");
        CoreItem first, second;
        std::string kind = spec.substr(0, p1);
        if (kind != "edge" && kind != "band") throw syntax("kind edge|band");
        first.kind = kind == "edge" ? 'e' : 'b';
        first.id = std::stoi(spec.substr(p1 + 1, p2 - p1 - 1));
        std::string ou = spec.substr(p2 + 1, p3 - p2 - 1);
        if (ou != "o" && ou != "u") throw syntax("o|u");
        first.over = ou == "o";
        std::string fr = spec.substr(p3 + 1, pat - p3 - 1);
        if (fr != "l" && fr != "r") throw syntax("l|r");
        first.from = fr[0];
        first.pos = std::stod(spec.substr(pat + 1, pc - pat - 1));
        second = first;
        second.pos = std::stod(spec.substr(pc + 1));
        second.from = first.from == 'l' ? 'r' : 'l';
        m.insert_first = first;
        m.insert_second = second;
      }
    } else if (kw == "cancelmin") {
      m.kind = BandMove::Kind::cancel_min;
      if (!(ls >> m.u_component >> m.band))
        throw syntax("cancelmin <u-component> <band>");
    } else if (kw == "cancelmax") {
      m.kind = BandMove::Kind::cancel_max;
      if (!(ls >> m.band)) throw syntax("cancelmax <band>");
    } else if (kw == "stab") {
      m.kind = BandMove::Kind::stabilise;
      std::string site;
      if (!(ls >> site)) throw syntax("stab <edge>@<pos>");
      auto at = site.find('@');
      if (at == std::string::npos) throw syntax("stab site needs '@'");
      m.edge = std::stoi(site.substr(0, at));
      m.pos = std::stod(site.substr(at + 1));
    } else if (kw == "destab") {
      m.kind = BandMove::Kind::destabilise;
      if (!(ls >> m.band >> m.band2)) throw syntax("destab <band> <band>");
    } else if (kw == "r1" || kw == "r2" || kw == "r3") {
      m.kind = kw == "r1" ? BandMove::Kind::r1
                          : kw == "r2" ? BandMove::Kind::r2
                                       : BandMove::Kind::r3;
      if (!(ls >> m.site_index)) throw syntax(kw + " <site-index>");
    } else if (kw == "iso") {
      m.kind = BandMove::Kind::planar_iso;
      if (!(ls >> m.label)) throw syntax("iso <relabel>");
    } else {
      throw syntax("unknown move " + kw);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::string write_bmv(const std::vector<BandMove>& moves) {
  std::ostringstream out;
  for (const auto& m : moves) {
    switch (m.kind) {
      case BandMove::Kind::slide:
        out << "slide " << m.band << "." << m.end << (m.dir > 0 ? "+" : "-")
            << (m.under ? "u" : "") << "\n";
        break;
      case BandMove::Kind::swim:
        out << "swim " << m.band << "@" << m.core_index;
        if (m.insert_first) {
          const CoreItem& it = *m.insert_first;
          out << "+" << (it.kind == 'e' ? "edge" : "band") << ":" << it.id
              << ":" << (it.over ? "o" : "u") << ":" << it.from << "@"
              << fmt_pos(it.pos) << "," << fmt_pos(m.insert_second->pos);
        }
        out << "\n";
        break;
      case BandMove::Kind::cancel_min:
        out << "cancelmin " << m.u_component << " " << m.band << "\n";
        break;
      case BandMove::Kind::cancel_max:
        out << "cancelmax " << m.band << "\n";
        break;
      case BandMove::Kind::stabilise:
        out << "stab " << m.edge << "@" << fmt_pos(m.pos) << "\n";
        break;
      case BandMove::Kind::destabilise:
        out << "destab " << m.band << " " << m.band2 << "\n";
        break;
      case BandMove::Kind::r1:
        out << "r1 " << m.site_index << "\n";
        break;
      case BandMove::Kind::r2:
        out << "r2 " << m.site_index << "\n";
        break;
      case BandMove::Kind::r3:
        out << "r3 " << m.site_index << "\n";
        break;
      case BandMove::Kind::planar_iso:
        out << "iso " << m.label << "\n";
        break;
    }
  }
  return out.str();
}

}  // namespace stabtrace
