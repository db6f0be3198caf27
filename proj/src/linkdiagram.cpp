#include "stabtrace/linkdiagram.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace stabtrace {

std::vector<std::array<EndRef, 2>> edge_ends(const LinkDiagram& d) {
  std::vector<std::array<EndRef, 2>> ends(d.n_edges,
                                          {EndRef{-1, -1}, EndRef{-1, -1}});
  for (int x = 0; x < d.crossing_count(); ++x) {
    for (int s = 0; s < 4; ++s) {
      EdgeId e = d.xings[x].e[s];
      if (e < 0 || e >= d.n_edges)
        throw Error(ErrorKind::io_error,
                    "crossing " + std::to_string(x) + " slot " +
                        std::to_string(s) + " names bad edge");
      if (ends[e][0].xing < 0)
        ends[e][0] = {x, s};
      else if (ends[e][1].xing < 0)
        ends[e][1] = {x, s};
      else
        throw Error(ErrorKind::io_error,
                    "edge " + std::to_string(e) + " has more than two ends");
    }
  }
  for (EdgeId e = 0; e < d.n_edges; ++e) {
    bool loop = d.is_loop_edge(e);
    bool attached = ends[e][0].xing >= 0 || ends[e][1].xing >= 0;
    if (loop && attached)
      throw Error(ErrorKind::io_error,
                  "edge " + std::to_string(e) + " is both loop and attached");
    if (!loop && (ends[e][0].xing < 0 || ends[e][1].xing < 0))
      throw Error(ErrorKind::io_error,
                  "edge " + std::to_string(e) + " has a dangling end");
  }
  return ends;
}

namespace {

inline EndRef other_end(const std::vector<std::array<EndRef, 2>>& ends,
                        EdgeId e, const EndRef& at) {
  return ends[e][0] == at ? ends[e][1] : ends[e][0];
}

inline int dart_index(const EndRef& r) { return r.xing * 4 + r.slot; }

}  // namespace

std::vector<std::vector<EndRef>> link_faces(const LinkDiagram& d) {
  auto ends = edge_ends(d);
  std::vector<std::vector<EndRef>> faces;
  std::set<int> seen;
  for (int x = 0; x < d.crossing_count(); ++x) {
    for (int s = 0; s < 4; ++s) {
      EndRef start{x, s};
      if (seen.count(dart_index(start))) continue;
      std::vector<EndRef> face;
      EndRef cur = start;
      do {
        face.push_back(cur);
        seen.insert(dart_index(cur));
        EdgeId e = d.xings[cur.xing].e[cur.slot];
        EndRef o = other_end(ends, e, cur);
        cur = {o.xing, (o.slot + 1) % 4};
        if (face.size() > 4 * d.xings.size() + 1)
          throw Error(ErrorKind::io_error, "face tracing diverges");
      } while (!(cur == start));
      faces.push_back(std::move(face));
    }
  }
  return faces;
}

namespace {

// connected pieces of the crossing graph
std::vector<int> xing_pieces(const LinkDiagram& d, int* count) {
  auto ends = edge_ends(d);
  std::vector<int> piece(d.crossing_count(), -1);
  int n = 0;
  for (int x0 = 0; x0 < d.crossing_count(); ++x0) {
    if (piece[x0] >= 0) continue;
    int id = n++;
    std::vector<int> stack{x0};
    piece[x0] = id;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int s = 0; s < 4; ++s) {
        EdgeId e = d.xings[x].e[s];
        EndRef o = other_end(ends, e, {x, s});
        if (piece[o.xing] < 0) {
          piece[o.xing] = id;
          stack.push_back(o.xing);
        }
      }
    }
  }
  *count = n;
  return piece;
}

}  // namespace

void validate_link(const LinkDiagram& d) {
  std::set<EdgeId> loops(d.loop_edges.begin(), d.loop_edges.end());
  if (loops.size() != d.loop_edges.size())
    throw Error(ErrorKind::io_error, "duplicate loop edge");
  for (EdgeId l : d.loop_edges)
    if (l < 0 || l >= d.n_edges)
      throw Error(ErrorKind::io_error, "loop edge id out of range");
  for (const auto& x : d.xings)
    if (x.over_diag != 0 && x.over_diag != 1)
      throw Error(ErrorKind::io_error, "over diagonal must be 0 or 1");
  auto ends = edge_ends(d);
  (void)ends;
  if (d.crossing_count() == 0) return;
  // planarity per connected piece: V - E + F = 2
  int n_pieces = 0;
  auto piece = xing_pieces(d, &n_pieces);
  std::vector<int> v_count(n_pieces, 0), f_count(n_pieces, 0);
  for (int x = 0; x < d.crossing_count(); ++x) v_count[piece[x]]++;
  for (const auto& f : link_faces(d)) f_count[piece[f.front().xing]]++;
  for (int pc = 0; pc < n_pieces; ++pc) {
    int V = v_count[pc];
    int E = 2 * V;  // 4 ends per crossing, 2 per edge
    int chi = V - E + f_count[pc];
    if (chi != 2)
      throw Error(ErrorKind::io_error,
                  "diagram piece is not planar (chi = " + std::to_string(chi) +
                      ")");
  }
}

LinkComponents link_components(const LinkDiagram& d) {
  auto ends = edge_ends(d);
  LinkComponents out;
  out.edge_comp.assign(d.n_edges, -1);
  out.edge_dir.assign(d.n_edges, 0);
  for (EdgeId e0 = 0; e0 < d.n_edges; ++e0) {
    if (out.edge_comp[e0] >= 0) continue;
    if (d.is_loop_edge(e0)) {
      out.edge_comp[e0] = out.count++;
      out.edge_dir[e0] = 1;
      continue;
    }
    int id = out.count++;
    // traverse from e0 toward its end[1]
    EdgeId e = e0;
    EndRef heading = ends[e0][1];
    while (out.edge_comp[e] < 0) {
      out.edge_comp[e] = id;
      out.edge_dir[e] = (heading == ends[e][1]) ? 1 : -1;
      EndRef through{heading.xing, (heading.slot + 2) % 4};
      EdgeId next = d.xings[through.xing].e[through.slot];
      heading = other_end(ends, next, through);
      e = next;
    }
  }
  return out;
}

namespace {

struct XingStrands {
  // per diagonal: in-slot and out-slot under component orientations
  int out_slot[2];  // index by diagonal 0/1
};

XingStrands orient_xing(const LinkDiagram& d,
                        const std::vector<std::array<EndRef, 2>>& ends,
                        const LinkComponents& comp, int x) {
  XingStrands st{{-1, -1}};
  for (int diag = 0; diag < 2; ++diag) {
    int s_a = diag, s_b = diag + 2;
    EdgeId ea = d.xings[x].e[s_a];
    // edge ea is traversed from its end[0] to end[1] if dir=1; it leaves the
    // crossing at slot s_a if that slot is its start in traversal order
    EndRef here{x, s_a};
    bool ea_starts_here = comp.edge_dir[ea] == 1 ? (ends[ea][0] == here)
                                                 : (ends[ea][1] == here);
    st.out_slot[diag] = ea_starts_here ? s_a : s_b;
  }
  return st;
}

int xing_sign(const LinkDiagram& d,
              const std::vector<std::array<EndRef, 2>>& ends,
              const LinkComponents& comp, int x) {
  XingStrands st = orient_xing(d, ends, comp, x);
  int over_out = st.out_slot[d.xings[x].over_diag];
  int under_out = st.out_slot[1 - d.xings[x].over_diag];
  return under_out == (over_out + 1) % 4 ? 1 : -1;
}

}  // namespace

std::map<std::pair<int, int>, int> linking_numbers(const LinkDiagram& d) {
  auto ends = edge_ends(d);
  auto comp = link_components(d);
  std::map<std::pair<int, int>, int> twice_lk;
  for (int x = 0; x < d.crossing_count(); ++x) {
    int c0 = comp.edge_comp[d.xings[x].e[0]];
    int c1 = comp.edge_comp[d.xings[x].e[1]];
    if (c0 == c1) continue;
    auto key = std::minmax(c0, c1);
    twice_lk[{key.first, key.second}] += xing_sign(d, ends, comp, x);
  }
  std::map<std::pair<int, int>, int> lk;
  for (auto& [k, v] : twice_lk) lk[k] = v / 2;
  return lk;
}

int tricolor_nullity(const LinkDiagram& d) {
  // variables: edges (loop edges included); relations per crossing:
  // over-in = over-out, under1 + under2 = 2 * over
  int n = d.n_edges;
  std::vector<std::vector<int>> rows;
  for (const auto& x : d.xings) {
    int o1 = x.e[x.over_diag], o2 = x.e[x.over_diag + 2];
    int u1 = x.e[1 - x.over_diag], u2 = x.e[(1 - x.over_diag) + 2];
    std::vector<int> r1(n, 0), r2(n, 0);
    r1[o1] = (r1[o1] + 1) % 3;
    r1[o2] = (r1[o2] + 2) % 3;  // o1 - o2 = 0
    rows.push_back(r1);
    r2[u1] = (r2[u1] + 1) % 3;
    r2[u2] = (r2[u2] + 1) % 3;
    r2[o1] = (r2[o1] + 1) % 3;  // u1 + u2 - 2*o1 = u1 + u2 + o1 (mod 3)
    rows.push_back(r2);
  }
  // GF(3) rank
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    int inv = rows[rank][col] == 1 ? 1 : 2;  // inverse mod 3
    for (int c = 0; c < n; ++c) rows[rank][c] = rows[rank][c] * inv % 3;
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      int f = rows[r][col];
      for (int c = 0; c < n; ++c)
        rows[r][c] = (rows[r][c] + (3 - f) * rows[rank][c]) % 3;
    }
    rank++;
  }
  return n - rank;
}

// ---------------------------------------------------------------------------

LinkDiagram splice_out(const LinkDiagram& d, const std::vector<int>& removed,
                       std::vector<EdgeId>* edge_map) {
  if (edge_map) edge_map->assign(d.n_edges, -1);
  auto ends = edge_ends(d);
  std::vector<char> gone(d.crossing_count(), 0);
  for (int x : removed) gone[x] = 1;

  // map surviving crossings
  std::vector<int> new_xing(d.crossing_count(), -1);
  int nx = 0;
  for (int x = 0; x < d.crossing_count(); ++x)
    if (!gone[x]) new_xing[x] = nx++;

  LinkDiagram out;
  out.xings.resize(nx);
  for (int x = 0; x < d.crossing_count(); ++x)
    if (!gone[x]) out.xings[new_xing[x]].over_diag = d.xings[x].over_diag;
  // (loop edges are renumbered below, after chains claim their ids)

  // walk strand chains through removed crossings
  std::vector<char> edge_done(d.n_edges, 0);
  auto step_through = [&](EndRef at) -> EndRef {
    // from an edge-end sitting at a removed crossing, hop the diagonal
    return EndRef{at.xing, (at.slot + 2) % 4};
  };
  for (EdgeId e0 = 0; e0 < d.n_edges; ++e0) {
    if (edge_done[e0] || d.is_loop_edge(e0)) continue;
    // walk in both directions to terminals (surviving ends) or a cycle
    std::vector<EdgeId> chain{e0};
    edge_done[e0] = 1;
    EndRef terms[2];
    bool closed = false;
    for (int dir = 0; dir < 2 && !closed; ++dir) {
      EndRef at = ends[e0][dir];
      while (gone[at.xing]) {
        EndRef hop = step_through(at);
        EdgeId next = d.xings[hop.xing].e[hop.slot];
        if (edge_done[next]) {
          // can only happen when the chain closes into a loop
          closed = true;
          break;
        }
        edge_done[next] = 1;
        chain.push_back(next);
        at = other_end(ends, next, hop);
      }
      terms[dir] = at;
    }
    if (closed) {
      EdgeId id = out.n_edges++;
      out.loop_edges.push_back(id);
      if (edge_map)
        for (EdgeId ce : chain) (*edge_map)[ce] = id;
      continue;
    }
    EdgeId id = out.n_edges++;
    if (edge_map)
      for (EdgeId ce : chain) (*edge_map)[ce] = id;
    for (int dir = 0; dir < 2; ++dir)
      out.xings[new_xing[terms[dir].xing]].e[terms[dir].slot] = id;
  }
  for (EdgeId l : d.loop_edges) {
    EdgeId id = out.n_edges++;
    out.loop_edges.push_back(id);
    if (edge_map) (*edge_map)[l] = id;
  }
  std::sort(out.loop_edges.begin(), out.loop_edges.end());
  return out;
}

// ---------------------------------------------------------------------------
// Move site enumeration.

std::vector<R1Site> r1_sites(const LinkDiagram& d) {
  std::vector<R1Site> out;
  for (int x = 0; x < d.crossing_count(); ++x)
    for (int s = 0; s < 4; ++s)
      if (d.xings[x].e[s] == d.xings[x].e[(s + 3) % 4])
        out.push_back({x, s});
  return out;
}

std::vector<R2Site> r2_sites(const LinkDiagram& d) {
  std::vector<R2Site> out;
  for (const auto& f : link_faces(d)) {
    if (f.size() != 2) continue;
    auto [x1, s1] = f[0];
    auto [x2, s2] = f[1];
    if (x1 == x2) continue;
    EdgeId p = d.xings[x1].e[s1];
    bool p_over_1 = d.xings[x1].over_diag == s1 % 2;
    bool p_over_2 = d.xings[x2].over_diag == ((s2 + 3) % 4) % 2;
    if (p_over_1 != p_over_2) continue;
    (void)p;
    out.push_back({f[0], f[1]});
  }
  return out;
}

std::vector<R3Site> r3_sites(const LinkDiagram& d) {
  std::vector<R3Site> out;
  for (const auto& f : link_faces(d)) {
    if (f.size() != 3) continue;
    if (f[0].xing == f[1].xing || f[1].xing == f[2].xing ||
        f[0].xing == f[2].xing)
      continue;
    for (int rot = 0; rot < 3; ++rot) {
      std::array<EndRef, 3> ds{f[rot % 3], f[(rot + 1) % 3], f[(rot + 2) % 3]};
      // mover strand misses ds[0]; it holds slots ds[1].slot at B and
      // ds[2].slot-1 at C
      auto [xB, sB] = ds[1];
      auto [xC, sC] = ds[2];
      bool over_b = d.xings[xB].over_diag == sB % 2;
      bool over_c = d.xings[xC].over_diag == ((sC + 3) % 4) % 2;
      if (over_b != over_c) continue;
      out.push_back({ds, rot});
    }
  }
  return out;
}

std::vector<R2PlusSite> r2plus_sites(const LinkDiagram& d) {
  std::vector<R2PlusSite> out;
  for (const auto& f : link_faces(d)) {
    for (size_t i = 0; i < f.size(); ++i) {
      for (size_t j = 0; j < f.size(); ++j) {
        if (i == j) continue;
        EdgeId e1 = d.xings[f[i].xing].e[f[i].slot];
        EdgeId e2 = d.xings[f[j].xing].e[f[j].slot];
        if (e1 == e2) continue;
        for (bool over : {true, false}) out.push_back({f[i], f[j], over});
      }
    }
  }
  return out;
}

LinkDiagram apply_r1(const LinkDiagram& d, const R1Site& site,
                     std::vector<EdgeId>* edge_map) {
  auto sites = r1_sites(d);
  bool valid = false;
  for (const auto& s : sites)
    if (s.xing == site.xing && s.kink_slot == site.kink_slot) valid = true;
  if (!valid)
    throw Error(ErrorKind::pattern_mismatch, "no R1 kink at that site");
  return splice_out(d, {site.xing}, edge_map);
}

LinkDiagram apply_r2(const LinkDiagram& d, const R2Site& site,
                     std::vector<EdgeId>* edge_map) {
  auto sites = r2_sites(d);
  bool valid = false;
  for (const auto& s : sites)
    if (s.d1 == site.d1 && s.d2 == site.d2) valid = true;
  if (!valid)
    throw Error(ErrorKind::pattern_mismatch, "no removable bigon there");
  return splice_out(d, {site.d1.xing, site.d2.xing}, edge_map);
}

namespace {

void set_slot(LinkDiagram& d, const EndRef& at, EdgeId e) {
  d.xings[at.xing].e[at.slot] = e;
}

}  // namespace

LinkDiagram apply_r3(const LinkDiagram& d, const R3Site& site,
                     std::vector<EdgeId>* edge_map) {
  {
    auto sites = r3_sites(d);
    bool valid = false;
    for (const auto& s : sites)
      if (s.darts == site.darts) valid = true;
    if (!valid)
      throw Error(ErrorKind::pattern_mismatch, "no R3 triangle at that site");
  }
  auto ends = edge_ends(d);
  auto [xA, alpha] = site.darts[0];
  auto [xB, beta] = site.darts[1];
  auto [xC, gamma] = site.darts[2];
  auto at = [&](int x, int s) { return d.xings[x].e[((s % 4) + 4) % 4]; };
  EdgeId u = at(xA, alpha), v = at(xB, beta), w = at(xC, gamma);
  EdgeId p = at(xB, beta + 1), q = at(xB, beta + 2);
  EdgeId r = at(xC, gamma + 1), s_ = at(xC, gamma + 2);
  EdgeId m = at(xA, alpha + 1), n = at(xA, alpha + 2);
  // conservative degeneracy guard
  std::set<EdgeId> tri{u, v, w};
  if (tri.size() != 3)
    throw Error(ErrorKind::pattern_mismatch, "degenerate triangle");
  for (EdgeId e : {p, q, r, s_, m, n})
    if (tri.count(e))
      throw Error(ErrorKind::pattern_mismatch,
                  "triangle stub re-enters the triangle");
  for (EdgeId e : {p, q, r, s_, m, n}) {
    for (const EndRef& er : ends[e]) {
      bool defining =
          (er == EndRef{xB, (beta + 1) % 4}) ||
          (er == EndRef{xB, (beta + 2) % 4}) ||
          (er == EndRef{xC, (gamma + 1) % 4}) ||
          (er == EndRef{xC, (gamma + 2) % 4}) ||
          (er == EndRef{xA, (alpha + 1) % 4}) ||
          (er == EndRef{xA, (alpha + 2) % 4});
      if (!defining && (er.xing == xB || er.xing == xC))
        throw Error(ErrorKind::pattern_mismatch,
                    "stub returns to a vanishing crossing");
    }
  }

  auto build = [&](bool mirror) -> LinkDiagram {
    LinkDiagram out;
    out.loop_edges = d.loop_edges;
    // keep all crossings; xB and xC get fresh tables ("B'", "C'")
    out.xings = d.xings;
    // fresh edges
    EdgeId uA = d.n_edges, wA = d.n_edges + 1, u2 = d.n_edges + 2,
           w2 = d.n_edges + 3, v2 = d.n_edges + 4;
    out.n_edges = d.n_edges + 5;
    // A: alpha: u merged with p; alpha-1: w merged with s; alpha+1: w';
    // alpha+2: u'
    set_slot(out, {xA, alpha}, uA);
    set_slot(out, {xA, (alpha + 3) % 4}, wA);
    set_slot(out, {xA, (alpha + 1) % 4}, w2);
    set_slot(out, {xA, (alpha + 2) % 4}, u2);
    // p's far end joins uA; s's far end joins wA
    EndRef p_far = other_end(ends, p, {xB, (beta + 1) % 4});
    EndRef s_far = other_end(ends, s_, {xC, (gamma + 2) % 4});
    set_slot(out, p_far, uA);
    set_slot(out, s_far, wA);
    // B': by role, optionally mirrored (reverse cyclic order around beta-1)
    auto bslot = [&](int off) {
      int sl = (beta + off) % 4;
      if (mirror) sl = ((beta - off) % 4 + 4) % 4;
      return EndRef{xB, sl};
    };
    set_slot(out, bslot(3), u2);  // toward A
    set_slot(out, bslot(0), v2);  // toward C'
    set_slot(out, bslot(1), n);   // outer u-strand
    set_slot(out, bslot(2), q);   // outer v-strand
    // C'
    auto cslot = [&](int off) {
      int sl = (gamma + off) % 4;
      if (mirror) sl = ((gamma - off) % 4 + 4) % 4;
      return EndRef{xC, sl};
    };
    set_slot(out, cslot(3), v2);  // toward B'
    set_slot(out, cslot(0), w2);  // toward A
    set_slot(out, cslot(1), r);   // outer v-strand
    set_slot(out, cslot(2), m);   // outer w-strand
    // n and m moved from xA to the new crossings; clear their old ends
    EndRef n_far = other_end(ends, n, {xA, (alpha + 2) % 4});
    EndRef m_far = other_end(ends, m, {xA, (alpha + 1) % 4});
    set_slot(out, n_far, n);
    set_slot(out, m_far, m);
    // over/under: preserve each pair's relation. At B' the v-strand sits on
    // the diagonal of bslot(0).
    out.xings[xB].over_diag = (d.xings[xB].over_diag == beta % 2)
                                  ? bslot(0).slot % 2
                                  : 1 - bslot(0).slot % 2;
    out.xings[xC].over_diag = (d.xings[xC].over_diag == ((gamma + 3) % 4) % 2)
                                  ? cslot(3).slot % 2
                                  : 1 - cslot(3).slot % 2;
    // q and r keep their far ends; their near ends were rewritten above.
    // compact edge ids
    return out;
  };

  std::vector<EdgeId> last_remap;
  auto renumber = [&](LinkDiagram out) -> LinkDiagram {
    std::vector<EdgeId> remap(out.n_edges, -1);
    EdgeId next = 0;
    for (auto& x : out.xings)
      for (int sl = 0; sl < 4; ++sl) {
        EdgeId& e = x.e[sl];
        if (remap[e] < 0) remap[e] = next++;
        e = remap[e];
      }
    for (EdgeId& l : out.loop_edges) {
      if (remap[l] < 0) remap[l] = next++;
      l = remap[l];
    }
    out.n_edges = next;
    last_remap = std::move(remap);
    return out;
  };

  for (bool mirror : {false, true}) {
    LinkDiagram cand = renumber(build(mirror));
    try {
      validate_link(cand);
    } catch (const Error&) {
      continue;
    }
    auto c0 = link_components(d);
    auto c1 = link_components(cand);
    if (c0.count != c1.count) continue;
    if (edge_map) {
      edge_map->assign(d.n_edges, -1);
      for (EdgeId e = 0; e < d.n_edges; ++e) {
        bool dead = e == u || e == v || e == w || e == p || e == s_;
        if (!dead && e < static_cast<EdgeId>(last_remap.size()))
          (*edge_map)[e] = last_remap[e];
      }
    }
    return cand;
  }
  throw Error(ErrorKind::pattern_mismatch, "R3 rewiring failed");
}

LinkDiagram apply_r2plus(const LinkDiagram& d, const R2PlusSite& site) {
  auto ends = edge_ends(d);
  EdgeId e1 = d.xings[site.d1.xing].e[site.d1.slot];
  EdgeId e2 = d.xings[site.d2.xing].e[site.d2.slot];
  if (e1 == e2)
    throw Error(ErrorKind::pattern_mismatch, "R2+ needs distinct edges");
  EndRef far1 = other_end(ends, e1, site.d1);
  EndRef far2 = other_end(ends, e2, site.d2);

  auto build = [&](bool flip) -> LinkDiagram {
    LinkDiagram out = d;
    EdgeId e1a = d.n_edges, e1b = d.n_edges + 1, tip = d.n_edges + 2,
           e2a = d.n_edges + 3, mid = d.n_edges + 4, e2b = d.n_edges + 5;
    out.n_edges = d.n_edges + 6;
    int Y = out.crossing_count();
    int Z = Y + 1;
    out.xings.push_back({});
    out.xings.push_back({});
    // Y near d2's end of e2, Z toward far2
    if (!flip) {
      out.xings[Y].e = {mid, e1a, e2a, tip};
      out.xings[Z].e = {e2b, e1b, mid, tip};
    } else {
      out.xings[Y].e = {mid, tip, e2a, e1a};
      out.xings[Z].e = {e2b, tip, mid, e1b};
    }
    int finger_parity = 1;  // slots {1,3}
    out.xings[Y].over_diag = site.over ? finger_parity : 1 - finger_parity;
    out.xings[Z].over_diag = site.over ? finger_parity : 1 - finger_parity;
    set_slot(out, site.d1, e1b);
    set_slot(out, far1, e1a);
    set_slot(out, site.d2, e2a);
    set_slot(out, far2, e2b);
    return out;
  };

  auto compact = [&](LinkDiagram out) -> LinkDiagram {
    std::vector<EdgeId> remap(out.n_edges, -1);
    EdgeId next = 0;
    for (auto& x : out.xings)
      for (int sl = 0; sl < 4; ++sl) {
        EdgeId& e = x.e[sl];
        if (remap[e] < 0) remap[e] = next++;
        e = remap[e];
      }
    for (EdgeId& l : out.loop_edges) {
      if (remap[l] < 0) remap[l] = next++;
      l = remap[l];
    }
    out.n_edges = next;
    return out;
  };
  for (bool flip : {false, true}) {
    LinkDiagram cand = compact(build(flip));
    try {
      validate_link(cand);
    } catch (const Error&) {
      continue;
    }
    auto c0 = link_components(d);
    auto c1 = link_components(cand);
    if (c0.count != c1.count) continue;
    return cand;
  }
  throw Error(ErrorKind::pattern_mismatch, "R2+ insertion failed");
}

// ---------------------------------------------------------------------------

std::string canonical_key(const LinkDiagram& d) {
  int n_pieces = 0;
  std::vector<int> piece =
      d.crossing_count() ? xing_pieces(d, &n_pieces) : std::vector<int>{};
  auto ends = edge_ends(d);

  auto key_from = [&](EndRef start) -> std::string {
    std::vector<int> xing_label(d.crossing_count(), -1);
    std::vector<int> entry_slot(d.crossing_count(), 0);
    std::vector<EdgeId> edge_label(d.n_edges, -1);
    int next_x = 0, next_e = 0;
    std::vector<EndRef> queue{start};
    xing_label[start.xing] = next_x++;
    entry_slot[start.xing] = start.slot;
    std::ostringstream out;
    std::vector<int> order{start.xing};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      EndRef cur = queue[qi];
      int x = cur.xing;
      for (int off = 0; off < 4; ++off) {
        int s = (entry_slot[x] + off) % 4;
        EdgeId e = d.xings[x].e[s];
        if (edge_label[e] < 0) edge_label[e] = next_e++;
        EndRef o = other_end(ends, e, {x, s});
        if (xing_label[o.xing] < 0) {
          xing_label[o.xing] = next_x++;
          entry_slot[o.xing] = o.slot;
          queue.push_back(o);
          order.push_back(o.xing);
        }
      }
    }
    for (int x : order) {
      out << "[";
      for (int off = 0; off < 4; ++off) {
        int s = (entry_slot[x] + off) % 4;
        out << edge_label[d.xings[x].e[s]] << (off < 3 ? "," : "");
      }
      out << ";" << ((d.xings[x].over_diag + entry_slot[x]) % 2) << "]";
    }
    return out.str();
  };

  std::vector<std::string> piece_keys(n_pieces);
  for (int x = 0; x < d.crossing_count(); ++x) {
    for (int s = 0; s < 4; ++s) {
      std::string k = key_from({x, s});
      int pc = piece[x];
      if (piece_keys[pc].empty() || k < piece_keys[pc]) piece_keys[pc] = k;
    }
  }
  std::sort(piece_keys.begin(), piece_keys.end());
  std::ostringstream out;
  for (const auto& k : piece_keys) out << k << "|";
  out << "L" << d.loop_edges.size();
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

// exhaust R1/R2 reductions, recording move notes
LinkDiagram greedy_reduce(LinkDiagram d, std::vector<std::string>* moves) {
  while (true) {
    auto k1 = r1_sites(d);
    if (!k1.empty()) {
      if (moves)
        moves->push_back("r1 at crossing " + std::to_string(k1.front().xing));
      d = apply_r1(d, k1.front());
      continue;
    }
    auto k2 = r2_sites(d);
    if (!k2.empty()) {
      if (moves)
        moves->push_back("r2 at crossings " +
                         std::to_string(k2.front().d1.xing) + "," +
                         std::to_string(k2.front().d2.xing));
      d = apply_r2(d, k2.front());
      continue;
    }
    return d;
  }
}

}  // namespace

UnlinkResult is_unlink(const LinkDiagram& d, int budget) {
  validate_link(d);
  UnlinkResult res;
  if (d.crossing_count() == 0) {
    res.status = UnlinkResult::Status::verified;
    res.reason = "crossingless";
    return res;
  }
  for (auto& [pair, lk] : linking_numbers(d)) {
    if (lk != 0) {
      res.status = UnlinkResult::Status::refuted;
      res.reason = "linking number " + std::to_string(lk) +
                   " between components " + std::to_string(pair.first) +
                   " and " + std::to_string(pair.second);
      return res;
    }
  }
  {
    int nullity = tricolor_nullity(d);
    int comps = link_components(d).count;
    if (nullity != comps) {
      res.status = UnlinkResult::Status::refuted;
      res.reason = "3-coloring count 3^" + std::to_string(nullity) +
                   " differs from unlink value 3^" + std::to_string(comps);
      return res;
    }
  }

  std::vector<std::string> moves;
  LinkDiagram g = greedy_reduce(d, &moves);
  if (g.crossing_count() == 0) {
    res.status = UnlinkResult::Status::verified;
    res.reason = "greedy reduction";
    res.reduction = std::move(moves);
    return res;
  }

  // bounded search over canonical states
  int cap = d.crossing_count() + 4;
  struct Node {
    LinkDiagram diag;
    std::vector<std::string> moves;
    int depth;
  };
  std::vector<Node> frontier{{g, moves, 0}};
  std::set<std::string> seen{canonical_key(g)};
  size_t expanded = 0;
  const size_t node_cap = 20000;
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (auto& node : frontier) {
      if (node.depth >= budget) continue;
      if (++expanded > node_cap) {
        res.status = UnlinkResult::Status::unknown;
        res.reason = "node budget exhausted";
        return res;
      }
      std::vector<std::pair<LinkDiagram, std::string>> succ;
      for (const auto& s : r3_sites(node.diag)) {
        try {
          succ.push_back({apply_r3(node.diag, s),
                          "r3 at crossings " + std::to_string(s.darts[0].xing) +
                              "," + std::to_string(s.darts[1].xing) + "," +
                              std::to_string(s.darts[2].xing)});
        } catch (const Error&) {
        }
      }
      if (node.diag.crossing_count() + 2 <= cap) {
        for (const auto& s : r2plus_sites(node.diag)) {
          try {
            succ.push_back({apply_r2plus(node.diag, s), "r2+ push"});
          } catch (const Error&) {
          }
        }
      }
      for (auto& [nd, label] : succ) {
        std::vector<std::string> nm = node.moves;
        nm.push_back(label);
        LinkDiagram red = greedy_reduce(nd, &nm);
        if (red.crossing_count() == 0) {
          res.status = UnlinkResult::Status::verified;
          res.reason = "bounded reduction, depth " +
                       std::to_string(node.depth + 1);
          res.reduction = std::move(nm);
          return res;
        }
        std::string key = canonical_key(red);
        if (seen.count(key)) continue;
        seen.insert(key);
        next.push_back({std::move(red), std::move(nm), node.depth + 1});
      }
    }
    frontier = std::move(next);
  }
  res.status = UnlinkResult::Status::unknown;
  res.reason = "depth budget " + std::to_string(budget) + " exhausted";
  return res;
}

}  // namespace stabtrace
