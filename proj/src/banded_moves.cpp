#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "stabtrace/banded.hpp"
#include "stabtrace/banded_detail.hpp"

namespace stabtrace {

using detail::band_events;
using detail::edge_features;
using detail::Feature;
using detail::own_param;

namespace {

Error mismatch(const std::string& msg) {
  return Error(ErrorKind::pattern_mismatch, msg);
}

Band& band_ref(BandedLink& b, int id) {
  for (auto& band : b.bands)
    if (band.id == id) return band;
  throw mismatch("no band " + std::to_string(id));
}

bool edge_is_open(const BandedLink& b, EdgeId e) {
  return !b.diagram.is_loop_edge(e);
}

// other bands' references to band `id`
bool band_is_referenced(const BandedLink& b, int id) {
  for (const auto& band : b.bands) {
    if (band.id == id) continue;
    for (const auto& it : band.core)
      if (it.kind == 'b' && it.id == id) return true;
  }
  return false;
}

// features on `e` other than the two named band ends, inside (lo, hi)
bool span_has_features(const BandedLink& b, EdgeId e, double lo, double hi,
                       const std::set<std::pair<int, int>>& ignore_ends,
                       char covered_side = 0) {
  auto feats = edge_features(b);
  auto it = feats.find(e);
  if (it == feats.end()) return false;
  for (const auto& f : it->second) {
    if (f.pos <= lo || f.pos >= hi) continue;
    if (f.is_attach) {
      if (ignore_ends.count({f.band, f.end})) continue;
      if (covered_side) {
        const Band* band = b.find_band(f.band);
        char side = f.end == 0 ? band->end0.side : band->end1.side;
        if (side != covered_side) continue;  // hangs off the other side
      }
      return true;
    }
    return true;  // ribbon passages pierce both sides
  }
  return false;
}

// events (own items and foreign passages) along a band's core, as params
std::vector<double> band_param_events(const BandedLink& bl, const Band& b) {
  std::vector<double> out;
  for (size_t k = 0; k < b.core.size(); ++k) out.push_back(own_param(b, k));
  for (const auto& other : bl.bands) {
    if (other.id == b.id) continue;
    for (const auto& it : other.core)
      if (it.kind == 'b' && it.id == b.id) out.push_back(it.pos);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// a fresh core parameter on `target` strictly before/after `at`
double nudge_param(const BandedLink& bl, const Band& target, double at,
                   bool before) {
  auto ev = band_param_events(bl, target);
  double lo = 0.0, hi = 1.0;
  for (double p : ev) {
    if (p < at) lo = std::max(lo, p);
    if (p > at) hi = std::min(hi, p);
  }
  return before ? (lo + at) / 2.0 : (at + hi) / 2.0;
}

void surface_connectivity_guard(const BandedLink& b) {
  auto comp = link_components(b.diagram);
  int n = comp.count;
  if (n == 0) return;
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  for (const auto& band : b.bands)
    parent[find(comp.edge_comp[band.end0.edge])] =
        find(comp.edge_comp[band.end1.edge]);
  std::set<int> roots;
  for (int i = 0; i < n; ++i) roots.insert(find(i));
  if (roots.size() > 1)
    throw Error(ErrorKind::would_disconnect,
                "surface would split into " + std::to_string(roots.size()) +
                    " pieces");
}

BandedLink do_slide(const BandedLink& b0, const BandMove& m) {
  BandedLink b = b0;
  Band& mover = band_ref(b, m.band);
  if (m.end != 0 && m.end != 1) throw mismatch("band end must be 0 or 1");
  BandAttach& a = m.end == 0 ? mover.end0 : mover.end1;
  auto feats = edge_features(b);
  auto& fs = feats[a.edge];
  int self = -1;
  for (size_t i = 0; i < fs.size(); ++i)
    if (fs[i].is_attach && fs[i].band == m.band && fs[i].end == m.end)
      self = static_cast<int>(i);
  if (self < 0) throw mismatch("attachment not found");
  bool loop = !edge_is_open(b, a.edge);
  int n = static_cast<int>(fs.size());
  int next = self + m.dir;
  if (next < 0 || next >= n) {
    if (!loop)
      throw mismatch("slide would pass an original crossing");
    next = (next + n) % n;
  }
  if (next == self) throw mismatch("no feature to slide past");
  const Feature f = fs[next];
  if (f.band == m.band)
    throw mismatch("cannot slide past the band's own data");

  // new position: strictly beyond f, before the following feature
  int beyond = next + m.dir;
  double new_pos;
  bool wrapped_beyond = false;
  if (beyond < 0 || beyond >= n) {
    if (!loop) {
      new_pos = m.dir > 0 ? (f.pos + 1.0) / 2.0 : f.pos / 2.0;
    } else {
      beyond = ((beyond % n) + n) % n;
      wrapped_beyond = true;
      double q = fs[beyond].pos;
      new_pos = std::fmod((f.pos + q + 1.0) / 2.0, 1.0);
    }
  } else {
    double q = fs[beyond].pos;
    if ((m.dir > 0 && q > f.pos) || (m.dir < 0 && q < f.pos))
      new_pos = (f.pos + q) / 2.0;
    else
      new_pos = std::fmod((f.pos + q + 1.0) / 2.0, 1.0);
  }
  (void)wrapped_beyond;

  // The toggle calculus. Model the edge as running east; name the sides of
  // the hopped feature's strand-leg so that `west_name` is the side facing
  // smaller positions. The end sits on S_before before the hop; the record
  // a hop creates has the core approaching from the new end's side when the
  // moving end is end0, and from the body's side when it is end1.
  auto flip = [](char s) { return s == 'l' ? 'r' : 'l'; };
  char west_name;
  bool interacts = true;
  if (f.is_attach) {
    const Band& other = *b.find_band(f.band);
    char oside = f.end == 0 ? other.end0.side : other.end1.side;
    if (oside != a.side) interacts = false;  // hangs off the other face
    west_name = ((oside == 'l') == (f.end == 0)) ? 'l' : 'r';
  } else {
    const Band& other = *b.find_band(f.band);
    char ofrom = other.core[f.item_idx].from;
    west_name = ofrom == 'l' ? 'r' : 'l';
  }
  if (interacts) {
    char s_before = m.dir > 0 ? west_name : flip(west_name);
    char would_add = m.end == 0 ? flip(s_before) : s_before;
    bool removed = false;
    if (!mover.core.empty()) {
      const CoreItem& adj =
          m.end == 0 ? mover.core.front() : mover.core.back();
      bool matches = adj.kind == 'b' && adj.id == f.band &&
                     adj.from == flip(would_add);
      if (matches) {
        // the record being undone must sit where this hop would have put
        // it: adjacent to the hopped end or item along the target band
        const Band& other = *b.find_band(f.band);
        auto ev = band_param_events(b, other);
        if (f.is_attach) {
          for (double p : ev)
            if (f.end == 0 ? p < adj.pos : p > adj.pos) matches = false;
        } else {
          double at = own_param(other, f.item_idx);
          double lo = std::min(at, adj.pos), hi = std::max(at, adj.pos);
          for (double p : ev)
            if (p > lo && p < hi) matches = false;
        }
      }
      if (matches) {
        if (m.end == 0)
          mover.core.erase(mover.core.begin());
        else
          mover.core.pop_back();
        removed = true;
      }
    }
    if (!removed) {
      const Band& other = *b.find_band(f.band);
      CoreItem it;
      it.kind = 'b';
      it.id = f.band;
      it.over = !m.under;
      it.from = would_add;
      double at;
      bool before;
      if (f.is_attach) {
        at = f.end == 0 ? 1e-9 : 1.0 - 1e-9;
        before = f.end != 0;
      } else {
        at = own_param(other, f.item_idx);
        before = a.side == other.core[f.item_idx].from;
      }
      it.pos = nudge_param(b, other, at, before);
      if (m.end == 0)
        mover.core.insert(mover.core.begin(), it);
      else
        mover.core.push_back(it);
    }
  }
  a.pos = new_pos;
  return b;
}

BandedLink do_swim(const BandedLink& b0, const BandMove& m) {
  BandedLink b = b0;
  Band& band = band_ref(b, m.band);
  if (m.insert_first) {
    if (m.core_index < 0 ||
        m.core_index > static_cast<int>(band.core.size()))
      throw mismatch("swim insert index out of range");
    const CoreItem& f = *m.insert_first;
    const CoreItem& s = *m.insert_second;
    if (f.kind != s.kind || f.id != s.id || f.over != s.over ||
        f.from == s.from)
      throw mismatch("swim insert pair must cancel");
    if (f.kind == 'e') {
      if (f.id < 0 || f.id >= b.diagram.n_edges)
        throw mismatch("swim target edge missing");
    } else if (!b.find_band(f.id) || f.id == m.band) {
      throw mismatch("swim target band missing");
    }
    double lo = std::min(f.pos, s.pos), hi = std::max(f.pos, s.pos);
    char covered = f.pos < s.pos ? (f.from == 'l' ? 'r' : 'l')
                                 : (s.from == 'l' ? 'r' : 'l');
    if (f.kind == 'e') {
      if (span_has_features(b, f.id, lo, hi, {}, covered))
        throw mismatch("swim span is not clear");
    } else {
      for (double p : band_param_events(b, *b.find_band(f.id)))
        if (p > lo && p < hi) throw mismatch("swim span is not clear");
    }
    band.core.insert(band.core.begin() + m.core_index,
                     {f.pos < s.pos ? f : s});
    band.core.insert(band.core.begin() + m.core_index + 1,
                     {f.pos < s.pos ? s : f});
    return b;
  }

  int k = m.core_index;
  if (k < 0 || k + 1 >= static_cast<int>(band.core.size()))
    throw mismatch("swim index out of range");
  const CoreItem i1 = band.core[k];
  const CoreItem i2 = band.core[k + 1];
  if (i1.kind != i2.kind || i1.id != i2.id || i1.over != i2.over ||
      i1.from == i2.from)
    throw mismatch("records do not form a cancelling pair");
  double lo = std::min(i1.pos, i2.pos), hi = std::max(i1.pos, i2.pos);
  char covered = i1.pos < i2.pos ? (i1.from == 'l' ? 'r' : 'l')
                                 : (i2.from == 'l' ? 'r' : 'l');
  if (i1.kind == 'e') {
    if (span_has_features(b, i1.id, lo, hi, {}, covered))
      throw mismatch("swim span is not clear");
  } else {
    auto ev = band_param_events(b, *b.find_band(i1.id));
    for (double p : ev)
      if (p > lo && p < hi && p != i1.pos && p != i2.pos)
        throw mismatch("swim span is not clear");
  }
  // the mover's stretch between the two records must carry nothing else
  {
    double mlo = own_param(band, k), mhi = own_param(band, k + 1);
    for (const auto& other : b.bands) {
      if (other.id == band.id) continue;
      for (const auto& it : other.core)
        if (it.kind == 'b' && it.id == band.id && it.pos > mlo &&
            it.pos < mhi)
          throw mismatch("another band pins the swimming stretch");
    }
  }
  band.core.erase(band.core.begin() + k, band.core.begin() + k + 2);
  return b;
}

// remap all band references through a splice edge map
void remap_band_edges(BandedLink& b, const std::vector<EdgeId>& edge_map) {
  auto remap = [&](EdgeId& e) {
    if (e < 0 || e >= static_cast<EdgeId>(edge_map.size()) ||
        edge_map[e] < 0)
      throw Error(ErrorKind::pattern_mismatch,
                  "band data clings to a vanished edge");
    e = edge_map[e];
  };
  for (auto& band : b.bands) {
    remap(band.end0.edge);
    remap(band.end1.edge);
    for (auto& it : band.core)
      if (it.kind == 'e') remap(it.id);
  }
}

// rebuild component flags after a diagram rewrite
void refresh_flags(BandedLink& b, const LinkDiagram& old_diagram,
                   const std::vector<char>& old_flags,
                   const std::vector<EdgeId>& edge_map) {
  auto old_comp = link_components(old_diagram);
  auto new_comp = link_components(b.diagram);
  std::vector<char> flags(new_comp.count, '?');
  for (EdgeId e = 0; e < old_diagram.n_edges; ++e) {
    if (edge_map[e] < 0) continue;
    flags[new_comp.edge_comp[edge_map[e]]] = old_flags[old_comp.edge_comp[e]];
  }
  for (char& f : flags)
    if (f == '?')
      throw Error(ErrorKind::pattern_mismatch,
                  "component lost its flag across the move");
  b.comp_flags = std::move(flags);
}

BandedLink do_cancel_min(const BandedLink& b0, const BandMove& m) {
  BandedLink b = b0;
  auto comp = link_components(b.diagram);
  if (m.u_component < 0 || m.u_component >= comp.count)
    throw mismatch("no such component");
  if (b.comp_flags[m.u_component] != 'U')
    throw mismatch("component is not a minimum circle");
  // must be a crossing-free circle: a single loop edge
  EdgeId loop = -1;
  for (EdgeId l : b.diagram.loop_edges)
    if (comp.edge_comp[l] == m.u_component) loop = l;
  if (loop < 0) throw mismatch("minimum circle carries crossings");

  const Band& band = *b.find_band(m.band);
  if (!b.find_band(m.band)) throw mismatch("no such band");
  if (!band.core.empty() || band.framing != 0)
    throw mismatch("cancelling band must be untwisted with an empty core");
  int ends_on_u = 0;
  bool ours = false;
  for (const auto& other : b.bands) {
    for (int e = 0; e < 2; ++e) {
      const BandAttach& a = e == 0 ? other.end0 : other.end1;
      if (a.edge == loop) {
        ends_on_u++;
        if (other.id == m.band) ours = true;
      }
    }
    for (const auto& it : other.core)
      if (it.kind == 'e' && it.id == loop)
        throw mismatch("a ribbon passes over the minimum circle");
  }
  if (ends_on_u != 1 || !ours)
    throw mismatch(
        "minimum circle must carry exactly the cancelling band's end");
  EdgeId other_edge = band.end0.edge == loop ? band.end1.edge
                                             : band.end0.edge;
  if (comp.edge_comp[other_edge] == m.u_component)
    throw mismatch("band returns to the minimum circle");
  if (band_is_referenced(b, m.band))
    throw mismatch("another band crosses the cancelling band");

  // remove the band, then the circle; remaining edges shift down by one
  int band_id = m.band;
  b.bands.erase(std::remove_if(b.bands.begin(), b.bands.end(),
                               [&](const Band& x) { return x.id == band_id; }),
                b.bands.end());
  std::vector<EdgeId> edge_map(b.diagram.n_edges);
  for (EdgeId e = 0; e < b.diagram.n_edges; ++e)
    edge_map[e] = e < loop ? e : (e == loop ? -1 : e - 1);
  LinkDiagram old_diagram = b.diagram;
  std::vector<char> old_flags = b.comp_flags;
  b.diagram.n_edges--;
  auto& loops = b.diagram.loop_edges;
  loops.erase(std::remove(loops.begin(), loops.end(), loop), loops.end());
  for (EdgeId& l : loops)
    if (l > loop) l--;
  for (auto& x : b.diagram.xings)
    for (auto& e : x.e)
      if (e > loop) e--;
  remap_band_edges(b, edge_map);
  refresh_flags(b, old_diagram, old_flags, edge_map);
  return b;
}

// a clean span with both ends of `band` on one edge; returns false when the
// pattern is absent
bool same_edge_clean_span(const BandedLink& b, const Band& band,
                          bool allow_one_end_inside, int* inside_band,
                          int* inside_end) {
  if (band.end0.edge != band.end1.edge) return false;
  if (band.end0.side != band.end1.side) return false;
  if (!band.core.empty() || band.framing != 0) return false;
  EdgeId e = band.end0.edge;
  double lo = std::min(band.end0.pos, band.end1.pos);
  double hi = std::max(band.end0.pos, band.end1.pos);
  auto feats = edge_features(b);
  int inside = 0;
  int ib = -1, ie = -1;
  for (const auto& f : feats[e]) {
    if (f.pos <= lo || f.pos >= hi) continue;
    if (!f.is_attach) return false;  // ribbon passage in the span
    if (f.band == band.id) continue;
    const Band* other = b.find_band(f.band);
    char oside = f.end == 0 ? other->end0.side : other->end1.side;
    if (oside != band.end0.side) continue;  // hangs off the other face
    inside++;
    ib = f.band;
    ie = f.end;
  }
  if (allow_one_end_inside) {
    if (inside != 1) return false;
    if (inside_band) *inside_band = ib;
    if (inside_end) *inside_end = ie;
    return true;
  }
  return inside == 0;
}

BandedLink do_cancel_max(const BandedLink& b0, const BandMove& m) {
  BandedLink b = b0;
  const Band& band = *[&] {
    const Band* p = b.find_band(m.band);
    if (!p) throw mismatch("no such band");
    return p;
  }();
  if (!same_edge_clean_span(b, band, false, nullptr, nullptr))
    throw mismatch("band is not in the cancelling position");
  if (band_is_referenced(b, m.band))
    throw mismatch("another band crosses the cancelling band");
  if (b.maxima < 2)
    throw mismatch("cancelling the last maximum would leave no caps");
  int band_id = m.band;
  b.bands.erase(std::remove_if(b.bands.begin(), b.bands.end(),
                               [&](const Band& x) { return x.id == band_id; }),
                b.bands.end());
  b.maxima--;
  return b;
}

BandedLink do_stabilise(const BandedLink& b0, const BandMove& m) {
  BandedLink b = b0;
  if (m.edge < 0 || m.edge >= b.diagram.n_edges)
    throw mismatch("no such edge");
  if (!(m.pos > 0.0 && m.pos < 1.0))
    throw mismatch("stabilisation position out of range");
  auto feats = edge_features(b);
  double q = 1.0;
  for (const auto& f : feats[m.edge]) {
    if (f.pos == m.pos) throw mismatch("site collides with a feature");
    if (f.pos > m.pos) {
      q = f.pos;
      break;
    }
  }
  double step = (q - m.pos) / 5.0;
  int next_id = 0;
  for (const auto& band : b.bands) next_id = std::max(next_id, band.id + 1);
  Band A, B;
  A.id = next_id;
  B.id = next_id + 1;
  A.end0 = {m.edge, m.pos + 1 * step, 'l'};
  A.end1 = {m.edge, m.pos + 3 * step, 'l'};
  B.end0 = {m.edge, m.pos + 2 * step, 'l'};
  B.end1 = {m.edge, m.pos + 4 * step, 'l'};
  // the dual pattern: B threads the bridge, passing under A's far leg
  B.core.push_back({'b', A.id, 0.5, false, 'r'});
  b.bands.push_back(A);
  b.bands.push_back(B);
  return b;
}

BandedLink do_destabilise(const BandedLink& b0, const BandMove& m) {
  BandedLink b = b0;
  const Band* A = b.find_band(m.band);
  const Band* B = b.find_band(m.band2);
  if (!A || !B || m.band == m.band2) throw mismatch("need two distinct bands");
  int ib = -1, ie = -1;
  if (!same_edge_clean_span(b, *A, true, &ib, &ie))
    throw mismatch("first band is not in the dual-band position");
  if (ib != m.band2)
    throw mismatch("the threading end belongs to another band");
  // B's other end must sit outside A's span
  const BandAttach& outside = ie == 0 ? B->end1 : B->end0;
  if (outside.edge == A->end0.edge) {
    double lo = std::min(A->end0.pos, A->end1.pos);
    double hi = std::max(A->end0.pos, A->end1.pos);
    if (outside.pos > lo && outside.pos < hi)
      throw mismatch("both ends of the threading band sit inside the span");
  }
  for (const auto& band : b.bands) {
    for (const auto& it : band.core) {
      if (it.kind != 'b') continue;
      if (it.id == m.band && band.id != m.band2)
        throw mismatch("another band crosses the bridge band");
      if (it.id == m.band2) throw mismatch("another band crosses the pair");
    }
  }
  int a_refs = 0;
  for (const auto& it : B->core)
    if (it.kind == 'b' && it.id == m.band) a_refs++;
  if (a_refs != 1)
    throw mismatch("the threading band must pass the bridge exactly once");
  BandedLink trial = b;
  int i1 = m.band, i2 = m.band2;
  trial.bands.erase(
      std::remove_if(trial.bands.begin(), trial.bands.end(),
                     [&](const Band& x) { return x.id == i1 || x.id == i2; }),
      trial.bands.end());
  surface_connectivity_guard(trial);
  return trial;
}

BandedLink do_reidemeister(const BandedLink& b0, const BandMove& m) {
  BandedLink b = b0;
  std::vector<int> affected;
  std::vector<EdgeId> edge_map;
  LinkDiagram old_diagram = b.diagram;
  std::vector<char> old_flags = b.comp_flags;
  LinkDiagram next;
  if (m.kind == BandMove::Kind::r1) {
    auto sites = r1_sites(b.diagram);
    if (m.site_index < 0 || m.site_index >= static_cast<int>(sites.size()))
      throw mismatch("no R1 site with that index");
    affected = {sites[m.site_index].xing};
    next = apply_r1(b.diagram, sites[m.site_index], &edge_map);
  } else if (m.kind == BandMove::Kind::r2) {
    auto sites = r2_sites(b.diagram);
    if (m.site_index < 0 || m.site_index >= static_cast<int>(sites.size()))
      throw mismatch("no R2 site with that index");
    affected = {sites[m.site_index].d1.xing, sites[m.site_index].d2.xing};
    next = apply_r2(b.diagram, sites[m.site_index], &edge_map);
  } else {
    auto sites = r3_sites(b.diagram);
    if (m.site_index < 0 || m.site_index >= static_cast<int>(sites.size()))
      throw mismatch("no R3 site with that index");
    for (const auto& dart : sites[m.site_index].darts)
      affected.push_back(dart.xing);
    next = apply_r3(b.diagram, sites[m.site_index], &edge_map);
  }
  // band data may not touch any edge incident to the affected crossings
  std::set<EdgeId> hot;
  for (int x : affected)
    for (EdgeId e : old_diagram.xings[x].e) hot.insert(e);
  auto feats = edge_features(b);
  for (EdgeId e : hot)
    if (feats.count(e) && !feats[e].empty())
      throw mismatch("band data too close to the Reidemeister site");
  b.diagram = std::move(next);
  remap_band_edges(b, edge_map);
  refresh_flags(b, old_diagram, old_flags, edge_map);
  return b;
}

}  // namespace

namespace {

// A move must leave a presentation the record model can realise: the band
// surgery stays planar and still yields one circle per declared maximum.
void realization_guard(const BandedLink& b) {
  LinkDiagram resolved = resolve_bands(b);
  try {
    validate_link(resolved);
  } catch (const Error& e) {
    throw Error(ErrorKind::pattern_mismatch,
                std::string("move leaves an unrealizable presentation (") +
                    e.what() + ")");
  }
  int comps = link_components(resolved).count;
  if (comps != b.maxima)
    throw Error(ErrorKind::pattern_mismatch,
                "move leaves " + std::to_string(comps) +
                    " surgered circles for " + std::to_string(b.maxima) +
                    " maxima");
}

}  // namespace

BandedLink apply_move(const BandedLink& b, const BandMove& m) {
  BandedLink out;
  switch (m.kind) {
    case BandMove::Kind::slide:
      out = do_slide(b, m);
      break;
    case BandMove::Kind::swim:
      out = do_swim(b, m);
      break;
    case BandMove::Kind::cancel_min:
      out = do_cancel_min(b, m);
      break;
    case BandMove::Kind::cancel_max:
      out = do_cancel_max(b, m);
      break;
    case BandMove::Kind::stabilise:
      out = do_stabilise(b, m);
      break;
    case BandMove::Kind::destabilise:
      out = do_destabilise(b, m);
      break;
    case BandMove::Kind::r1:
    case BandMove::Kind::r2:
    case BandMove::Kind::r3:
      out = do_reidemeister(b, m);
      break;
    case BandMove::Kind::planar_iso:
      out = b;
      break;
  }
  validate_link(out.diagram);
  if (m.kind != BandMove::Kind::planar_iso) realization_guard(out);
  return out;
}

RunResult run_script(const BandedLink& b, const std::vector<BandMove>& moves) {
  RunResult res;
  res.final = b;
  for (size_t i = 0; i < moves.size(); ++i) {
    try {
      res.final = apply_move(res.final, moves[i]);
    } catch (const Error& e) {
      throw Error(e.kind(), "step " + std::to_string(i + 1) + ": " + e.what());
    }
    res.per_step.push_back(stats(res.final));
    if (moves[i].kind == BandMove::Kind::destabilise) res.destab_count++;
  }
  return res;
}

BandedLink mirror_banded(const BandedLink& b) {
  BandedLink out = b;
  for (auto& x : out.diagram.xings) x.over_diag ^= 1;
  for (auto& band : out.bands) {
    band.framing = -band.framing;
    for (auto& it : band.core) it.over = !it.over;
  }
  return out;
}

BandMove mirror_move(const BandMove& m) {
  BandMove out = m;
  if (m.kind == BandMove::Kind::slide) out.under = !m.under;
  if (m.kind == BandMove::Kind::swim && m.insert_first) {
    out.insert_first->over = !m.insert_first->over;
    out.insert_second->over = !m.insert_second->over;
  }
  return out;
}

}  // namespace stabtrace
