#include "stabtrace/tubing.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace stabtrace {

const MarkedPair* TubingDiagram::find_pair(int index) const {
  for (const auto& p : pairs)
    if (p.index == index) return &p;
  return nullptr;
}

const TubeArc* TubingDiagram::find_arc(int index) const {
  for (const auto& a : arcs)
    if (a.index == index) return &a;
  return nullptr;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  if (ok()) {
    out << "valid\n";
    return out.str();
  }
  for (const auto& v : items) out << v.clause << ": " << v.detail << "\n";
  return out.str();
}

TubingDiagram empty_diagram(Surface s) {
  TubingDiagram d;
  d.surface = std::move(s);
  d.surface.marked.clear();
  return d;
}

void resync_marks(TubingDiagram& d) {
  d.surface.marked.clear();
  for (const auto& p : d.pairs)
    for (VertexId v : p.vertices()) d.surface.set_marked(v, true);
}

ValidationReport validate_diagram(const TubingDiagram& d) {
  ValidationReport r;
  const Surface& s = d.surface;
  std::set<VertexId> all_marked;
  std::set<int> pair_ids;
  for (const auto& p : d.pairs) {
    if (!pair_ids.insert(p.index).second)
      r.items.push_back({"pair-index", "duplicate pair " +
                                            std::to_string(p.index)});
    std::set<VertexId> four;
    for (VertexId v : p.vertices()) {
      if (!s.vertex_valid(v)) {
        r.items.push_back({"pair-vertex", "pair " + std::to_string(p.index) +
                                              " names missing vertex " +
                                              std::to_string(v)});
        continue;
      }
      if (!four.insert(v).second)
        r.items.push_back({"pair-distinct",
                           "pair " + std::to_string(p.index) +
                               " repeats vertex " + std::to_string(v)});
      if (!all_marked.insert(v).second)
        r.items.push_back({"pair-overlap",
                           "vertex " + std::to_string(v) +
                               " belongs to two pairs"});
      if (!s.is_marked(v))
        r.items.push_back({"marked-set", "vertex " + std::to_string(v) +
                                             " not in marked set"});
    }
  }
  for (VertexId v : s.marked)
    if (!all_marked.count(v))
      r.items.push_back({"marked-set", "stale marked vertex " +
                                           std::to_string(v)});

  std::set<int> arc_ids;
  for (const auto& a : d.arcs) {
    std::string tag = "arc " + std::to_string(a.index);
    if (!arc_ids.insert(a.index).second)
      r.items.push_back({"arc-index", "duplicate " + tag});
    const MarkedPair* p = d.find_pair(a.index);
    if (!p) {
      r.items.push_back({"arc-pair", tag + " has no pair"});
      continue;
    }
    if (!path_is_walk(s, a.path)) {
      r.items.push_back({"arc-walk", tag + " is not a walk"});
      continue;
    }
    if (!path_is_simple(s, a.path))
      r.items.push_back({"arc-simple", tag + " revisits a vertex"});
    if (path_source(s, a.path) != p->x_plus ||
        path_target(s, a.path) != p->x_minus)
      r.items.push_back({"arc-endpoints",
                         tag + " must run from x+ to x- of its pair"});
    auto vs = path_vertices(s, a.path);
    for (size_t k = 1; k + 1 < vs.size(); ++k)
      if (s.is_marked(vs[k]))
        r.items.push_back({"arc-interior-marked",
                           tag + " passes through marked vertex " +
                               std::to_string(vs[k]) +
                               " (definition item iv)"});
  }
  for (const auto& p : d.pairs)
    if (!d.find_arc(p.index))
      r.items.push_back({"pair-arc", "pair " + std::to_string(p.index) +
                                         " has no arc"});
  // pairwise disjointness, endpoints included
  for (size_t i = 0; i < d.arcs.size(); ++i) {
    for (size_t j = i + 1; j < d.arcs.size(); ++j) {
      if (!path_is_walk(s, d.arcs[i].path) ||
          !path_is_walk(s, d.arcs[j].path))
        continue;
      auto vi = path_vertices(s, d.arcs[i].path);
      auto vj = path_vertices(s, d.arcs[j].path);
      std::set<VertexId> si(vi.begin(), vi.end());
      for (VertexId v : vj)
        if (si.count(v)) {
          r.items.push_back(
              {"arcs-disjoint", "arcs " + std::to_string(d.arcs[i].index) +
                                    " and " + std::to_string(d.arcs[j].index) +
                                    " share vertex " + std::to_string(v)});
          break;
        }
    }
  }
  return r;
}

void require_valid(const TubingDiagram& d) {
  auto r = validate_diagram(d);
  if (!r.ok())
    throw Error(ErrorKind::invalid_diagram, r.items.front().clause + ", " +
                                                r.items.front().detail);
}

int associated_genus(const TubingDiagram& d) {
  require_valid(d);
  return euler_genus(d.surface).genus + d.pair_count();
}

namespace {

// Checks the new-arc constraints shared by swap and move.
void check_arc_against_marked(const TubingDiagram& d, const Path& arc,
                              VertexId lo, VertexId hi, ErrorKind kind) {
  auto vs = path_vertices(d.surface, arc);
  for (size_t k = 0; k < vs.size(); ++k) {
    bool endpoint = k == 0 || k + 1 == vs.size();
    if (endpoint) continue;
    if (d.surface.is_marked(vs[k]))
      throw Error(kind, "replacement arc passes marked vertex " +
                            std::to_string(vs[k]));
  }
  if (vs.front() != lo || vs.back() != hi)
    throw Error(ErrorKind::wrong_endpoints,
                "arc runs " + std::to_string(vs.front()) + " -> " +
                    std::to_string(vs.back()) + ", expected " +
                    std::to_string(lo) + " -> " + std::to_string(hi));
}

}  // namespace

TubingDiagram tube_swap(const TubingDiagram& d, int i, const Path& beta,
                        CostList* cost) {
  require_valid(d);
  const MarkedPair* p = d.find_pair(i);
  if (!p) throw Error(ErrorKind::invalid_diagram, "no pair " +
                                                      std::to_string(i));
  if (!path_is_simple(d.surface, beta))
    throw Error(ErrorKind::beta_not_disjoint, "beta is not simple");
  check_arc_against_marked(d, beta, p->y_plus, p->y_minus,
                           ErrorKind::beta_not_disjoint);
  // beta must avoid every arc, including arc i
  auto bv = path_vertices(d.surface, beta);
  std::set<VertexId> bset(bv.begin(), bv.end());
  for (const auto& a : d.arcs) {
    for (VertexId v : path_vertices(d.surface, a.path))
      if (bset.count(v))
        throw Error(ErrorKind::beta_not_disjoint,
                    "beta meets arc " + std::to_string(a.index) +
                        " at vertex " + std::to_string(v));
  }

  TubingDiagram out = d;
  for (auto& q : out.pairs) {
    if (q.index != i) continue;
    std::swap(q.x_plus, q.y_plus);
    std::swap(q.x_minus, q.y_minus);
  }
  for (auto& a : out.arcs)
    if (a.index == i) a.path = beta;
  resync_marks(out);
  require_valid(out);
  if (cost) {
    cost->push_back({CostKind::stabilise, "swap"});
    cost->push_back({CostKind::destabilise, "swap"});
  }
  return out;
}

TubingDiagram tube_move(const TubingDiagram& d, int i, const Path& alpha,
                        CostList* cost) {
  require_valid(d);
  const MarkedPair* p = d.find_pair(i);
  if (!p) throw Error(ErrorKind::invalid_diagram, "no pair " +
                                                      std::to_string(i));
  if (!path_is_simple(d.surface, alpha))
    throw Error(ErrorKind::alpha_crosses_other_arc, "alpha is not simple");
  check_arc_against_marked(d, alpha, p->x_plus, p->x_minus,
                           ErrorKind::alpha_crosses_other_arc);
  auto av = path_vertices(d.surface, alpha);
  std::set<VertexId> aset(av.begin(), av.end());
  for (const auto& a : d.arcs) {
    if (a.index == i) continue;  // crossings with the old arc are fine
    for (VertexId v : path_vertices(d.surface, a.path))
      if (aset.count(v))
        throw Error(ErrorKind::alpha_crosses_other_arc,
                    "alpha meets arc " + std::to_string(a.index) +
                        " at vertex " + std::to_string(v));
  }

  TubingDiagram out = d;
  for (auto& a : out.arcs)
    if (a.index == i) a.path = alpha;
  require_valid(out);
  if (cost) {
    cost->push_back({CostKind::stabilise, "move"});
    cost->push_back({CostKind::destabilise, "move"});
  }
  return out;
}

namespace {

struct FirstCrossing {
  int arc_index = -1;
  VertexId vertex = -1;
};

// The crossing of any tube arc with `target` nearest to `near_end` along
// target; ties impossible while arcs stay pairwise disjoint.
std::optional<FirstCrossing> first_crossing(const TubingDiagram& d,
                                            const Path& target,
                                            VertexId near_end) {
  auto tv = path_vertices(d.surface, target);
  if (tv.front() != near_end) std::reverse(tv.begin(), tv.end());
  for (size_t k = 1; k + 1 < tv.size(); ++k) {
    VertexId v = tv[k];
    for (const auto& a : d.arcs) {
      auto av = path_vertices(d.surface, a.path);
      for (size_t m = 1; m + 1 < av.size(); ++m)
        if (av[m] == v) return FirstCrossing{a.index, v};
    }
  }
  return std::nullopt;
}

}  // namespace

TubingDiagram clear_path(const TubingDiagram& d, const Path& target,
                         VertexId near_end, ClearMode mode, CostList* cost,
                         std::vector<Path*> watch, Path* target_out,
                         SubdivisionLog* log) {
  require_valid(d);
  {
    auto tv = path_vertices(d.surface, target);
    if (tv.front() != near_end && tv.back() != near_end)
      throw Error(ErrorKind::invalid_path, "near_end not on target");
  }
  TubingDiagram cur = d;
  Path tgt = target;
  bool moved_any = false;
  int guard = 0;
  while (true) {
    if (++guard > 10000)
      throw Error(ErrorKind::invalid_path, "clear_path failed to terminate");
    auto hit = first_crossing(cur, tgt, near_end);
    if (!hit) break;
    const TubeArc* arc = cur.find_arc(hit->arc_index);
    // collect third-party paths the detour must avoid
    std::vector<const Path*> registry;
    for (const auto& a : cur.arcs) registry.push_back(&a.path);
    std::vector<Path> watch_copies;
    watch_copies.reserve(watch.size());
    for (Path* w : watch) watch_copies.push_back(*w);
    for (const Path& w : watch_copies) registry.push_back(&w);

    Path moved;
    int rounds = 0;
    while (true) {
      try {
        moved = reroute_around_end(cur.surface, arc->path, tgt, hit->vertex,
                                   near_end, registry);
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::needs_refinement) throw;
        if (++rounds > 8)
          throw Error(ErrorKind::budget_exhausted,
                      "clear_path refinement stuck");
        SubdivisionLog round_log;
        auto tv = path_vertices(cur.surface, tgt);
        cur.surface = refine_near(cur.surface, tv, &round_log);
        for (auto& a : cur.arcs) a.path = refresh_path(round_log, a.path);
        tgt = refresh_path(round_log, tgt);
        for (Path* w : watch) *w = refresh_path(round_log, *w);
        if (log) log->append(round_log);
        arc = cur.find_arc(hit->arc_index);
        registry.clear();
        for (const auto& a : cur.arcs) registry.push_back(&a.path);
        watch_copies.clear();
        for (Path* w : watch) watch_copies.push_back(*w);
        for (const Path& w : watch_copies) registry.push_back(&w);
      }
    }

    if (mode == ClearMode::costed) {
      cur = tube_move(cur, hit->arc_index, moved, cost);
    } else {
      for (auto& a : cur.arcs)
        if (a.index == hit->arc_index) a.path = moved;
      require_valid(cur);
    }
    moved_any = true;
  }
  if (mode == ClearMode::isotopy && cost)
    cost->push_back({CostKind::isotopy, "arc-slide"});
  (void)moved_any;
  if (target_out) *target_out = tgt;
  return cur;
}

// ---------------------------------------------------------------------------
// `.tub` io.

TubingDiagram parse_tub(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::ostringstream surf_block;
  std::vector<MarkedPair> pairs;
  std::vector<TubeArc> arcs;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    std::string body = hash == std::string::npos ? line : line.substr(0, hash);
    std::istringstream ls(body);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "pair") {
      MarkedPair p;
      std::string kx, ky, kxm, kym;
      if (!(ls >> p.index >> kx >> p.x_plus >> ky >> p.y_plus >> kxm >>
            p.x_minus >> kym >> p.y_minus) ||
          kx != "x+" || ky != "y+" || kxm != "x-" || kym != "y-")
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(lineno) + ": bad pair record");
      pairs.push_back(p);
    } else if (kw == "arc") {
      std::string itok;
      if (!(ls >> itok))
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(lineno) + ": bad arc record");
      if (!itok.empty() && itok.back() == ':') itok.pop_back();
      TubeArc a;
      try {
        a.index = std::stoi(itok);
      } catch (...) {
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(lineno) + ": bad arc index");
      }
      DartId dart;
      while (ls >> dart) a.path.darts.push_back(dart);
      arcs.push_back(std::move(a));
    } else {
      surf_block << body << "\n";
    }
  }
  TubingDiagram d;
  d.surface = parse_surf(surf_block.str());
  d.pairs = std::move(pairs);
  d.arcs = std::move(arcs);
  resync_marks(d);
  return d;
}

std::string write_tub(const TubingDiagram& d) {
  std::ostringstream out;
  out << write_surf(d.surface);
  for (const auto& p : d.pairs)
    out << "pair " << p.index << " x+ " << p.x_plus << " y+ " << p.y_plus
        << " x- " << p.x_minus << " y- " << p.y_minus << "\n";
  for (const auto& a : d.arcs) {
    out << "arc " << a.index << ":";
    for (DartId dart : a.path.darts) out << " " << dart;
    out << "\n";
  }
  return out.str();
}

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t diagram_digest(const TubingDiagram& d) {
  return fnv1a(write_tub(d) + d.immersion_label);
}

}  // namespace stabtrace
