#include "stabtrace/shadow.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace stabtrace {

std::vector<int> genus_profile(const Certificate& c) {
  std::vector<int> out{c.start_genus};
  for (const auto& t : c.trace) out.push_back(t.genus_after);
  return out;
}

std::string render_trace(const Certificate& c) {
  std::ostringstream out;
  out << "events=" << c.trace.size() << " genus=" << c.start_genus << "\n";
  if (c.trace.empty()) return out.str();
  for (const auto& t : c.trace) {
    switch (t.kind) {
      case TraceKind::stabilise:
        out << "STAB";
        break;
      case TraceKind::destabilise:
        out << "DESTAB";
        break;
      case TraceKind::isotopy:
        out << "ISO " << t.label;
        break;
    }
    out << " genus=" << t.genus_after << "\n";
  }
  out << "max_genus=" << c.max_genus << " bound=" << c.bound
      << " ok=" << (c.ok ? "true" : "false") << "\n";
  return out.str();
}

namespace {

enum class Role { x_plus, y_plus, x_minus, y_minus };

struct Slot {
  int pair = -1;
  Role role = Role::x_plus;
};

std::optional<Slot> locate(const TubingDiagram& d, VertexId v) {
  for (const auto& p : d.pairs) {
    if (p.x_plus == v) return Slot{p.index, Role::x_plus};
    if (p.y_plus == v) return Slot{p.index, Role::y_plus};
    if (p.x_minus == v) return Slot{p.index, Role::x_minus};
    if (p.y_minus == v) return Slot{p.index, Role::y_minus};
  }
  return std::nullopt;
}

bool is_plus(Role r) { return r == Role::x_plus || r == Role::y_plus; }

}  // namespace

WhitneyCase classify_whitney(const TubingDiagram& d, const Path& arc1,
                             const Path& arc2) {
  const Surface& s = d.surface;
  if (!path_is_simple(s, arc1) || !path_is_simple(s, arc2))
    throw Error(ErrorKind::no_case_matches, "whitney arcs must be simple");
  struct End {
    VertexId v;
    Slot slot;
  };
  auto ends_of = [&](const Path& p) -> std::pair<End, End> {
    VertexId a = path_source(s, p), b = path_target(s, p);
    auto sa = locate(d, a), sb = locate(d, b);
    if (!sa || !sb)
      throw Error(ErrorKind::semantics_error,
                  "whitney arc endpoint is not a marked vertex");
    return {{a, *sa}, {b, *sb}};
  };
  auto [a1, b1] = ends_of(arc1);
  auto [a2, b2] = ends_of(arc2);
  std::vector<End> ends{a1, b1, a2, b2};
  std::vector<End> plus, minus;
  for (const End& e : ends)
    (is_plus(e.slot.role) ? plus : minus).push_back(e);
  if (plus.size() != 2 || minus.size() != 2)
    throw Error(ErrorKind::no_case_matches,
                "endpoints must split into one positive and one negative "
                "double point");
  if (plus[0].slot.pair != plus[1].slot.pair ||
      plus[0].slot.role == plus[1].slot.role)
    throw Error(ErrorKind::no_case_matches,
                "positive endpoints are not the two preimages of one double "
                "point");
  if (minus[0].slot.pair != minus[1].slot.pair ||
      minus[0].slot.role == minus[1].slot.role)
    throw Error(ErrorKind::no_case_matches,
                "negative endpoints are not the two preimages of one double "
                "point");
  int i = plus[0].slot.pair;
  int j = minus[0].slot.pair;

  // each arc must join a plus endpoint to a minus endpoint
  auto role_of = [&](const Path& p, bool source) {
    VertexId v = source ? path_source(s, p) : path_target(s, p);
    return *locate(d, v);
  };
  Slot s1a = role_of(arc1, true), s1b = role_of(arc1, false);
  if (is_plus(s1a.role) == is_plus(s1b.role))
    throw Error(ErrorKind::no_case_matches,
                "an arc joins two same-sign preimages");

  // orient both arcs to start at their plus endpoint
  Path p1 = is_plus(s1a.role) ? arc1 : path_reversed(s, arc1);
  Path p2 = is_plus(role_of(arc2, true).role) ? arc2 : path_reversed(s, arc2);

  WhitneyCase w;
  w.i = i;
  w.j = j;
  Slot p1_start = *locate(d, path_source(s, p1));
  Path xarc = p1_start.role == Role::x_plus ? p1 : p2;
  Path yarc = p1_start.role == Role::x_plus ? p2 : p1;
  if (locate(d, path_source(s, xarc))->role != Role::x_plus ||
      locate(d, path_source(s, yarc))->role != Role::y_plus)
    throw Error(ErrorKind::no_case_matches, "plus endpoints mismatched");
  Role xend = locate(d, path_target(s, xarc))->role;
  Role yend = locate(d, path_target(s, yarc))->role;
  w.xarc = xarc;
  w.yarc = yarc;
  if (xend == Role::x_minus && yend == Role::y_minus)
    w.case_no = (i == j) ? 1 : 3;
  else if (xend == Role::y_minus && yend == Role::x_minus)
    w.case_no = (i == j) ? 2 : 4;
  else
    throw Error(ErrorKind::no_case_matches, "endpoint pattern inconsistent");
  return w;
}

// ---------------------------------------------------------------------------

ShadowRun::ShadowRun(int genus, int declared_bound)
    : declared_bound_(declared_bound) {
  // the standard closed surface, refined until the skeleton has room for
  // marked points and corridors (at least two rounds, at least 40 vertices)
  Surface s = standard_surface(genus, 0);
  int rounds = 0;
  while (rounds < 2 || s.vertex_count() < 40) {
    s = refine_round(s, nullptr);
    rounds++;
  }
  diagram_ = empty_diagram(std::move(s));
  start_genus_ = euler_genus(diagram_.surface).genus;
  start_pairs_ = 0;
  genus_ = max_genus_ = start_genus_;
}

ShadowRun::ShadowRun(TubingDiagram initial, int declared_bound)
    : diagram_(std::move(initial)), declared_bound_(declared_bound) {
  require_valid(diagram_);
  start_pairs_ = diagram_.pair_count();
  start_genus_ = associated_genus(diagram_);
  genus_ = max_genus_ = start_genus_;
  for (const auto& p : diagram_.pairs)
    next_pair_ = std::max(next_pair_, p.index + 1);
}

Path ShadowRun::expand(const std::vector<DartId>& dartlist) const {
  return refresh_path(log_, Path{dartlist});
}

void ShadowRun::emit(TraceKind kind, const std::string& label) {
  if (kind == TraceKind::stabilise) genus_++;
  if (kind == TraceKind::destabilise) genus_--;
  max_genus_ = std::max(max_genus_, genus_);
  trace_.push_back({kind, label, genus_, diagram_digest(diagram_)});
}

void ShadowRun::emit_costs(const CostList& costs) {
  for (const auto& c : costs) {
    switch (c.kind) {
      case CostKind::stabilise:
        emit(TraceKind::stabilise, c.label);
        break;
      case CostKind::destabilise:
        emit(TraceKind::destabilise, c.label);
        break;
      case CostKind::isotopy:
        emit(TraceKind::isotopy, c.label);
        break;
    }
  }
}

void ShadowRun::apply(const HomotopyEvent& e) {
  // events apply transactionally: a rejected event leaves the run untouched
  ShadowRun scratch = *this;
  scratch.current_line_ = e.line;
  switch (e.kind) {
    case HomotopyEvent::Kind::isotopy:
      scratch.apply_isotopy(e);
      break;
    case HomotopyEvent::Kind::finger:
      scratch.apply_finger(e);
      break;
    case HomotopyEvent::Kind::whitney:
      scratch.apply_whitney(e);
      break;
  }
  require_valid(scratch.diagram_);
  int surface_genus = euler_genus(scratch.diagram_.surface).genus;
  if (scratch.genus_ != surface_genus + scratch.diagram_.pair_count())
    throw Error(ErrorKind::bound_violated,
                "genus ledger out of sync after line " +
                    std::to_string(e.line));
  *this = std::move(scratch);
}

void ShadowRun::apply_isotopy(const HomotopyEvent& e) {
  diagram_.immersion_label = e.label;
  emit(TraceKind::isotopy, e.label);
}

namespace {

void check_event_arc(const TubingDiagram& d, const Path& arc,
                     bool endpoints_marked, int line) {
  const Surface& s = d.surface;
  std::string at = " (line " + std::to_string(line) + ")";
  if (!path_is_walk(s, arc))
    throw Error(ErrorKind::semantics_error, "event arc is not a walk" + at);
  if (!path_is_simple(s, arc))
    throw Error(ErrorKind::semantics_error, "event arc is not simple" + at);
  auto vs = path_vertices(s, arc);
  for (size_t k = 1; k + 1 < vs.size(); ++k)
    if (s.is_marked(vs[k]))
      throw Error(ErrorKind::semantics_error,
                  "event arc interior passes marked vertex " +
                      std::to_string(vs[k]) + at);
  for (VertexId v : {vs.front(), vs.back()}) {
    if (endpoints_marked != s.is_marked(v))
      throw Error(ErrorKind::semantics_error,
                  std::string("event arc endpoint ") + std::to_string(v) +
                      (endpoints_marked ? " must be a marked vertex"
                                        : " must be unmarked") +
                      at);
  }
  // every contact with a tube arc must be a transversal crossing
  for (const auto& a : d.arcs) {
    for (VertexId v : shared_interior_vertices(s, arc, a.path, true))
      if (!paths_cross_at(s, arc, a.path, v))
        throw Error(ErrorKind::semantics_error,
                    "event arc touches arc " + std::to_string(a.index) +
                        " tangentially at vertex " + std::to_string(v) + at);
    // endpoint of the event arc lying on a tube arc is never transversal
    auto av = path_vertices(s, a.path);
    std::set<VertexId> aset(av.begin(), av.end());
    if (!endpoints_marked)
      for (VertexId v : {vs.front(), vs.back()})
        if (aset.count(v))
          throw Error(ErrorKind::semantics_error,
                      "event arc endpoint " + std::to_string(v) +
                          " lies on arc " + std::to_string(a.index) + at);
  }
}

void check_disjoint_event_arcs(const Surface& s, const Path& a, const Path& b,
                               int line) {
  auto av = path_vertices(s, a);
  std::set<VertexId> aset(av.begin(), av.end());
  for (VertexId v : path_vertices(s, b))
    if (aset.count(v))
      throw Error(ErrorKind::semantics_error,
                  "whitney/finger arcs share vertex " + std::to_string(v) +
                      " (line " + std::to_string(line) + ")");
}

}  // namespace

void ShadowRun::apply_finger(const HomotopyEvent& e) {
  Path alpha = expand(e.alpha);
  Path beta = expand(e.beta);
  check_event_arc(diagram_, alpha, false, e.line);
  check_event_arc(diagram_, beta, false, e.line);
  check_disjoint_event_arcs(diagram_.surface, alpha, beta, e.line);
  if (e.pair_index < 0 || diagram_.find_pair(e.pair_index))
    throw Error(ErrorKind::semantics_error,
                "finger pair index " + std::to_string(e.pair_index) +
                    " already in use (line " + std::to_string(e.line) + ")");
  if (diagram_.pair_count() + 1 > declared_bound_)
    throw Error(ErrorKind::semantics_error,
                "live pairs would exceed declared bound " +
                    std::to_string(declared_bound_) + " (line " +
                    std::to_string(e.line) + ")");

  SubdivisionLog step_log;
  // push tube arcs off both whitney arcs of the undoing disc (an isotopy)
  TubingDiagram d2 =
      clear_path(diagram_, alpha, path_source(diagram_.surface, alpha),
                 ClearMode::isotopy, nullptr, {&beta}, &alpha, &step_log);
  d2 = clear_path(d2, beta, path_source(d2.surface, beta), ClearMode::isotopy,
                  nullptr, {&alpha}, &beta, &step_log);
  log_.append(step_log);

  MarkedPair p;
  p.index = e.pair_index;
  p.x_plus = path_source(d2.surface, beta);
  p.x_minus = path_target(d2.surface, beta);
  p.y_plus = path_source(d2.surface, alpha);
  p.y_minus = path_target(d2.surface, alpha);
  d2.pairs.push_back(p);
  d2.arcs.push_back({e.pair_index, beta});
  resync_marks(d2);
  diagram_ = std::move(d2);
  next_pair_ = std::max(next_pair_, e.pair_index + 1);

  std::string tag = "finger-" + std::to_string(e.pair_index);
  emit(TraceKind::isotopy, tag);
  emit(TraceKind::stabilise, tag);
}

void ShadowRun::apply_whitney(const HomotopyEvent& e) {
  Path arc1 = expand(e.alpha);
  Path arc2 = expand(e.beta);
  check_event_arc(diagram_, arc1, true, e.line);
  check_event_arc(diagram_, arc2, true, e.line);
  check_disjoint_event_arcs(diagram_.surface, arc1, arc2, e.line);
  WhitneyCase w = classify_whitney(diagram_, arc1, arc2);
  switch (w.case_no) {
    case 1:
      run_case1(w);
      break;
    case 2:
      run_case2(w);
      break;
    case 3:
      run_case3(w);
      break;
    case 4:
      run_case4(w);
      break;
  }
}

void ShadowRun::remove_pair(int index) {
  auto& ps = diagram_.pairs;
  ps.erase(std::remove_if(ps.begin(), ps.end(),
                          [&](const MarkedPair& p) { return p.index == index; }),
           ps.end());
  auto& as = diagram_.arcs;
  as.erase(std::remove_if(as.begin(), as.end(),
                          [&](const TubeArc& a) { return a.index == index; }),
           as.end());
  resync_marks(diagram_);
}

void ShadowRun::run_case1(const WhitneyCase& w) {
  Path xarc = w.xarc, yarc = w.yarc;
  const TubeArc* gamma = diagram_.find_arc(w.i);
  bool already_on_arc =
      path_equal_undirected(diagram_.surface, gamma->path, xarc);

  SubdivisionLog step_log;
  CostList costs;
  VertexId y_plus = path_source(diagram_.surface, yarc);
  diagram_ = clear_path(diagram_, yarc, y_plus, ClearMode::costed, &costs,
                        {&xarc}, &yarc, &step_log);
  emit_costs(costs);

  if (!already_on_arc) {
    CostList swap_cost;
    diagram_ = tube_swap(diagram_, w.i, yarc, &swap_cost);
    emit_costs(swap_cost);
    CostList clear2;
    VertexId x_plus = path_source(diagram_.surface, xarc);
    diagram_ = clear_path(diagram_, xarc, x_plus, ClearMode::costed, &clear2,
                          {&yarc}, &xarc, &step_log);
    emit_costs(clear2);
  }
  log_.append(step_log);

  remove_pair(w.i);
  emit(TraceKind::destabilise, "whitney-case1");
}

void ShadowRun::run_case2(const WhitneyCase& w) {
  Path xarc = w.xarc, yarc = w.yarc;
  SubdivisionLog step_log;
  // free ends: yarc starts at y_i+, xarc ends at y_i-
  CostList costs;
  VertexId y_plus = path_source(diagram_.surface, yarc);
  diagram_ = clear_path(diagram_, yarc, y_plus, ClearMode::costed, &costs,
                        {&xarc}, &yarc, &step_log);
  VertexId y_minus = path_target(diagram_.surface, xarc);
  diagram_ = clear_path(diagram_, xarc, y_minus, ClearMode::costed, &costs,
                        {&yarc}, &xarc, &step_log);
  log_.append(step_log);
  emit_costs(costs);

  // pull the sheets apart across the crossed disc, cut the double tube,
  // then remove the capped ends by the lemma's single destabilisation
  used_case2_ = true;
  (void)case2_license_digest();
  remove_pair(w.i);
  emit(TraceKind::stabilise, "double-tube");
  emit(TraceKind::destabilise, "double-tube");
  emit(TraceKind::destabilise, "k-lemma");
}

void ShadowRun::run_case3(const WhitneyCase& w) {
  Path xarc = w.xarc, yarc = w.yarc;
  const MarkedPair pi = *diagram_.find_pair(w.i);
  const MarkedPair pj = *diagram_.find_pair(w.j);

  // auxiliary arcs a_i: y_i+ -> y_i-, a_j: y_j+ -> y_j-, clear of the
  // whitney arcs; they may cross tube arcs
  std::vector<Path> crossable;
  for (const auto& a : diagram_.arcs) crossable.push_back(a.path);
  Path a_i = search_arc(pi.y_plus, pi.y_minus, {xarc, yarc}, crossable,
                        {&xarc, &yarc}, current_line_);
  crossable.clear();
  for (const auto& a : diagram_.arcs) crossable.push_back(a.path);
  Path a_j = search_arc(pj.y_plus, pj.y_minus, {xarc, yarc, a_i}, crossable,
                        {&xarc, &yarc, &a_i}, current_line_);

  // one long embedded arc from y_i- through beta to y_j+
  Path composite = path_concat(
      diagram_.surface, path_reversed(diagram_.surface, a_i), yarc);
  composite = path_concat(diagram_.surface, composite,
                          path_reversed(diagram_.surface, a_j));

  SubdivisionLog step_log;
  CostList costs;
  VertexId near = path_source(diagram_.surface, composite);  // y_i-
  diagram_ = clear_path(diagram_, composite, near, ClearMode::costed, &costs,
                        {&xarc, &yarc, &a_i, &a_j}, &composite, &step_log);
  emit_costs(costs);

  CostList swap_i;
  diagram_ = tube_swap(diagram_, w.i, a_i, &swap_i);
  emit_costs(swap_i);
  CostList swap_j;
  diagram_ = tube_swap(diagram_, w.j, a_j, &swap_j);
  emit_costs(swap_j);

  CostList clear_x;
  VertexId x_plus = path_source(diagram_.surface, xarc);
  diagram_ = clear_path(diagram_, xarc, x_plus, ClearMode::costed, &clear_x,
                        {&composite}, &xarc, &step_log);
  emit_costs(clear_x);
  log_.append(step_log);

  // join the tubes: remove the whitney-move points, merge pairs j into i
  const MarkedPair qi = *diagram_.find_pair(w.i);  // post-swap orderings
  const MarkedPair qj = *diagram_.find_pair(w.j);
  MarkedPair merged;
  merged.index = w.i;
  merged.x_plus = qj.x_plus;    // old y_j+
  merged.y_plus = qj.y_plus;    // old x_j+
  merged.x_minus = qi.x_minus;  // old y_i-
  merged.y_minus = qi.y_minus;  // old x_i-
  Path merged_arc = path_reversed(diagram_.surface, composite);

  remove_pair(w.i);
  remove_pair(w.j);
  diagram_.pairs.push_back(merged);
  diagram_.arcs.push_back({w.i, merged_arc});
  resync_marks(diagram_);
  emit(TraceKind::destabilise, "whitney-case3");
}

void ShadowRun::run_case4(const WhitneyCase& w) {
  const MarkedPair pi = *diagram_.find_pair(w.i);
  Path xarc = w.xarc, yarc = w.yarc;
  // swap gamma_i to an arc avoiding all tube arcs; it may cross the
  // whitney arcs, whose complement never disconnects the punctured surface
  std::vector<Path> forbidden;
  for (const auto& a : diagram_.arcs) forbidden.push_back(a.path);
  Path b = search_arc(pi.y_plus, pi.y_minus, forbidden, {xarc, yarc},
                      {&xarc, &yarc}, current_line_);
  CostList swap_cost;
  diagram_ = tube_swap(diagram_, w.i, b, &swap_cost);
  emit_costs(swap_cost);

  WhitneyCase again = classify_whitney(diagram_, xarc, yarc);
  if (again.case_no != 3)
    throw Error(ErrorKind::no_case_matches,
                "case 4 reduction did not reach case 3 (line " +
                    std::to_string(current_line_) + ")");
  run_case3(again);
}

Path ShadowRun::search_arc(VertexId from, VertexId to,
                           const std::vector<Path>& forbidden,
                           const std::vector<Path>& crossable,
                           std::vector<Path*> watch, int line) {
  PathQuery q;
  q.from = from;
  q.to = to;
  for (VertexId v : diagram_.surface.marked)
    if (v != from && v != to) q.forbidden_vertices.push_back(v);
  q.forbidden_paths = forbidden;
  q.crossable_paths = crossable;
  q.refinement_budget = 2;
  // a crossing-free arc keeps the trace shorter; only fall back to
  // transversal crossings when the strict complement disconnects
  {
    PathQuery strict = q;
    strict.forbidden_paths.insert(strict.forbidden_paths.end(),
                                  crossable.begin(), crossable.end());
    strict.crossable_paths.clear();
    strict.refinement_budget = 1;
    auto out = find_disjoint_path(diagram_.surface, strict);
    if (out.status == PathSearchOutcome::Status::found) {
      if (out.rounds_used > 0) {
        diagram_.surface = out.surface;
        for (auto& a : diagram_.arcs) a.path = refresh_path(out.log, a.path);
        for (Path* p : watch) *p = refresh_path(out.log, *p);
        log_.append(out.log);
      }
      return *out.path;
    }
  }
  auto out = find_disjoint_path(diagram_.surface, q);
  if (out.status != PathSearchOutcome::Status::found)
    throw Error(ErrorKind::arc_search_failed,
                out.status == PathSearchOutcome::Status::budget_exhausted
                    ? "refinement budget exhausted (line " +
                          std::to_string(line) + ")"
                    : "complement disconnected (line " + std::to_string(line) +
                          ")");
  if (out.rounds_used > 0) {
    diagram_.surface = out.surface;
    for (auto& a : diagram_.arcs) a.path = refresh_path(out.log, a.path);
    for (Path* p : watch) *p = refresh_path(out.log, *p);
    log_.append(out.log);
  }
  return *out.path;
}

Certificate ShadowRun::finish(int expected_final_pairs) const {
  if (diagram_.pair_count() != expected_final_pairs)
    throw Error(ErrorKind::semantics_error,
                "script left " + std::to_string(diagram_.pair_count()) +
                    " live pairs, expected " +
                    std::to_string(expected_final_pairs));
  Certificate c;
  c.start_genus = start_genus_;
  c.declared_bound = declared_bound_;
  c.start_pairs = start_pairs_;
  c.bound = start_genus_ + (declared_bound_ - start_pairs_) + 1;
  c.max_genus = max_genus_;
  c.trace = trace_;
  c.ok = max_genus_ <= c.bound;
  if (used_case2_)
    c.case2_license =
        "K-or-K' lemma digest " + std::to_string(case2_license_digest());
  // fold check: the profile must replay from the deltas exactly
  int g = c.start_genus;
  for (const auto& t : c.trace) {
    if (t.kind == TraceKind::stabilise) g++;
    if (t.kind == TraceKind::destabilise) g--;
    if (g != t.genus_after)
      throw Error(ErrorKind::bound_violated, "genus profile does not fold");
  }
  if (g != genus_)
    throw Error(ErrorKind::bound_violated, "final genus mismatch");
  std::string body = render_trace(c);
  for (const auto& t : c.trace) body += std::to_string(t.digest) + "\n";
  c.digest = fnv1a(body);
  if (!c.ok)
    throw Error(ErrorKind::bound_violated,
                "max genus " + std::to_string(c.max_genus) + " exceeds bound " +
                    std::to_string(c.bound));
  return c;
}

Certificate compile_shadow(const HomotopyScript& script) {
  ShadowRun run(script.genus, script.bound);
  for (const auto& e : script.events) run.apply(e);
  return run.finish(0);
}

Certificate shadow_between(const TubingDiagram& initial,
                           const HomotopyScript& script,
                           int final_sing_count) {
  require_valid(initial);
  if (final_sing_count < 0 || final_sing_count % 2 != 0)
    throw Error(ErrorKind::semantics_error,
                "singularity count must be a non-negative even number");
  if (euler_genus(initial.surface).genus != script.genus)
    throw Error(ErrorKind::semantics_error,
                "initial diagram genus disagrees with the script");
  if (initial.pair_count() != final_sing_count / 2)
    throw Error(ErrorKind::semantics_error,
                "singularity counts differ between the two ends");
  ShadowRun run(initial, script.bound);
  for (const auto& e : script.events) run.apply(e);
  return run.finish(final_sing_count / 2);
}

}  // namespace stabtrace
