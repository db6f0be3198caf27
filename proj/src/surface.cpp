#include "stabtrace/surface.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace stabtrace {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::inconsistent_gluing: return "InconsistentGluing";
    case ErrorKind::disconnected: return "Disconnected";
    case ErrorKind::non_orientable: return "NonOrientable";
    case ErrorKind::non_integer_genus: return "NonIntegerGenus";
    case ErrorKind::unknown_edge: return "UnknownEdge";
    case ErrorKind::unknown_dart: return "UnknownDart";
    case ErrorKind::invalid_path: return "InvalidPath";
    case ErrorKind::budget_exhausted: return "BudgetExhausted";
    case ErrorKind::needs_refinement: return "NeedsRefinement";
    case ErrorKind::invalid_diagram: return "InvalidDiagram";
    case ErrorKind::wrong_endpoints: return "WrongEndpoints";
    case ErrorKind::beta_not_disjoint: return "BetaNotDisjoint";
    case ErrorKind::alpha_crosses_other_arc: return "AlphaCrossesOtherArc";
    case ErrorKind::arc_search_failed: return "ArcSearchFailed";
    case ErrorKind::syntax_error: return "SyntaxError";
    case ErrorKind::semantics_error: return "SemanticsError";
    case ErrorKind::no_case_matches: return "NoCaseMatches";
    case ErrorKind::bound_violated: return "BoundViolated";
    case ErrorKind::pattern_mismatch: return "PatternMismatch";
    case ErrorKind::would_disconnect: return "WouldDisconnect";
    case ErrorKind::disconnected_surface: return "DisconnectedSurface";
    case ErrorKind::script_failed: return "ScriptFailed";
    case ErrorKind::io_error: return "IoError";
  }
  return "Error";
}

int Surface::vertex_count() const {
  int n = 0;
  for (char a : vertex_alive) n += a ? 1 : 0;
  return n;
}

int Surface::dart_count() const {
  int n = 0;
  for (const auto& d : darts) n += d.origin >= 0 ? 1 : 0;
  return n;
}

int Surface::degree(VertexId v) const {
  return static_cast<int>(darts_at(v).size());
}

std::vector<DartId> Surface::darts_at(VertexId v) const {
  std::vector<DartId> out;
  if (!vertex_valid(v)) return out;
  DartId a = vertex_anchor[v];
  if (a < 0) return out;
  DartId d = a;
  do {
    out.push_back(d);
    d = darts[d].next;
  } while (d != a);
  return out;
}

std::vector<DartId> Surface::all_darts() const {
  std::vector<DartId> out;
  for (DartId d = 0; d < static_cast<DartId>(darts.size()); ++d)
    if (darts[d].origin >= 0) out.push_back(d);
  return out;
}

std::vector<VertexId> Surface::all_vertices() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < static_cast<VertexId>(vertex_alive.size()); ++v)
    if (vertex_alive[v]) out.push_back(v);
  return out;
}

bool Surface::is_marked(VertexId v) const {
  return std::binary_search(marked.begin(), marked.end(), v);
}

void Surface::set_marked(VertexId v, bool on) {
  auto it = std::lower_bound(marked.begin(), marked.end(), v);
  bool present = it != marked.end() && *it == v;
  if (on && !present) marked.insert(it, v);
  if (!on && present) marked.erase(it);
}

std::vector<Face> trace_faces(const Surface& s) {
  std::vector<Face> faces;
  std::set<DartId> seen;
  std::set<DartId> boundary(s.boundary_marks.begin(), s.boundary_marks.end());
  for (DartId d0 : s.all_darts()) {
    if (seen.count(d0)) continue;
    Face f;
    DartId d = d0;
    do {
      f.darts.push_back(d);
      seen.insert(d);
      if (boundary.count(d)) f.boundary = true;
      d = s.face_next(d);
      if (f.darts.size() > s.darts.size())
        throw Error(ErrorKind::inconsistent_gluing, "face tracing diverges");
    } while (d != d0);
    faces.push_back(std::move(f));
  }
  return faces;
}

bool is_connected(const Surface& s) {
  auto verts = s.all_vertices();
  if (verts.empty()) return false;
  std::set<VertexId> seen;
  std::vector<VertexId> stack{verts.front()};
  seen.insert(verts.front());
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (DartId d : s.darts_at(v)) {
      VertexId w = s.target(d);
      if (!seen.count(w)) {
        seen.insert(w);
        stack.push_back(w);
      }
    }
  }
  return seen.size() == verts.size();
}

EulerData euler_genus(const Surface& s) {
  EulerData e;
  e.vertices = s.vertex_count();
  e.edges = s.edge_count();
  for (const Face& f : trace_faces(s)) {
    if (f.boundary)
      e.boundary_faces++;
    else
      e.interior_faces++;
  }
  e.chi = e.vertices - e.edges + e.interior_faces;
  int num = 2 - e.chi - e.boundary_faces;
  if (num < 0 || num % 2 != 0)
    throw Error(ErrorKind::non_integer_genus,
                "2 - chi - b = " + std::to_string(num));
  e.genus = num / 2;
  return e;
}

SurfaceBuilder& SurfaceBuilder::vertex(VertexId v) {
  vertices_.push_back(v);
  return *this;
}

SurfaceBuilder& SurfaceBuilder::edge(DartId a, DartId b) {
  edges_.push_back({a, b});
  return *this;
}

SurfaceBuilder& SurfaceBuilder::rotation(VertexId v,
                                         const std::vector<DartId>& ccw) {
  rotations_.push_back({v, ccw});
  return *this;
}

SurfaceBuilder& SurfaceBuilder::boundary_face(int face_index) {
  boundary_faces_.push_back(face_index);
  return *this;
}

Surface SurfaceBuilder::build() const {
  Surface s;
  DartId max_dart = -1;
  VertexId max_vertex = -1;
  for (auto [a, b] : edges_) {
    if (a < 0 || b < 0 || a == b)
      throw Error(ErrorKind::inconsistent_gluing, "bad edge dart pair");
    max_dart = std::max({max_dart, a, b});
  }
  for (VertexId v : vertices_) {
    if (v < 0) throw Error(ErrorKind::inconsistent_gluing, "negative vertex");
    max_vertex = std::max(max_vertex, v);
  }
  s.darts.resize(max_dart + 1);
  s.vertex_alive.assign(max_vertex + 1, 0);
  s.vertex_anchor.assign(max_vertex + 1, -1);
  for (VertexId v : vertices_) {
    if (s.vertex_alive[v])
      throw Error(ErrorKind::inconsistent_gluing,
                  "duplicate vertex " + std::to_string(v));
    s.vertex_alive[v] = 1;
  }
  for (auto [a, b] : edges_) {
    if (s.darts[a].theta >= 0 || s.darts[b].theta >= 0)
      throw Error(ErrorKind::inconsistent_gluing,
                  "dart used by two edges");
    s.darts[a].theta = b;
    s.darts[b].theta = a;
  }
  for (const auto& [v, ccw] : rotations_) {
    if (v >= static_cast<VertexId>(s.vertex_alive.size()) ||
        !s.vertex_alive[v])
      throw Error(ErrorKind::inconsistent_gluing,
                  "rotation at unknown vertex " + std::to_string(v));
    if (ccw.empty())
      throw Error(ErrorKind::inconsistent_gluing, "empty rotation");
    for (size_t i = 0; i < ccw.size(); ++i) {
      DartId d = ccw[i];
      if (d < 0 || d > max_dart || s.darts[d].theta < 0)
        throw Error(ErrorKind::inconsistent_gluing,
                    "rotation names unglued dart " + std::to_string(d));
      if (s.darts[d].origin >= 0)
        throw Error(ErrorKind::inconsistent_gluing,
                    "dart in two rotations: " + std::to_string(d));
      s.darts[d].origin = v;
      s.darts[d].next = ccw[(i + 1) % ccw.size()];
      s.darts[d].prev = ccw[(i + ccw.size() - 1) % ccw.size()];
    }
    s.vertex_anchor[v] = *std::min_element(ccw.begin(), ccw.end());
  }
  for (DartId d = 0; d <= max_dart; ++d) {
    if (s.darts[d].theta >= 0 && s.darts[d].origin < 0)
      throw Error(ErrorKind::inconsistent_gluing,
                  "dart in no rotation: " + std::to_string(d));
  }
  for (VertexId v = 0; v <= max_vertex; ++v)
    if (s.vertex_alive[v] && s.vertex_anchor[v] < 0)
      throw Error(ErrorKind::inconsistent_gluing,
                  "isolated vertex " + std::to_string(v));
  if (!is_connected(s)) throw Error(ErrorKind::disconnected, "surface");

  if (!boundary_faces_.empty()) {
    auto faces = trace_faces(s);
    for (int idx : boundary_faces_) {
      if (idx < 0 || idx >= static_cast<int>(faces.size()))
        throw Error(ErrorKind::inconsistent_gluing,
                    "boundary face index out of range");
      s.boundary_marks.push_back(faces[idx].darts.front());
    }
    std::sort(s.boundary_marks.begin(), s.boundary_marks.end());
  }
  return s;
}

Surface surface_from_word(const std::string& word) {
  if (word.empty())
    throw Error(ErrorKind::inconsistent_gluing, "empty gluing word");
  int n = static_cast<int>(word.size());
  std::map<char, std::vector<int>> lower_pos, upper_pos;
  for (int i = 0; i < n; ++i) {
    char c = word[i];
    if (!std::isalpha(static_cast<unsigned char>(c)))
      throw Error(ErrorKind::inconsistent_gluing, "non-letter in word");
    char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (std::isupper(static_cast<unsigned char>(c)))
      upper_pos[l].push_back(i);
    else
      lower_pos[l].push_back(i);
  }
  std::vector<DartId> theta(n, -1);
  for (auto& [l, ps] : lower_pos) {
    auto it = upper_pos.find(l);
    if (ps.size() == 2 && (it == upper_pos.end() || it->second.empty()))
      throw Error(ErrorKind::non_orientable,
                  std::string("letter ") + l + " repeats without inverse");
    if (ps.size() != 1 || it == upper_pos.end() || it->second.size() != 1)
      throw Error(ErrorKind::inconsistent_gluing,
                  std::string("letter ") + l + " not paired");
    theta[ps[0]] = it->second[0];
    theta[it->second[0]] = ps[0];
  }
  for (auto& [l, ps] : upper_pos) {
    if (!lower_pos.count(l))
      throw Error(ErrorKind::inconsistent_gluing,
                  std::string("letter ") + l + " only inverted");
    (void)ps;
  }

  // Face permutation of the polygon interior is i -> i+1; the rotation is
  // sigma = phi o theta, and its orbits are the glued vertices.
  std::vector<DartId> sigma(n);
  for (int i = 0; i < n; ++i) sigma[theta[i]] = (i + 1) % n;

  SurfaceBuilder b;
  for (int i = 0; i < n; ++i)
    if (i < theta[i]) b.edge(i, theta[i]);
  std::vector<char> seen(n, 0);
  VertexId next_vertex = 0;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<DartId> orbit;
    int d = i;
    do {
      orbit.push_back(d);
      seen[d] = 1;
      d = sigma[d];
    } while (d != i);
    b.vertex(next_vertex);
    b.rotation(next_vertex, orbit);
    next_vertex++;
  }
  return b.build();
}

Surface standard_surface(int genus, int boundary) {
  if (genus < 0 || boundary < 0)
    throw Error(ErrorKind::inconsistent_gluing, "negative genus/boundary");
  Surface s;
  if (genus == 0) {
    SurfaceBuilder b;
    b.vertex(0).edge(0, 1).rotation(0, {0, 1});
    s = b.build();
  } else {
    std::string word;
    for (int i = 0; i < genus; ++i) {
      char a = static_cast<char>('a' + 2 * i);
      char c = static_cast<char>('a' + 2 * i + 1);
      word += a;
      word += c;
      word += static_cast<char>(std::toupper(a));
      word += static_cast<char>(std::toupper(c));
    }
    s = surface_from_word(word);
  }
  // Each boundary circle: a loop at vertex 0 cutting off a marked monogon.
  for (int k = 0; k < boundary; ++k) {
    DartId x = static_cast<DartId>(s.darts.size());
    DartId y = x + 1;
    s.darts.resize(y + 1);
    s.darts[x].theta = y;
    s.darts[y].theta = x;
    s.darts[x].origin = 0;
    s.darts[y].origin = 0;
    DartId a = s.vertex_anchor[0];
    DartId an = s.darts[a].next;
    // insert (x, y) after the anchor
    s.darts[a].next = x;
    s.darts[x].prev = a;
    s.darts[x].next = y;
    s.darts[y].prev = x;
    s.darts[y].next = an;
    s.darts[an].prev = y;
    // face {y} is the monogon: face_next(y) = rot_next(x) = y.
    s.boundary_marks.push_back(y);
  }
  std::sort(s.boundary_marks.begin(), s.boundary_marks.end());
  return s;
}

// ---------------------------------------------------------------------------
// Paths.

VertexId path_source(const Surface& s, const Path& p) {
  if (p.empty()) throw Error(ErrorKind::invalid_path, "empty path");
  return s.origin(p.darts.front());
}

VertexId path_target(const Surface& s, const Path& p) {
  if (p.empty()) throw Error(ErrorKind::invalid_path, "empty path");
  return s.target(p.darts.back());
}

std::vector<VertexId> path_vertices(const Surface& s, const Path& p) {
  std::vector<VertexId> out;
  if (p.empty()) return out;
  out.push_back(s.origin(p.darts.front()));
  for (DartId d : p.darts) out.push_back(s.target(d));
  return out;
}

bool path_is_walk(const Surface& s, const Path& p) {
  for (size_t i = 0; i < p.darts.size(); ++i) {
    if (!s.dart_valid(p.darts[i])) return false;
    if (i + 1 < p.darts.size() &&
        s.target(p.darts[i]) != s.origin(p.darts[i + 1]))
      return false;
  }
  return !p.empty();
}

bool path_is_simple(const Surface& s, const Path& p) {
  if (!path_is_walk(s, p)) return false;
  auto vs = path_vertices(s, p);
  std::set<VertexId> seen(vs.begin(), vs.end());
  return seen.size() == vs.size();
}

Path path_reversed(const Surface& s, const Path& p) {
  Path r;
  r.darts.reserve(p.darts.size());
  for (auto it = p.darts.rbegin(); it != p.darts.rend(); ++it)
    r.darts.push_back(s.theta(*it));
  return r;
}

bool path_equal_undirected(const Surface& s, const Path& p, const Path& q) {
  if (p.darts == q.darts) return true;
  return p.darts == path_reversed(s, q).darts;
}

Path path_concat(const Surface& s, const Path& a, const Path& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (path_target(s, a) != path_source(s, b))
    throw Error(ErrorKind::invalid_path, "concat endpoint mismatch");
  Path out = a;
  out.darts.insert(out.darts.end(), b.darts.begin(), b.darts.end());
  return out;
}

std::vector<VertexId> shared_interior_vertices(const Surface& s, const Path& p,
                                               const Path& q,
                                               bool skip_endpoints) {
  auto pv = path_vertices(s, p);
  auto qv = path_vertices(s, q);
  std::set<VertexId> pset(pv.begin(), pv.end());
  std::set<VertexId> ends;
  if (skip_endpoints) {
    ends.insert(pv.front());
    ends.insert(pv.back());
    ends.insert(qv.front());
    ends.insert(qv.back());
  }
  std::vector<VertexId> out;
  std::set<VertexId> emitted;
  for (VertexId v : qv) {
    if (!pset.count(v)) continue;
    if (ends.count(v)) continue;
    if (emitted.insert(v).second) out.push_back(v);
  }
  return out;
}

std::pair<DartId, DartId> path_darts_at(const Surface& s, const Path& p,
                                        VertexId v) {
  DartId in = -1, out = -1;
  for (size_t i = 0; i < p.darts.size(); ++i) {
    if (s.origin(p.darts[i]) == v) out = p.darts[i];
    if (s.target(p.darts[i]) == v) in = s.theta(p.darts[i]);
  }
  if (in < 0 || out < 0)
    throw Error(ErrorKind::invalid_path, "vertex not interior to path");
  return {in, out};
}

bool darts_interleave(const Surface& s, DartId a1, DartId a2, DartId b1,
                      DartId b2) {
  VertexId v = s.origin(a1);
  // walk the rotation once, record the pattern of {a} and {b} hits
  std::vector<int> hits;
  DartId d = a1;
  do {
    if (d == a1 || d == a2) hits.push_back(0);
    if (d == b1 || d == b2) hits.push_back(1);
    d = s.rot_next(d);
  } while (d != a1);
  (void)v;
  if (hits.size() != 4) return false;
  // starting at an 'a': transversal iff pattern a b a b
  return hits[0] == 0 && hits[1] == 1 && hits[2] == 0 && hits[3] == 1;
}

bool paths_cross_at(const Surface& s, const Path& p, const Path& q,
                    VertexId v) {
  auto [pa, pb] = path_darts_at(s, p, v);
  auto [qa, qb] = path_darts_at(s, q, v);
  return darts_interleave(s, pa, pb, qa, qb);
}

// ---------------------------------------------------------------------------
// Refinement.

Path refresh_path(const SubdivisionLog& log, const Path& p) {
  Path out = p;
  for (auto [parent, tail] : log.splits) {
    std::vector<DartId> next;
    next.reserve(out.darts.size() + 2);
    for (DartId d : out.darts) {
      next.push_back(d);
      if (d == parent) next.push_back(tail);
    }
    out.darts = std::move(next);
  }
  return out;
}

Surface subdivide(const Surface& s, DartId d, SubdivisionLog* log) {
  if (!s.dart_valid(d)) throw Error(ErrorKind::unknown_edge, "bad dart");
  Surface t = s;
  DartId db = s.theta(d);
  VertexId m = static_cast<VertexId>(t.vertex_alive.size());
  t.vertex_alive.push_back(1);
  DartId n1 = static_cast<DartId>(t.darts.size());  // m -> origin(d)
  DartId n2 = n1 + 1;                               // m -> old target
  t.darts.resize(n2 + 1);
  t.vertex_anchor.push_back(n1);
  // d keeps its slot in the rotation at origin(d); its far half becomes n2.
  t.darts[d].theta = n1;
  t.darts[n1].theta = d;
  t.darts[n2].theta = db;
  t.darts[db].theta = n2;
  t.darts[n1].origin = m;
  t.darts[n2].origin = m;
  t.darts[n1].next = n2;
  t.darts[n1].prev = n2;
  t.darts[n2].next = n1;
  t.darts[n2].prev = n1;
  if (log) {
    log->splits.push_back({d, n2});
    log->splits.push_back({db, n1});
  }
  return t;
}

namespace {

// Cones face (given by its orbit on `t`) from a fresh vertex.
void cone_face_in_place(Surface& t, const std::vector<DartId>& orbit) {
  VertexId c = static_cast<VertexId>(t.vertex_alive.size());
  t.vertex_alive.push_back(1);
  int k = static_cast<int>(orbit.size());
  DartId base = static_cast<DartId>(t.darts.size());
  t.darts.resize(base + 2 * k);
  t.vertex_anchor.push_back(-1);
  // spokes: s_i from corner-of(orbit[i]) to c, t_i = theta(s_i).
  // corner at origin(orbit[i]) sits between theta(orbit[i-1]) and orbit[i].
  std::vector<DartId> spoke(k), back(k);
  for (int i = 0; i < k; ++i) {
    spoke[i] = base + 2 * i;
    back[i] = base + 2 * i + 1;
  }
  for (int i = 0; i < k; ++i) {
    DartId d = orbit[i];
    DartId prev_in = t.theta(orbit[(i + k - 1) % k]);
    VertexId u = t.origin(d);
    (void)u;
    DartId si = spoke[i], ti = back[i];
    t.darts[si].theta = ti;
    t.darts[ti].theta = si;
    t.darts[si].origin = t.origin(d);
    t.darts[ti].origin = c;
    // insert si between prev_in and d in the rotation at origin(d)
    DartId after = t.darts[prev_in].next;  // == d
    (void)after;
    t.darts[prev_in].next = si;
    t.darts[si].prev = prev_in;
    t.darts[si].next = d;
    t.darts[d].prev = si;
  }
  // center rotation: reversed face order makes each (d_i, s_{i+1}, t_i) a
  // triangle.
  for (int i = 0; i < k; ++i) {
    DartId cur = back[i];
    DartId nxt = back[(i + k - 1) % k];
    t.darts[cur].next = nxt;
    t.darts[nxt].prev = cur;
  }
  t.vertex_anchor[c] = back[0];
}

}  // namespace

Surface refine_round(const Surface& s, SubdivisionLog* log) {
  Surface t = s;
  std::vector<DartId> edge_reps;
  for (DartId d : s.all_darts())
    if (d < s.theta(d)) edge_reps.push_back(d);
  for (DartId d : edge_reps) t = subdivide(t, d, log);
  auto faces = trace_faces(t);
  for (const Face& f : faces) {
    if (f.boundary) continue;
    cone_face_in_place(t, f.darts);
  }
  return t;
}

Surface refine_near(const Surface& s, const std::vector<VertexId>& around,
                    SubdivisionLog* log) {
  std::set<VertexId> zone(around.begin(), around.end());
  Surface t = s;
  std::vector<DartId> edge_reps;
  for (DartId d : s.all_darts()) {
    if (d >= s.theta(d)) continue;
    if (zone.count(s.origin(d)) || zone.count(s.target(d)))
      edge_reps.push_back(d);
  }
  for (DartId d : edge_reps) t = subdivide(t, d, log);
  auto faces = trace_faces(t);
  for (const Face& f : faces) {
    if (f.boundary) continue;
    bool touches = false;
    for (DartId d : f.darts)
      if (zone.count(t.origin(d))) {
        touches = true;
        break;
      }
    if (touches) cone_face_in_place(t, f.darts);
  }
  return t;
}

// ---------------------------------------------------------------------------
// `.surf` io.

Surface parse_surf(const std::string& text) {
  SurfaceBuilder b;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    try {
      if (kw == "vertex") {
        VertexId v;
        if (!(ls >> v)) throw Error(ErrorKind::syntax_error, "vertex id");
        b.vertex(v);
      } else if (kw == "edge") {
        int id;
        DartId a, c;
        if (!(ls >> id >> a >> c))
          throw Error(ErrorKind::syntax_error, "edge record");
        b.edge(a, c);
      } else if (kw == "rot") {
        std::string vtok;
        if (!(ls >> vtok)) throw Error(ErrorKind::syntax_error, "rot vertex");
        if (!vtok.empty() && vtok.back() == ':') vtok.pop_back();
        VertexId v = std::stoi(vtok);
        std::vector<DartId> order;
        DartId d;
        while (ls >> d) order.push_back(d);
        b.rotation(v, order);
      } else if (kw == "boundary") {
        int idx;
        if (!(ls >> idx)) throw Error(ErrorKind::syntax_error, "boundary idx");
        b.boundary_face(idx);
      } else {
        throw Error(ErrorKind::syntax_error, "unknown record " + kw);
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorKind::syntax_error,
                  "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return b.build();
}

std::string write_surf(const Surface& s) {
  std::ostringstream out;
  for (VertexId v : s.all_vertices()) out << "vertex " << v << "\n";
  int eid = 0;
  for (DartId d : s.all_darts())
    if (d < s.theta(d))
      out << "edge " << eid++ << " " << d << " " << s.theta(d) << "\n";
  for (VertexId v : s.all_vertices()) {
    out << "rot " << v << ":";
    for (DartId d : s.darts_at(v)) out << " " << d;
    out << "\n";
  }
  auto faces = trace_faces(s);
  for (size_t i = 0; i < faces.size(); ++i)
    if (faces[i].boundary) out << "boundary " << i << "\n";
  return out.str();
}

}  // namespace stabtrace
