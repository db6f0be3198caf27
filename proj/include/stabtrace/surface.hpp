#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stabtrace/error.hpp"

namespace stabtrace {

using VertexId = int32_t;
using DartId = int32_t;

// A compact, oriented, connected surface presented as a rotation system.
//
// Darts are directed half-edges. `theta` pairs the two darts of each edge,
// `rot_next` is the counterclockwise successor around the origin vertex.
// Faces are the orbits of d -> rot_next(theta(d)). A face may be designated
// a boundary component by marking one of its darts; boundary faces are
// traced like any other face but excluded from the Euler count, so chi for
// a disc (one vertex, one loop edge, one face marked) is 1.
//
// Ids are never reused: operations that grow the surface append slots, and
// nothing here removes them. Values are immutable by convention; mutating
// operations take a surface by value or const reference and return a new one.
struct Surface {
  struct DartRec {
    DartId theta = -1;
    VertexId origin = -1;
    DartId next = -1;  // ccw successor at origin
    DartId prev = -1;
  };

  std::vector<DartRec> darts;
  std::vector<char> vertex_alive;
  std::vector<DartId> vertex_anchor;  // representative dart per vertex
  std::vector<VertexId> marked;       // sorted, unique
  std::vector<DartId> boundary_marks; // one dart per boundary face

  bool dart_valid(DartId d) const {
    return d >= 0 && d < static_cast<DartId>(darts.size()) &&
           darts[d].origin >= 0;
  }
  bool vertex_valid(VertexId v) const {
    return v >= 0 && v < static_cast<VertexId>(vertex_alive.size()) &&
           vertex_alive[v];
  }
  DartId theta(DartId d) const { return darts[d].theta; }
  DartId rot_next(DartId d) const { return darts[d].next; }
  DartId rot_prev(DartId d) const { return darts[d].prev; }
  VertexId origin(DartId d) const { return darts[d].origin; }
  VertexId target(DartId d) const { return darts[darts[d].theta].origin; }
  DartId face_next(DartId d) const { return rot_next(theta(d)); }

  int vertex_count() const;
  int dart_count() const;
  int edge_count() const { return dart_count() / 2; }
  int degree(VertexId v) const;
  std::vector<DartId> darts_at(VertexId v) const;
  std::vector<DartId> all_darts() const;
  std::vector<VertexId> all_vertices() const;

  bool is_marked(VertexId v) const;
  void set_marked(VertexId v, bool on);
};

struct Face {
  std::vector<DartId> darts;  // orbit, starting at its minimal dart
  bool boundary = false;
};

// Faces in deterministic order (sorted by minimal dart id of the orbit).
std::vector<Face> trace_faces(const Surface& s);

struct EulerData {
  int vertices = 0;
  int edges = 0;
  int interior_faces = 0;
  int boundary_faces = 0;
  int chi = 0;
  int genus = 0;
};

// chi = V - E + F_interior; genus = (2 - chi - b)/2.
// Throws non_integer_genus when the count comes out negative or fractional.
EulerData euler_genus(const Surface& s);

bool is_connected(const Surface& s);

// Explicit-rotation builder. All ids are caller-chosen non-negative ints.
class SurfaceBuilder {
 public:
  SurfaceBuilder& vertex(VertexId v);
  SurfaceBuilder& edge(DartId a, DartId b);
  SurfaceBuilder& rotation(VertexId v, const std::vector<DartId>& ccw);
  SurfaceBuilder& boundary_face(int face_index);

  // Validates the gluing: theta total and fixpoint-free, every dart in
  // exactly one rotation, surface connected.
  Surface build() const;

 private:
  std::vector<VertexId> vertices_;
  std::vector<std::pair<DartId, DartId>> edges_;
  std::vector<std::pair<VertexId, std::vector<DartId>>> rotations_;
  std::vector<int> boundary_faces_;
};

// One-vertex polygon gluing from a word such as "abAB" (capital = inverse).
// Each letter must occur exactly once in each case; "aa" is rejected as
// non-orientable.
Surface surface_from_word(const std::string& word);

// Standard genus-g surface with b boundary circles: the 4g-gon gluing plus
// b small loops at the base vertex, each cutting off a marked monogon.
Surface standard_surface(int genus, int boundary = 0);

// ---------------------------------------------------------------------------
// Walks on the 1-skeleton.

struct Path {
  std::vector<DartId> darts;

  bool empty() const { return darts.empty(); }
  size_t length() const { return darts.size(); }
};

VertexId path_source(const Surface& s, const Path& p);
VertexId path_target(const Surface& s, const Path& p);
// Vertex sequence source..target, length = darts+1.
std::vector<VertexId> path_vertices(const Surface& s, const Path& p);
bool path_is_walk(const Surface& s, const Path& p);
// Simple: no repeated vertex (endpoints may not coincide either).
bool path_is_simple(const Surface& s, const Path& p);
Path path_reversed(const Surface& s, const Path& p);
// Equal as undirected dart sets in order (p == q or p == reverse(q)).
bool path_equal_undirected(const Surface& s, const Path& p, const Path& q);
// Concatenation; target(a) must equal source(b).
Path path_concat(const Surface& s, const Path& a, const Path& b);

// Interior vertices shared by p and q (endpoints of either are skipped when
// `skip_endpoints`); used both for disjointness checks and crossing lists.
std::vector<VertexId> shared_interior_vertices(const Surface& s, const Path& p,
                                               const Path& q,
                                               bool skip_endpoints = true);

// The two darts a simple path uses at an interior vertex v, as darts based
// at v (arrival dart is theta'd).
std::pair<DartId, DartId> path_darts_at(const Surface& s, const Path& p,
                                        VertexId v);

// True when {a1,a2} and {b1,b2} interleave in the rotation at their common
// origin, i.e. the two passages cross transversally.
bool darts_interleave(const Surface& s, DartId a1, DartId a2, DartId b1,
                      DartId b2);

// True when p and q cross transversally at shared interior vertex v.
bool paths_cross_at(const Surface& s, const Path& p, const Path& q,
                    VertexId v);

// ---------------------------------------------------------------------------
// Refinement.

// Ordered record of edge subdivisions: traversals of `parent` expand to
// (parent, tail). Applying a log re-expresses any path over the refined
// surface.
struct SubdivisionLog {
  std::vector<std::pair<DartId, DartId>> splits;

  void append(const SubdivisionLog& later) {
    splits.insert(splits.end(), later.splits.begin(), later.splits.end());
  }
};

Path refresh_path(const SubdivisionLog& log, const Path& p);

// Subdivides the edge containing dart d: V+1, E+1, faces unchanged.
Surface subdivide(const Surface& s, DartId d, SubdivisionLog* log = nullptr);

// Subdivides every edge, then cones every non-boundary face from a fresh
// center vertex. chi is invariant; creates free corridor vertices along
// every path.
Surface refine_round(const Surface& s, SubdivisionLog* log);

// Local variant: subdivides the edges incident to `around` and cones the
// non-boundary faces meeting `around`.
Surface refine_near(const Surface& s, const std::vector<VertexId>& around,
                    SubdivisionLog* log);

// ---------------------------------------------------------------------------
// `.surf` text format.
//
//   vertex <id>
//   edge <id> <dartA> <dartB>
//   rot <vertex>: <dart> <dart> ...
//   boundary <face-index>
//
// `#` starts a comment. Face indices refer to the deterministic face order
// of trace_faces.
Surface parse_surf(const std::string& text);
std::string write_surf(const Surface& s);

}  // namespace stabtrace
