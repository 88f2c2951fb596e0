#pragma once

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "strtop/builder.hpp"
#include "strtop/degenerate.hpp"
#include "strtop/polytope.hpp"

namespace strtop {

// ---------------------------------------------------------------------------
// cell polytopes

enum class FaceStatus { facet, not_codim_one, never_tight };

inline const char* to_string(FaceStatus s) {
  switch (s) {
    case FaceStatus::facet:
      return "facet";
    case FaceStatus::not_codim_one:
      return "not_codim_one";
    case FaceStatus::never_tight:
      return "never_tight";
  }
  return "?";
}

inline const char* to_string(FaceKind k) { return k == FaceKind::zero_edge ? "zero_edge" : "prune"; }

/// The edges of one Q_i circle or one tree; their lengths sum to `total`.
struct EdgeGroup {
  Part part = Part::input;
  int index = 0;
  std::vector<int> coords;  // ascending, so the last one is eliminated
  int total = 1;
};

/// An inequality  bound - sum(coords) >= 0  (prune)  or  x >= 0  (zero edge).
struct CellConstraint {
  FaceKind kind = FaceKind::zero_edge;
  HalfEdge half_edge = kNone;
  int group = 0;
  std::vector<int> coords;
  int bound = 0;
  FaceStatus expected = FaceStatus::facet;  // read off the combinatorics
  FaceStatus status = FaceStatus::facet;    // read off the vertices

  AffineForm form(int n) const {
    AffineForm f;
    f.coef.assign(n, 0);
    if (kind == FaceKind::zero_edge) {
      f.coef[coords.front()] = 1;
    } else {
      f.constant = bound;
      for (int c : coords) f.coef[c] = -1;
    }
    return f;
  }

  Degeneration degeneration() const { return {kind, half_edge}; }
};

struct CellPolytope {
  CombinatorialStringDiagram diagram;
  std::vector<HalfEdge> edges;  // coordinate -> lesser half-edge
  std::vector<int> group_of;
  std::vector<EdgeGroup> groups;
  std::vector<CellConstraint> constraints;
  std::vector<std::vector<Vector>> factor_vertices;  // per group, in group coordinates
  std::vector<int> factor_dimension;
  int dimension = 0;
  bool empty = false;

  int coordinate_count() const { return static_cast<int>(edges.size()); }

  int coordinate_of(HalfEdge h) const {
    HalfEdge e = diagram.fatgraph.graph.edge_of(h);
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    return it != edges.end() && *it == e ? static_cast<int>(it - edges.begin()) : kNone;
  }

  Polytope polytope() const {
    Polytope p;
    p.ambient = coordinate_count();
    for (const auto& g : groups) {
      AffineForm f;
      f.coef.assign(p.ambient, 0);
      for (int c : g.coords) f.coef[c] = 1;
      f.constant = -g.total;
      p.equalities.push_back(std::move(f));
    }
    for (const auto& c : constraints) p.inequalities.push_back(c.form(p.ambient));
    return p;
  }

  /// The factor of one group, in its own coordinates.
  Polytope factor(int gi) const {
    const auto& g = groups[gi];
    const int n = static_cast<int>(g.coords.size());
    Polytope p;
    p.ambient = n;
    AffineForm eq;
    eq.coef.assign(n, 1);
    eq.constant = -g.total;
    p.equalities.push_back(eq);
    for (const auto& c : constraints)
      if (c.group == gi) p.inequalities.push_back(local_form(c));
    return p;
  }

  AffineForm local_form(const CellConstraint& c) const {
    const auto& g = groups[c.group];
    auto full = c.form(coordinate_count());
    AffineForm f;
    f.constant = full.constant;
    for (int x : g.coords) f.coef.push_back(full.coef[x]);
    return f;
  }

  /// Free coordinates: all but the last coordinate of each group.
  std::vector<int> free_coordinates() const {
    std::vector<char> elim(coordinate_count(), 0);
    for (const auto& g : groups) elim[g.coords.back()] = 1;
    std::vector<int> out;
    for (int i = 0; i < coordinate_count(); ++i)
      if (!elim[i]) out.push_back(i);
    return out;
  }

  /// Vertices of a face of one factor where the given constraints are tight.
  std::vector<Vector> face_vertices(int gi, const std::vector<int>& tight) const {
    std::vector<Vector> out;
    for (const auto& v : factor_vertices[gi]) {
      bool ok = true;
      for (int c : tight)
        if (constraints[c].group == gi && local_form(constraints[c])(v) != 0) ok = false;
      if (ok) out.push_back(v);
    }
    return out;
  }

  /// Dimension of the face cut out by making the constraints tight; -1 if empty.
  int face_dimension(const std::vector<int>& tight) const {
    int d = 0;
    for (int gi = 0; gi < static_cast<int>(groups.size()); ++gi) {
      int r = affine_rank(face_vertices(gi, tight));
      if (r < 0) return -1;
      d += r;
    }
    return d;
  }

  /// A point in the relative interior of that face.
  Vector face_point(const std::vector<int>& tight) const {
    Vector x(coordinate_count(), 0);
    for (int gi = 0; gi < static_cast<int>(groups.size()); ++gi) {
      auto vs = face_vertices(gi, tight);
      if (vs.empty()) throw PreconditionError("face is empty");
      auto c = centroid(vs);
      for (std::size_t k = 0; k < c.size(); ++k) x[groups[gi].coords[k]] = c[k];
    }
    return x;
  }

  Vector interior_point() const { return face_point({}); }

  std::vector<Rational> lengths(const Vector& x) const {
    std::vector<Rational> len(diagram.fatgraph.half_edge_count(), 0);
    for (int i = 0; i < coordinate_count(); ++i) {
      len[edges[i]] = x[i];
      len[diagram.fatgraph.partner(edges[i])] = x[i];
    }
    return len;
  }

  Vector coordinates(const std::vector<Rational>& len) const {
    Vector x(coordinate_count());
    for (int i = 0; i < coordinate_count(); ++i) x[i] = len[edges[i]];
    return x;
  }

  std::vector<int> tight(const Vector& x) const {
    std::vector<int> out;
    for (int c = 0; c < static_cast<int>(constraints.size()); ++c)
      if (constraints[c].form(coordinate_count())(x) == 0) out.push_back(c);
    return out;
  }

  std::vector<int> facets() const {
    std::vector<int> out;
    for (int c = 0; c < static_cast<int>(constraints.size()); ++c)
      if (constraints[c].status == FaceStatus::facet) out.push_back(c);
    return out;
  }
};

inline CellPolytope cell_polytope(const CombinatorialStringDiagram& d) {
  CellPolytope k;
  k.diagram = d;
  const Fatgraph& g = d.fatgraph;
  auto val = g.graph.valences();
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
    if (h > g.partner(h)) continue;
    if (d.tag[h].part == Part::output) continue;
    if (val[g.source(h)] == 1 || val[g.source(g.partner(h))] == 1) continue;  // the stick of a lollipop
    k.edges.push_back(h);
  }
  const int n = k.coordinate_count();
  k.group_of.assign(n, kNone);
  std::map<std::pair<int, int>, int> group_index;
  for (int i = 0; i < n; ++i) {
    const PartTag& t = d.tag[k.edges[i]];
    auto key = std::make_pair(static_cast<int>(t.part), t.index);
    auto [it, fresh] = group_index.try_emplace(key, static_cast<int>(k.groups.size()));
    if (fresh) {
      EdgeGroup eg;
      eg.part = t.part;
      eg.index = t.index;
      k.groups.push_back(eg);
    }
    k.groups[it->second].coords.push_back(i);
    k.group_of[i] = it->second;
  }
  // groups in (part, index) order
  std::vector<int> perm(k.groups.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    return std::make_pair(static_cast<int>(k.groups[a].part), k.groups[a].index) <
           std::make_pair(static_cast<int>(k.groups[b].part), k.groups[b].index);
  });
  std::vector<EdgeGroup> sorted;
  std::vector<int> rank(perm.size());
  for (std::size_t r = 0; r < perm.size(); ++r) {
    rank[perm[r]] = static_cast<int>(r);
    sorted.push_back(k.groups[perm[r]]);
  }
  k.groups = std::move(sorted);
  for (auto& gi : k.group_of) gi = rank[gi];

  for (int gi = 0; gi < static_cast<int>(k.groups.size()); ++gi) {
    auto& grp = k.groups[gi];
    if (grp.part == Part::input) {
      grp.total = 1;
      for (int c : grp.coords) {
        CellConstraint cc;
        cc.kind = FaceKind::zero_edge;
        cc.half_edge = k.edges[c];
        cc.group = gi;
        cc.coords = {c};
        cc.expected = grp.coords.size() == 1 ? FaceStatus::never_tight : FaceStatus::facet;
        k.constraints.push_back(cc);
      }
      continue;
    }
    auto t = tree_view(d, grp.index);
    grp.total = leaf_length(t.fatgraph);
    for (int c : grp.coords) {
      CellConstraint cc;
      cc.kind = FaceKind::zero_edge;
      cc.half_edge = k.edges[c];
      cc.group = gi;
      cc.coords = {c};
      switch (tree_edge_case(t, k.edges[c])) {
        case TreeEdgeCase::internal:
        case TreeEdgeCase::external_bivalent:
          cc.expected = FaceStatus::facet;
          break;
        case TreeEdgeCase::external_branched:
          cc.expected = FaceStatus::not_codim_one;
          break;
        case TreeEdgeCase::segment:
          cc.expected = FaceStatus::never_tight;
          break;
      }
      k.constraints.push_back(cc);
    }
    auto tval = t.fatgraph.graph.valences();
    for (HalfEdge lh = 0; lh < t.fatgraph.half_edge_count(); ++lh) {
      if (tval[t.fatgraph.source(lh)] < 3) continue;
      CellConstraint cc;
      cc.kind = FaceKind::prune;
      cc.half_edge = t.to_diagram[lh];
      cc.group = gi;
      for (HalfEdge b : branch_half_edges(t.fatgraph.graph, lh)) {
        if (tval[t.fatgraph.source(b)] == 1 && b != lh) ++cc.bound;
        if (b < t.fatgraph.partner(b)) cc.coords.push_back(k.coordinate_of(t.to_diagram[b]));
      }
      std::sort(cc.coords.begin(), cc.coords.end());
      cc.expected = FaceStatus::facet;
      k.constraints.push_back(cc);
    }
  }
  // order constraints by (group, kind, half-edge) so facet ids are stable
  std::sort(k.constraints.begin(), k.constraints.end(), [](const CellConstraint& a, const CellConstraint& b) {
    return std::make_tuple(a.group, static_cast<int>(a.kind), a.half_edge) <
           std::make_tuple(b.group, static_cast<int>(b.kind), b.half_edge);
  });

  k.factor_vertices.resize(k.groups.size());
  k.factor_dimension.resize(k.groups.size());
  for (int gi = 0; gi < static_cast<int>(k.groups.size()); ++gi) {
    k.factor_vertices[gi] = vertices(k.factor(gi));
    k.factor_dimension[gi] = affine_rank(k.factor_vertices[gi]);
    if (k.factor_dimension[gi] < 0) k.empty = true;
  }
  if (k.empty) {
    k.dimension = -1;
    return k;
  }
  k.dimension = std::accumulate(k.factor_dimension.begin(), k.factor_dimension.end(), 0);
  for (int c = 0; c < static_cast<int>(k.constraints.size()); ++c) {
    auto& cc = k.constraints[c];
    int r = affine_rank(k.face_vertices(cc.group, {c}));
    int fd = k.factor_dimension[cc.group];
    cc.status = r < 0 || r == fd ? FaceStatus::never_tight
                : r == fd - 1    ? FaceStatus::facet
                                 : FaceStatus::not_codim_one;
  }
  return k;
}

// ---------------------------------------------------------------------------
// faces and incidence signs

/// Source coordinate -> target coordinate (kNone when the edge is gone).
inline std::vector<int> coordinate_map(const CellPolytope& from, const std::vector<HalfEdge>& half_edge_map,
                                       const CellPolytope& to) {
  std::vector<int> out(from.coordinate_count(), kNone);
  for (int i = 0; i < from.coordinate_count(); ++i) {
    HalfEdge t = half_edge_map[from.edges[i]];
    if (t == kNone) continue;
    out[i] = to.coordinate_of(t);
    if (out[i] == kNone) throw PreconditionError("edge lost its coordinate across a degeneration");
  }
  return out;
}

/// Incidence sign of a facet of `from` glued onto `to`.  Cells are oriented
/// by their free coordinates; the facet gets the outward normal first.
inline int facet_sign(const CellPolytope& from, int constraint, const CellPolytope& to,
                      const std::vector<int>& coord_map) {
  const int n = from.coordinate_count();
  auto free = from.free_coordinates();
  const int nf = static_cast<int>(free.size());
  std::vector<int> elim(n, kNone);  // coordinate -> eliminated coordinate of its group
  for (const auto& g : from.groups)
    for (int c : g.coords) elim[c] = g.coords.back();
  auto form = from.constraints[constraint].form(n);
  Vector grad(nf);
  for (int i = 0; i < nf; ++i) grad[i] = form.coef[free[i]] - form.coef[elim[free[i]]];
  Matrix basis = kernel({grad}, nf);
  Matrix frame;
  Vector outward(nf);
  for (int i = 0; i < nf; ++i) outward[i] = -grad[i];
  frame.push_back(outward);
  for (const auto& b : basis) frame.push_back(b);
  int s1 = sign_of(determinant(frame));

  auto to_free = to.free_coordinates();
  std::vector<int> pos(to.coordinate_count(), kNone);
  for (std::size_t i = 0; i < to_free.size(); ++i) pos[to_free[i]] = static_cast<int>(i);
  Matrix image;
  for (const auto& b : basis) {
    Vector x(n, 0);
    for (int i = 0; i < nf; ++i) {
      x[free[i]] += b[i];
      x[elim[free[i]]] -= b[i];
    }
    Vector y(to_free.size(), 0);
    for (int c = 0; c < n; ++c) {
      if (x[c] == 0) continue;
      int t = coord_map[c];
      if (t == kNone) throw PreconditionError("a direction along the facet moves a vanished edge");
      if (pos[t] != kNone) y[pos[t]] += x[c];
    }
    image.push_back(std::move(y));
  }
  if (image.size() != to_free.size()) throw PreconditionError("facet and target dimensions differ");
  int s2 = sign_of(determinant(image));
  if (s1 == 0 || s2 == 0) throw PreconditionError("degenerate facet frame");
  return s1 * s2;
}

/// Cell polytopes by canonical code, shared between threads.
class TypeCache {
 public:
  std::shared_ptr<const CellPolytope> get(const std::string& code, const CombinatorialStringDiagram& canonical) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cells_.find(code);
      if (it != cells_.end()) return it->second;
    }
    auto k = std::make_shared<const CellPolytope>(cell_polytope(canonical));
    std::lock_guard<std::mutex> lock(mutex_);
    return cells_.try_emplace(code, k).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const CellPolytope>> cells_;
};

struct FaceRecord {
  int constraint = 0;
  std::string target;          // canonical code of the target type
  int target_orientation = 1;  // orientation class reached from the + cell
  int sign = 1;
  std::vector<int> coord_map;
  bool one_step = true;  // the first degeneration already reached an interior point
};

/// One step across a face: degenerate at a generic point of the facet, then
/// reduce fully and pass to canonical representatives.
struct Attached {
  std::string code;
  Degenerated diagram;  // canonical, with the composed half-edge map
  bool one_step = true;
};

inline Attached attach_at(const StringDiagram& d, const Degeneration& x) {
  auto first = degenerate(d, x);
  auto red = fully_reduce(first.diagram);
  Attached a;
  a.one_step = red.half_edge_map == identity_map(first.diagram.shape.fatgraph.half_edge_count());
  Degenerated all{red.diagram, compose(first.half_edge_map, red.half_edge_map)};
  a.diagram = canonicalize(all, &a.code);
  return a;
}

inline FaceRecord attach_target(const CellPolytope& k, int constraint, TypeCache& cache) {
  if (k.constraints.at(constraint).status != FaceStatus::facet) throw PreconditionError("not a facet");
  auto x = k.face_point({constraint});
  StringDiagram d{k.diagram, k.lengths(x), reference_orientation(k.diagram, 1)};
  auto a = attach_at(d, k.constraints[constraint].degeneration());
  auto target = cache.get(a.code, a.diagram.diagram.shape);
  FaceRecord r;
  r.constraint = constraint;
  r.target = a.code;
  r.target_orientation = orientation_class(a.diagram.diagram);
  r.coord_map = coordinate_map(k, a.diagram.half_edge_map, *target);
  r.sign = facet_sign(k, constraint, *target, r.coord_map);
  r.one_step = a.one_step;
  return r;
}

inline std::vector<FaceRecord> codim1_faces(const CellPolytope& k, TypeCache& cache) {
  std::vector<FaceRecord> out;
  for (int c : k.facets()) out.push_back(attach_target(k, c, cache));
  return out;
}

// ---------------------------------------------------------------------------
// codimension two

/// input_edge, tree_edge, leaf_edge (external at a bivalent vertex) or prune.
inline std::string face_case(const CellPolytope& k, int constraint) {
  const auto& c = k.constraints[constraint];
  if (c.kind == FaceKind::prune) return "prune";
  const PartTag& t = k.diagram.tag[c.half_edge];
  if (t.part == Part::input) return "input_edge";
  auto kind = tree_edge_case(tree_view(k.diagram, t.index), c.half_edge);
  return kind == TreeEdgeCase::internal ? "tree_edge" : kind == TreeEdgeCase::external_bivalent ? "leaf_edge" : "branched_leaf_edge";
}

struct Codim2Failure {
  int first = 0, second = 0;
  std::string detail;
};

struct Codim2Report {
  std::string code;
  int faces_checked = 0;
  std::map<std::string, int> by_kind;  // e.g. "input_edge+prune"
  std::vector<Codim2Failure> failures;
  bool ok() const { return failures.empty(); }
};

namespace detail {

struct Route {
  std::string code;
  int orientation = 1;
  std::vector<int> coord_map;  // source coordinate -> final coordinate
  int sign = 1;
  std::string problem;
};

inline Route route(const CellPolytope& k, const Vector& x, int first, TypeCache& cache) {
  Route r;
  StringDiagram d{k.diagram, k.lengths(x), reference_orientation(k.diagram, 1)};
  std::string c1;
  auto d1 = canonicalize(degenerate(d, k.constraints[first].degeneration()), &c1);
  auto k1 = cache.get(c1, d1.diagram.shape);
  auto map1 = coordinate_map(k, d1.half_edge_map, *k1);
  int e1 = facet_sign(k, first, *k1, map1);
  auto t = k1->tight(k1->coordinates(d1.diagram.length));
  if (t.size() != 1 || k1->constraints[t[0]].status != FaceStatus::facet) {
    r.problem = "after one step the point is not on a single facet (" + std::to_string(t.size()) + " tight)";
    return r;
  }
  std::string c2;
  auto d2 = canonicalize(degenerate(d1.diagram, k1->constraints[t[0]].degeneration()), &c2);
  if (!available_degenerations(d2.diagram).empty()) {
    r.problem = "two steps do not reach an interior point";
    return r;
  }
  auto k2 = cache.get(c2, d2.diagram.shape);
  auto map2 = coordinate_map(*k1, d2.half_edge_map, *k2);
  int e2 = facet_sign(*k1, t[0], *k2, map2);
  r.code = c2;
  r.orientation = orientation_class(d2.diagram);
  r.coord_map.assign(map1.size(), kNone);
  for (std::size_t i = 0; i < map1.size(); ++i)
    if (map1[i] != kNone) r.coord_map[i] = map2[map1[i]];
  r.sign = e1 * e2;
  return r;
}

}  // namespace detail

/// Every codimension-two face is reached along its two facets; both routes
/// must land on the same oriented cell with the same coordinates, and the
/// sign products must cancel.
inline Codim2Report verify_codim2(const CellPolytope& k, TypeCache& cache) {
  Codim2Report rep;
  rep.code = diagram_code(k.diagram);
  auto fs = k.facets();
  for (std::size_t a = 0; a < fs.size(); ++a)
    for (std::size_t b = a + 1; b < fs.size(); ++b) {
      int f1 = fs[a], f2 = fs[b];
      if (k.dimension < 2 || k.face_dimension({f1, f2}) != k.dimension - 2) continue;
      ++rep.faces_checked;
      ++rep.by_kind[face_case(k, f1) + "+" + face_case(k, f2)];
      auto x = k.face_point({f1, f2});
      auto fail = [&](const std::string& why) { rep.failures.push_back({f1, f2, why}); };
      try {
        auto r1 = detail::route(k, x, f1, cache);
        auto r2 = detail::route(k, x, f2, cache);
        if (!r1.problem.empty()) fail(r1.problem);
        else if (!r2.problem.empty()) fail(r2.problem);
        else if (r1.code != r2.code) fail("routes reach different cells");
        else if (r1.orientation != r2.orientation) fail("routes reach opposite orientations");
        else if (r1.coord_map != r2.coord_map) fail("routes identify coordinates differently");
        else if (r1.sign != -r2.sign) fail("incidence signs do not cancel");
      } catch (const Error& e) {
        fail(e.what());
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// the complex

struct CellType {
  std::string code;
  std::shared_ptr<const CellPolytope> polytope;
  std::vector<FaceRecord> faces;
};

struct Cell {
  int type = 0;
  int orientation = 1;
  int dimension = 0;
};

struct Face {
  int cell = 0;
  int constraint = 0;
  int target = 0;
  int sign = 1;
  std::vector<int> coord_map;
};

struct CellComplex {
  int chi = 0, k = 0, l = 0;
  std::vector<CellType> types;  // ascending code
  std::vector<Cell> cells;      // by type, + before -
  std::vector<Face> faces;      // by cell, then constraint
  std::vector<std::string> problems;

  int cell_index(int type, int orientation) const {
    auto it = std::lower_bound(cells.begin(), cells.end(), std::pair{type, -orientation}, [](const Cell& c, auto key) {
      return std::pair{c.type, -c.orientation} < key;
    });
    return it != cells.end() && it->type == type && it->orientation == orientation ? static_cast<int>(it - cells.begin())
                                                                                   : kNone;
  }

  int type_index(const std::string& code) const {
    auto it = std::lower_bound(types.begin(), types.end(), code,
                               [](const CellType& t, const std::string& c) { return t.code < c; });
    return it != types.end() && it->code == code ? static_cast<int>(it - types.begin()) : kNone;
  }

  std::string cell_name(int c) const {
    const auto& cell = cells[c];
    const auto& d = types[cell.type].polytope->diagram;
    return types[cell.type].code + (d.tree_count() == 0 ? "" : cell.orientation > 0 ? "|+" : "|-");
  }

  int max_dimension() const {
    int m = -1;
    for (const auto& c : cells) m = std::max(m, c.dimension);
    return m;
  }
};

struct EnumerationOptions {
  int max_abs_chi = 2;
  unsigned threads = 0;  // 0: hardware concurrency
  long long max_candidates = 400000000;
};

namespace detail {

inline unsigned thread_count(unsigned requested) {
  if (requested) return requested;
  unsigned h = std::thread::hardware_concurrency();
  return h ? h : 1;
}

/// Runs f(i) for i in [0, n) on a pool of threads.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) f(i);
  };
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex m;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      try {
        work();
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!err) err = std::current_exception();
        next = n;
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace detail

/// Assembles faces and cells for a list of canonical diagram types.
inline CellComplex build_complex(int chi, int k, int l, const std::vector<CombinatorialStringDiagram>& reps,
                                 unsigned threads = 0) {
  CellComplex cx;
  cx.chi = chi;
  cx.k = k;
  cx.l = l;
  TypeCache cache;
  for (const auto& d : reps) {
    CellType t;
    t.code = diagram_code(d);
    t.polytope = cache.get(t.code, d);
    cx.types.push_back(std::move(t));
  }
  std::sort(cx.types.begin(), cx.types.end(), [](const CellType& a, const CellType& b) { return a.code < b.code; });
  std::vector<std::string> errs(cx.types.size());
  detail::parallel_for(cx.types.size(), detail::thread_count(threads), [&](std::size_t i) {
    try {
      cx.types[i].faces = codim1_faces(*cx.types[i].polytope, cache);
    } catch (const Error& e) {
      errs[i] = cx.types[i].code + ": " + e.what();
    }
  });
  for (auto& e : errs)
    if (!e.empty()) cx.problems.push_back(e);
  for (int t = 0; t < static_cast<int>(cx.types.size()); ++t) {
    const auto& p = *cx.types[t].polytope;
    cx.cells.push_back({t, 1, p.dimension});
    if (p.diagram.tree_count() > 0) cx.cells.push_back({t, -1, p.dimension});
  }
  for (int c = 0; c < static_cast<int>(cx.cells.size()); ++c) {
    const auto& cell = cx.cells[c];
    for (const auto& r : cx.types[cell.type].faces) {
      int tt = cx.type_index(r.target);
      if (tt == kNone) {
        cx.problems.push_back("face target was not enumerated: " + r.target);
        continue;
      }
      int o = cx.types[tt].polytope->diagram.tree_count() == 0 ? 1 : cell.orientation * r.target_orientation;
      cx.faces.push_back({c, r.constraint, cx.cell_index(tt, o), r.sign, r.coord_map});
    }
  }
  return cx;
}

// ---------------------------------------------------------------------------
// enumeration

/// Plane trees with the given number of leaves and no bivalent vertices, up
/// to isomorphism.
inline std::vector<Fatgraph> reduced_plane_trees(int leaves) {
  if (leaves < 2) throw PreconditionError("trees need at least two leaves");
  std::map<std::string, Fatgraph> level{{unrooted_code({segment_tree(), {}, {}, {}, {}}), segment_tree()}};
  for (int n = 2; n < leaves; ++n) {
    std::map<std::string, Fatgraph> next;
    for (const auto& [code, t] : level) {
      auto val = t.graph.valences();
      auto orders = t.cyclic_orders();
      const HalfEdge a = t.half_edge_count(), b = a + 1;
      auto inv = t.graph.involution;
      inv.push_back(b);
      inv.push_back(a);
      auto add = [&](std::vector<std::vector<HalfEdge>> o, std::vector<HalfEdge> i) {
        auto f = Fatgraph::from_orders(std::move(i), o);
        next.try_emplace(unrooted_code({f, {}, {}, {}, {}}), f);
      };
      for (Vertex v = 0; v < t.vertex_count(); ++v) {
        if (val[v] >= 2) {
          // a new leg in each gap
          for (std::size_t gap = 0; gap < orders[v].size(); ++gap) {
            auto o = orders;
            o[v].insert(o[v].begin() + gap + 1, a);
            o.push_back({b});
            add(o, inv);
          }
        } else {
          // the leaf sprouts two legs
          auto o = orders;
          auto i2 = inv;
          const HalfEdge c = b + 1, e = b + 2;
          i2.push_back(e);
          i2.push_back(c);
          o[v].push_back(a);
          o[v].push_back(c);
          o.push_back({b});
          o.push_back({e});
          add(o, i2);
        }
      }
    }
    level = std::move(next);
  }
  std::vector<Fatgraph> out;
  for (auto& [c, t] : level) out.push_back(t);
  return out;
}

/// Subdivides edge i (in the order of Graph::edges) by counts[i] bivalent vertices.
inline Fatgraph subdivide(const Fatgraph& t, const std::vector<int>& counts) {
  auto orders = t.cyclic_orders();
  auto edges = t.graph.edges();
  std::vector<HalfEdge> inv = t.graph.involution;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (counts[i] == 0) continue;
    HalfEdge h = edges[i], k = t.partner(h);
    HalfEdge prev = h;
    for (int s = 0; s < counts[i]; ++s) {
      HalfEdge in = static_cast<HalfEdge>(inv.size()), out = in + 1;
      inv.push_back(kNone);
      inv.push_back(kNone);
      inv[prev] = in;
      inv[in] = prev;
      orders.push_back({in, out});
      prev = out;
    }
    inv[prev] = k;
    inv[k] = prev;
  }
  return Fatgraph::from_orders(std::move(inv), orders);
}

namespace detail {

struct TreeShape {
  Fatgraph tree;
  std::vector<Vertex> internal;
  std::vector<int> gaps;        // per internal vertex
  std::vector<HalfEdge> leaves;  // leaf half-edges
};

inline TreeShape shape_of(const Fatgraph& t) {
  TreeShape s;
  s.tree = t;
  auto val = t.graph.valences();
  for (Vertex v = 0; v < t.vertex_count(); ++v)
    if (val[v] >= 2) {
      s.internal.push_back(v);
      s.gaps.push_back(val[v]);
    }
  for (HalfEdge h = 0; h < t.half_edge_count(); ++h)
    if (val[t.source(h)] == 1) s.leaves.push_back(h);
  return s;
}

struct Attacher {
  int tree = kNone;  // kNone for an output
  int index = 0;     // leaf position in the tree, or output index
};

struct Site {
  bool circle = true;
  int owner = 0;  // input, or tree
  int slot = 0;   // internal vertex position within the tree
  int gaps = 1;
  bool needs = false;
};

struct Task {
  int config = 0;
  std::vector<int> site_of;
};

/// Every ordered split of `items` into one possibly empty group followed by
/// nonempty groups (a circle: u, then the bivalent vertices in order).
inline std::vector<std::vector<std::vector<int>>> circle_arrangements(std::vector<int> items) {
  std::vector<std::vector<std::vector<int>>> out;
  std::sort(items.begin(), items.end());
  const int a = static_cast<int>(items.size());
  do {
    for (int m = 0; m <= a; ++m) {
      const int rest = a - m;
      const int cuts = rest > 0 ? rest - 1 : 0;
      for (int mask = 0; mask < (1 << cuts); ++mask) {
        std::vector<std::vector<int>> groups(1);
        groups[0].assign(items.begin(), items.begin() + m);
        if (rest > 0) {
          groups.emplace_back();
          for (int i = 0; i < rest; ++i) {
            groups.back().push_back(items[m + i]);
            if (i < rest - 1 && (mask >> i & 1)) groups.emplace_back();
          }
        }
        out.push_back(std::move(groups));
      }
    }
  } while (std::next_permutation(items.begin(), items.end()));
  return out;
}

/// Every distribution of `items` into `gaps` ordered groups.
inline std::vector<std::vector<std::vector<int>>> gap_arrangements(std::vector<int> items, int gaps) {
  std::vector<std::vector<std::vector<int>>> out;
  std::sort(items.begin(), items.end());
  const int a = static_cast<int>(items.size());
  // bars among a + gaps - 1 slots
  std::vector<int> slots(a + gaps - 1, 0);
  std::fill(slots.begin() + a, slots.end(), 1);
  std::vector<std::vector<int>> bar_patterns;
  do bar_patterns.push_back(slots);
  while (std::next_permutation(slots.begin(), slots.end()));
  do {
    for (const auto& pat : bar_patterns) {
      std::vector<std::vector<int>> groups(gaps);
      int g = 0, i = 0;
      for (int s : pat) {
        if (s) ++g;
        else groups[g].push_back(items[i++]);
      }
      out.push_back(std::move(groups));
    }
  } while (std::next_permutation(items.begin(), items.end()));
  return out;
}

inline bool quick_marked(const Fatgraph& g, int cycles_expected) {
  auto cycles = boundary_cycles(g);
  if (static_cast<int>(cycles.size()) != cycles_expected) return false;
  auto val = g.graph.valences();
  for (const auto& c : cycles) {
    int marks = 0;
    for (HalfEdge h : c.half_edges) marks += val[g.source(h)] == 1;
    if (marks != 1) return false;
  }
  return true;
}

}  // namespace detail

/// Canonical representatives of all valid diagram types with the given
/// parameters, ascending by code.
inline std::vector<CombinatorialStringDiagram> enumerate_types(int chi, int k, int l,
                                                               const EnumerationOptions& opt = {}) {
  if (chi > 0 || k < 0 || l < 0) throw PreconditionError("parameters need chi <= 0 and k, l >= 0");
  if (-chi > opt.max_abs_chi)
    throw ResourceError("|chi| = " + std::to_string(-chi) + " exceeds the enumeration budget " +
                        std::to_string(opt.max_abs_chi));
  if (k == 0) return {};
  using detail::TreeShape;

  // tree configurations: leaf counts summing (each minus one) to |chi|
  std::vector<std::vector<int>> leaf_counts;
  {
    std::vector<int> cur;
    auto rec = [&](auto&& self, int left, int maxpart) -> void {
      if (left == 0) {
        leaf_counts.push_back(cur);
        return;
      }
      for (int p = std::min(left, maxpart); p >= 1; --p) {
        cur.push_back(p + 1);
        self(self, left - p, p);
        cur.pop_back();
      }
    };
    rec(rec, -chi, -chi);
  }
  std::map<int, std::vector<Fatgraph>> skeletons;
  for (const auto& lc : leaf_counts)
    for (int n : lc)
      if (!skeletons.count(n)) skeletons[n] = reduced_plane_trees(n);

  std::vector<std::vector<TreeShape>> configs;
  for (const auto& lc : leaf_counts) {
    const int attachers = std::accumulate(lc.begin(), lc.end(), 0) + l;
    // skeleton choice per tree, nondecreasing within equal leaf counts
    std::vector<int> pick(lc.size(), 0);
    auto rec = [&](auto&& self, std::size_t j) -> void {
      if (j == lc.size()) {
        // subdivisions: each bivalent vertex of tree j needs an attacher from elsewhere
        std::vector<std::vector<int>> counts(lc.size());
        std::vector<int> limit(lc.size());
        for (std::size_t a = 0; a < lc.size(); ++a) limit[a] = attachers - lc[a];
        auto sub = [&](auto&& sself, std::size_t a, std::size_t e, int used_total) -> void {
          if (a == lc.size()) {
            std::vector<TreeShape> cfg;
            for (std::size_t b = 0; b < lc.size(); ++b)
              cfg.push_back(detail::shape_of(subdivide(skeletons[lc[b]][pick[b]], counts[b])));
            configs.push_back(std::move(cfg));
            return;
          }
          const auto& sk = skeletons[lc[a]][pick[a]];
          const std::size_t ne = sk.graph.edge_count();
          if (e == 0) counts[a].assign(ne, 0);
          if (e == ne) {
            sself(sself, a + 1, 0, used_total);
            return;
          }
          int used_here = std::accumulate(counts[a].begin(), counts[a].begin() + e, 0);
          for (int c = 0; used_here + c <= limit[a] && used_total + c <= attachers; ++c) {
            counts[a][e] = c;
            sself(sself, a, e + 1, used_total + c);
          }
          counts[a][e] = 0;
        };
        sub(sub, 0, 0, 0);
        return;
      }
      int start = (j > 0 && lc[j] == lc[j - 1]) ? pick[j - 1] : 0;
      for (int s = start; s < static_cast<int>(skeletons[lc[j]].size()); ++s) {
        pick[j] = s;
        self(self, j + 1);
      }
    };
    rec(rec, 0);
  }

  // attachment tasks: each attacher picks an owning site
  std::vector<detail::Task> tasks;
  std::vector<std::vector<detail::Attacher>> cfg_attachers(configs.size());
  std::vector<std::vector<detail::Site>> cfg_sites(configs.size());
  for (int ci = 0; ci < static_cast<int>(configs.size()); ++ci) {
    const auto& cfg = configs[ci];
    auto& att = cfg_attachers[ci];
    auto& sites = cfg_sites[ci];
    for (int j = 0; j < static_cast<int>(cfg.size()); ++j)
      for (int i = 0; i < static_cast<int>(cfg[j].leaves.size()); ++i) att.push_back({j, i});
    for (int i = 0; i < l; ++i) att.push_back({kNone, i});
    for (int i = 0; i < k; ++i) sites.push_back({true, i, 0, 1, false});
    for (int j = 0; j < static_cast<int>(cfg.size()); ++j)
      for (int s = 0; s < static_cast<int>(cfg[j].internal.size()); ++s)
        sites.push_back({false, j, s, cfg[j].gaps[s], cfg[j].gaps[s] == 2});
    const int na = static_cast<int>(att.size()), ns = static_cast<int>(sites.size()), nt = static_cast<int>(cfg.size());
    std::vector<int> site_of(na, 0);
    auto rec = [&](auto&& self, int a) -> void {
      if (a == na) {
        std::vector<int> hits(ns, 0);
        for (int x : site_of) ++hits[x];
        for (int s = 0; s < ns; ++s)
          if (sites[s].needs && !hits[s]) return;
        // circles and trees must form one piece, with tree-on-tree attachments acyclic
        std::vector<int> parent(k + nt);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
          while (parent[x] != x) x = parent[x] = parent[parent[x]];
          return x;
        };
        std::vector<std::vector<int>> below(nt);
        for (int b = 0; b < na; ++b) {
          if (att[b].tree == kNone) continue;
          const auto& s = sites[site_of[b]];
          int node = s.circle ? s.owner : k + s.owner;
          parent[find(node)] = find(k + att[b].tree);
          if (!s.circle) below[s.owner].push_back(att[b].tree);
        }
        for (int x = 1; x < k + nt; ++x)
          if (find(x) != find(0)) return;
        std::vector<int> indeg(nt, 0);
        for (int j = 0; j < nt; ++j)
          for (int c : below[j]) ++indeg[c];
        std::vector<int> ready;
        for (int j = 0; j < nt; ++j)
          if (!indeg[j]) ready.push_back(j);
        int seen = 0;
        while (!ready.empty()) {
          int j = ready.back();
          ready.pop_back();
          ++seen;
          for (int c : below[j])
            if (--indeg[c] == 0) ready.push_back(c);
        }
        if (seen != nt) return;
        tasks.push_back({ci, site_of});
        return;
      }
      for (int s = 0; s < ns; ++s) {
        if (!sites[s].circle && sites[s].owner == att[a].tree) continue;
        site_of[a] = s;
        self(self, a + 1);
      }
    };
    rec(rec, 0);
  }

  const unsigned nthreads = detail::thread_count(opt.threads);
  std::vector<std::map<std::string, CombinatorialStringDiagram>> found(tasks.size());
  std::atomic<long long> candidates{0};
  detail::parallel_for(tasks.size(), nthreads, [&](std::size_t ti) {
    const auto& task = tasks[ti];
    const auto& cfg = configs[task.config];
    const auto& att = cfg_attachers[task.config];
    const auto& sites = cfg_sites[task.config];
    const int ns = static_cast<int>(sites.size());
    std::vector<std::vector<std::vector<std::vector<int>>>> options(ns);
    for (int s = 0; s < ns; ++s) {
      std::vector<int> items;
      for (int a = 0; a < static_cast<int>(att.size()); ++a)
        if (task.site_of[a] == s) items.push_back(a);
      options[s] = sites[s].circle ? detail::circle_arrangements(items) : detail::gap_arrangements(items, sites[s].gaps);
    }
    std::vector<std::size_t> pick(ns, 0);
    auto& out = found[ti];
    for (;;) {
      if (++candidates > opt.max_candidates) throw ResourceError("enumeration exceeded its candidate budget");
      DiagramBuilder b;
      for (int s = 0; s < k; ++s) b.add_input(static_cast<int>(options[s][pick[s]].size()) - 1);
      for (const auto& t : cfg) b.add_tree(t.tree);
      for (int i = 0; i < l; ++i) b.add_output();
      for (int s = 0; s < ns; ++s) {
        const auto& groups = options[s][pick[s]];
        for (int gi = 0; gi < static_cast<int>(groups.size()); ++gi) {
          auto site = sites[s].circle ? DiagramBuilder::circle(sites[s].owner, gi)
                                      : DiagramBuilder::tree_vertex(sites[s].owner,
                                                                    cfg[sites[s].owner].internal[sites[s].slot], gi);
          for (int a : groups[gi]) {
            if (att[a].tree == kNone) b.attach_output(att[a].index, site);
            else b.attach_tree_leaf(att[a].tree, cfg[att[a].tree].leaves[att[a].index], site);
          }
        }
      }
      auto d = b.build();
      if (detail::quick_marked(d.fatgraph, k + l) && validate_combinatorial(d).ok()) {
        auto r = canonical_relabeling(d);
        if (!out.count(r.code)) out.emplace(r.code, relabel(d, r));
      }
      int s = 0;
      while (s < ns && ++pick[s] == options[s].size()) pick[s++] = 0;
      if (s == ns) break;
    }
  });
  std::map<std::string, CombinatorialStringDiagram> all;
  for (auto& m : found) all.merge(m);
  std::vector<CombinatorialStringDiagram> reps;
  for (auto& [c, d] : all) reps.push_back(std::move(d));
  return reps;
}

inline CellComplex enumerate_cells(int chi, int k, int l, const EnumerationOptions& opt = {}) {
  return build_complex(chi, k, l, enumerate_types(chi, k, l, opt), opt.threads);
}

inline std::vector<Codim2Report> verify_codim2(const CellComplex& cx, unsigned threads = 0) {
  TypeCache cache;
  for (const auto& t : cx.types) cache.get(t.code, t.polytope->diagram);
  std::vector<Codim2Report> out(cx.types.size());
  detail::parallel_for(cx.types.size(), detail::thread_count(threads),
                       [&](std::size_t i) { out[i] = verify_codim2(*cx.types[i].polytope, cache); });
  return out;
}

// ---------------------------------------------------------------------------
// the orientation double cover

struct CoverReport {
  int components = 0;             // of the oriented complex
  int unoriented_components = 0;  // after forgetting orientations
  bool has_trees = false;         // otherwise the cover is an isomorphism
  bool split = false;
};

inline CoverReport orientation_cover_components(const CellComplex& cx) {
  const int n = static_cast<int>(cx.cells.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& f : cx.faces) parent[find(f.cell)] = find(f.target);
  CoverReport r;
  std::set<int> roots;
  for (int c = 0; c < n; ++c) roots.insert(find(c));
  r.components = static_cast<int>(roots.size());
  const int nt = static_cast<int>(cx.types.size());
  std::vector<int> up(nt);
  std::iota(up.begin(), up.end(), 0);
  auto findu = [&](int x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  };
  for (const auto& f : cx.faces) up[findu(cx.cells[f.cell].type)] = findu(cx.cells[f.target].type);
  std::set<int> uroots;
  for (int t = 0; t < nt; ++t) uroots.insert(findu(t));
  r.unoriented_components = static_cast<int>(uroots.size());
  for (const auto& t : cx.types) r.has_trees = r.has_trees || t.polytope->diagram.tree_count() > 0;
  r.split = r.has_trees && r.components == 2 * r.unoriented_components;
  return r;
}

}  // namespace strtop
