#pragma once

#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

#include "strtop/fatgraph.hpp"
#include "strtop/rational.hpp"

namespace strtop {

/// Fatgraph with a nonnegative rational length per edge, stored per
/// half-edge (both halves of an edge carry the same value).
struct PseudometricFatgraph {
  Fatgraph fatgraph;
  std::vector<Rational> length;

  const Rational& edge_length(HalfEdge h) const { return length[h]; }

  void validate() const {
    fatgraph.validate();
    if (static_cast<int>(length.size()) != fatgraph.half_edge_count())
      throw ValidationError("length table has wrong size");
    for (HalfEdge h = 0; h < fatgraph.half_edge_count(); ++h) {
      if (length[h] < 0) throw ValidationError("negative length on half-edge " + std::to_string(h));
      if (length[h] != length[fatgraph.partner(h)])
        throw ValidationError("half-edges of one edge have different lengths at " + std::to_string(h));
    }
  }

  Rational total_length() const {
    Rational s = 0;
    for (HalfEdge h = 0; h < fatgraph.half_edge_count(); ++h)
      if (h < fatgraph.partner(h)) s += length[h];
    return s;
  }
};

/// A point of |G|: a vertex, or an offset t along the oriented edge h,
/// measured from s(h).
struct RealizationPoint {
  Vertex vertex = kNone;
  HalfEdge edge = kNone;
  Rational t = 0;

  static RealizationPoint at_vertex(Vertex v) { return {v, kNone, 0}; }
  static RealizationPoint on_edge(HalfEdge h, Rational t) { return {kNone, h, std::move(t)}; }
  bool is_vertex() const { return edge == kNone; }
  bool operator==(const RealizationPoint& o) const { return vertex == o.vertex && edge == o.edge && t == o.t; }
};

/// Endpoint offsets become vertices; interior points are stored on the lesser
/// of the two half-edges.
inline RealizationPoint normalize(const PseudometricFatgraph& g, RealizationPoint p) {
  if (p.is_vertex()) {
    if (p.vertex < 0 || p.vertex >= g.fatgraph.vertex_count()) throw PreconditionError("unknown vertex in point");
    return p;
  }
  if (p.edge < 0 || p.edge >= g.fatgraph.half_edge_count()) throw PreconditionError("unknown half-edge in point");
  const Rational& l = g.length[p.edge];
  if (p.t < 0 || p.t > l) throw PreconditionError("offset outside its edge");
  if (p.t == 0) return RealizationPoint::at_vertex(g.fatgraph.source(p.edge));
  if (p.t == l) return RealizationPoint::at_vertex(g.fatgraph.source(g.fatgraph.partner(p.edge)));
  HalfEdge k = g.fatgraph.partner(p.edge);
  if (k < p.edge) return RealizationPoint::on_edge(k, l - p.t);
  return p;
}

/// Vertex classes of |G|: vertices joined by zero-length edges are one point.
/// Each vertex maps to the least vertex of its class.
inline std::vector<Vertex> zero_classes(const PseudometricFatgraph& g) {
  std::vector<Vertex> parent(g.fatgraph.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<Vertex(Vertex)> find = [&](Vertex x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (HalfEdge h = 0; h < g.fatgraph.half_edge_count(); ++h)
    if (g.length[h] == 0) {
      Vertex a = find(g.fatgraph.source(h)), b = find(g.fatgraph.source(g.fatgraph.partner(h)));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  for (Vertex v = 0; v < static_cast<Vertex>(parent.size()); ++v) parent[v] = find(v);
  return parent;
}

inline bool same_point(const PseudometricFatgraph& g, const std::vector<Vertex>& classes, RealizationPoint p,
                       RealizationPoint q) {
  p = normalize(g, std::move(p));
  q = normalize(g, std::move(q));
  if (p.is_vertex() != q.is_vertex()) return false;
  if (p.is_vertex()) return classes[p.vertex] == classes[q.vertex];
  return p.edge == q.edge && p.t == q.t;
}

inline bool same_point(const PseudometricFatgraph& g, const RealizationPoint& p, const RealizationPoint& q) {
  return same_point(g, zero_classes(g), p, q);
}

/// Shortest-path distances from p to every vertex; unreachable vertices are
/// reported as nullopt.
inline std::vector<std::optional<Rational>> distances_from(const PseudometricFatgraph& g, const RealizationPoint& p0) {
  RealizationPoint p = normalize(g, p0);
  const Fatgraph& f = g.fatgraph;
  std::vector<std::optional<Rational>> dist(f.vertex_count());
  using Item = std::pair<Rational, Vertex>;
  auto cmp = [](const Item& a, const Item& b) { return a.first > b.first || (a.first == b.first && a.second > b.second); };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
  auto relax = [&](Vertex v, const Rational& d) {
    if (!dist[v] || d < *dist[v]) {
      dist[v] = d;
      pq.push({d, v});
    }
  };
  if (p.is_vertex()) {
    relax(p.vertex, 0);
  } else {
    relax(f.source(p.edge), p.t);
    relax(f.source(f.partner(p.edge)), g.length[p.edge] - p.t);
  }
  auto inc = f.graph.incidence();
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != *dist[v]) continue;
    for (HalfEdge h : inc[v]) relax(f.source(f.partner(h)), d + g.length[h]);
  }
  return dist;
}

inline Rational distance(const PseudometricFatgraph& g, const RealizationPoint& p0, const RealizationPoint& q0) {
  RealizationPoint p = normalize(g, p0), q = normalize(g, q0);
  auto dist = distances_from(g, p);
  const Fatgraph& f = g.fatgraph;
  std::optional<Rational> best;
  auto offer = [&](const std::optional<Rational>& base, const Rational& extra) {
    if (!base) return;
    Rational c = *base + extra;
    if (!best || c < *best) best = c;
  };
  if (q.is_vertex()) {
    offer(dist[q.vertex], 0);
  } else {
    offer(dist[f.source(q.edge)], q.t);
    offer(dist[f.source(f.partner(q.edge))], g.length[q.edge] - q.t);
    if (!p.is_vertex() && p.edge == q.edge) offer(Rational(0), abs(p.t - q.t));
  }
  if (!best) throw PreconditionError("points lie in different components");
  return *best;
}

/// The unique leaf half-edge on a marked boundary cycle.
inline HalfEdge marking_of(const Fatgraph& g, const BoundaryCycle& c) {
  auto val = g.graph.valences();
  HalfEdge mark = kNone;
  int count = 0;
  for (HalfEdge h : c.half_edges)
    if (val[g.source(h)] == 1) {
      mark = h;
      ++count;
    }
  if (count == 0) throw PreconditionError("boundary cycle has no marking");
  if (count > 1) throw PreconditionError("boundary cycle has more than one marking");
  return mark;
}

/// Oriented edges of a marked cycle read from the marking; reversed reads
/// the partners in the opposite order, which also starts at the marking leaf.
inline std::vector<HalfEdge> marked_walk(const PseudometricFatgraph& g, const BoundaryCycle& c, bool reversed) {
  HalfEdge mark = marking_of(g.fatgraph, c);
  if (g.length[mark] != 0) throw PreconditionError("marking edge must have length zero");
  auto walk = rotate_to(c, mark).half_edges;
  if (!reversed) return walk;
  std::vector<HalfEdge> rev;
  for (auto it = walk.rbegin(); it != walk.rend(); ++it) rev.push_back(g.fatgraph.partner(*it));
  return rev;
}

inline Rational cycle_length(const PseudometricFatgraph& g, const BoundaryCycle& c) {
  Rational s = 0;
  for (HalfEdge h : c.half_edges) s += g.length[h];
  return s;
}

namespace detail {
inline RealizationPoint walk_to(const PseudometricFatgraph& g, const std::vector<HalfEdge>& walk, const Rational& t) {
  Rational total = 0;
  for (HalfEdge h : walk) total += g.length[h];
  if (t < 0 || t > total) throw PreconditionError("boundary parameter out of range");
  Rational cum = 0;
  for (HalfEdge h : walk) {
    if (t <= cum + g.length[h]) return normalize(g, RealizationPoint::on_edge(h, t - cum));
    cum += g.length[h];
  }
  return RealizationPoint::at_vertex(g.fatgraph.source(walk.front()));
}
}  // namespace detail

/// The circle parametrization of a marked boundary cycle, on [0, L].
inline RealizationPoint boundary_param(const PseudometricFatgraph& g, const BoundaryCycle& c, const Rational& t) {
  return detail::walk_to(g, marked_walk(g, c, false), t);
}

inline RealizationPoint boundary_param_reversed(const PseudometricFatgraph& g, const BoundaryCycle& c,
                                                const Rational& t) {
  return detail::walk_to(g, marked_walk(g, c, true), t);
}

/// Least t in [0, L] with boundary_param(t) equal to x in |G|.
inline Rational boundary_preimage(const PseudometricFatgraph& g, const BoundaryCycle& c, const RealizationPoint& x0,
                                  const std::vector<Vertex>& classes) {
  RealizationPoint x = normalize(g, x0);
  auto walk = marked_walk(g, c, false);
  Rational cum = 0;
  for (HalfEdge h : walk) {
    const Fatgraph& f = g.fatgraph;
    if (x.is_vertex()) {
      if (classes[f.source(h)] == classes[x.vertex]) return cum;
    } else if (x.edge == h) {
      return cum + x.t;
    } else if (x.edge == f.partner(h)) {
      return cum + g.length[h] - x.t;
    }
    cum += g.length[h];
  }
  if (x.is_vertex() && classes[g.fatgraph.source(walk.front())] == classes[x.vertex]) return 0;
  throw PreconditionError("point does not lie on the boundary cycle");
}

}  // namespace strtop
