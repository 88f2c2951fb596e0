#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "strtop/error.hpp"

namespace strtop {

using HalfEdge = int;
using Vertex = int;
inline constexpr int kNone = -1;

/// A graph (V, H, s, i) with dense integer ids.  Edges are the orbits of the
/// involution; an edge is named by its lesser half-edge.
struct Graph {
  int vertex_count = 0;
  std::vector<Vertex> source;
  std::vector<HalfEdge> involution;

  int half_edge_count() const { return static_cast<int>(source.size()); }
  int edge_count() const { return half_edge_count() / 2; }
  HalfEdge partner(HalfEdge h) const { return involution[h]; }
  HalfEdge edge_of(HalfEdge h) const { return std::min(h, involution[h]); }

  std::vector<HalfEdge> edges() const {
    std::vector<HalfEdge> out;
    for (HalfEdge h = 0; h < half_edge_count(); ++h)
      if (h < involution[h]) out.push_back(h);
    return out;
  }

  std::vector<std::vector<HalfEdge>> incidence() const {
    std::vector<std::vector<HalfEdge>> inc(vertex_count);
    for (HalfEdge h = 0; h < half_edge_count(); ++h) inc[source[h]].push_back(h);
    return inc;
  }

  std::vector<int> valences() const {
    std::vector<int> val(vertex_count, 0);
    for (Vertex v : source) ++val[v];
    return val;
  }

  bool is_loop(HalfEdge h) const { return source[h] == source[involution[h]]; }

  void validate() const {
    const int n = half_edge_count();
    if (static_cast<int>(involution.size()) != n)
      throw ValidationError("involution and source sizes differ");
    std::vector<char> hit(vertex_count, 0);
    for (HalfEdge h = 0; h < n; ++h) {
      HalfEdge g = involution[h];
      if (g < 0 || g >= n) throw ValidationError("involution out of range at half-edge " + std::to_string(h));
      if (g == h) throw ValidationError("involution has a fixed point at half-edge " + std::to_string(h));
      if (involution[g] != h) throw ValidationError("involution is not self-inverse at half-edge " + std::to_string(h));
      Vertex v = source[h];
      if (v < 0 || v >= vertex_count) throw ValidationError("source out of range at half-edge " + std::to_string(h));
      hit[v] = 1;
    }
    for (Vertex v = 0; v < vertex_count; ++v)
      if (!hit[v]) throw ValidationError("source is not surjective: vertex " + std::to_string(v) + " has no half-edge");
  }
};

/// A graph with a cyclic order at every vertex, stored as the successor map
/// sigma on half-edges.
struct Fatgraph {
  Graph graph;
  std::vector<HalfEdge> successor;

  /// Vertex v receives the half-edges orders[v] in that cyclic order.
  static Fatgraph from_orders(std::vector<HalfEdge> involution, const std::vector<std::vector<HalfEdge>>& orders) {
    Fatgraph f;
    const int n = static_cast<int>(involution.size());
    f.graph.vertex_count = static_cast<int>(orders.size());
    f.graph.involution = std::move(involution);
    f.graph.source.assign(n, kNone);
    f.successor.assign(n, kNone);
    for (Vertex v = 0; v < f.graph.vertex_count; ++v) {
      const auto& ord = orders[v];
      for (std::size_t i = 0; i < ord.size(); ++i) {
        HalfEdge h = ord[i];
        if (h < 0 || h >= n) throw ValidationError("cyclic order names unknown half-edge " + std::to_string(h));
        if (f.graph.source[h] != kNone)
          throw ValidationError("half-edge " + std::to_string(h) + " appears in two cyclic orders");
        f.graph.source[h] = v;
        f.successor[h] = ord[(i + 1) % ord.size()];
      }
    }
    for (HalfEdge h = 0; h < n; ++h)
      if (f.graph.source[h] == kNone) throw ValidationError("half-edge " + std::to_string(h) + " has no vertex");
    return f;
  }

  int half_edge_count() const { return graph.half_edge_count(); }
  int vertex_count() const { return graph.vertex_count; }
  int edge_count() const { return graph.edge_count(); }
  HalfEdge partner(HalfEdge h) const { return graph.involution[h]; }
  Vertex source(HalfEdge h) const { return graph.source[h]; }

  HalfEdge predecessor(HalfEdge h) const {
    HalfEdge p = h;
    while (successor[p] != h) p = successor[p];
    return p;
  }

  /// The cyclic order at v, rotated to start at its least half-edge.
  std::vector<HalfEdge> cyclic_order(Vertex v) const {
    HalfEdge start = kNone;
    for (HalfEdge h = 0; h < half_edge_count(); ++h)
      if (graph.source[h] == v) {
        start = h;
        break;
      }
    std::vector<HalfEdge> out;
    if (start == kNone) return out;
    HalfEdge h = start;
    do {
      out.push_back(h);
      h = successor[h];
    } while (h != start);
    return out;
  }

  std::vector<std::vector<HalfEdge>> cyclic_orders() const {
    std::vector<std::vector<HalfEdge>> out(vertex_count());
    for (Vertex v = 0; v < vertex_count(); ++v) out[v] = cyclic_order(v);
    return out;
  }

  void validate() const {
    graph.validate();
    const int n = half_edge_count();
    if (static_cast<int>(successor.size()) != n) throw ValidationError("successor map has wrong size");
    std::vector<char> seen(n, 0);
    auto val = graph.valences();
    for (HalfEdge h = 0; h < n; ++h) {
      HalfEdge s = successor[h];
      if (s < 0 || s >= n) throw ValidationError("successor out of range at half-edge " + std::to_string(h));
      if (seen[s]) throw ValidationError("successor map is not a permutation");
      seen[s] = 1;
    }
    std::vector<char> done(n, 0);
    for (HalfEdge h = 0; h < n; ++h) {
      if (done[h]) continue;
      Vertex v = graph.source[h];
      int len = 0;
      HalfEdge g = h;
      do {
        if (graph.source[g] != v)
          throw ValidationError("cyclic order at vertex " + std::to_string(v) + " leaves the vertex");
        done[g] = 1;
        ++len;
        g = successor[g];
      } while (g != h);
      if (len != val[v])
        throw ValidationError("cyclic order at vertex " + std::to_string(v) + " is not a single cycle");
    }
  }
};

struct BoundaryCycle {
  std::vector<HalfEdge> half_edges;
  bool operator==(const BoundaryCycle&) const = default;
};

/// Next half-edge along a boundary cycle: the successor of the partner.
inline HalfEdge boundary_next(const Fatgraph& g, HalfEdge h) { return g.successor[g.partner(h)]; }

/// All boundary cycles; each starts at its least half-edge, and the list is
/// sorted by that half-edge.
inline std::vector<BoundaryCycle> boundary_cycles(const Fatgraph& g) {
  g.validate();
  const int n = g.half_edge_count();
  std::vector<char> seen(n, 0);
  std::vector<BoundaryCycle> out;
  for (HalfEdge h = 0; h < n; ++h) {
    if (seen[h]) continue;
    BoundaryCycle c;
    HalfEdge x = h;
    do {
      seen[x] = 1;
      c.half_edges.push_back(x);
      x = boundary_next(g, x);
    } while (x != h);
    out.push_back(std::move(c));
  }
  return out;
}

/// The cycle rotated so that it starts at h (which must lie on it).
inline BoundaryCycle rotate_to(const BoundaryCycle& c, HalfEdge h) {
  auto it = std::find(c.half_edges.begin(), c.half_edges.end(), h);
  if (it == c.half_edges.end()) throw PreconditionError("half-edge not on boundary cycle");
  BoundaryCycle r;
  r.half_edges.assign(it, c.half_edges.end());
  r.half_edges.insert(r.half_edges.end(), c.half_edges.begin(), it);
  return r;
}

inline int euler_characteristic(const Graph& g) { return g.vertex_count - g.edge_count(); }
inline int euler_characteristic(const Fatgraph& g) { return euler_characteristic(g.graph); }

struct Components {
  int count = 0;
  std::vector<int> of_vertex;     // component index per vertex
  std::vector<int> of_half_edge;  // component index per half-edge
};

/// Components numbered in order of their least vertex.
inline Components components(const Graph& g) {
  std::vector<int> parent(g.vertex_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
    int a = find(g.source[h]), b = find(g.source[g.involution[h]]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  Components c;
  c.of_vertex.assign(g.vertex_count, kNone);
  std::vector<int> label(g.vertex_count, kNone);
  for (Vertex v = 0; v < g.vertex_count; ++v) {
    int r = find(v);
    if (label[r] == kNone) label[r] = c.count++;
    c.of_vertex[v] = label[r];
  }
  c.of_half_edge.resize(g.half_edge_count());
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) c.of_half_edge[h] = c.of_vertex[g.source[h]];
  return c;
}

inline bool is_connected(const Graph& g) { return g.vertex_count > 0 && components(g).count == 1; }

inline bool is_tree(const Graph& g) { return is_connected(g) && euler_characteristic(g) == 1; }

inline bool is_cycle_graph(const Graph& g) {
  if (!is_connected(g)) return false;
  for (int d : g.valences())
    if (d != 2) return false;
  return true;
}

template <class G>
struct Exploded {
  G graph;
  std::vector<Vertex> to_original;  // new vertex -> vertex of the input graph
};

/// New vertex numbering: untouched vertices keep their relative order first,
/// then one vertex per half-edge of each exploded vertex, ordered by
/// (vertex, half-edge).
inline Exploded<Graph> vertex_explosion(const Graph& g, const std::vector<Vertex>& vs) {
  std::vector<char> hit(g.vertex_count, 0);
  for (Vertex v : vs) {
    if (v < 0 || v >= g.vertex_count) throw PreconditionError("unknown vertex " + std::to_string(v));
    hit[v] = 1;
  }
  Exploded<Graph> out;
  out.graph.involution = g.involution;
  out.graph.source.assign(g.half_edge_count(), kNone);
  std::vector<Vertex> renum(g.vertex_count, kNone);
  for (Vertex v = 0; v < g.vertex_count; ++v)
    if (!hit[v]) {
      renum[v] = static_cast<Vertex>(out.to_original.size());
      out.to_original.push_back(v);
    }
  auto inc = g.incidence();
  for (Vertex v = 0; v < g.vertex_count; ++v) {
    if (hit[v]) {
      for (HalfEdge h : inc[v]) {
        out.graph.source[h] = static_cast<Vertex>(out.to_original.size());
        out.to_original.push_back(v);
      }
    } else {
      for (HalfEdge h : inc[v]) out.graph.source[h] = renum[v];
    }
  }
  out.graph.vertex_count = static_cast<int>(out.to_original.size());
  return out;
}

inline Exploded<Fatgraph> vertex_explosion(const Fatgraph& g, const std::vector<Vertex>& vs) {
  auto e = vertex_explosion(g.graph, vs);
  Exploded<Fatgraph> out;
  out.graph.graph = std::move(e.graph);
  out.to_original = std::move(e.to_original);
  out.graph.successor = g.successor;
  std::vector<char> hit(g.vertex_count(), 0);
  for (Vertex v : vs) hit[v] = 1;
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h)
    if (hit[g.source(h)]) out.graph.successor[h] = h;
  return out;
}

/// Pruning at v along S: each h in S gets its own new univalent vertex,
/// appended after the existing vertices in the order of S.
inline Exploded<Graph> prune_graph(const Graph& g, Vertex v, const std::vector<HalfEdge>& S) {
  if (v < 0 || v >= g.vertex_count) throw PreconditionError("unknown vertex " + std::to_string(v));
  int at_v = 0;
  for (Vertex s : g.source)
    if (s == v) ++at_v;
  std::vector<HalfEdge> sorted = S;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw PreconditionError("pruning set has repeated half-edges");
  for (HalfEdge h : S)
    if (h < 0 || h >= g.half_edge_count() || g.source[h] != v)
      throw PreconditionError("pruning set contains a half-edge not at the vertex");
  if (static_cast<int>(S.size()) == at_v) throw PreconditionError("pruning set must be a proper subset");
  Exploded<Graph> out;
  out.graph = g;
  out.to_original.resize(g.vertex_count);
  std::iota(out.to_original.begin(), out.to_original.end(), 0);
  for (HalfEdge h : S) {
    out.graph.source[h] = out.graph.vertex_count++;
    out.to_original.push_back(v);
  }
  return out;
}

inline Exploded<Fatgraph> prune_graph(const Fatgraph& g, Vertex v, const std::vector<HalfEdge>& S) {
  auto p = prune_graph(g.graph, v, S);
  Exploded<Fatgraph> out;
  out.graph.graph = std::move(p.graph);
  out.to_original = std::move(p.to_original);
  out.graph.successor = g.successor;
  std::vector<char> in_s(g.half_edge_count(), 0);
  for (HalfEdge h : S) in_s[h] = 1;
  // the remaining half-edges at v keep their induced cyclic order
  auto order = g.cyclic_order(v);
  std::vector<HalfEdge> rest;
  for (HalfEdge h : order)
    if (!in_s[h]) rest.push_back(h);
  for (std::size_t i = 0; i < rest.size(); ++i) out.graph.successor[rest[i]] = rest[(i + 1) % rest.size()];
  for (HalfEdge h : S) out.graph.successor[h] = h;
  return out;
}

template <class G>
struct Contracted {
  G graph;
  std::vector<HalfEdge> half_edge_map;  // old -> new, kNone for the removed pair
  std::vector<Vertex> vertex_map;       // old -> new
};

inline void check_contractible(const Graph& g, HalfEdge h) {
  if (h < 0 || h >= g.half_edge_count()) throw PreconditionError("unknown half-edge " + std::to_string(h));
  HalfEdge k = g.involution[h];
  Vertex x = g.source[h], y = g.source[k];
  if (x == y) throw PreconditionError("cannot contract a loop");
  auto val = g.valences();
  if (val[x] == 1 && val[y] == 1) throw PreconditionError("cannot contract a segment component");
}

/// Contract the edge {h, i(h)}.  The merged vertex takes the lesser id, the
/// other vertex id is removed and later ids shift down; half-edges are
/// renumbered compactly in their old order.
inline Contracted<Graph> contract_edge(const Graph& g, HalfEdge h) {
  check_contractible(g, h);
  HalfEdge k = g.involution[h];
  Vertex x = g.source[h], y = g.source[k];
  Vertex keep = std::min(x, y), gone = std::max(x, y);
  Contracted<Graph> out;
  out.vertex_map.resize(g.vertex_count);
  for (Vertex v = 0; v < g.vertex_count; ++v)
    out.vertex_map[v] = v == gone ? keep : (v > gone ? v - 1 : v);
  out.half_edge_map.assign(g.half_edge_count(), kNone);
  int next = 0;
  for (HalfEdge a = 0; a < g.half_edge_count(); ++a)
    if (a != h && a != k) out.half_edge_map[a] = next++;
  out.graph.vertex_count = g.vertex_count - 1;
  out.graph.source.resize(next);
  out.graph.involution.resize(next);
  for (HalfEdge a = 0; a < g.half_edge_count(); ++a) {
    int na = out.half_edge_map[a];
    if (na == kNone) continue;
    out.graph.source[na] = out.vertex_map[g.source[a]];
    out.graph.involution[na] = out.half_edge_map[g.involution[a]];
  }
  return out;
}

/// Fat contraction: the merged cyclic order is the order at s(h) after h
/// followed by the order at s(i(h)) after i(h).
inline Contracted<Fatgraph> contract_edge(const Fatgraph& g, HalfEdge h) {
  auto c = contract_edge(g.graph, h);
  HalfEdge k = g.partner(h);
  std::vector<HalfEdge> merged;
  for (HalfEdge a = g.successor[h]; a != h; a = g.successor[a]) merged.push_back(a);
  for (HalfEdge a = g.successor[k]; a != k; a = g.successor[a]) merged.push_back(a);
  Contracted<Fatgraph> out;
  out.graph.graph = std::move(c.graph);
  out.half_edge_map = std::move(c.half_edge_map);
  out.vertex_map = std::move(c.vertex_map);
  out.graph.successor.assign(out.graph.graph.half_edge_count(), kNone);
  for (HalfEdge a = 0; a < g.half_edge_count(); ++a) {
    int na = out.half_edge_map[a];
    if (na == kNone) continue;
    out.graph.successor[na] = out.half_edge_map[g.successor[a]];
  }
  for (std::size_t i = 0; i < merged.size(); ++i)
    out.graph.successor[out.half_edge_map[merged[i]]] = out.half_edge_map[merged[(i + 1) % merged.size()]];
  return out;
}

/// Restriction of a fatgraph to a set of edges (given by half-edges; both
/// halves are included).  Vertices are renumbered in increasing order and
/// cyclic orders are the induced ones.
struct Subfatgraph {
  Fatgraph graph;
  std::vector<HalfEdge> to_parent;       // local half-edge -> parent half-edge
  std::vector<Vertex> vertex_to_parent;  // local vertex -> parent vertex
  std::vector<HalfEdge> from_parent;     // parent half-edge -> local, kNone outside
};

inline Subfatgraph restrict_to_edges(const Fatgraph& g, const std::vector<HalfEdge>& edge_half_edges) {
  const int n = g.half_edge_count();
  std::vector<char> in(n, 0);
  for (HalfEdge h : edge_half_edges) {
    in[h] = 1;
    in[g.partner(h)] = 1;
  }
  Subfatgraph s;
  s.from_parent.assign(n, kNone);
  for (HalfEdge h = 0; h < n; ++h)
    if (in[h]) {
      s.from_parent[h] = static_cast<int>(s.to_parent.size());
      s.to_parent.push_back(h);
    }
  std::vector<Vertex> vmap(g.vertex_count(), kNone);
  for (HalfEdge h : s.to_parent) vmap[g.source(h)] = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (vmap[v] != kNone) {
      vmap[v] = static_cast<Vertex>(s.vertex_to_parent.size());
      s.vertex_to_parent.push_back(v);
    }
  const int m = static_cast<int>(s.to_parent.size());
  Fatgraph& f = s.graph;
  f.graph.vertex_count = static_cast<int>(s.vertex_to_parent.size());
  f.graph.source.resize(m);
  f.graph.involution.resize(m);
  f.successor.resize(m);
  for (int a = 0; a < m; ++a) {
    HalfEdge h = s.to_parent[a];
    f.graph.source[a] = vmap[g.source(h)];
    f.graph.involution[a] = s.from_parent[g.partner(h)];
    HalfEdge nx = g.successor[h];
    while (!in[nx]) nx = g.successor[nx];
    f.successor[a] = s.from_parent[nx];
  }
  return s;
}

}  // namespace strtop
