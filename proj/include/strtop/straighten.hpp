#pragma once

#include <map>
#include <set>
#include <vector>

#include "strtop/metric.hpp"
#include "strtop/stringdiag.hpp"

namespace strtop {

/// Exact barycentric coordinates over a leaf set.
struct SimplexPoint {
  std::map<int, Rational> coords;

  bool operator==(const SimplexPoint& o) const { return coords == o.coords; }

  bool is_valid() const {
    Rational s = 0;
    for (const auto& [k, c] : coords) {
      if (c < 0) return false;
      s += c;
    }
    return s == 1;
  }

  /// Drops zero coordinates, so points over different key sets compare.
  SimplexPoint support() const {
    SimplexPoint p;
    for (const auto& [k, c] : coords)
      if (c != 0) p.coords[k] = c;
    return p;
  }

  static SimplexPoint vertex(int key) {
    SimplexPoint p;
    p.coords[key] = 1;
    return p;
  }
};

/// v-zero cells (vertex classes of |T|, plus v when it is not at a vertex)
/// and the v-one cells joining them.
struct VCellDecomposition {
  struct OneCell {
    int a = 0, b = 0;
    Rational length;
  };
  std::vector<RealizationPoint> zero_cells;  // least vertex of the class, or v
  std::vector<int> leaves_at;                // leaves of T whose image is the cell
  std::vector<OneCell> one_cells;
  std::vector<std::vector<std::pair<int, int>>> adjacent;  // (cell, one-cell)
  std::vector<int> cell_of_vertex;
  int v_cell = 0;
  int leaf_total = 0;
  Rational total_length;
};

inline VCellDecomposition v_cells(const PseudometricFatgraph& t, const RealizationPoint& v0) {
  if (!is_tree(t.fatgraph.graph)) throw PreconditionError("straightening needs a tree");
  RealizationPoint v = normalize(t, v0);
  const Fatgraph& f = t.fatgraph;
  auto cls = zero_classes(t);
  VCellDecomposition c;
  std::map<Vertex, int> index;
  c.cell_of_vertex.resize(f.vertex_count());
  for (Vertex x = 0; x < f.vertex_count(); ++x) {
    auto [it, fresh] = index.try_emplace(cls[x], static_cast<int>(c.zero_cells.size()));
    if (fresh) {
      c.zero_cells.push_back(RealizationPoint::at_vertex(cls[x]));
      c.leaves_at.push_back(0);
    }
    c.cell_of_vertex[x] = it->second;
  }
  auto val = f.graph.valences();
  for (Vertex x = 0; x < f.vertex_count(); ++x)
    if (val[x] == 1) {
      ++c.leaves_at[c.cell_of_vertex[x]];
      ++c.leaf_total;
    }
  c.adjacent.resize(c.zero_cells.size());
  auto link = [&](int a, int b, const Rational& len) {
    int id = static_cast<int>(c.one_cells.size());
    c.one_cells.push_back({a, b, len});
    c.adjacent[a].push_back({b, id});
    c.adjacent[b].push_back({a, id});
  };
  if (v.is_vertex()) {
    c.v_cell = c.cell_of_vertex[v.vertex];
  } else {
    c.v_cell = static_cast<int>(c.zero_cells.size());
    c.zero_cells.push_back(v);
    c.leaves_at.push_back(0);
    c.adjacent.emplace_back();
  }
  for (HalfEdge h = 0; h < f.half_edge_count(); ++h) {
    if (h > f.partner(h) || t.length[h] == 0) continue;
    int a = c.cell_of_vertex[f.source(h)], b = c.cell_of_vertex[f.source(f.partner(h))];
    if (!v.is_vertex() && v.edge == h) {
      link(a, c.v_cell, v.t);
      link(c.v_cell, b, t.length[h] - v.t);
    } else {
      link(a, b, t.length[h]);
    }
  }
  c.total_length = t.total_length();
  return c;
}

namespace detail {

/// Leaf count and total length of the side of the one-cell (from, to) that
/// contains `to`, including that one-cell.
struct Side {
  int leaves = 0;
  Rational length;
};

inline Side side(const VCellDecomposition& c, int from, int to) {
  Side s;
  std::vector<std::pair<int, int>> stack{{to, from}};
  for (const auto& [n, id] : c.adjacent[from])
    if (n == to) {
      s.length += c.one_cells[id].length;
      break;
    }
  while (!stack.empty()) {
    auto [x, parent] = stack.back();
    stack.pop_back();
    s.leaves += c.leaves_at[x];
    for (const auto& [y, id] : c.adjacent[x])
      if (y != parent) {
        s.length += c.one_cells[id].length;
        stack.push_back({y, x});
      }
  }
  return s;
}

/// The neighbour of i on the path from i to j.
inline int toward(const VCellDecomposition& c, int i, int j) {
  std::vector<int> parent(c.zero_cells.size(), -1);
  std::vector<int> stack{i};
  parent[i] = i;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (const auto& [y, id] : c.adjacent[x])
      if (parent[y] == -1) {
        parent[y] = x;
        stack.push_back(y);
      }
  }
  if (parent[j] == -1) throw PreconditionError("zero cells are not connected");
  int x = j;
  while (parent[x] != i) x = parent[x];
  return x;
}

}  // namespace detail

/// D(v_i, v_j) for zero cells given by index.
inline Rational deviation(const VCellDecomposition& c, int i, int j) {
  if (i == j) throw PreconditionError("deviation needs distinct zero cells");
  auto s = detail::side(c, i, detail::toward(c, i, j));
  return Rational(s.leaves) - s.length;
}

/// Index of the zero cell holding p, which must be a vertex image or v.
inline int zero_cell_index(const VCellDecomposition& c, const PseudometricFatgraph& t, const RealizationPoint& p0) {
  RealizationPoint p = normalize(t, p0);
  if (p.is_vertex()) return c.cell_of_vertex[p.vertex];
  const RealizationPoint& v = c.zero_cells[c.v_cell];
  if (!v.is_vertex() && v == p) return c.v_cell;
  throw PreconditionError("point is not a zero cell for this v");
}

inline Rational deviation(const PseudometricFatgraph& t, const RealizationPoint& v, const RealizationPoint& vi,
                          const RealizationPoint& vj) {
  auto c = v_cells(t, v);
  return deviation(c, zero_cell_index(c, t, vi), zero_cell_index(c, t, vj));
}

/// a(v, w) for every leaf vertex w of a short-branched tree, by the product
/// of D(v_i, v_{i+1}) / (1 - D(v_{i+1}, v_i)) along the path from v.
inline std::map<Vertex, Rational> barycentric(const PseudometricFatgraph& t, const RealizationPoint& v) {
  if (!is_short_branched(t).short_branched) throw PreconditionError("tree is not short branched");
  auto c = v_cells(t, v);
  const int n = static_cast<int>(c.zero_cells.size());
  std::vector<Rational> a(n);
  std::vector<int> parent(n, -1);
  std::vector<int> order{c.v_cell};
  a[c.v_cell] = 1;
  parent[c.v_cell] = c.v_cell;
  for (std::size_t k = 0; k < order.size(); ++k) {
    int x = order[k];
    for (const auto& [y, id] : c.adjacent[x]) {
      if (parent[y] != -1) continue;
      parent[y] = x;
      order.push_back(y);
      if (a[x] == 0) {
        a[y] = 0;
        continue;
      }
      auto fwd = detail::side(c, x, y);
      auto back = detail::side(c, y, x);
      Rational num = Rational(fwd.leaves) - fwd.length;
      Rational den = 1 - (Rational(back.leaves) - back.length);
      if (den == 0) throw PreconditionError("deviation reached one; tree is not short branched");
      a[y] = a[x] * num / den;
    }
  }
  std::map<Vertex, Rational> out;
  auto val = t.fatgraph.graph.valences();
  for (Vertex w = 0; w < t.fatgraph.vertex_count(); ++w)
    if (val[w] == 1) out[w] = a[c.cell_of_vertex[w]];
  return out;
}

/// Straightening |T| -> simplex on the leaves, keyed by leaf half-edge.
inline SimplexPoint straighten_tree(const PseudometricFatgraph& t, const RealizationPoint& v) {
  auto bary = barycentric(t, v);
  SimplexPoint p;
  for (HalfEdge h = 0; h < t.fatgraph.half_edge_count(); ++h) {
    auto it = bary.find(t.fatgraph.source(h));
    if (it != bary.end()) p.coords[h] = it->second;
  }
  return p;
}

// ---------------------------------------------------------------------------
// components of the intersection graph

/// Trees of a component in layers: a tree enters a layer once every leaf is
/// on a circle or on a tree of an earlier layer.
inline std::vector<std::vector<int>> ordered_partition(const CombinatorialStringDiagram& d, const IntersectionGraph& ig,
                                                       int component) {
  const auto& trees = ig.component_trees.at(component);
  std::vector<int> owner(d.fatgraph.vertex_count(), kNone);
  for (int j = 0; j < d.tree_count(); ++j)
    for (Vertex v : d.fundamental[j]) owner[v] = j;
  std::map<int, std::vector<int>> needs;
  for (int j : trees)
    for (HalfEdge h : tree_leaves(d, j)) {
      int o = owner[d.fatgraph.source(h)];
      if (o != kNone) needs[j].push_back(o);
    }
  std::vector<std::vector<int>> parts;
  std::set<int> placed;
  while (placed.size() < trees.size()) {
    std::vector<int> layer;
    for (int j : trees) {
      if (placed.count(j)) continue;
      bool ok = true;
      for (int o : needs[j]) ok = ok && placed.count(o);
      if (ok) layer.push_back(j);
    }
    if (layer.empty()) throw PreconditionError("trees of the component cannot be layered");
    for (int j : layer) placed.insert(j);
    parts.push_back(std::move(layer));
  }
  return parts;
}

/// Straightening of one component of the intersection graph.  Leaf keys are
/// the diagram half-edges of the component's leaves.
class ComponentStraightener {
 public:
  ComponentStraightener(const StringDiagram& d, const IntersectionGraph& ig, int component)
      : d_(d), ig_(ig), component_(component) {
    parts_ = ordered_partition(d.shape, ig, component);
    owner_.assign(d.shape.fatgraph.vertex_count(), kNone);
    for (int j = 0; j < d.shape.tree_count(); ++j)
      for (Vertex v : d.shape.fundamental[j]) owner_[v] = j;
    for (const auto& part : parts_)
      for (int j : part) {
        views_[j] = tree_view(d.shape, j);
        metrics_[j] = tree_metric(views_[j], d.length);
        for (HalfEdge lh : views_[j].leaves) {
          HalfEdge h = views_[j].to_diagram[lh];
          Vertex at = d.shape.fatgraph.source(h);
          leaf_image_[h] = owner_[at] == kNone ? SimplexPoint::vertex(h) : at_fundamental(at);
        }
      }
  }

  const std::vector<std::vector<int>>& partition() const { return parts_; }

  /// x is a point of the intersection graph (its own half-edge/vertex ids).
  SimplexPoint operator()(const RealizationPoint& x) const {
    const Fatgraph& hat = ig_.fatgraph;
    if (x.is_vertex()) {
      if (ig_.parts.of_vertex[x.vertex] != component_) throw PreconditionError("point outside the component");
      Vertex y = ig_.vertex_to_diagram[x.vertex];
      if (owner_[y] == kNone) {
        for (HalfEdge h : ig_.leaves)
          if (hat.source(h) == x.vertex) return SimplexPoint::vertex(ig_.to_diagram[h]);
        throw PreconditionError("vertex is neither a leaf nor fundamental");
      }
      return at_fundamental(y);
    }
    if (ig_.parts.of_half_edge[x.edge] != component_) throw PreconditionError("point outside the component");
    HalfEdge h = ig_.to_diagram[x.edge];
    int j = d_.shape.tag[h].index;
    const auto& view = views_.at(j);
    return push(j, straighten_tree(metrics_.at(j), RealizationPoint::on_edge(view.from_diagram[h], x.t)));
  }

  /// Straightening at a fundamental vertex of a tree in the component.
  SimplexPoint at_fundamental(Vertex y) const {
    int j = owner_[y];
    const auto& view = views_.at(j);
    Vertex local = kNone;
    for (Vertex v = 0; v < view.fatgraph.vertex_count(); ++v)
      if (view.vertex_to_diagram[v] == y && view.fatgraph.graph.valences()[v] > 1) local = v;
    return push(j, straighten_tree(metrics_.at(j), RealizationPoint::at_vertex(local)));
  }

 private:
  SimplexPoint push(int j, const SimplexPoint& local) const {
    const auto& view = views_.at(j);
    SimplexPoint out;
    for (HalfEdge h : ig_.component_leaves[component_]) out.coords[h] = 0;
    for (const auto& [lh, a] : local.coords) {
      if (a == 0) continue;
      const SimplexPoint& img = leaf_image_.at(view.to_diagram[lh]);
      for (const auto& [k, b] : img.coords) out.coords[k] += a * b;
    }
    return out;
  }

  const StringDiagram& d_;
  const IntersectionGraph& ig_;
  int component_;
  std::vector<std::vector<int>> parts_;
  std::vector<int> owner_;
  std::map<int, TreeView> views_;
  std::map<int, PseudometricFatgraph> metrics_;
  std::map<HalfEdge, SimplexPoint> leaf_image_;
};

inline SimplexPoint straighten_component(const StringDiagram& d, const IntersectionGraph& ig, int component,
                                         const RealizationPoint& x) {
  return ComponentStraightener(d, ig, component)(x);
}

/// The intersection-graph point corresponding to a diagram point that lies on
/// a tree edge or at a fundamental vertex.
inline RealizationPoint to_intersection_point(const StringDiagram& d, const IntersectionGraph& ig,
                                              const RealizationPoint& x0) {
  RealizationPoint x = normalize(realization(d), x0);
  if (!x.is_vertex()) {
    if (d.shape.tag[x.edge].part != Part::tree) throw PreconditionError("point is not on a tree edge");
    return RealizationPoint::on_edge(ig.from_diagram[x.edge], x.t);
  }
  auto val = ig.fatgraph.graph.valences();
  for (Vertex v = 0; v < ig.fatgraph.vertex_count(); ++v)
    if (ig.vertex_to_diagram[v] == x.vertex && val[v] > 1) return RealizationPoint::at_vertex(v);
  throw PreconditionError("vertex is not a fundamental tree vertex");
}

}  // namespace strtop
