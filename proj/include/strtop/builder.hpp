#pragma once

#include <vector>

#include "strtop/stringdiag.hpp"

namespace strtop {

/// Assembles combinatorial string diagrams from lollipops, plane trees and
/// marking segments.  Every attachment goes into the gap of its site that is
/// off the marked input cycle, so inputs are preserved by construction.
///
/// Circle sites: position 0 is the trivalent vertex u, positions 1..p are the
/// bivalent circle vertices in the order the input cycle visits them.
/// Tree sites: (local internal vertex, gap g), where gap g follows the g-th
/// half-edge of the vertex's cyclic order (started at its least half-edge).
/// Attachments in one gap keep their call order.
class DiagramBuilder {
 public:
  struct Site {
    bool on_circle = true;
    int owner = 0;  // input index or tree index
    int vertex = 0;  // circle position or local tree vertex
    int gap = 0;
  };

  static Site circle(int input, int position) { return {true, input, position, 0}; }
  static Site tree_vertex(int tree, Vertex v, int gap) { return {false, tree, v, gap}; }

  int add_input(int bivalent) {
    inputs_.push_back(bivalent);
    circle_groups_.emplace_back(bivalent + 1);
    return static_cast<int>(inputs_.size()) - 1;
  }

  int add_tree(const Fatgraph& tree) {
    TreeSlot s;
    s.tree = tree;
    auto val = tree.graph.valences();
    s.leaf_site.assign(tree.half_edge_count(), Site{});
    s.leaf_attached.assign(tree.half_edge_count(), 0);
    s.groups.resize(tree.vertex_count());
    for (Vertex v = 0; v < tree.vertex_count(); ++v)
      if (val[v] >= 2) s.groups[v].resize(val[v]);
    trees_.push_back(std::move(s));
    return static_cast<int>(trees_.size()) - 1;
  }

  int add_output() {
    outputs_.push_back(Site{});
    output_attached_.push_back(0);
    return static_cast<int>(outputs_.size()) - 1;
  }

  void attach_tree_leaf(int tree, HalfEdge leaf, Site s) {
    auto& t = trees_.at(tree);
    if (t.tree.graph.valences()[t.tree.source(leaf)] != 1) throw PreconditionError("not a leaf half-edge");
    if (t.leaf_attached[leaf]) throw PreconditionError("leaf attached twice");
    t.leaf_attached[leaf] = 1;
    group(s).push_back({Attacher::tree_leaf, tree, leaf});
  }

  void attach_output(int output, Site s) {
    if (output_attached_.at(output)) throw PreconditionError("output attached twice");
    output_attached_[output] = 1;
    group(s).push_back({Attacher::output, output, 0});
  }

  CombinatorialStringDiagram build() const {
    CombinatorialStringDiagram d;
    d.inputs = static_cast<int>(inputs_.size());
    d.outputs = static_cast<int>(outputs_.size());
    int nh = 0;
    std::vector<int> q_base, t_base, l_base;
    for (int p : inputs_) {
      q_base.push_back(nh);
      nh += 2 + 2 * (p + 1);
    }
    for (const auto& t : trees_) {
      t_base.push_back(nh);
      nh += t.tree.half_edge_count();
    }
    for (std::size_t i = 0; i < outputs_.size(); ++i) {
      l_base.push_back(nh);
      nh += 2;
    }
    std::vector<HalfEdge> inv(nh);
    d.tag.resize(nh);
    std::vector<std::vector<HalfEdge>> orders;

    auto attacher_half = [&](const Attacher& a) {
      return a.kind == Attacher::tree_leaf ? t_base[a.owner] + a.local : l_base[a.owner] + 1;
    };

    // inputs: [q, a, b, c1, d1, ..., cp, dp, c]
    std::vector<std::vector<Vertex>> circle_vertex(inputs_.size());
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      int p = inputs_[i], base = q_base[i];
      HalfEdge q = base, a = base + 1;
      inv[q] = a;
      inv[a] = q;
      // circle edge j joins position j to position j+1 (mod p+1); halves base+2+2j, base+3+2j
      for (int j = 0; j <= p; ++j) {
        HalfEdge from = base + 2 + 2 * j, to = base + 3 + 2 * j;
        inv[from] = to;
        inv[to] = from;
      }
      for (HalfEdge h = base; h < base + 2 + 2 * (p + 1); ++h) d.tag[h] = {Part::input, static_cast<int>(i)};
      orders.push_back({q});
      // u: a, outgoing half of edge 0, attachments, incoming half of edge p
      std::vector<HalfEdge> u{a, base + 2};
      for (const auto& at : circle_groups_[i][0]) u.push_back(attacher_half(at));
      u.push_back(base + 3 + 2 * p);
      circle_vertex[i].push_back(static_cast<Vertex>(orders.size()));
      orders.push_back(u);
      for (int j = 1; j <= p; ++j) {
        std::vector<HalfEdge> x{base + 3 + 2 * (j - 1), base + 2 + 2 * j};
        for (const auto& at : circle_groups_[i][j]) x.push_back(attacher_half(at));
        circle_vertex[i].push_back(static_cast<Vertex>(orders.size()));
        orders.push_back(x);
      }
    }
    std::vector<std::vector<Vertex>> tree_vertex(trees_.size());
    d.fundamental.resize(trees_.size());
    for (std::size_t j = 0; j < trees_.size(); ++j) {
      const auto& t = trees_[j];
      for (HalfEdge h = 0; h < t.tree.half_edge_count(); ++h) {
        inv[t_base[j] + h] = t_base[j] + t.tree.partner(h);
        d.tag[t_base[j] + h] = {Part::tree, static_cast<int>(j)};
        if (!t.leaf_attached[h] && t.tree.graph.valences()[t.tree.source(h)] == 1)
          throw PreconditionError("tree leaf left unattached");
      }
      tree_vertex[j].assign(t.tree.vertex_count(), kNone);
      for (Vertex v = 0; v < t.tree.vertex_count(); ++v) {
        if (t.groups[v].empty()) continue;
        auto cyc = t.tree.cyclic_order(v);
        std::vector<HalfEdge> o;
        for (std::size_t g = 0; g < cyc.size(); ++g) {
          o.push_back(t_base[j] + cyc[g]);
          for (const auto& at : t.groups[v][g]) o.push_back(attacher_half(at));
        }
        tree_vertex[j][v] = static_cast<Vertex>(orders.size());
        d.fundamental[j].push_back(tree_vertex[j][v]);
        orders.push_back(o);
      }
    }
    for (std::size_t i = 0; i < outputs_.size(); ++i) {
      if (!output_attached_[i]) throw PreconditionError("output left unattached");
      inv[l_base[i]] = l_base[i] + 1;
      inv[l_base[i] + 1] = l_base[i];
      d.tag[l_base[i]] = d.tag[l_base[i] + 1] = {Part::output, static_cast<int>(i)};
      orders.push_back({l_base[i]});
    }
    d.fatgraph = Fatgraph::from_orders(std::move(inv), orders);
    for (auto& f : d.fundamental) std::sort(f.begin(), f.end());
    return d;
  }

  /// Diagram half-edge of a tree's local half-edge in the built diagram.
  HalfEdge tree_half_edge(int tree, HalfEdge local) const {
    int nh = 0;
    for (int p : inputs_) nh += 2 + 2 * (p + 1);
    for (int j = 0; j < tree; ++j) nh += trees_[j].tree.half_edge_count();
    return nh + local;
  }

  /// Diagram half-edge of the i-th circle edge (from position i to i+1) of an input.
  HalfEdge circle_half_edge(int input, int edge) const {
    int nh = 0;
    for (int i = 0; i < input; ++i) nh += 2 + 2 * (inputs_[i] + 1);
    return nh + 2 + 2 * edge;
  }

 private:
  struct Attacher {
    enum Kind { tree_leaf, output } kind;
    int owner;
    HalfEdge local;
  };
  struct TreeSlot {
    Fatgraph tree;
    std::vector<Site> leaf_site;
    std::vector<char> leaf_attached;
    std::vector<std::vector<std::vector<Attacher>>> groups;  // per vertex, per gap
  };

  std::vector<Attacher>& group(const Site& s) {
    if (s.on_circle) {
      auto& g = circle_groups_.at(s.owner);
      if (s.vertex < 0 || s.vertex >= static_cast<int>(g.size())) throw PreconditionError("no such circle position");
      return g[s.vertex];
    }
    auto& t = trees_.at(s.owner);
    if (s.vertex < 0 || s.vertex >= static_cast<int>(t.groups.size()) || t.groups[s.vertex].empty())
      throw PreconditionError("not an internal tree vertex");
    if (s.gap < 0 || s.gap >= static_cast<int>(t.groups[s.vertex].size())) throw PreconditionError("no such gap");
    return t.groups[s.vertex][s.gap];
  }

  std::vector<int> inputs_;
  std::vector<std::vector<std::vector<Attacher>>> circle_groups_;
  std::vector<TreeSlot> trees_;
  std::vector<Site> outputs_;
  std::vector<char> output_attached_;
};

/// Plane trees used throughout: the segment, the star with n legs, and a
/// path with interior vertices (bivalent allowed).
inline Fatgraph segment_tree() { return Fatgraph::from_orders({1, 0}, {{0}, {1}}); }

/// Star: centre 0 with legs; leg i uses half-edges 2i (at the centre) and 2i+1.
inline Fatgraph star_tree(int legs) {
  std::vector<HalfEdge> inv(2 * legs);
  std::vector<std::vector<HalfEdge>> orders(1);
  for (int i = 0; i < legs; ++i) {
    inv[2 * i] = 2 * i + 1;
    inv[2 * i + 1] = 2 * i;
    orders[0].push_back(2 * i);
    orders.push_back({2 * i + 1});
  }
  return Fatgraph::from_orders(std::move(inv), orders);
}

/// Path with `edges` edges: vertex i joins half-edges 2i-1 and 2i.
inline Fatgraph path_tree(int edges) {
  std::vector<HalfEdge> inv(2 * edges);
  std::vector<std::vector<HalfEdge>> orders;
  for (int i = 0; i < edges; ++i) {
    inv[2 * i] = 2 * i + 1;
    inv[2 * i + 1] = 2 * i;
  }
  orders.push_back({0});
  for (int i = 1; i < edges; ++i) orders.push_back({2 * i - 1, 2 * i});
  orders.push_back({2 * edges - 1});
  return Fatgraph::from_orders(std::move(inv), orders);
}

}  // namespace strtop
