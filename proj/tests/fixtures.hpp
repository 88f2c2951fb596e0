#pragma once
// Small hand-built diagrams and trees shared by the test binaries.

#include <map>
#include <random>

#include "strtop/builder.hpp"
#include "strtop/stringdiag.hpp"

namespace fixture {

using namespace strtop;

inline Rational q(long p, long d = 1) { return fraction(p, d); }

inline std::vector<Rational> lengths_of(const Fatgraph& g, const std::map<HalfEdge, Rational>& by_edge) {
  std::vector<Rational> len(g.half_edge_count(), 0);
  for (const auto& [h, l] : by_edge) {
    len[h] = l;
    len[g.partner(h)] = l;
  }
  return len;
}

inline PseudometricFatgraph metric_tree(const Fatgraph& t, const std::map<HalfEdge, Rational>& by_edge) {
  return {t, lengths_of(t, by_edge)};
}

/// Star with the given leg lengths; leg i is half-edges (2i, 2i+1).
inline PseudometricFatgraph star(const std::vector<Rational>& legs) {
  std::map<HalfEdge, Rational> m;
  for (std::size_t i = 0; i < legs.size(); ++i) m[2 * i] = legs[i];
  return metric_tree(star_tree(static_cast<int>(legs.size())), m);
}

inline StringDiagram with_lengths(const CombinatorialStringDiagram& d, const std::map<HalfEdge, Rational>& by_edge,
                                  int sign = 1) {
  StringDiagram s;
  s.shape = d;
  s.length = lengths_of(d.fatgraph, by_edge);
  s.orientation = reference_orientation(d, sign);
  return s;
}

/// One lollipop with one bivalent vertex carrying the marking segment.
inline CombinatorialStringDiagram lollipop_and_marking() {
  DiagramBuilder b;
  b.add_input(1);
  b.attach_output(b.add_output(), DiagramBuilder::circle(0, 1));
  return b.build();
}

inline StringDiagram lollipop_and_marking_metric(const Rational& a = q(1, 2)) {
  auto d = lollipop_and_marking();
  DiagramBuilder b;
  b.add_input(1);
  return with_lengths(d, {{b.circle_half_edge(0, 0), a}, {b.circle_half_edge(0, 1), 1 - a}});
}

/// Two lollipops joined by a segment tree; the marking sits on a bivalent
/// vertex of the first circle so it avoids the tree.
struct TwoCircles {
  CombinatorialStringDiagram shape;
  StringDiagram metric;
};

inline TwoCircles two_circles() {
  DiagramBuilder b;
  b.add_input(1);
  b.add_input(0);
  int t = b.add_tree(segment_tree());
  b.attach_tree_leaf(t, 0, DiagramBuilder::circle(0, 0));
  b.attach_tree_leaf(t, 1, DiagramBuilder::circle(1, 0));
  b.attach_output(b.add_output(), DiagramBuilder::circle(0, 1));
  TwoCircles c;
  c.shape = b.build();
  c.metric = with_lengths(c.shape, {{b.circle_half_edge(0, 0), q(1, 3)},
                                    {b.circle_half_edge(0, 1), q(2, 3)},
                                    {b.circle_half_edge(1, 0), q(1)},
                                    {b.tree_half_edge(t, 0), q(1)}});
  return c;
}

/// Two tripod centres c1 (vertex 0) and c2 (vertex 1) joined by half-edges
/// 0/1; legs 2/3, 4/5 at c1 and 6/7, 8/9 at c2.
inline Fatgraph caterpillar() {
  return Fatgraph::from_orders({1, 0, 3, 2, 5, 4, 7, 6, 9, 8}, {{0, 2, 4}, {1, 6, 8}, {3}, {5}, {7}, {9}});
}

/// One circle with four bivalent vertices.  A tripod has its leaves on
/// positions 1..3; a segment runs from the tripod centre to position 4; the
/// marking sits on u.  Everything lies on one side of the circle, so the
/// extra boundary cycles are unmarked; only the tree structure is used.
struct Stacked {
  CombinatorialStringDiagram shape;
  StringDiagram metric;
  HalfEdge tripod_leg[3];
  HalfEdge segment_foot;  // segment half-edge at the tripod centre
  HalfEdge segment_top;   // segment half-edge on the circle
};

inline Stacked stacked(const Rational& segment_length = 1) {
  DiagramBuilder b;
  b.add_input(4);
  int t0 = b.add_tree(star_tree(3));
  int t1 = b.add_tree(segment_tree());
  for (int i = 0; i < 3; ++i) b.attach_tree_leaf(t0, 2 * i + 1, DiagramBuilder::circle(0, i + 1));
  b.attach_tree_leaf(t1, 0, DiagramBuilder::tree_vertex(t0, 0, 0));
  b.attach_tree_leaf(t1, 1, DiagramBuilder::circle(0, 4));
  b.attach_output(b.add_output(), DiagramBuilder::circle(0, 0));
  Stacked s;
  s.shape = b.build();
  std::map<HalfEdge, Rational> m;
  for (int e = 0; e < 5; ++e) m[b.circle_half_edge(0, e)] = q(1, 5);
  for (int i = 0; i < 3; ++i) {
    s.tripod_leg[i] = b.tree_half_edge(t0, 2 * i + 1);
    m[b.tree_half_edge(t0, 2 * i)] = q(2, 3);
  }
  s.segment_foot = b.tree_half_edge(t1, 0);
  s.segment_top = b.tree_half_edge(t1, 1);
  m[s.segment_foot] = segment_length;
  s.metric = with_lengths(s.shape, m);
  return s;
}

/// Random short-branched length assignment on a tree with no bivalent
/// vertices: small internal edges, external edges sharing the rest.
inline PseudometricFatgraph random_short_branched(const Fatgraph& t, std::mt19937& rng) {
  auto val = t.graph.valences();
  const int n = leaf_count(t.graph);
  std::vector<HalfEdge> ext, in;
  for (HalfEdge h = 0; h < t.half_edge_count(); ++h) {
    if (h > t.partner(h)) continue;
    bool external = val[t.source(h)] == 1 || val[t.source(t.partner(h))] == 1;
    (external ? ext : in).push_back(h);
  }
  std::uniform_int_distribution<int> pick(1, 9);
  std::map<HalfEdge, Rational> m;
  Rational internal = 0;
  for (HalfEdge h : in) {
    m[h] = fraction(pick(rng), 40 * n * (static_cast<int>(in.size()) + 1));
    internal += m[h];
  }
  Rational base = (Rational(n - 1) - internal) / static_cast<int>(ext.size());
  Rational drift = 0;
  for (std::size_t i = 0; i + 1 < ext.size(); ++i) {
    Rational e = fraction(pick(rng) - 5, 80 * n * n);
    m[ext[i]] = base + e;
    drift += e;
  }
  m[ext.back()] = base - drift;
  return metric_tree(t, m);
}

/// Random plane tree with no bivalent vertices, grown by splitting leaves.
inline Fatgraph random_tree(int leaves, std::mt19937& rng) {
  // vertices carry cyclic orders; start from a tripod
  std::vector<std::vector<HalfEdge>> ord{{0, 2, 4}, {1}, {3}, {5}};
  std::vector<HalfEdge> inv{1, 0, 3, 2, 5, 4};
  int have = 3;
  while (have < leaves) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<int> leafv;
    std::vector<int> internalv;
    for (std::size_t v = 0; v < ord.size(); ++v) (ord[v].size() == 1 ? leafv : internalv).push_back(static_cast<int>(v));
    HalfEdge nh = static_cast<HalfEdge>(inv.size());
    inv.push_back(nh + 1);
    inv.push_back(nh);
    if (coin(rng)) {
      // new leg at an internal vertex, random gap
      int v = internalv[std::uniform_int_distribution<int>(0, static_cast<int>(internalv.size()) - 1)(rng)];
      auto& o = ord[v];
      o.insert(o.begin() + std::uniform_int_distribution<int>(0, static_cast<int>(o.size()) - 1)(rng) + 1, nh);
      ord.push_back({nh + 1});
      ++have;
    } else {
      // a leaf sprouts two legs
      int v = leafv[std::uniform_int_distribution<int>(0, static_cast<int>(leafv.size()) - 1)(rng)];
      inv.push_back(nh + 3);
      inv.push_back(nh + 2);
      ord[v].push_back(nh);
      ord[v].push_back(nh + 2);
      ord.push_back({nh + 1});
      ord.push_back({nh + 3});
      ++have;
    }
  }
  return Fatgraph::from_orders(inv, ord);
}

}  // namespace fixture
