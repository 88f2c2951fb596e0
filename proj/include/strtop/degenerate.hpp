#pragma once

#include <algorithm>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "strtop/canonical.hpp"
#include "strtop/stringdiag.hpp"

namespace strtop {

// ---------------------------------------------------------------------------
// canonical representatives

namespace label {
inline constexpr int tree_fundamental = 1;  // tree half-edge leaving a fundamental vertex of its tree
inline constexpr int tree_leaf = 2;         // tree half-edge leaving a non-fundamental vertex
inline int input(int i) { return 3 + 2 * i; }
inline int output(int i) { return 4 + 2 * i; }
}  // namespace label

inline LabeledFatgraph diagram_labeling(const CombinatorialStringDiagram& d) {
  LabeledFatgraph lg;
  lg.fatgraph = d.fatgraph;
  const int n = d.fatgraph.half_edge_count();
  lg.half_edge_label.resize(n);
  lg.half_edge_block.resize(n);
  for (HalfEdge h = 0; h < n; ++h) {
    const PartTag& t = d.tag[h];
    switch (t.part) {
      case Part::input:
        lg.half_edge_label[h] = label::input(t.index);
        lg.half_edge_block[h] = 0;
        break;
      case Part::output:
        lg.half_edge_label[h] = label::output(t.index);
        lg.half_edge_block[h] = 0;
        break;
      case Part::tree:
        lg.half_edge_label[h] =
            d.is_fundamental(t.index, d.fatgraph.source(h)) ? label::tree_fundamental : label::tree_leaf;
        lg.half_edge_block[h] = t.index + 1;
        break;
    }
  }
  for (int i = 0; i < d.inputs; ++i) lg.roots.push_back(marking_leaf(d, Part::input, i));
  for (int i = 0; i < d.outputs; ++i) lg.roots.push_back(marking_leaf(d, Part::output, i));
  return lg;
}

/// Old -> new ids taking a diagram to its canonical representative.
struct Relabeling {
  std::string code;
  std::vector<HalfEdge> half_edge;
  std::vector<Vertex> vertex;
  std::vector<int> tree;
};

inline Relabeling canonical_relabeling(const CombinatorialStringDiagram& d) {
  if (d.inputs < 1) throw PreconditionError("canonical representatives need an input");
  auto cf = canonical_form(diagram_labeling(d));
  Relabeling r;
  r.code = std::move(cf.code);
  r.half_edge = std::move(cf.position);
  r.vertex = std::move(cf.vertex_position);
  r.tree.assign(d.tree_count(), kNone);
  // block 0 holds the roots, so it ranks first
  for (int j = 0; j < d.tree_count(); ++j) r.tree[j] = cf.block_rank.at(j + 1) - 1;
  return r;
}

inline std::string diagram_code(const CombinatorialStringDiagram& d) { return canonical_relabeling(d).code; }

inline CombinatorialStringDiagram relabel(const CombinatorialStringDiagram& d, const Relabeling& r) {
  const Fatgraph& g = d.fatgraph;
  const int n = g.half_edge_count();
  CombinatorialStringDiagram out;
  out.inputs = d.inputs;
  out.outputs = d.outputs;
  Fatgraph& f = out.fatgraph;
  f.graph.vertex_count = g.vertex_count();
  f.graph.source.resize(n);
  f.graph.involution.resize(n);
  f.successor.resize(n);
  out.tag.resize(n);
  for (HalfEdge h = 0; h < n; ++h) {
    HalfEdge a = r.half_edge[h];
    f.graph.source[a] = r.vertex[g.source(h)];
    f.graph.involution[a] = r.half_edge[g.partner(h)];
    f.successor[a] = r.half_edge[g.successor[h]];
    PartTag t = d.tag[h];
    if (t.part == Part::tree) t.index = r.tree[t.index];
    out.tag[a] = t;
  }
  out.fundamental.resize(d.tree_count());
  for (int j = 0; j < d.tree_count(); ++j) {
    auto& fj = out.fundamental[r.tree[j]];
    for (Vertex v : d.fundamental[j]) fj.push_back(r.vertex[v]);
    std::sort(fj.begin(), fj.end());
  }
  return out;
}

inline Orientation relabel(const Orientation& o, const Relabeling& r) {
  Orientation out;
  out.sign = o.sign;
  for (int j : o.ordering.trees) out.ordering.trees.push_back(r.tree[j]);
  for (HalfEdge h : o.ordering.leaves) out.ordering.leaves.push_back(r.half_edge[h]);
  return out;
}

inline StringDiagram relabel(const StringDiagram& d, const Relabeling& r) {
  StringDiagram out;
  out.shape = relabel(d.shape, r);
  out.length.resize(d.length.size());
  for (std::size_t h = 0; h < d.length.size(); ++h) out.length[r.half_edge[h]] = d.length[h];
  out.orientation = relabel(d.orientation, r);
  return out;
}

/// Sign of the orientation against the reference orientation of its diagram
/// (+1 when there are no trees).
inline int orientation_class(const StringDiagram& d) {
  return d.shape.tree_count() == 0 ? 1 : relative_sign(d.orientation);
}

// ---------------------------------------------------------------------------
// degenerations

enum class FaceKind { zero_edge, prune };

struct Degeneration {
  FaceKind kind = FaceKind::zero_edge;
  HalfEdge half_edge = kNone;  // the zero edge (any half), or h of the pruned branch
  bool operator==(const Degeneration&) const = default;
};

/// A degenerated diagram with the map from old to new half-edges.
struct Degenerated {
  StringDiagram diagram;
  std::vector<HalfEdge> half_edge_map;  // kNone for removed half-edges
};

inline std::vector<HalfEdge> compose(const std::vector<HalfEdge>& first, const std::vector<HalfEdge>& second) {
  std::vector<HalfEdge> out(first.size(), kNone);
  for (std::size_t h = 0; h < first.size(); ++h)
    if (first[h] != kNone) out[h] = second[first[h]];
  return out;
}

inline std::vector<HalfEdge> identity_map(int n) {
  std::vector<HalfEdge> m(n);
  for (int h = 0; h < n; ++h) m[h] = h;
  return m;
}

namespace detail {

/// Moves tree j to the front of an ordering; the sign absorbs the shift.
inline void bring_to_front(Orientation& o, int j) {
  auto& t = o.ordering.trees;
  auto it = std::find(t.begin(), t.end(), j);
  if (it == t.end()) throw PreconditionError("tree missing from the ordering");
  if ((it - t.begin()) % 2) o.sign = -o.sign;
  t.erase(it);
  t.insert(t.begin(), j);
}

}  // namespace detail

/// Where a zero tree edge sits in its tree.
enum class TreeEdgeCase { internal, external_bivalent, external_branched, segment };

inline TreeEdgeCase tree_edge_case(const TreeView& t, HalfEdge diagram_half_edge) {
  HalfEdge lh = t.from_diagram.at(diagram_half_edge);
  auto val = t.fatgraph.graph.valences();
  int a = val[t.fatgraph.source(lh)], b = val[t.fatgraph.source(t.fatgraph.partner(lh))];
  if (a == 1 && b == 1) return TreeEdgeCase::segment;
  if (a > 1 && b > 1) return TreeEdgeCase::internal;
  return std::max(a, b) == 2 ? TreeEdgeCase::external_bivalent : TreeEdgeCase::external_branched;
}

inline Degenerated contract_in_diagram(const StringDiagram& d, HalfEdge e) {
  const auto& s = d.shape;
  const Fatgraph& g = s.fatgraph;
  if (e < 0 || e >= g.half_edge_count()) throw PreconditionError("unknown half-edge");
  if (d.length[e] != 0) throw PreconditionError("edge has positive length");
  auto val = g.graph.valences();
  if (val[g.source(e)] == 1 || val[g.source(g.partner(e))] == 1) throw PreconditionError("edge is external");
  const PartTag tag = s.tag[e];
  if (tag.part == Part::output) throw PreconditionError("edge is external");

  Orientation o = d.orientation;
  std::vector<std::vector<Vertex>> fund = s.fundamental;
  std::vector<PartTag> tags = s.tag;
  std::vector<std::vector<Vertex>> new_fund;  // appended trees, by diagram vertex
  Vertex dropped = kNone;                      // a fundamental vertex that disappears

  if (tag.part == Part::tree) {
    const int j = tag.index;
    auto t = tree_view(s, j);
    auto kind = tree_edge_case(t, e);
    if (kind == TreeEdgeCase::segment) throw PreconditionError("edge is a whole segment tree");
    if (kind != TreeEdgeCase::internal) {
      HalfEdge lh = t.from_diagram[e];
      auto tval = t.fatgraph.graph.valences();
      // inner: half-edge at the fundamental end; leaf: half-edge at the leaf end
      HalfEdge inner = tval[t.fatgraph.source(lh)] > 1 ? lh : t.fatgraph.partner(lh);
      HalfEdge leaf = t.fatgraph.partner(inner);
      Vertex lv = t.fatgraph.source(inner);
      Vertex v = t.vertex_to_diagram[lv];
      HalfEdge old_leaf = t.to_diagram[leaf];
      std::vector<HalfEdge> others;
      for (HalfEdge a = 0; a < t.fatgraph.half_edge_count(); ++a)
        if (t.fatgraph.source(a) == lv && a != inner) others.push_back(a);
      auto& leaves = o.ordering.leaves;
      auto it = std::find(leaves.begin(), leaves.end(), old_leaf);
      if (it == leaves.end()) throw PreconditionError("leaf missing from the ordering");
      if (kind == TreeEdgeCase::external_bivalent) {
        *it = t.to_diagram[others.front()];
        dropped = v;
      } else {
        // T_j splits along the half-edges at v
        *it = t.to_diagram[others.front()];
        std::vector<HalfEdge> front_leaves;
        std::vector<int> front_trees{j};
        std::vector<Vertex> old_fund = fund[j];
        for (std::size_t a = 0; a < others.size(); ++a) {
          int idx = a == 0 ? j : s.tree_count() + static_cast<int>(a) - 1;
          std::vector<Vertex> fa;
          for (HalfEdge b : branch_half_edges(t.fatgraph.graph, others[a])) {
            HalfEdge db = t.to_diagram[b];
            tags[db] = {Part::tree, idx};
            Vertex x = g.source(db);
            if (x != v && s.is_fundamental(j, x) && std::find(fa.begin(), fa.end(), x) == fa.end()) fa.push_back(x);
          }
          if (a == 0) {
            fund[j] = fa;
          } else {
            new_fund.push_back(fa);
            front_trees.push_back(idx);
            front_leaves.push_back(t.to_diagram[others[a]]);
          }
        }
        detail::bring_to_front(o, j);
        auto& tr = o.ordering.trees;
        tr.insert(tr.begin() + 1, front_trees.begin() + 1, front_trees.end());
        leaves.insert(leaves.begin(), front_leaves.begin(), front_leaves.end());
      }
    }
  }

  auto c = contract_edge(g, e);
  Degenerated out;
  out.half_edge_map = c.half_edge_map;
  StringDiagram& nd = out.diagram;
  nd.shape.fatgraph = std::move(c.graph);
  nd.shape.inputs = s.inputs;
  nd.shape.outputs = s.outputs;
  const int m = nd.shape.fatgraph.half_edge_count();
  nd.shape.tag.resize(m);
  nd.length.resize(m);
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
    HalfEdge a = c.half_edge_map[h];
    if (a == kNone) continue;
    nd.shape.tag[a] = tags[h];
    nd.length[a] = d.length[h];
  }
  for (const auto& f : new_fund) fund.push_back(f);
  for (auto& f : fund) {
    std::vector<Vertex> nf;
    for (Vertex v : f)
      if (v != dropped) nf.push_back(c.vertex_map[v]);
    std::sort(nf.begin(), nf.end());
    nf.erase(std::unique(nf.begin(), nf.end()), nf.end());
    f = std::move(nf);
  }
  nd.shape.fundamental = std::move(fund);
  nd.orientation.sign = o.sign;
  nd.orientation.ordering.trees = o.ordering.trees;
  for (HalfEdge h : o.ordering.leaves) nd.orientation.ordering.leaves.push_back(c.half_edge_map[h]);
  return out;
}

inline Degenerated prune_in_diagram(const StringDiagram& d, HalfEdge h) {
  const auto& s = d.shape;
  const Fatgraph& g = s.fatgraph;
  if (h < 0 || h >= g.half_edge_count() || s.tag[h].part != Part::tree)
    throw PreconditionError("pruning needs a tree half-edge");
  const int j = s.tag[h].index;
  auto t = tree_view(s, j);
  HalfEdge lh = t.from_diagram[h];
  if (t.fatgraph.graph.valences()[t.fatgraph.source(lh)] < 3)
    throw PreconditionError("pruning needs an at least trivalent vertex");
  if (!is_prunable(tree_metric(t, d.length), lh)) throw PreconditionError("branch is not prunable");
  const int fresh = s.tree_count();
  Degenerated out;
  out.half_edge_map = identity_map(g.half_edge_count());
  out.diagram = d;
  auto& nd = out.diagram;
  std::vector<Vertex> branch_fund;
  const Vertex root = g.source(h);
  for (HalfEdge b : branch_half_edges(t.fatgraph.graph, lh)) {
    HalfEdge db = t.to_diagram[b];
    nd.shape.tag[db] = {Part::tree, fresh};
    Vertex x = g.source(db);
    if (x != root && s.is_fundamental(j, x)) branch_fund.push_back(x);
  }
  std::sort(branch_fund.begin(), branch_fund.end());
  branch_fund.erase(std::unique(branch_fund.begin(), branch_fund.end()), branch_fund.end());
  auto& fj = nd.shape.fundamental[j];
  std::vector<Vertex> rest;
  std::set_difference(fj.begin(), fj.end(), branch_fund.begin(), branch_fund.end(), std::back_inserter(rest));
  fj = std::move(rest);
  nd.shape.fundamental.push_back(std::move(branch_fund));
  detail::bring_to_front(nd.orientation, j);
  nd.orientation.ordering.trees.insert(nd.orientation.ordering.trees.begin() + 1, fresh);
  nd.orientation.ordering.leaves.insert(nd.orientation.ordering.leaves.begin(), h);
  return out;
}

inline Degenerated degenerate(const StringDiagram& d, const Degeneration& x) {
  return x.kind == FaceKind::zero_edge ? contract_in_diagram(d, x.half_edge) : prune_in_diagram(d, x.half_edge);
}

/// Degenerations available at the current lengths: contractible zero edges
/// first (by lesser half-edge), then prunable branches (by half-edge).
inline std::vector<Degeneration> available_degenerations(const StringDiagram& d) {
  const auto& s = d.shape;
  const Fatgraph& g = s.fatgraph;
  auto val = g.graph.valences();
  std::vector<Degeneration> out;
  std::vector<std::optional<TreeView>> views(s.tree_count());
  auto view = [&](int j) -> const TreeView& {
    if (!views[j]) views[j] = tree_view(s, j);
    return *views[j];
  };
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
    if (h > g.partner(h) || d.length[h] != 0) continue;
    if (s.tag[h].part == Part::output) continue;
    if (val[g.source(h)] == 1 || val[g.source(g.partner(h))] == 1) continue;
    if (g.graph.is_loop(h)) continue;
    if (s.tag[h].part == Part::tree && tree_edge_case(view(s.tag[h].index), h) == TreeEdgeCase::segment) continue;
    out.push_back({FaceKind::zero_edge, h});
  }
  for (int j = 0; j < s.tree_count(); ++j) {
    const auto& t = view(j);
    auto m = tree_metric(t, d.length);
    auto tval = t.fatgraph.graph.valences();
    std::vector<HalfEdge> found;
    for (HalfEdge lh = 0; lh < t.fatgraph.half_edge_count(); ++lh)
      if (tval[t.fatgraph.source(lh)] >= 3 && is_prunable(m, lh)) found.push_back(t.to_diagram[lh]);
    for (HalfEdge h : found) out.push_back({FaceKind::prune, h});
  }
  std::stable_sort(out.begin(), out.end(), [](const Degeneration& a, const Degeneration& b) {
    if (a.kind != b.kind) return a.kind == FaceKind::zero_edge;
    return a.half_edge < b.half_edge;
  });
  return out;
}

/// Applies degenerations until none is available.
inline Degenerated fully_reduce(const StringDiagram& d) {
  Degenerated cur{d, identity_map(d.shape.fatgraph.half_edge_count())};
  for (;;) {
    auto avail = available_degenerations(cur.diagram);
    if (avail.empty()) return cur;
    auto next = degenerate(cur.diagram, avail.front());
    cur.half_edge_map = compose(cur.half_edge_map, next.half_edge_map);
    cur.diagram = std::move(next.diagram);
  }
}

/// Canonical representative of a metric diagram with the composed map.
inline Degenerated canonicalize(const Degenerated& d, std::string* code = nullptr) {
  auto r = canonical_relabeling(d.diagram.shape);
  Degenerated out;
  out.diagram = relabel(d.diagram, r);
  out.half_edge_map = compose(d.half_edge_map, r.half_edge);
  if (code) *code = r.code;
  return out;
}

}  // namespace strtop
