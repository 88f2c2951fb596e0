#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "strtop/fatgraph.hpp"
#include "strtop/metric.hpp"

namespace strtop {

// ---------------------------------------------------------------------------
// trees

inline int leaf_count(const Graph& g) {
  int n = 0;
  for (int d : g.valences()) n += d == 1;
  return n;
}

inline int leaf_length(const Graph& t) {
  if (!is_tree(t)) throw PreconditionError("leaf length needs a tree");
  return leaf_count(t) - 1;
}
inline int leaf_length(const Fatgraph& t) { return leaf_length(t.graph); }

/// Half-edges (both halves) of the branch T_h: the edge of h and everything
/// reachable from its far end without passing through s(h).
inline std::vector<HalfEdge> branch_half_edges(const Graph& t, HalfEdge h) {
  if (!is_tree(t)) throw PreconditionError("branch needs a tree");
  Vertex v = t.source[h];
  if (t.valences()[v] < 3) throw PreconditionError("branch needs an at least trivalent source");
  auto inc = t.incidence();
  std::vector<char> in(t.half_edge_count(), 0), seen(t.vertex_count, 0);
  in[h] = in[t.involution[h]] = 1;
  seen[v] = 1;
  std::vector<Vertex> stack{t.source[t.involution[h]]};
  seen[stack.back()] = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (HalfEdge a : inc[x]) {
      in[a] = in[t.involution[a]] = 1;
      Vertex y = t.source[t.involution[a]];
      if (!seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
    }
  }
  std::vector<HalfEdge> out;
  for (HalfEdge a = 0; a < t.half_edge_count(); ++a)
    if (in[a]) out.push_back(a);
  return out;
}

inline Subfatgraph branch(const Fatgraph& t, HalfEdge h) { return restrict_to_edges(t, branch_half_edges(t.graph, h)); }

inline Subfatgraph pollard(const Fatgraph& t, HalfEdge h) {
  auto b = branch_half_edges(t.graph, h);
  std::vector<char> in(t.half_edge_count(), 0);
  for (HalfEdge a : b) in[a] = 1;
  std::vector<HalfEdge> rest;
  for (HalfEdge a = 0; a < t.half_edge_count(); ++a)
    if (!in[a]) rest.push_back(a);
  return restrict_to_edges(t, rest);
}

/// Length of T_h and its leaf length (= number of leaves of T strictly inside).
struct BranchMeasure {
  Rational length;
  int leaf_length = 0;
};

inline BranchMeasure measure_branch(const PseudometricFatgraph& t, HalfEdge h) {
  auto half = branch_half_edges(t.fatgraph.graph, h);
  auto val = t.fatgraph.graph.valences();
  BranchMeasure m;
  for (HalfEdge a : half) {
    if (a < t.fatgraph.partner(a)) m.length += t.length[a];
    if (a != h && val[t.fatgraph.source(a)] == 1) ++m.leaf_length;
  }
  return m;
}

inline bool is_prunable(const PseudometricFatgraph& t, HalfEdge h) {
  auto m = measure_branch(t, h);
  return m.length == m.leaf_length;
}

struct ShortBranchedStatus {
  bool short_branched = false;
  bool degenerate = false;
};

inline ShortBranchedStatus is_short_branched(const PseudometricFatgraph& t) {
  ShortBranchedStatus s;
  if (!is_tree(t.fatgraph.graph)) return s;
  if (t.total_length() != leaf_length(t.fatgraph)) return s;
  auto val = t.fatgraph.graph.valences();
  bool ok = true, degen = false;
  for (HalfEdge h = 0; h < t.fatgraph.half_edge_count(); ++h) {
    if (t.length[h] == 0) degen = true;
    if (val[t.fatgraph.source(h)] < 3) continue;
    auto m = measure_branch(t, h);
    if (m.length > m.leaf_length) ok = false;
    if (m.length == m.leaf_length) degen = true;
  }
  s.short_branched = ok;
  s.degenerate = ok && degen;
  return s;
}

// ---------------------------------------------------------------------------
// combinatorial string diagrams

enum class Part : std::uint8_t { input = 0, output = 1, tree = 2 };

struct PartTag {
  Part part = Part::tree;
  int index = 0;
  bool operator==(const PartTag&) const = default;
};

struct CombinatorialStringDiagram {
  Fatgraph fatgraph;
  std::vector<PartTag> tag;                      // per half-edge
  std::vector<std::vector<Vertex>> fundamental;  // per tree, ascending
  int inputs = 0;
  int outputs = 0;

  int tree_count() const { return static_cast<int>(fundamental.size()); }

  std::vector<HalfEdge> half_edges_of(Part p, int index) const {
    std::vector<HalfEdge> out;
    for (HalfEdge h = 0; h < fatgraph.half_edge_count(); ++h)
      if (tag[h].part == p && tag[h].index == index) out.push_back(h);
    return out;
  }

  bool is_fundamental(int tree, Vertex v) const {
    const auto& f = fundamental[tree];
    return std::binary_search(f.begin(), f.end(), v);
  }
};

/// The half-edge of a Q_i or L_i edge whose source is a leaf of the diagram.
inline HalfEdge marking_leaf(const CombinatorialStringDiagram& d, Part p, int index) {
  auto val = d.fatgraph.graph.valences();
  for (HalfEdge h = 0; h < d.fatgraph.half_edge_count(); ++h)
    if (d.tag[h].part == p && d.tag[h].index == index && val[d.fatgraph.source(h)] == 1) return h;
  throw PreconditionError("part has no leaf of the diagram");
}

/// Leaves of all trees, each named by the tree half-edge at the
/// non-fundamental end; ascending.
inline std::vector<HalfEdge> tree_leaves(const CombinatorialStringDiagram& d) {
  std::vector<HalfEdge> out;
  for (HalfEdge h = 0; h < d.fatgraph.half_edge_count(); ++h)
    if (d.tag[h].part == Part::tree && !d.is_fundamental(d.tag[h].index, d.fatgraph.source(h))) out.push_back(h);
  return out;
}

inline std::vector<HalfEdge> tree_leaves(const CombinatorialStringDiagram& d, int tree) {
  std::vector<HalfEdge> out;
  for (HalfEdge h = 0; h < d.fatgraph.half_edge_count(); ++h)
    if (d.tag[h].part == Part::tree && d.tag[h].index == tree && !d.is_fundamental(tree, d.fatgraph.source(h)))
      out.push_back(h);
  return out;
}

/// Vertices lying on some Q_i edge.
inline std::vector<char> input_vertices(const CombinatorialStringDiagram& d) {
  std::vector<char> on(d.fatgraph.vertex_count(), 0);
  for (HalfEdge h = 0; h < d.fatgraph.half_edge_count(); ++h)
    if (d.tag[h].part == Part::input) on[d.fatgraph.source(h)] = 1;
  return on;
}

/// T_j: the subgraph T~_j exploded at its non-fundamental vertices.
struct TreeView {
  int index = 0;
  Fatgraph fatgraph;
  std::vector<HalfEdge> to_diagram;
  std::vector<HalfEdge> from_diagram;
  std::vector<Vertex> vertex_to_diagram;  // leaves map to their attachment vertex
  std::vector<HalfEdge> leaves;           // local leaf half-edges, ascending
};

inline TreeView tree_view(const CombinatorialStringDiagram& d, int j) {
  auto sub = restrict_to_edges(d.fatgraph, d.half_edges_of(Part::tree, j));
  std::vector<Vertex> nonfund;
  for (Vertex v = 0; v < sub.graph.vertex_count(); ++v)
    if (!d.is_fundamental(j, sub.vertex_to_parent[v])) nonfund.push_back(v);
  auto ex = vertex_explosion(sub.graph, nonfund);
  TreeView t;
  t.index = j;
  t.fatgraph = std::move(ex.graph);
  t.to_diagram = sub.to_parent;
  t.from_diagram = sub.from_parent;
  for (Vertex v : ex.to_original) t.vertex_to_diagram.push_back(sub.vertex_to_parent[v]);
  auto val = t.fatgraph.graph.valences();
  for (HalfEdge h = 0; h < t.fatgraph.half_edge_count(); ++h)
    if (val[t.fatgraph.source(h)] == 1) t.leaves.push_back(h);
  return t;
}

inline PseudometricFatgraph tree_metric(const TreeView& t, const std::vector<Rational>& diagram_length) {
  PseudometricFatgraph m;
  m.fatgraph = t.fatgraph;
  for (HalfEdge h : t.to_diagram) m.length.push_back(diagram_length[h]);
  return m;
}

// ---------------------------------------------------------------------------
// validation

struct ValidationItem {
  std::string condition;
  bool ok = true;
  std::vector<int> offenders;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationItem> items;

  bool ok() const {
    return std::all_of(items.begin(), items.end(), [](const ValidationItem& i) { return i.ok; });
  }
  const ValidationItem* find(const std::string& name) const {
    for (const auto& i : items)
      if (i.condition == name) return &i;
    return nullptr;
  }
  bool passed(const std::string& name) const {
    auto* i = find(name);
    return i && i->ok;
  }
};

namespace condition {
inline constexpr const char* well_formed = "well_formed";
inline constexpr const char* connected = "connected";
inline constexpr const char* no_bivalent = "no_bivalent_vertices";
inline constexpr const char* marked = "marked";
inline constexpr const char* lollipops = "inputs_are_lollipops";
inline constexpr const char* segments = "outputs_are_segments";
inline constexpr const char* trees_avoid_leaves = "trees_avoid_leaves";
inline constexpr const char* vertex_partition = "internal_vertex_partition";
inline constexpr const char* trees_are_trees = "trees_explode_to_trees";
inline constexpr const char* no_tree_cycles = "no_tree_cycles";
inline constexpr const char* external_zero = "external_edges_zero";
inline constexpr const char* unit_inputs = "inputs_unit_length";
inline constexpr const char* short_branched = "trees_short_branched";
}  // namespace condition

namespace detail {

inline ValidationItem check_well_formed(const CombinatorialStringDiagram& d) {
  ValidationItem it{condition::well_formed};
  auto fail = [&](const std::string& why, int who = kNone) {
    it.ok = false;
    if (who != kNone) it.offenders.push_back(who);
    if (it.detail.empty()) it.detail = why;
  };
  try {
    d.fatgraph.validate();
  } catch (const ValidationError& e) {
    fail(e.what());
    return it;
  }
  const int n = d.fatgraph.half_edge_count();
  if (static_cast<int>(d.tag.size()) != n) {
    fail("edge labels missing");
    return it;
  }
  if (d.inputs < 0 || d.outputs < 0) fail("negative part count");
  std::vector<int> qn(std::max(d.inputs, 0), 0), ln(std::max(d.outputs, 0), 0), tn(d.tree_count(), 0);
  for (HalfEdge h = 0; h < n; ++h) {
    const PartTag& t = d.tag[h];
    if (!(t == d.tag[d.fatgraph.partner(h)])) fail("the two halves of an edge carry different labels", h);
    int lim = t.part == Part::input ? d.inputs : t.part == Part::output ? d.outputs : d.tree_count();
    if (t.index < 0 || t.index >= lim) {
      fail("label index out of range", h);
      continue;
    }
    (t.part == Part::input ? qn : t.part == Part::output ? ln : tn)[t.index]++;
  }
  for (int i = 0; i < static_cast<int>(qn.size()); ++i)
    if (qn[i] == 0) fail("empty input subgraph", i);
  for (int i = 0; i < static_cast<int>(ln.size()); ++i)
    if (ln[i] != 2) fail("output subgraph must be a single edge", i);
  for (int j = 0; j < static_cast<int>(tn.size()); ++j)
    if (tn[j] == 0) fail("empty tree subgraph", j);
  if (!it.ok) return it;
  for (int j = 0; j < d.tree_count(); ++j) {
    const auto& f = d.fundamental[j];
    if (!std::is_sorted(f.begin(), f.end()) || std::adjacent_find(f.begin(), f.end()) != f.end())
      fail("fundamental set not strictly ascending", j);
    for (Vertex v : f) {
      if (v < 0 || v >= d.fatgraph.vertex_count()) {
        fail("fundamental vertex out of range", v);
        continue;
      }
      int deg = 0;
      for (HalfEdge h = 0; h < n; ++h)
        if (d.fatgraph.source(h) == v && d.tag[h].part == Part::tree && d.tag[h].index == j) ++deg;
      if (deg < 2) fail("fundamental vertex is not an internal vertex of its tree", v);
    }
  }
  return it;
}

}  // namespace detail

/// Checks every defining condition and reports each separately.
inline ValidationReport validate_combinatorial(const CombinatorialStringDiagram& d) {
  ValidationReport rep;
  rep.items.push_back(detail::check_well_formed(d));
  if (!rep.items.back().ok) {
    for (const char* c : {condition::connected, condition::no_bivalent, condition::marked, condition::lollipops,
                          condition::segments, condition::trees_avoid_leaves, condition::vertex_partition,
                          condition::trees_are_trees, condition::no_tree_cycles})
      rep.items.push_back({c, false, {}, "not checked: input is malformed"});
    return rep;
  }
  const Fatgraph& g = d.fatgraph;
  const int n = g.half_edge_count();
  auto val = g.graph.valences();

  ValidationItem conn{condition::connected};
  conn.ok = is_connected(g.graph);
  rep.items.push_back(conn);

  ValidationItem biv{condition::no_bivalent};
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (val[v] == 2) biv.offenders.push_back(v);
  biv.ok = biv.offenders.empty();
  rep.items.push_back(biv);

  ValidationItem mk{condition::marked};
  auto cycles = boundary_cycles(g);
  for (int c = 0; c < static_cast<int>(cycles.size()); ++c) {
    int marks = 0;
    for (HalfEdge h : cycles[c].half_edges) marks += val[g.source(h)] == 1;
    if (marks != 1) mk.offenders.push_back(cycles[c].half_edges.front());
  }
  mk.ok = mk.offenders.empty();
  rep.items.push_back(mk);

  ValidationItem lp{condition::lollipops};
  for (int i = 0; i < d.inputs; ++i) {
    auto sub = restrict_to_edges(g, d.half_edges_of(Part::input, i));
    auto sval = sub.graph.graph.valences();
    int leaves = 0, tri = 0, two = 0;
    HalfEdge leaf = kNone;
    for (HalfEdge a = 0; a < sub.graph.half_edge_count(); ++a)
      if (sval[sub.graph.source(a)] == 1) leaf = a;
    for (int x : sval) {
      leaves += x == 1;
      tri += x == 3;
      two += x == 2;
    }
    bool ok = is_connected(sub.graph.graph) && leaves == 1 && tri == 1 &&
              leaves + tri + two == sub.graph.vertex_count() && sval[sub.graph.source(sub.graph.partner(leaf))] == 3;
    if (ok) {
      // the marked boundary cycle of Q_i must be a boundary cycle of the diagram
      std::vector<HalfEdge> local;
      HalfEdge x = leaf;
      do {
        local.push_back(sub.to_parent[x]);
        x = boundary_next(sub.graph, x);
      } while (x != leaf);
      std::vector<HalfEdge> global;
      HalfEdge y = sub.to_parent[leaf];
      do {
        global.push_back(y);
        y = boundary_next(g, y);
      } while (y != sub.to_parent[leaf]);
      ok = local == global;
    }
    if (!ok) lp.offenders.push_back(i);
  }
  lp.ok = lp.offenders.empty();
  rep.items.push_back(lp);

  ValidationItem sg{condition::segments};
  for (int i = 0; i < d.outputs; ++i) {
    auto hs = d.half_edges_of(Part::output, i);
    bool ok = hs.size() == 2 && g.source(hs[0]) != g.source(hs[1]) &&
              (val[g.source(hs[0])] == 1) + (val[g.source(hs[1])] == 1) == 1;
    if (!ok) sg.offenders.push_back(i);
  }
  sg.ok = sg.offenders.empty();
  rep.items.push_back(sg);

  ValidationItem tl{condition::trees_avoid_leaves};
  for (HalfEdge h = 0; h < n; ++h)
    if (d.tag[h].part == Part::tree && val[g.source(h)] == 1) tl.offenders.push_back(d.tag[h].index);
  std::sort(tl.offenders.begin(), tl.offenders.end());
  tl.offenders.erase(std::unique(tl.offenders.begin(), tl.offenders.end()), tl.offenders.end());
  tl.ok = tl.offenders.empty();
  rep.items.push_back(tl);

  ValidationItem vp{condition::vertex_partition};
  {
    std::vector<std::set<int>> in_q(g.vertex_count());
    for (HalfEdge h = 0; h < n; ++h)
      if (d.tag[h].part == Part::input) in_q[g.source(h)].insert(d.tag[h].index);
    std::vector<int> fund(g.vertex_count(), 0);
    for (const auto& f : d.fundamental)
      for (Vertex v : f) ++fund[v];
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      if (val[v] == 1) {
        if (fund[v]) vp.offenders.push_back(v);
        continue;
      }
      int q = static_cast<int>(in_q[v].size());
      if (!((q == 1 && fund[v] == 0) || (q == 0 && fund[v] == 1))) vp.offenders.push_back(v);
    }
  }
  vp.ok = vp.offenders.empty();
  rep.items.push_back(vp);

  ValidationItem tt{condition::trees_are_trees};
  for (int j = 0; j < d.tree_count(); ++j)
    if (!is_tree(tree_view(d, j).fatgraph.graph)) tt.offenders.push_back(j);
  tt.ok = tt.offenders.empty();
  rep.items.push_back(tt);

  ValidationItem nc{condition::no_tree_cycles};
  {
    const int m = d.tree_count();
    std::vector<std::set<int>> out(m);
    for (int a = 0; a < m; ++a)
      for (Vertex v : d.fundamental[a])
        for (HalfEdge h = 0; h < n; ++h)
          if (g.source(h) == v && d.tag[h].part == Part::tree && d.tag[h].index != a) out[a].insert(d.tag[h].index);
    // Kahn's algorithm; whatever remains lies on or behind a cycle
    std::vector<int> indeg(m, 0);
    for (int a = 0; a < m; ++a)
      for (int b : out[a]) ++indeg[b];
    std::vector<int> ready;
    for (int a = 0; a < m; ++a)
      if (!indeg[a]) ready.push_back(a);
    std::vector<char> done(m, 0);
    while (!ready.empty()) {
      int a = ready.back();
      ready.pop_back();
      done[a] = 1;
      for (int b : out[a])
        if (--indeg[b] == 0) ready.push_back(b);
    }
    for (int a = 0; a < m; ++a)
      if (!done[a]) nc.offenders.push_back(a);
  }
  nc.ok = nc.offenders.empty();
  rep.items.push_back(nc);
  return rep;
}

// ---------------------------------------------------------------------------
// orderings and orientations

struct Ordering {
  std::vector<int> trees;
  std::vector<HalfEdge> leaves;
  bool operator==(const Ordering&) const = default;
};

/// An orientation is the class of sign * [ordering].
struct Orientation {
  Ordering ordering;
  int sign = 1;
};

/// Sign of the permutation that sorts a sequence of distinct values.
inline int permutation_sign(const std::vector<int>& seq) {
  const int n = static_cast<int>(seq.size());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::sort(p.begin(), p.end(), [&](int a, int b) { return seq[a] < seq[b]; });
  std::vector<char> seen(n, 0);
  int parity = 0;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    parity += len - 1;
  }
  return parity % 2 ? -1 : 1;
}

/// +1 iff the two orderings define the same orientation.
inline int orientation_sign(const Ordering& a, const Ordering& b) {
  auto sa_t = a.trees, sb_t = b.trees;
  auto sa_l = a.leaves, sb_l = b.leaves;
  std::sort(sa_t.begin(), sa_t.end());
  std::sort(sb_t.begin(), sb_t.end());
  std::sort(sa_l.begin(), sa_l.end());
  std::sort(sb_l.begin(), sb_l.end());
  if (sa_t != sb_t || sa_l != sb_l) throw PreconditionError("orderings are on different sets");
  if (std::adjacent_find(sa_t.begin(), sa_t.end()) != sa_t.end() ||
      std::adjacent_find(sa_l.begin(), sa_l.end()) != sa_l.end())
    throw PreconditionError("ordering repeats an element");
  return permutation_sign(a.trees) * permutation_sign(b.trees) * permutation_sign(a.leaves) *
         permutation_sign(b.leaves);
}

/// Sign of an orientation against the reference ordering (trees by index,
/// leaves ascending).
inline int relative_sign(const Orientation& o) {
  return o.sign * permutation_sign(o.ordering.trees) * permutation_sign(o.ordering.leaves);
}

inline Ordering reference_ordering(const CombinatorialStringDiagram& d) {
  Ordering o;
  for (int j = 0; j < d.tree_count(); ++j) o.trees.push_back(j);
  o.leaves = tree_leaves(d);
  return o;
}

inline Orientation reference_orientation(const CombinatorialStringDiagram& d, int sign = 1) {
  return {reference_ordering(d), d.tree_count() == 0 ? 1 : sign};
}

inline bool same_orientation(const Orientation& a, const Orientation& b) {
  return a.sign * b.sign * orientation_sign(a.ordering, b.ordering) == 1;
}

// ---------------------------------------------------------------------------
// metric string diagrams

struct StringDiagram {
  CombinatorialStringDiagram shape;
  std::vector<Rational> length;  // per half-edge
  Orientation orientation;
};

inline PseudometricFatgraph realization(const StringDiagram& d) { return {d.shape.fatgraph, d.length}; }

inline ValidationReport validate(const StringDiagram& d) {
  ValidationReport rep = validate_combinatorial(d.shape);
  // metric checks only need the trees to be trees
  if (!rep.passed(condition::well_formed) || !rep.passed(condition::trees_are_trees)) return rep;
  const auto& g = d.shape.fatgraph;
  if (static_cast<int>(d.length.size()) != g.half_edge_count()) {
    rep.items.push_back({condition::external_zero, false, {}, "length table has wrong size"});
    return rep;
  }
  try {
    realization(d).validate();
  } catch (const ValidationError& e) {
    rep.items.push_back({condition::external_zero, false, {}, e.what()});
    return rep;
  }
  auto val = g.graph.valences();
  ValidationItem ez{condition::external_zero};
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h)
    if (val[g.source(h)] == 1 && d.length[h] != 0) ez.offenders.push_back(h);
  ez.ok = ez.offenders.empty();
  rep.items.push_back(ez);
  ValidationItem ui{condition::unit_inputs};
  for (int i = 0; i < d.shape.inputs; ++i) {
    Rational s = 0;
    for (HalfEdge h : d.shape.half_edges_of(Part::input, i))
      if (h < g.partner(h)) s += d.length[h];
    if (s != 1) ui.offenders.push_back(i);
  }
  ui.ok = ui.offenders.empty();
  rep.items.push_back(ui);
  ValidationItem sb{condition::short_branched};
  for (int j = 0; j < d.shape.tree_count(); ++j)
    if (!is_short_branched(tree_metric(tree_view(d.shape, j), d.length)).short_branched) sb.offenders.push_back(j);
  sb.ok = sb.offenders.empty();
  rep.items.push_back(sb);
  return rep;
}

// ---------------------------------------------------------------------------
// inputs and outputs

struct InputsOutputs {
  std::vector<BoundaryCycle> inputs;   // rotated to start at the Q_i leaf
  std::vector<BoundaryCycle> outputs;  // rotated to start at the L_i leaf
};

inline InputsOutputs inputs_outputs(const CombinatorialStringDiagram& d) {
  InputsOutputs io;
  auto cycles = boundary_cycles(d.fatgraph);
  auto find = [&](HalfEdge h) {
    for (const auto& c : cycles)
      if (std::find(c.half_edges.begin(), c.half_edges.end(), h) != c.half_edges.end()) return rotate_to(c, h);
    throw PreconditionError("half-edge on no boundary cycle");
  };
  for (int i = 0; i < d.inputs; ++i) io.inputs.push_back(find(marking_leaf(d, Part::input, i)));
  for (int i = 0; i < d.outputs; ++i) io.outputs.push_back(find(marking_leaf(d, Part::output, i)));
  return io;
}

inline std::vector<Rational> cycle_lengths(const StringDiagram& d, const std::vector<BoundaryCycle>& cs) {
  std::vector<Rational> out;
  auto g = realization(d);
  for (const auto& c : cs) out.push_back(cycle_length(g, c));
  return out;
}

// ---------------------------------------------------------------------------
// intersection graph

struct IntersectionGraph {
  Fatgraph fatgraph;
  std::vector<HalfEdge> to_diagram;
  std::vector<HalfEdge> from_diagram;
  std::vector<Vertex> vertex_to_diagram;  // leaves map to their Q vertex
  std::vector<HalfEdge> leaves;           // local half-edges at leaves, ascending
  Components parts;
  std::vector<std::vector<int>> component_trees;
  std::vector<std::vector<HalfEdge>> component_leaves;  // diagram half-edges, ascending
};

inline IntersectionGraph intersection_graph(const CombinatorialStringDiagram& d) {
  std::vector<HalfEdge> th;
  for (HalfEdge h = 0; h < d.fatgraph.half_edge_count(); ++h)
    if (d.tag[h].part == Part::tree) th.push_back(h);
  IntersectionGraph ig;
  auto sub = restrict_to_edges(d.fatgraph, th);
  auto onq = input_vertices(d);
  std::vector<Vertex> qv;
  for (Vertex v = 0; v < sub.graph.vertex_count(); ++v)
    if (onq[sub.vertex_to_parent[v]]) qv.push_back(v);
  auto ex = vertex_explosion(sub.graph, qv);
  ig.fatgraph = std::move(ex.graph);
  ig.to_diagram = sub.to_parent;
  ig.from_diagram = sub.from_parent;
  for (Vertex v : ex.to_original) ig.vertex_to_diagram.push_back(sub.vertex_to_parent[v]);
  auto val = ig.fatgraph.graph.valences();
  for (HalfEdge h = 0; h < ig.fatgraph.half_edge_count(); ++h)
    if (val[ig.fatgraph.source(h)] == 1) ig.leaves.push_back(h);
  ig.parts = components(ig.fatgraph.graph);
  ig.component_trees.resize(ig.parts.count);
  ig.component_leaves.resize(ig.parts.count);
  for (HalfEdge h = 0; h < ig.fatgraph.half_edge_count(); ++h) {
    auto& ts = ig.component_trees[ig.parts.of_half_edge[h]];
    int j = d.tag[ig.to_diagram[h]].index;
    if (std::find(ts.begin(), ts.end(), j) == ts.end()) ts.push_back(j);
  }
  for (auto& ts : ig.component_trees) std::sort(ts.begin(), ts.end());
  for (HalfEdge h : ig.leaves) ig.component_leaves[ig.parts.of_half_edge[h]].push_back(ig.to_diagram[h]);
  return ig;
}

// ---------------------------------------------------------------------------
// recognizers

/// The three conditions that make a metric chord diagram alone in its class:
/// outputs avoid trees, every tree is a unit segment with distinct endpoints
/// on the circles, and every circle has length one.
inline bool is_marked_metric_chord_diagram(const StringDiagram& d) {
  const auto& s = d.shape;
  const auto& g = s.fatgraph;
  std::set<Vertex> tree_vertices, ends;
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h)
    if (s.tag[h].part == Part::tree) tree_vertices.insert(g.source(h));
  for (int i = 0; i < s.outputs; ++i)
    for (HalfEdge h : s.half_edges_of(Part::output, i))
      if (tree_vertices.count(g.source(h))) return false;
  auto onq = input_vertices(s);
  for (int j = 0; j < s.tree_count(); ++j) {
    auto hs = s.half_edges_of(Part::tree, j);
    if (hs.size() != 2 || !s.fundamental[j].empty()) return false;
    if (d.length[hs[0]] != 1) return false;
    for (HalfEdge h : hs) {
      if (!onq[g.source(h)]) return false;
      if (!ends.insert(g.source(h)).second) return false;
    }
  }
  for (int i = 0; i < s.inputs; ++i) {
    Rational total = 0;
    auto val = g.graph.valences();
    for (HalfEdge h : s.half_edges_of(Part::input, i))
      if (h < g.partner(h)) {
        total += d.length[h];
        bool stick = val[g.source(h)] == 1 || val[g.source(g.partner(h))] == 1;
        if (!stick && d.length[h] == 0) return false;
      }
    if (total != 1) return false;
  }
  return true;
}

}  // namespace strtop
