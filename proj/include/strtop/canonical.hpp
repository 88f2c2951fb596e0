#pragma once

#include <string>
#include <vector>

#include "strtop/fatgraph.hpp"

namespace strtop {

/// A fatgraph with the data used to root canonical traversal.
///  - half_edge_label / vertex_label: values that must be preserved exactly
///  - half_edge_block: a partition whose block names are irrelevant (e.g.
///    unlabeled trees); only membership must be preserved
///  - roots: ordered markings; every component must contain one
/// Empty label vectors mean "all zero".
struct LabeledFatgraph {
  Fatgraph fatgraph;
  std::vector<int> half_edge_label;
  std::vector<int> half_edge_block;
  std::vector<int> vertex_label;
  std::vector<HalfEdge> roots;
};

struct CanonicalForm {
  std::string code;
  std::vector<HalfEdge> order;     // canonical position -> original half-edge
  std::vector<int> position;       // original half-edge -> canonical position
  std::vector<Vertex> vertex_order;  // canonical vertex -> original vertex
  std::vector<int> vertex_position;  // original vertex -> canonical vertex
  std::vector<int> block_rank;       // original block id -> canonical block id (sparse, kNone if unused)
};

/// BFS from each root in turn, numbering half-edges on discovery through the
/// involution first and the successor second.  Since every component is
/// rooted and a root-fixing automorphism of a connected fatgraph is trivial,
/// the traversal order is an invariant of the labeled isomorphism class.
inline CanonicalForm canonical_form(const LabeledFatgraph& lg) {
  const Fatgraph& g = lg.fatgraph;
  const int n = g.half_edge_count();
  auto hlabel = [&](HalfEdge h) { return lg.half_edge_label.empty() ? 0 : lg.half_edge_label[h]; };
  auto hblock = [&](HalfEdge h) { return lg.half_edge_block.empty() ? 0 : lg.half_edge_block[h]; };
  auto vlabel = [&](Vertex v) { return lg.vertex_label.empty() ? 0 : lg.vertex_label[v]; };

  CanonicalForm cf;
  cf.position.assign(n, kNone);
  std::vector<HalfEdge> queue;
  queue.reserve(n);
  auto visit = [&](HalfEdge h) {
    if (cf.position[h] != kNone) return;
    cf.position[h] = static_cast<int>(cf.order.size());
    cf.order.push_back(h);
    queue.push_back(h);
  };
  for (HalfEdge r : lg.roots) {
    if (r < 0 || r >= n) throw PreconditionError("root half-edge out of range");
    std::size_t head = queue.size();
    visit(r);
    while (head < queue.size()) {
      HalfEdge h = queue[head++];
      visit(g.partner(h));
      visit(g.successor[h]);
    }
  }
  if (static_cast<int>(cf.order.size()) != n)
    throw AmbiguityError("canonical labeling needs a root in every component");

  cf.vertex_position.assign(g.vertex_count(), kNone);
  for (HalfEdge h : cf.order) {
    Vertex v = g.source(h);
    if (cf.vertex_position[v] == kNone) {
      cf.vertex_position[v] = static_cast<int>(cf.vertex_order.size());
      cf.vertex_order.push_back(v);
    }
  }
  int max_block = 0;
  for (HalfEdge h = 0; h < n; ++h) max_block = std::max(max_block, hblock(h));
  cf.block_rank.assign(max_block + 1, kNone);
  int blocks = 0;
  for (HalfEdge h : cf.order)
    if (cf.block_rank[hblock(h)] == kNone) cf.block_rank[hblock(h)] = blocks++;

  std::string code = std::to_string(n) + ":";
  for (HalfEdge h : cf.order) {
    code += std::to_string(cf.position[g.partner(h)]);
    code += ',';
    code += std::to_string(cf.position[g.successor[h]]);
    code += ',';
    code += std::to_string(hlabel(h));
    code += ',';
    code += std::to_string(cf.block_rank[hblock(h)]);
    code += ',';
    code += std::to_string(vlabel(g.source(h)));
    code += ';';
  }
  code += "r";
  for (HalfEdge r : lg.roots) {
    code += std::to_string(cf.position[r]);
    code += ',';
  }
  cf.code = std::move(code);
  return cf;
}

inline std::string canonical_code(const LabeledFatgraph& lg) { return canonical_form(lg).code; }

/// Unrooted code for a fatgraph tree or other connected fatgraph without
/// markings: the least rooted code over all half-edges.  Labels are honoured.
inline std::string unrooted_code(LabeledFatgraph lg) {
  std::string best;
  for (HalfEdge h = 0; h < lg.fatgraph.half_edge_count(); ++h) {
    lg.roots = {h};
    std::string c = canonical_code(lg);
    if (best.empty() || c < best) best = std::move(c);
  }
  return best;
}

}  // namespace strtop
