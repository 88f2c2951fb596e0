#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "strtop/moduli.hpp"

using namespace strtop;
using fixture::q;

namespace {

// one circle with a tripod on positions 1..3 and a marking in each gap of
// the tripod centre; a valid diagram of SD(-2, 1, 3)
CombinatorialStringDiagram tripod_diagram() {
  DiagramBuilder b;
  b.add_input(3);
  int t = b.add_tree(star_tree(3));
  for (int i = 0; i < 3; ++i) b.attach_tree_leaf(t, 2 * i + 1, DiagramBuilder::circle(0, i + 1));
  for (int i = 0; i < 3; ++i) b.attach_output(b.add_output(), DiagramBuilder::tree_vertex(t, 0, i));
  return b.build();
}

const CellComplex& complex_of(int chi, int k, int l) {
  static std::map<std::tuple<int, int, int>, CellComplex> cache;
  auto key = std::make_tuple(chi, k, l);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, enumerate_cells(chi, k, l)).first;
  return it->second;
}

int tree_group(const CellPolytope& p) {
  for (int g = 0; g < static_cast<int>(p.groups.size()); ++g)
    if (p.groups[g].part == Part::tree) return g;
  return kNone;
}

}  // namespace

TEST(Polytope, VertexEnumerationOfASimplex) {
  Polytope p;
  p.ambient = 3;
  p.equalities.push_back({{1, 1, 1}, -1});
  for (int i = 0; i < 3; ++i) {
    Vector c(3, 0);
    c[i] = 1;
    p.inequalities.push_back({c, 0});
  }
  auto vs = vertices(p);
  EXPECT_EQ(vs.size(), 3u);
  EXPECT_EQ(affine_rank(vs), 2);
  EXPECT_TRUE(p.contains(centroid(vs)));
}

TEST(CellPolytope, Sd011Cells) {
  auto reps = enumerate_types(0, 1, 1);
  ASSERT_EQ(reps.size(), 2u);
  std::vector<int> dims;
  for (const auto& d : reps) dims.push_back(cell_polytope(d).dimension);
  std::sort(dims.begin(), dims.end());
  EXPECT_EQ(dims, (std::vector<int>{0, 1}));
  for (const auto& d : reps) {
    auto p = cell_polytope(d);
    if (p.dimension != 1) continue;
    // a + b = 1 with a, b >= 0
    ASSERT_EQ(p.coordinate_count(), 2);
    auto vs = vertices(p.polytope());
    EXPECT_EQ(vs, (std::vector<Vector>{{0, 1}, {1, 0}}));
    EXPECT_EQ(p.facets().size(), 2u);
  }
}

TEST(CellPolytope, SegmentsWithFixedEndsGiveAPoint) {
  auto d = fixture::two_circles().shape;
  // the marking keeps circle 0 at two edges; pin it with a chord diagram of one circle instead
  DiagramBuilder b;
  b.add_input(0);
  b.add_input(0);
  int t = b.add_tree(segment_tree());
  b.attach_tree_leaf(t, 0, DiagramBuilder::circle(0, 0));
  b.attach_tree_leaf(t, 1, DiagramBuilder::circle(1, 0));
  b.attach_output(b.add_output(), DiagramBuilder::circle(0, 0));
  auto p = cell_polytope(b.build());
  EXPECT_EQ(p.dimension, 0);
  EXPECT_TRUE(p.facets().empty());
  EXPECT_EQ(cell_polytope(d).dimension, 1);
}

TEST(CellPolytope, TripodIsATriangle) {
  auto d = tripod_diagram();
  ASSERT_TRUE(validate_combinatorial(d).ok());
  auto p = cell_polytope(d);
  int g = tree_group(p);
  ASSERT_NE(g, kNone);
  auto vs = p.factor_vertices[g];
  ASSERT_EQ(vs.size(), 3u);
  for (const auto& v : vs) {
    std::vector<Rational> s = v;
    std::sort(s.begin(), s.end());
    EXPECT_EQ(s, (std::vector<Rational>{0, 1, 1}));
  }
  int prune = 0, flagged = 0;
  for (const auto& c : p.constraints) {
    if (c.group != g) continue;
    if (c.kind == FaceKind::prune) {
      ++prune;
      EXPECT_EQ(c.status, FaceStatus::facet);
    } else {
      ++flagged;
      EXPECT_EQ(c.status, FaceStatus::not_codim_one);
      EXPECT_EQ(c.expected, FaceStatus::not_codim_one);
    }
  }
  EXPECT_EQ(prune, 3);
  EXPECT_EQ(flagged, 3);
  EXPECT_EQ(p.dimension, 3 + 2);
}

TEST(CellPolytope, StatusMatchesCombinatoricsOnEveryCell) {
  for (auto [chi, k, l] : {std::tuple{0, 1, 1}, {-1, 1, 2}, {-1, 2, 1}, {-2, 1, 1}}) {
    const auto& cx = complex_of(chi, k, l);
    for (const auto& t : cx.types) {
      const auto& p = *t.polytope;
      int expect_dim = 0;
      for (const auto& g : p.groups) expect_dim += static_cast<int>(g.coords.size()) - 1;
      EXPECT_EQ(p.dimension, expect_dim);
      std::set<std::pair<int, std::vector<Vector>>> faces;
      for (int c = 0; c < static_cast<int>(p.constraints.size()); ++c) {
        EXPECT_EQ(p.constraints[c].status, p.constraints[c].expected) << t.code << " constraint " << c;
        if (p.constraints[c].status == FaceStatus::facet)
          EXPECT_TRUE(faces.insert({p.constraints[c].group, p.face_vertices(p.constraints[c].group, {c})}).second) << "two facets coincide";
      }
      auto x = p.interior_point();
      EXPECT_TRUE(p.polytope().contains(x));
      for (int c : p.facets()) EXPECT_GT(p.constraints[c].form(p.coordinate_count())(x), 0);
    }
  }
}

TEST(CellPolytope, ZeroCellHasNoFacets) {
  for (const auto& t : complex_of(0, 1, 1).types)
    if (t.polytope->dimension == 0) EXPECT_TRUE(t.faces.empty());
}

TEST(Degenerations, ContractErrors) {
  auto s = fixture::two_circles().metric;
  HalfEdge tree_edge = kNone, stick = kNone;
  for (HalfEdge h = 0; h < s.shape.fatgraph.half_edge_count(); ++h) {
    if (s.shape.tag[h].part == Part::tree) tree_edge = h;
    if (s.shape.tag[h].part == Part::input && h == marking_leaf(s.shape, Part::input, 0)) stick = h;
  }
  EXPECT_THROW(contract_in_diagram(s, tree_edge), PreconditionError);  // positive length
  s.length[tree_edge] = s.length[s.shape.fatgraph.partner(tree_edge)] = 0;
  EXPECT_THROW(contract_in_diagram(s, tree_edge), PreconditionError);  // a whole segment
  EXPECT_THROW(contract_in_diagram(s, stick), PreconditionError);      // external
}

TEST(Degenerations, ContractCircleEdge) {
  auto s = fixture::lollipop_and_marking_metric(0);
  DiagramBuilder b;
  b.add_input(1);
  auto out = contract_in_diagram(s, b.circle_half_edge(0, 0));
  EXPECT_TRUE(validate(out.diagram).ok());
  EXPECT_EQ(out.diagram.shape.fatgraph.edge_count(), s.shape.fatgraph.edge_count() - 1);
  EXPECT_EQ(out.half_edge_map[b.circle_half_edge(0, 0)], kNone);
}

TEST(Degenerations, PruneTripodAtTheUnitLeg) {
  auto d = tripod_diagram();
  DiagramBuilder b;
  b.add_input(3);
  b.add_tree(star_tree(3));
  std::map<HalfEdge, Rational> len;
  for (int e = 0; e < 4; ++e) len[b.circle_half_edge(0, e)] = q(1, 4);
  len[b.tree_half_edge(0, 0)] = q(1, 2);
  len[b.tree_half_edge(0, 2)] = q(1, 2);
  len[b.tree_half_edge(0, 4)] = 1;
  auto s = fixture::with_lengths(d, len);
  ASSERT_TRUE(validate(s).ok());
  HalfEdge h = b.tree_half_edge(0, 4);
  auto out = prune_in_diagram(s, h);
  const auto& nd = out.diagram;
  EXPECT_EQ(nd.shape.tree_count(), 2);
  EXPECT_EQ(nd.shape.half_edges_of(Part::tree, 1).size(), 2u);  // the segment T_h
  EXPECT_EQ(nd.shape.half_edges_of(Part::tree, 0).size(), 4u);  // the cherry T^h
  EXPECT_EQ(tree_leaves(nd.shape).size(), tree_leaves(s.shape).size() + 1);
  EXPECT_EQ(nd.orientation.ordering.trees, (std::vector<int>{0, 1}));
  EXPECT_EQ(nd.orientation.ordering.leaves.front(), h);
  EXPECT_TRUE(validate(nd).ok());
  EXPECT_EQ(nd.shape.tree_count() - static_cast<int>(tree_leaves(nd.shape).size()),
            s.shape.tree_count() - static_cast<int>(tree_leaves(s.shape).size()));
  // the unit leg is the only prunable branch
  EXPECT_THROW(prune_in_diagram(s, b.tree_half_edge(0, 0)), PreconditionError);
}

TEST(Degenerations, ContractBranchedLeafEdgeSplitsTheTree) {
  auto d = tripod_diagram();
  DiagramBuilder b;
  b.add_input(3);
  b.add_tree(star_tree(3));
  std::map<HalfEdge, Rational> len;
  for (int e = 0; e < 4; ++e) len[b.circle_half_edge(0, e)] = q(1, 4);
  len[b.tree_half_edge(0, 0)] = 0;
  len[b.tree_half_edge(0, 2)] = 1;
  len[b.tree_half_edge(0, 4)] = 1;
  auto s = fixture::with_lengths(d, len, -1);
  auto out = contract_in_diagram(s, b.tree_half_edge(0, 0));
  const auto& nd = out.diagram;
  EXPECT_EQ(nd.shape.tree_count(), 2);
  EXPECT_TRUE(validate(nd).ok());
  EXPECT_EQ(nd.orientation.ordering.trees.front(), 0);
  EXPECT_EQ(nd.shape.tree_count() - static_cast<int>(tree_leaves(nd.shape).size()), -2);
  // either order of the split trees gives the same orientation
  EXPECT_EQ(std::abs(relative_sign(nd.orientation)), 1);
}

TEST(Faces, Sd011IntervalAttachesWithOppositeSigns) {
  const auto& cx = complex_of(0, 1, 1);
  ASSERT_EQ(cx.cells.size(), 2u);
  int one = cx.cells[0].dimension == 1 ? 0 : 1;
  std::vector<int> signs;
  for (const auto& f : cx.faces) {
    EXPECT_EQ(f.cell, one);
    EXPECT_EQ(f.target, 1 - one);
    signs.push_back(f.sign);
  }
  std::sort(signs.begin(), signs.end());
  EXPECT_EQ(signs, (std::vector<int>{-1, 1}));
  // a = 0 (the free coordinate) is outward along -a, b = 0 along +a
  const auto& p = *cx.types[cx.cells[one].type].polytope;
  const auto& faces = cx.types[cx.cells[one].type].faces;
  for (const auto& r : faces) {
    int c = p.constraints[r.constraint].coords.front();
    EXPECT_EQ(r.sign, c == p.free_coordinates().front() ? -1 : 1);
  }
}

TEST(Faces, OneStepAndRealizationInvariance) {
  for (auto [chi, k, l] : {std::tuple{-1, 1, 2}, {-1, 2, 1}}) {
    const auto& cx = complex_of(chi, k, l);
    EXPECT_TRUE(cx.problems.empty());
    for (const auto& t : cx.types) {
      const auto& p = *t.polytope;
      for (const auto& r : t.faces) {
        EXPECT_TRUE(r.one_step);
        auto x = p.face_point({r.constraint});
        StringDiagram d{p.diagram, p.lengths(x), reference_orientation(p.diagram, 1)};
        auto a = attach_at(d, p.constraints[r.constraint].degeneration());
        EXPECT_EQ(a.code, r.target);
        std::vector<HalfEdge> marks;
        for (int i = 0; i < p.diagram.inputs; ++i) marks.push_back(marking_leaf(p.diagram, Part::input, i));
        for (int i = 0; i < p.diagram.outputs; ++i) marks.push_back(marking_leaf(p.diagram, Part::output, i));
        auto before = realization(d);
        auto after = realization(a.diagram.diagram);
        for (HalfEdge u : marks)
          for (HalfEdge v : marks)
            EXPECT_EQ(distance(before, RealizationPoint::at_vertex(before.fatgraph.source(u)),
                               RealizationPoint::at_vertex(before.fatgraph.source(v))),
                      distance(after, RealizationPoint::at_vertex(after.fatgraph.source(a.diagram.half_edge_map[u])),
                               RealizationPoint::at_vertex(after.fatgraph.source(a.diagram.half_edge_map[v]))));
      }
    }
  }
}

TEST(Enumerate, EmptyParameterSets) {
  EXPECT_TRUE(enumerate_types(0, 1, 2).empty());
  EXPECT_TRUE(enumerate_types(-1, 0, 1).empty());
  EXPECT_TRUE(enumerate_types(0, 0, 1).empty());
  EXPECT_TRUE(enumerate_types(-1, 1, 1).empty());
  EXPECT_TRUE(enumerate_types(-1, 2, 2).empty());
}

TEST(Enumerate, BudgetIsEnforced) {
  EXPECT_THROW(enumerate_types(-3, 1, 1), ResourceError);
  EnumerationOptions small;
  small.max_abs_chi = 0;
  EXPECT_THROW(enumerate_types(-1, 1, 2, small), ResourceError);
  EXPECT_THROW(enumerate_types(1, 1, 1), PreconditionError);
}

TEST(Enumerate, CellsCarryTheirParameters) {
  for (auto [chi, k, l] : {std::tuple{0, 1, 1}, {-1, 1, 2}, {-1, 2, 1}, {-2, 1, 1}}) {
    const auto& cx = complex_of(chi, k, l);
    for (const auto& t : cx.types) {
      const auto& d = t.polytope->diagram;
      EXPECT_TRUE(validate_combinatorial(d).ok());
      EXPECT_EQ(d.tree_count() - static_cast<int>(tree_leaves(d).size()), chi);
      EXPECT_EQ(euler_characteristic(d.fatgraph), chi);
      EXPECT_EQ(d.inputs, k);
      EXPECT_EQ(d.outputs, l);
      EXPECT_EQ(diagram_code(d), t.code);
    }
  }
}

TEST(Enumerate, DeterministicAcrossThreadCounts) {
  EnumerationOptions one, many;
  one.threads = 1;
  many.threads = 4;
  auto a = enumerate_types(-1, 1, 2, one), b = enumerate_types(-1, 1, 2, many);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(diagram_code(a[i]), diagram_code(b[i]));
}

TEST(Enumerate, RelabelledInputsFindTheSameType) {
  // a diagram built by hand is found among the enumerated types
  auto d = fixture::two_circles().shape;
  const auto& cx = complex_of(-1, 2, 1);
  EXPECT_NE(cx.type_index(diagram_code(d)), kNone);
}

TEST(Codim2, AllFacesAgree) {
  for (auto [chi, k, l] : {std::tuple{-1, 1, 2}, {-1, 2, 1}, {-2, 1, 1}}) {
    const auto& cx = complex_of(chi, k, l);
    std::map<std::string, int> kinds;
    int checked = 0;
    for (const auto& r : verify_codim2(cx)) {
      for (const auto& f : r.failures) ADD_FAILURE() << r.code << " " << f.first << "," << f.second << ": " << f.detail;
      checked += r.faces_checked;
      for (const auto& [kk, n] : r.by_kind) kinds[kk] += n;
    }
    EXPECT_GT(checked, 0);
    if (chi == -2) {
      for (const char* c : {"prune+prune", "input_edge+prune", "leaf_edge+prune", "tree_edge+prune", "input_edge+input_edge",
                            "input_edge+leaf_edge", "leaf_edge+leaf_edge"})
        EXPECT_GT(kinds[c], 0) << c;
    }
  }
}

TEST(Cover, Sd011IsAnIsomorphism) {
  auto r = orientation_cover_components(complex_of(0, 1, 1));
  EXPECT_FALSE(r.has_trees);
  EXPECT_FALSE(r.split);
  EXPECT_EQ(r.components, 1);
  EXPECT_EQ(r.unoriented_components, 1);
}

TEST(Cover, OrientationsAreDistinctCells) {
  const auto& cx = complex_of(-1, 1, 2);
  for (int t = 0; t < static_cast<int>(cx.types.size()); ++t) {
    EXPECT_NE(cx.cell_index(t, 1), kNone);
    EXPECT_NE(cx.cell_index(t, -1), kNone);
    EXPECT_NE(cx.cell_index(t, 1), cx.cell_index(t, -1));
  }
  auto r = orientation_cover_components(cx);
  EXPECT_TRUE(r.has_trees);
  EXPECT_EQ(r.split, r.components == 2 * r.unoriented_components);
  EXPECT_GE(r.components, r.unoriented_components);
}
