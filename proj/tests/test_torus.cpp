#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "invariance.hpp"
#include "strtop/torus.hpp"

using namespace strtop;
using fixture::q;

namespace {

TorusPoint pt(Rational a) { return TorusPoint({a}); }
TorusPoint pt(Rational a, Rational b) { return TorusPoint({a, b}); }

LoopTuple constant_loops(std::initializer_list<TorusPoint> ps) {
  LoopTuple g;
  for (const auto& p : ps) g.push_back(TorusLoop::constant(p));
  return g;
}

SimplexPoint simplex(std::initializer_list<std::pair<int, Rational>> c) {
  SimplexPoint p;
  for (const auto& [k, a] : c) p.coords[k] = a;
  return p;
}

const CellComplex& complex_of(int chi, int k, int l) {
  static std::map<std::tuple<int, int, int>, CellComplex> cache;
  auto key = std::make_tuple(chi, k, l);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, enumerate_cells(chi, k, l)).first;
  return it->second;
}

struct Tripod {
  StringDiagram d;
  HalfEdge leaf[3];
  HalfEdge unit_leg;
};

Tripod tripod() {
  DiagramBuilder b;
  b.add_input(3);
  int t = b.add_tree(star_tree(3));
  for (int i = 0; i < 3; ++i) b.attach_tree_leaf(t, 2 * i + 1, DiagramBuilder::circle(0, i + 1));
  for (int i = 0; i < 3; ++i) b.attach_output(b.add_output(), DiagramBuilder::tree_vertex(t, 0, i));
  std::map<HalfEdge, Rational> len;
  for (int e = 0; e < 4; ++e) len[b.circle_half_edge(0, e)] = q(1, 4);
  len[b.tree_half_edge(t, 0)] = q(1, 2);
  len[b.tree_half_edge(t, 2)] = q(1, 2);
  len[b.tree_half_edge(t, 4)] = 1;
  Tripod r;
  r.d = fixture::with_lengths(b.build(), len);
  for (int i = 0; i < 3; ++i) r.leaf[i] = b.tree_half_edge(t, 2 * i + 1);
  r.unit_leg = b.tree_half_edge(t, 4);
  return r;
}

void expect_ok(const invariance::Tally& t, int at_least) {
  for (const auto& f : t.failures) ADD_FAILURE() << f;
  EXPECT_GE(t.instances, at_least);
}

}  // namespace

TEST(Torus, Distance) {
  EXPECT_EQ(torus_distance(pt(q(1, 3)), pt(q(1, 3))).squared, 0);
  EXPECT_EQ(torus_distance(pt(q(19, 20)), pt(q(1, 20))).exact(), q(1, 10));
  EXPECT_EQ(torus_distance(pt(0), pt(q(1, 2))).exact(), q(1, 2));
  auto d = torus_distance(pt(0, 0), pt(q(1, 10), q(1, 10)));
  EXPECT_EQ(d.squared, q(1, 50));
  EXPECT_FALSE(d.exact());
  EXPECT_TRUE(d.less_than(q(1, 7)));
  EXPECT_FALSE(d.less_than(q(1, 8)));
  EXPECT_THROW(torus_distance(pt(0), pt(0, 0)), PreconditionError);
}

TEST(Torus, PointsAreReduced) {
  EXPECT_EQ(pt(q(5, 4)), pt(q(1, 4)));
  EXPECT_EQ(pt(q(-1, 4)), pt(q(3, 4)));
  EXPECT_EQ(lift_near(pt(q(19, 20)), {q(1, 20)}), (Vector{q(-1, 20)}));
}

TEST(Torus, SmallestEnclosingBall) {
  auto b = min_enclosing_ball(std::vector<Vector>{{0, 0}, {q(12, 25), q(9, 25)}});
  EXPECT_EQ(b.radius_squared, q(9, 100));
  // right triangle: the hypotenuse is a diameter
  b = min_enclosing_ball(std::vector<Vector>{{0, 0}, {q(1, 10), 0}, {0, q(1, 10)}});
  EXPECT_EQ(b.radius_squared, q(1, 200));
  EXPECT_EQ(b.center, (Vector{q(1, 20), q(1, 20)}));
  // equilateral-ish acute triangle: circumscribed
  b = min_enclosing_ball(std::vector<Vector>{{0, 0}, {q(2, 10), 0}, {q(1, 10), q(1, 10)}});
  EXPECT_EQ(b.center, (Vector{q(1, 10), 0}));
  EXPECT_EQ(min_enclosing_ball(std::vector<Vector>{{q(1, 3)}}).radius_squared, 0);
}

TEST(Karcher, Examples) {
  Configuration f{{0, pt(q(1, 10))}, {1, pt(q(3, 10))}};
  auto mid = simplex({{0, q(1, 2)}, {1, q(1, 2)}});
  EXPECT_EQ(geodesic_interpolation(f, mid), pt(q(1, 5)));
  Configuration w{{0, pt(q(19, 20))}, {1, pt(q(1, 20))}};
  EXPECT_EQ(geodesic_interpolation(w, mid), pt(0));
  Configuration same{{0, pt(q(1, 3), q(1, 7))}, {1, pt(q(1, 3), q(1, 7))}, {2, pt(q(1, 3), q(1, 7))}};
  EXPECT_EQ(geodesic_interpolation(same, simplex({{0, q(1, 5)}, {1, q(3, 5)}, {2, q(1, 5)}})), pt(q(1, 3), q(1, 7)));
}

TEST(Karcher, Errors) {
  Configuration far{{0, pt(0)}, {1, pt(q(1, 2))}};
  EXPECT_THROW(geodesic_interpolation(far, simplex({{0, q(1, 2)}, {1, q(1, 2)}})), PreconditionError);
  Configuration f{{0, pt(0)}};
  EXPECT_THROW(geodesic_interpolation(f, simplex({{0, q(1, 2)}})), PreconditionError);
  EXPECT_THROW(geodesic_interpolation(f, simplex({{0, q(1, 2)}, {5, q(1, 2)}})), PreconditionError);
}

TEST(Karcher, Properties) {
  std::mt19937 rng(3);
  expect_ok(invariance::karcher(150, rng), 150);
}

TEST(Loop, EvaluationAndValidation) {
  TorusLoop l{{0, q(1, 2), 1}, {pt(q(1, 10)), pt(q(3, 10)), pt(q(1, 10))}};
  EXPECT_NO_THROW(l.validate());
  EXPECT_EQ(l(q(1, 4)), pt(q(1, 5)));
  EXPECT_EQ(l(q(5, 4)), pt(q(1, 5)));
  EXPECT_EQ(l(q(1, 2)), pt(q(3, 10)));
  TorusLoop wrap{{0, q(1, 2), 1}, {pt(q(19, 20)), pt(q(1, 20)), pt(q(19, 20))}};
  EXPECT_EQ(wrap(q(1, 4)), pt(0));
  EXPECT_THROW((TorusLoop{{0, 1}, {pt(0), pt(q(1, 3))}}.validate()), ValidationError);
  EXPECT_THROW((TorusLoop{{0, q(1, 2), 1}, {pt(0), pt(q(1, 2)), pt(0)}}.validate()), ValidationError);
  EXPECT_THROW((TorusLoop{{0, q(1, 2), q(1, 2), 1}, {pt(0), pt(0), pt(0), pt(0)}}.validate()), ValidationError);
}

TEST(Loop, Rotation) {
  TorusLoop l{{0, q(1, 3), 1}, {pt(0), pt(q(1, 5)), pt(0)}};
  auto r = rotate(l, q(1, 4));
  r.validate();
  for (int k = 0; k < 24; ++k) EXPECT_EQ(r(q(k, 24)), l(q(k, 24) + q(1, 4)));
}

TEST(Lipschitz, SegmentExamples) {
  auto c = fixture::two_circles().metric;
  auto far = constant_loops({pt(0, 0), pt(q(1, 2), 0)});
  auto near = constant_loops({pt(0, 0), pt(q(1, 5), 0)});
  EXPECT_EQ(lipschitz_ratio_squared(c, far), q(1, 4));
  EXPECT_FALSE(lipschitz_ok(c, far, q(1, 4)));
  EXPECT_TRUE(lipschitz_ok(c, near, q(1, 4)));
  EXPECT_TRUE(lipschitz_ok(c, constant_loops({pt(0, 0), pt(0, 0)}), q(1, 1000)));
  EXPECT_TRUE(in_S(c, near));
  EXPECT_FALSE(in_s(c, near));
  EXPECT_TRUE(in_s(c, constant_loops({pt(0, 0), pt(q(1, 10), 0)})));
  EXPECT_THROW(lipschitz_ok(c, near, 0), PreconditionError);
}

TEST(Lipschitz, NoTreesIsVacuous) {
  auto d = fixture::lollipop_and_marking_metric();
  TorusLoop wild{{0, q(1, 3), q(2, 3), 1}, {pt(0, 0), pt(q(2, 5), 0), pt(q(2, 5), q(2, 5)), pt(0, 0)}};
  EXPECT_TRUE(in_S(d, {wild}));
  EXPECT_TRUE(in_s(d, {wild}));
}

TEST(Theta, SegmentExamples) {
  auto c = fixture::two_circles();
  DiagramBuilder b;
  b.add_input(1);
  b.add_input(0);
  int t = b.add_tree(segment_tree());
  auto g = constant_loops({pt(0, 0), pt(q(1, 5), 0)});
  Heart h(c.metric, g);
  HalfEdge seg = b.tree_half_edge(t, 0);
  EXPECT_EQ(h(RealizationPoint::on_edge(seg, q(1, 2))), pt(q(1, 10), 0));
  EXPECT_EQ(h(RealizationPoint::on_edge(seg, q(1, 4))), pt(q(1, 20), 0));
  for (HalfEdge l : tree_leaves(c.shape)) EXPECT_TRUE(h.at_leaf(l) == pt(0, 0) || h.at_leaf(l) == pt(q(1, 5), 0));
  auto lv = evaluate_leaves(c.metric, g);
  EXPECT_EQ(lv.size(), 2u);
  EXPECT_THROW(Heart(c.metric, constant_loops({pt(0, 0), pt(q(1, 2), 0)})), PreconditionError);
}

TEST(Theta, OnCirclesFollowsTheLoop) {
  auto c = fixture::two_circles();
  DiagramBuilder b;
  b.add_input(1);
  TorusLoop g0{{0, q(1, 2), 1}, {pt(0, 0), pt(q(1, 10), q(1, 20)), pt(0, 0)}};
  LoopTuple g{g0, TorusLoop::constant(pt(q(1, 50), 0))};
  Heart h(c.metric, g);
  auto gr = realization(c.metric);
  auto io = inputs_outputs(c.shape);
  for (int k = 0; k < 12; ++k) {
    Rational s = q(k, 12);
    EXPECT_EQ(h(boundary_param(gr, io.inputs[0], s)), g0(s));
  }
}

TEST(Outputs, NoTreesFollowTheInput) {
  auto d = fixture::lollipop_and_marking_metric(q(1, 3));
  TorusLoop g{{0, q(1, 4), q(3, 4), 1}, {pt(0, 0), pt(q(1, 5), q(1, 10)), pt(q(1, 10), q(1, 5)), pt(0, 0)}};
  Heart h(d, {g});
  auto out = h.outputs();
  ASSERT_EQ(out.size(), 1u);
  auto gr = realization(d);
  auto io = inputs_outputs(d.shape);
  auto classes = zero_classes(gr);
  for (int k = 0; k < 30; ++k) {
    Rational t = q(k, 30);
    Rational back = boundary_preimage(gr, io.inputs[0], boundary_param_reversed(gr, io.outputs[0], t), classes);
    EXPECT_EQ(out[0](t), g(back));
  }
}

TEST(Outputs, TwoCirclesRunAlongTheSegmentTwice) {
  auto c = fixture::two_circles();
  TorusLoop g0{{0, q(1, 2), 1}, {pt(0, 0), pt(q(1, 20), 0), pt(0, 0)}};
  TorusLoop g1{{0, q(1, 3), 1}, {pt(q(1, 10), 0), pt(q(1, 10), q(1, 20)), pt(q(1, 10), 0)}};
  Heart h(c.metric, {g0, g1});
  auto out = h.outputs();
  ASSERT_EQ(out.size(), 1u);
  out[0].validate();
  auto gr = realization(c.metric);
  auto io = inputs_outputs(c.shape);
  EXPECT_EQ(cycle_length(gr, io.outputs[0]), 4);
  for (int k = 0; k <= 64; ++k) {
    Rational t = q(k, 64);
    EXPECT_EQ(out[0](t), h(boundary_param_reversed(gr, io.outputs[0], 4 * t)));
  }
  // the segment is run along twice, once each way
  std::vector<HalfEdge> seg;
  for (HalfEdge e : marked_walk(gr, io.outputs[0], true))
    if (c.shape.tag[e].part == Part::tree) seg.push_back(e);
  ASSERT_EQ(seg.size(), 2u);
  EXPECT_EQ(seg[0], c.shape.fatgraph.partner(seg[1]));
}

TEST(Outputs, ConstantLoopsGiveConstantOutputs) {
  auto t = tripod();
  auto p = pt(q(2, 7), q(3, 7));
  for (const auto& l : Heart(t.d, constant_loops({p})).outputs()) {
    for (const auto& x : l.points) EXPECT_EQ(x, p);
  }
}

TEST(Outputs, AgreeWithThetaOnRandomDiagrams) {
  std::mt19937 rng(5);
  auto samples = invariance::facet_samples(complex_of(-1, 1, 2), 1, rng);
  auto more = invariance::facet_samples(complex_of(-2, 1, 1), 1, rng);
  samples.insert(samples.end(), more.begin(), more.end());
  expect_ok(invariance::outputs_match(samples, rng), 50);
}

TEST(Configurations, InN) {
  auto c = fixture::two_circles();
  auto leaves = tree_leaves(c.shape);
  auto conf = [&](TorusPoint a, TorusPoint b) { return LeafConfiguration{{leaves[0], a}, {leaves[1], b}}; };
  EXPECT_TRUE(in_N(c.shape, conf(pt(q(1, 3), q(1, 3)), pt(q(1, 3), q(1, 3)))));
  EXPECT_TRUE(in_n(c.shape, conf(pt(q(1, 3), q(1, 3)), pt(q(1, 3), q(1, 3)))));
  EXPECT_TRUE(in_N(c.shape, conf(pt(0, 0), pt(q(1, 3), 0))));
  EXPECT_FALSE(in_N(c.shape, conf(pt(0, 0), pt(q(12, 25), q(9, 25)))));
  EXPECT_EQ(small_radius(c.shape, 0), q(1, 16));
  EXPECT_TRUE(in_n(c.shape, conf(pt(0, 0), pt(q(1, 10), 0))));
  EXPECT_FALSE(in_n(c.shape, conf(pt(0, 0), pt(q(1, 7), 0))));
  EXPECT_THROW(in_N(c.shape, {{leaves[0], pt(0, 0)}}), PreconditionError);
}

TEST(Nabla, PruneTripod) {
  auto t = tripod();
  LeafConfiguration f{{t.leaf[0], pt(0, 0)}, {t.leaf[1], pt(q(1, 10), 0)}, {t.leaf[2], pt(q(1, 5), q(1, 5))}};
  auto r = nabla(t.d, {FaceKind::prune, t.unit_leg}, f);
  ASSERT_EQ(r.f.size(), 4u);
  EXPECT_EQ(r.f.at(r.diagram.half_edge_map[t.unit_leg]), pt(q(1, 20), 0));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(r.f.at(r.diagram.half_edge_map[t.leaf[i]]), f.at(t.leaf[i]));
  EXPECT_TRUE(in_N(r.diagram.diagram.shape, r.f));
  LeafConfiguration same{{t.leaf[0], pt(0, 0)}, {t.leaf[1], pt(0, 0)}, {t.leaf[2], pt(0, 0)}};
  for (const auto& [h, p] : nabla(t.d, {FaceKind::prune, t.unit_leg}, same).f) EXPECT_EQ(p, pt(0, 0));
  LeafConfiguration spread{{t.leaf[0], pt(0, 0)}, {t.leaf[1], pt(q(1, 2), 0)}, {t.leaf[2], pt(0, 0)}};
  EXPECT_THROW(nabla(t.d, {FaceKind::prune, t.unit_leg}, spread), PreconditionError);
}

TEST(Nabla, ContractionRelabels) {
  const auto& cx = complex_of(-1, 1, 2);
  std::mt19937 rng(2);
  for (const auto& s : invariance::facet_samples(cx, 1, rng)) {
    if (s.deg.kind != FaceKind::zero_edge) continue;
    auto f = invariance::random_configuration(s.d.shape, q(1, 10), rng);
    auto r = nabla(s.d, s.deg, f);
    std::multiset<TorusPoint> before, after;
    for (const auto& [h, p] : f) before.insert(p);
    for (const auto& [h, p] : r.f) after.insert(p);
    for (const auto& p : before) EXPECT_TRUE(after.count(p));
    EXPECT_TRUE(in_N(r.diagram.diagram.shape, r.f));
  }
}

TEST(ChainedBalls, Examples) {
  PointSetBall a{{pt(0), pt(q(1, 10))}, pt(q(1, 20)), q(1, 10)};
  PointSetBall b{{pt(q(1, 10)), pt(q(3, 20))}, pt(q(1, 8)), q(1, 20)};
  auto one = chained_balls_bound({a});
  EXPECT_EQ(one.center, a.center);
  EXPECT_EQ(one.radius, a.radius);
  auto two = chained_balls_bound({b, a});
  EXPECT_EQ(two.radius, q(3, 20));
  for (const auto& p : {pt(0), pt(q(1, 10)), pt(q(3, 20))}) EXPECT_TRUE(torus_distance(p, two.center).less_than(q(3, 20)));
  PointSetBall apart{{pt(q(1, 5))}, pt(q(1, 5)), q(1, 20)};
  EXPECT_THROW(chained_balls_bound({a, apart}), PreconditionError);
  PointSetBall outside{{pt(q(1, 5))}, pt(0), q(1, 20)};
  EXPECT_THROW(chained_balls_bound({outside}), PreconditionError);
  PointSetBall big{{pt(0)}, pt(0), q(1, 5)};
  EXPECT_THROW(chained_balls_bound({big, PointSetBall{{pt(0)}, pt(0), q(1, 10)}}), PreconditionError);
}

TEST(ChainedBalls, WrapAround) {
  PointSetBall a{{pt(q(19, 20), 0), pt(0, 0)}, pt(q(39, 40), 0), q(1, 20)};
  PointSetBall b{{pt(0, 0), pt(q(1, 20), q(1, 40))}, pt(q(1, 40), q(1, 80)), q(1, 20)};
  auto c = chained_balls_bound({a, b});
  EXPECT_EQ(c.radius, q(1, 10));
  EXPECT_EQ(c.order, (std::vector<int>{0, 1}));
}

TEST(Bv, ZeroCellIsTheIdentity) {
  auto d = fixture::lollipop_and_marking_metric(0);
  TorusLoop g{{0, q(1, 3), 1}, {pt(0, 0), pt(q(1, 4), q(1, 8)), pt(0, 0)}};
  std::vector<Rational> samples;
  for (int k = 0; k < 16; ++k) samples.push_back(q(k, 16));
  auto r = bv_rotation_check(d, g, samples);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.rotation, 0);
}

TEST(Bv, ArcPositionRotates) {
  TorusLoop g{{0, q(1, 5), q(1, 2), 1}, {pt(0, 0), pt(q(1, 4), q(1, 8)), pt(q(1, 6), q(1, 3)), pt(0, 0)}};
  std::vector<Rational> samples;
  for (int k = 0; k < 64; ++k) samples.push_back(q(k, 64));
  for (const auto& s : {q(1, 3), q(1, 2), q(7, 9)}) {
    auto d = fixture::lollipop_and_marking_metric(s);
    auto r = bv_rotation_check(d, g, samples);
    EXPECT_TRUE(r.ok) << s;
    EXPECT_TRUE(r.rotation == s || r.rotation == 1 - s) << r.rotation;
  }
  auto c = TorusLoop::constant(pt(q(1, 9), q(2, 9)));
  auto r = bv_rotation_check(fixture::lollipop_and_marking_metric(q(1, 3)), c, samples);
  EXPECT_TRUE(r.ok);
  EXPECT_THROW(bv_rotation(fixture::two_circles().metric), PreconditionError);
}

TEST(Invariance, LipschitzAcrossAttaching) {
  std::mt19937 rng(17);
  auto s = invariance::facet_samples(complex_of(-2, 1, 1), 1, rng);
  auto t = invariance::lipschitz(s, rng);
  expect_ok(t, 100);
  for (const char* k : {"input_edge", "tree_edge", "leaf_edge", "prune"}) EXPECT_GT(t.by_kind[k], 0) << k;
}

TEST(Invariance, ThetaAcrossAttaching) {
  std::mt19937 rng(19);
  auto s = invariance::facet_samples(complex_of(-2, 1, 1), 1, rng);
  auto more = invariance::facet_samples(complex_of(-1, 2, 1), 1, rng);
  s.insert(s.end(), more.begin(), more.end());
  auto t = invariance::theta(s, rng);
  expect_ok(t, 100);
  for (const char* k : {"input_edge", "tree_edge", "leaf_edge", "prune"}) EXPECT_GT(t.by_kind[k], 0) << k;
}

TEST(Invariance, NablaSquare) {
  std::mt19937 rng(23);
  auto s = invariance::codim2_samples(complex_of(-2, 1, 1), 1, rng);
  auto t = invariance::nabla_square(s, rng);
  expect_ok(t, 100);
  EXPECT_GT(t.by_kind["prune+prune"], 0);
  EXPECT_GT(t.by_kind["leaf_edge+prune"], 0);
}

TEST(Invariance, NablaSquareOnTheTripod) {
  // two unit legs, both prunable
  auto t = tripod();
  const Fatgraph& g = t.d.shape.fatgraph;
  HalfEdge first = g.partner(t.leaf[0]);
  HalfEdge second = g.partner(t.leaf[1]);
  t.d.length[first] = t.d.length[g.partner(first)] = 0;
  t.d.length[second] = t.d.length[g.partner(second)] = 1;
  auto avail = available_degenerations(t.d);
  std::vector<Degeneration> prunes;
  for (const auto& a : avail)
    if (a.kind == FaceKind::prune) prunes.push_back(a);
  ASSERT_GE(prunes.size(), 2u);
  LeafConfiguration f{{t.leaf[0], pt(0, 0)}, {t.leaf[1], pt(q(1, 10), 0)}, {t.leaf[2], pt(q(1, 5), q(1, 5))}};
  std::string c1, c2;
  auto a = nabla(t.d, prunes[0], f);
  auto b = nabla(t.d, prunes[1], f);
  auto fa = invariance::canonical_configuration(nabla_reduce(a.diagram.diagram, a.f), &c1);
  auto fb = invariance::canonical_configuration(nabla_reduce(b.diagram.diagram, b.f), &c2);
  EXPECT_EQ(c1, c2);
  EXPECT_EQ(fa, fb);
}

TEST(Invariance, ComplementPreserved) {
  std::mt19937 rng(29);
  auto s = invariance::facet_samples(complex_of(-2, 1, 1), 1, rng);
  expect_ok(invariance::complement(s, rng), 100);
}

TEST(Invariance, EvaluationSquare) {
  std::mt19937 rng(31);
  auto s = invariance::facet_samples(complex_of(-2, 1, 1), 1, rng);
  expect_ok(invariance::evaluation(s, rng), 100);
}
