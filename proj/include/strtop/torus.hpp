#pragma once

#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <vector>

#include "strtop/degenerate.hpp"
#include "strtop/polytope.hpp"
#include "strtop/straighten.hpp"

namespace strtop {

// ---------------------------------------------------------------------------
// the flat torus R^d / Z^d

/// Pre-convexity radius of the unit flat torus: half the injectivity radius.
inline Rational preconvexity_radius() { return fraction(1, 4); }

inline Integer floor_of(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline Rational frac_part(const Rational& x) { return x - Rational(floor_of(x)); }

struct TorusPoint {
  std::vector<Rational> x;  // each in [0, 1)

  TorusPoint() = default;
  explicit TorusPoint(std::vector<Rational> coords) : x(std::move(coords)) {
    for (auto& c : x) c = frac_part(c);
  }

  int dimension() const { return static_cast<int>(x.size()); }
  bool operator==(const TorusPoint& o) const { return x == o.x; }
  bool operator<(const TorusPoint& o) const { return x < o.x; }
};

/// Squared length of the shortest representative of p - q.
struct TorusDistance {
  Rational squared;

  bool less_than(const Rational& e) const { return e > 0 && squared < e * e; }
  bool at_most(const Rational& e) const { return e >= 0 && squared <= e * e; }

  /// The distance itself when it is rational.
  std::optional<Rational> exact() const {
    const Integer& n = squared.get_num();
    const Integer& d = squared.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    Integer a, b;
    mpz_sqrt(a.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(b.get_mpz_t(), d.get_mpz_t());
    return Rational(a, b);
  }
};

inline TorusDistance torus_distance(const TorusPoint& p, const TorusPoint& q) {
  if (p.dimension() != q.dimension()) throw PreconditionError("torus points of different dimension");
  TorusDistance d{0};
  for (int i = 0; i < p.dimension(); ++i) {
    Rational a = frac_part(p.x[i] - q.x[i]);
    Rational b = 1 - a;
    const Rational& m = a < b ? a : b;
    d.squared += m * m;
  }
  return d;
}

/// The lift of p with every coordinate in [b - 1/2, b + 1/2).
inline Vector lift_near(const TorusPoint& p, const Vector& base) {
  if (static_cast<int>(base.size()) != p.dimension()) throw PreconditionError("chart of another dimension");
  Vector v(base.size());
  Rational half = fraction(1, 2);
  for (std::size_t i = 0; i < base.size(); ++i) v[i] = base[i] + frac_part(p.x[i] - base[i] + half) - half;
  return v;
}

inline Vector lift(const TorusPoint& p) { return p.x; }

inline TorusPoint project(const Vector& v) { return TorusPoint(v); }

inline Rational squared_norm(const Vector& a, const Vector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// ---------------------------------------------------------------------------
// smallest enclosing balls

struct Ball {
  Vector center;
  Rational radius_squared;
};

/// Exact smallest enclosing ball in R^d.  Candidates are the balls centred in
/// the affine hull of at most d + 1 points and passing through them; the
/// smallest one containing everything is the answer.
inline Ball min_enclosing_ball(std::vector<Vector> pts) {
  if (pts.empty()) throw PreconditionError("ball around no points");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const int n = static_cast<int>(pts.size());
  const int d = static_cast<int>(pts[0].size());
  std::optional<Ball> best;
  std::vector<int> pick;
  auto consider = [&] {
    const Vector& p0 = pts[pick[0]];
    const int m = static_cast<int>(pick.size()) - 1;
    Vector c = p0;
    if (m > 0) {
      std::vector<Vector> dir;
      for (int k = 1; k <= m; ++k) {
        Vector v(d);
        for (int i = 0; i < d; ++i) v[i] = pts[pick[k]][i] - p0[i];
        dir.push_back(std::move(v));
      }
      Matrix g(m, Vector(m));
      Vector rhs(m);
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b)
          for (int i = 0; i < d; ++i) g[a][b] += dir[a][i] * dir[b][i];
        for (int i = 0; i < d; ++i) rhs[a] += dir[a][i] * dir[a][i];
        rhs[a] /= 2;
      }
      if (determinant(g) == 0) return;
      Vector lambda;
      solve(g, rhs, m, lambda);
      for (int a = 0; a < m; ++a)
        for (int i = 0; i < d; ++i) c[i] += lambda[a] * dir[a][i];
    }
    Rational r2 = squared_norm(c, p0);
    if (best && r2 >= best->radius_squared) return;
    for (const auto& p : pts)
      if (squared_norm(c, p) > r2) return;
    best = Ball{c, r2};
  };
  std::function<void(int)> go = [&](int from) {
    if (!pick.empty()) consider();
    if (static_cast<int>(pick.size()) == d + 1) return;
    for (int i = from; i < n; ++i) {
      pick.push_back(i);
      go(i + 1);
      pick.pop_back();
    }
  };
  go(0);
  return *best;
}

/// Lifts relative to the first point.  For radii at most 1/4 the lifted
/// picture decides ball containment on the torus exactly.
inline std::vector<Vector> chart(const std::vector<TorusPoint>& pts) {
  std::vector<Vector> out;
  if (pts.empty()) return out;
  Vector base = lift(pts[0]);
  for (const auto& p : pts) out.push_back(lift_near(p, base));
  return out;
}

inline Ball min_enclosing_ball(const std::vector<TorusPoint>& pts) { return min_enclosing_ball(chart(pts)); }

/// Whether the points lie in an open ball of the given radius (at most 1/4).
inline bool in_open_ball(const std::vector<TorusPoint>& pts, const Rational& radius) {
  if (radius > preconvexity_radius()) throw PreconditionError("ball radius beyond the convexity radius");
  if (pts.empty()) return true;
  return min_enclosing_ball(pts).radius_squared < radius * radius;
}

// ---------------------------------------------------------------------------
// simplicial geodesic interpolation

using Configuration = std::map<int, TorusPoint>;

/// Affine average of the values in the chart at f(base), projected back.
inline TorusPoint geodesic_interpolation_from(const Configuration& f, const SimplexPoint& x, int base) {
  if (!x.is_valid()) throw PreconditionError("not a point of the simplex");
  if (f.empty()) throw PreconditionError("interpolation over no points");
  std::vector<TorusPoint> vals;
  for (const auto& [k, p] : f) vals.push_back(p);
  if (!in_open_ball(vals, preconvexity_radius())) throw PreconditionError("values lie in no r-ball");
  Vector b = lift(f.at(base));
  Vector out(b.size(), 0);
  for (const auto& [k, a] : x.coords) {
    auto it = f.find(k);
    if (it == f.end()) throw PreconditionError("simplex vertex without a value");
    if (a == 0) continue;
    Vector v = lift_near(it->second, b);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += a * v[i];
  }
  return project(out);
}

inline TorusPoint geodesic_interpolation(const Configuration& f, const SimplexPoint& x) {
  if (f.empty()) throw PreconditionError("interpolation over no points");
  return geodesic_interpolation_from(f, x, f.begin()->first);
}

// ---------------------------------------------------------------------------
// piecewise geodesic loops

struct TorusLoop {
  std::vector<Rational> times;     // 0 = t_0 < ... < t_n = 1
  std::vector<TorusPoint> points;  // closed: last == first

  static TorusLoop constant(const TorusPoint& p) { return {{0, 1}, {p, p}}; }

  int dimension() const { return points.empty() ? 0 : points[0].dimension(); }

  void validate() const {
    if (times.size() < 2 || times.size() != points.size()) throw ValidationError("loop needs matching breakpoints");
    if (times.front() != 0 || times.back() != 1) throw ValidationError("loop must run over [0, 1]");
    if (!(points.front() == points.back())) throw ValidationError("loop is not closed");
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
      if (times[i] >= times[i + 1]) throw ValidationError("loop times must increase");
      if (points[i].dimension() != points[0].dimension()) throw ValidationError("loop changes dimension");
      if (!torus_distance(points[i], points[i + 1]).less_than(fraction(1, 2)))
        throw ValidationError("consecutive loop points must be closer than 1/2");
    }
  }

  /// t is read modulo 1.
  TorusPoint operator()(const Rational& t0) const {
    Rational t = frac_part(t0);
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
    if (i + 1 >= times.size()) return points.back();
    if (t == times[i]) return points[i];
    Vector a = lift(points[i]);
    Vector b = lift_near(points[i + 1], a);
    Rational s = (t - times[i]) / (times[i + 1] - times[i]);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += s * (b[k] - a[k]);
    return project(a);
  }
};

using LoopTuple = std::vector<TorusLoop>;

/// t -> gamma(t + s)
inline TorusLoop rotate(const TorusLoop& g, const Rational& s0) {
  Rational s = frac_part(s0);
  if (s == 0) return g;
  std::vector<Rational> ts{0};
  for (const auto& t : g.times)
    if (t != 0 && t != 1) ts.push_back(frac_part(t - s));
  ts.push_back(1 - s);
  ts.push_back(1);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  TorusLoop r;
  for (const auto& t : ts) {
    r.times.push_back(t);
    r.points.push_back(g(t + s));
  }
  return r;
}

// ---------------------------------------------------------------------------
// the heart map

namespace detail {

struct HeartState {
  StringDiagram d;
  LoopTuple gamma;
  PseudometricFatgraph g;
  std::vector<Vertex> classes;
  InputsOutputs io;
  std::vector<Rational> input_length;
  IntersectionGraph ig;
  std::vector<std::unique_ptr<ComponentStraightener>> straightener;
  std::vector<Configuration> leaf_values;  // per component, keyed by diagram leaf half-edge
  std::vector<int> input_at;               // per class representative
  std::vector<Vertex> fundamental_at;      // per class representative

  HeartState(StringDiagram d0, LoopTuple gamma0) : d(std::move(d0)), gamma(std::move(gamma0)) {
    const auto& s = d.shape;
    if (static_cast<int>(gamma.size()) != s.inputs) throw PreconditionError("need one loop per input");
    for (const auto& l : gamma) l.validate();
    g = realization(d);
    classes = zero_classes(g);
    io = inputs_outputs(s);
    input_length = cycle_lengths(d, io.inputs);
    for (const auto& l : input_length)
      if (l == 0) throw PreconditionError("input cycle of length zero");
    const Fatgraph& f = s.fatgraph;
    input_at.assign(f.vertex_count(), kNone);
    fundamental_at.assign(f.vertex_count(), kNone);
    for (HalfEdge h = 0; h < f.half_edge_count(); ++h)
      if (s.tag[h].part == Part::input && input_at[classes[f.source(h)]] == kNone)
        input_at[classes[f.source(h)]] = s.tag[h].index;
    for (int j = 0; j < s.tree_count(); ++j)
      for (Vertex v : s.fundamental[j])
        if (fundamental_at[classes[v]] == kNone) fundamental_at[classes[v]] = v;
    ig = intersection_graph(s);
    for (int c = 0; c < ig.parts.count; ++c) {
      straightener.push_back(std::make_unique<ComponentStraightener>(d, ig, c));
      Configuration vals;
      for (HalfEdge h : ig.component_leaves[c]) vals[h] = on_input(RealizationPoint::at_vertex(f.source(h)));
      leaf_values.push_back(std::move(vals));
    }
  }

  TorusPoint on_input(const RealizationPoint& x) const {
    int i = kNone;
    if (x.is_vertex()) i = input_at[classes[x.vertex]];
    else if (d.shape.tag[x.edge].part == Part::input) i = d.shape.tag[x.edge].index;
    if (i == kNone) throw PreconditionError("point is not on an input circle");
    Rational s = boundary_preimage(g, io.inputs[i], x, classes);
    return gamma[i](s / input_length[i]);
  }

  TorusPoint operator()(const RealizationPoint& x0) const {
    RealizationPoint x = normalize(g, x0);
    if (x.is_vertex()) {
      Vertex rep = classes[x.vertex];
      if (input_at[rep] != kNone) return on_input(x);
      if (fundamental_at[rep] == kNone) throw PreconditionError("vertex is on neither a circle nor a tree");
      x = RealizationPoint::at_vertex(fundamental_at[rep]);
    } else if (d.shape.tag[x.edge].part == Part::input) {
      return on_input(x);
    } else if (d.shape.tag[x.edge].part != Part::tree) {
      throw PreconditionError("point on an output segment of positive length");
    }
    auto y = to_intersection_point(d, ig, x);
    int c = y.is_vertex() ? ig.parts.of_vertex[y.vertex] : ig.parts.of_half_edge[y.edge];
    return geodesic_interpolation(leaf_values[c], (*straightener[c])(y));
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// the Lipschitz locus

/// Largest (distance in M / distance in the intersection graph)^2 over leaf
/// pairs sharing a component; nullopt if some pair sits at graph distance 0.
inline std::optional<Rational> lipschitz_ratio_squared(const StringDiagram& d, const LoopTuple& gamma) {
  if (d.shape.tree_count() == 0) return Rational(0);
  detail::HeartState st(d, gamma);
  const auto& ig = st.ig;
  PseudometricFatgraph hat{ig.fatgraph, {}};
  for (HalfEdge h : ig.to_diagram) hat.length.push_back(d.length[h]);
  Rational best = 0;
  for (int c = 0; c < ig.parts.count; ++c) {
    std::vector<HalfEdge> leaves;
    for (HalfEdge lh : ig.leaves)
      if (ig.parts.of_half_edge[lh] == c) leaves.push_back(lh);
    for (std::size_t a = 0; a < leaves.size(); ++a) {
      auto dist = distances_from(hat, RealizationPoint::at_vertex(ig.fatgraph.source(leaves[a])));
      const auto& pa = st.leaf_values[c].at(ig.to_diagram[leaves[a]]);
      for (std::size_t b = a + 1; b < leaves.size(); ++b) {
        const Rational& gd = *dist[ig.fatgraph.source(leaves[b])];
        if (gd == 0) return std::nullopt;
        Rational r = torus_distance(pa, st.leaf_values[c].at(ig.to_diagram[leaves[b]])).squared / (gd * gd);
        if (r > best) best = r;
      }
    }
  }
  return best;
}

inline bool lipschitz_ok(const StringDiagram& d, const LoopTuple& gamma, const Rational& eps) {
  if (eps <= 0) throw PreconditionError("Lipschitz constant must be positive");
  auto k = lipschitz_ratio_squared(d, gamma);
  return k && *k < eps * eps;
}

inline int abs_euler_characteristic(const CombinatorialStringDiagram& d) {
  return std::abs(d.tree_count() - static_cast<int>(tree_leaves(d).size()));
}

inline bool in_S(const StringDiagram& d, const LoopTuple& gamma) {
  if (d.shape.tree_count() == 0) return true;
  return lipschitz_ok(d, gamma, preconvexity_radius() / abs_euler_characteristic(d.shape));
}

inline bool in_s(const StringDiagram& d, const LoopTuple& gamma) {
  if (d.shape.tree_count() == 0) return true;
  return lipschitz_ok(d, gamma, preconvexity_radius() / (2 * abs_euler_characteristic(d.shape)));
}

/// Theta(Gamma, gamma) as an evaluable map on |Gamma|.
class Heart {
 public:
  Heart(StringDiagram d, LoopTuple gamma) {
    if (!in_S(d, gamma)) throw PreconditionError("loops are not in the diffuse intersection locus");
    state_ = std::make_shared<const detail::HeartState>(std::move(d), std::move(gamma));
  }

  TorusPoint operator()(const RealizationPoint& x) const { return (*state_)(x); }
  const StringDiagram& diagram() const { return state_->d; }
  const LoopTuple& loops() const { return state_->gamma; }

  /// Value at the leaf vertex of a tree leaf half-edge.
  TorusPoint at_leaf(HalfEdge h) const {
    return (*this)(RealizationPoint::at_vertex(state_->d.shape.fatgraph.source(h)));
  }

  /// Output loops: Theta pulled back along the reversed output cycles and
  /// rescaled to [0, 1].  Breakpoints sit at vertices and at the input loop
  /// breakpoints; in between Theta is affine in a chart.
  std::vector<TorusLoop> outputs() const {
    const auto& st = *state_;
    std::vector<TorusLoop> out;
    for (const auto& c : st.io.outputs) {
      Rational total = cycle_length(st.g, c);
      auto walk = marked_walk(st.g, c, true);
      TorusPoint start = (*this)(RealizationPoint::at_vertex(st.g.fatgraph.source(walk.front())));
      if (total == 0) {
        out.push_back(TorusLoop::constant(start));
        continue;
      }
      TorusLoop loop;
      auto push = [&](const Rational& t, const TorusPoint& p) {
        if (!loop.times.empty() && loop.times.back() == t) {
          if (!(loop.points.back() == p)) throw Error("theta takes two values at one point");
          return;
        }
        loop.times.push_back(t);
        loop.points.push_back(p);
      };
      Rational cum = 0;
      for (HalfEdge h : walk) {
        const Rational& len = st.g.length[h];
        push(cum / total, (*this)(RealizationPoint::at_vertex(st.g.fatgraph.source(h))));
        if (len == 0) continue;
        if (st.d.shape.tag[h].part == Part::input) {
          int i = st.d.shape.tag[h].index;
          const Rational& li = st.input_length[i];
          Rational mid = boundary_preimage(st.g, st.io.inputs[i], RealizationPoint::on_edge(h, len / 2), st.classes);
          Rational quarter =
              boundary_preimage(st.g, st.io.inputs[i], RealizationPoint::on_edge(h, len / 4), st.classes);
          int sigma = mid > quarter ? 1 : -1;
          std::vector<Rational> taus;
          for (const auto& b : st.gamma[i].times) {
            Rational tau = sigma * (b * li - mid) + len / 2;
            if (tau > 0 && tau < len) taus.push_back(tau);
          }
          std::sort(taus.begin(), taus.end());
          for (const auto& tau : taus) push((cum + tau) / total, (*this)(RealizationPoint::on_edge(h, tau)));
        }
        cum += len;
      }
      push(1, start);
      if (loop.times.size() == 1) loop = TorusLoop::constant(start);
      loop.validate();
      out.push_back(std::move(loop));
    }
    return out;
  }

 private:
  std::shared_ptr<const detail::HeartState> state_;
};

inline Heart heart(const StringDiagram& d, const LoopTuple& gamma) { return Heart(d, gamma); }

inline TorusPoint theta(const StringDiagram& d, const LoopTuple& gamma, const RealizationPoint& x) {
  return Heart(d, gamma)(x);
}

inline std::vector<TorusLoop> outputs(const Heart& h) { return h.outputs(); }

// ---------------------------------------------------------------------------
// leaf configurations

using LeafConfiguration = std::map<HalfEdge, TorusPoint>;

/// ev_K: the heart map read off at the tree leaves.
inline LeafConfiguration evaluate_leaves(const StringDiagram& d, const LoopTuple& gamma) {
  Heart h(d, gamma);
  LeafConfiguration f;
  for (HalfEdge l : tree_leaves(d.shape)) f[l] = h.at_leaf(l);
  return f;
}

namespace detail {

inline std::vector<TorusPoint> tree_values(const CombinatorialStringDiagram& d, int j, const LeafConfiguration& f) {
  std::vector<TorusPoint> v;
  for (HalfEdge h : tree_leaves(d, j)) {
    auto it = f.find(h);
    if (it == f.end()) throw PreconditionError("configuration misses a leaf");
    v.push_back(it->second);
  }
  return v;
}

inline void check_keys(const CombinatorialStringDiagram& d, const LeafConfiguration& f) {
  if (f.size() != tree_leaves(d).size()) throw PreconditionError("configuration is not over the leaves");
}

}  // namespace detail

inline bool in_N(const CombinatorialStringDiagram& d, const LeafConfiguration& f) {
  detail::check_keys(d, f);
  for (int j = 0; j < d.tree_count(); ++j)
    if (!in_open_ball(detail::tree_values(d, j, f), preconvexity_radius())) return false;
  return true;
}

/// Radius of the n-ball of tree j: |T_j| r / (4 chi^2).
inline Rational small_radius(const CombinatorialStringDiagram& d, int j) {
  int chi = abs_euler_characteristic(d);
  return Rational(leaf_length(tree_view(d, j).fatgraph)) * preconvexity_radius() / (4 * chi * chi);
}

inline bool in_n(const CombinatorialStringDiagram& d, const LeafConfiguration& f) {
  detail::check_keys(d, f);
  for (int j = 0; j < d.tree_count(); ++j)
    if (!in_open_ball(detail::tree_values(d, j, f), small_radius(d, j))) return false;
  return true;
}

inline LeafConfiguration relabel(const LeafConfiguration& f, const std::vector<HalfEdge>& half_edge_map) {
  LeafConfiguration out;
  for (const auto& [h, p] : f) {
    HalfEdge a = half_edge_map.at(h);
    if (a == kNone) throw PreconditionError("a leaf disappears under the map");
    out[a] = p;
  }
  return out;
}

struct NablaResult {
  Degenerated diagram;
  LeafConfiguration f;
};

/// The transition map across one codimension one degeneration.  Contractions
/// carry values along; a leaf that appears at the contracted leaf takes that
/// leaf's value.  Pruning adds the new leaf s(h) with the interpolated value
/// at the straightening of s(h) in its old tree.
inline NablaResult nabla(const StringDiagram& d, const Degeneration& x, const LeafConfiguration& f) {
  if (!in_N(d.shape, f)) throw PreconditionError("configuration is not in N");
  NablaResult r;
  r.diagram = degenerate(d, x);
  const auto& map = r.diagram.half_edge_map;
  const auto& nd = r.diagram.diagram.shape;
  std::vector<HalfEdge> back(nd.fatgraph.half_edge_count(), kNone);
  for (HalfEdge h = 0; h < static_cast<HalfEdge>(map.size()); ++h)
    if (map[h] != kNone) back[map[h]] = h;
  std::optional<TorusPoint> fresh;
  if (x.kind == FaceKind::zero_edge) {
    const Fatgraph& g = d.shape.fatgraph;
    for (HalfEdge e : {x.half_edge, g.partner(x.half_edge)})
      if (f.count(e)) fresh = f.at(e);
  } else {
    int j = d.shape.tag[x.half_edge].index;
    auto view = tree_view(d.shape, j);
    auto m = tree_metric(view, d.length);
    auto st = straighten_tree(m, RealizationPoint::at_vertex(view.fatgraph.source(view.from_diagram[x.half_edge])));
    Configuration vals;
    SimplexPoint p;
    for (const auto& [lh, a] : st.coords) {
      vals[lh] = f.at(view.to_diagram[lh]);
      p.coords[lh] = a;
    }
    fresh = geodesic_interpolation(vals, p);
  }
  for (HalfEdge h : tree_leaves(nd)) {
    HalfEdge old = back[h];
    if (old != kNone && f.count(old)) {
      r.f[h] = f.at(old);
    } else {
      if (!fresh) throw Error("a new leaf has no value");
      r.f[h] = *fresh;
    }
  }
  return r;
}

/// nabla along the reduction of a diagram to the interior of its cell.
inline NablaResult nabla_reduce(const StringDiagram& d, const LeafConfiguration& f) {
  NablaResult cur{{d, identity_map(d.shape.fatgraph.half_edge_count())}, f};
  for (;;) {
    auto avail = available_degenerations(cur.diagram.diagram);
    if (avail.empty()) return cur;
    auto next = nabla(cur.diagram.diagram, avail.front(), cur.f);
    cur.diagram.half_edge_map = compose(cur.diagram.half_edge_map, next.diagram.half_edge_map);
    cur.diagram.diagram = std::move(next.diagram.diagram);
    cur.f = std::move(next.f);
  }
}

// ---------------------------------------------------------------------------
// chained balls

struct PointSetBall {
  std::vector<TorusPoint> points;
  TorusPoint center;
  Rational radius;
};

struct BallCertificate {
  TorusPoint center;
  Rational radius;
  std::vector<int> order;  // the order the sets were merged in
};

/// A ball of radius sum(eps_i) around a chain of point sets, each set in an
/// eps_i-ball and consecutive sets sharing a point.  Two balls with a common
/// point x merge to the ball about the point y on [c1, c2] that divides it in
/// the ratio eps_2 : eps_1.
inline BallCertificate chained_balls_bound(const std::vector<PointSetBall>& sets) {
  if (sets.empty()) throw PreconditionError("no point sets");
  Rational total = 0;
  for (const auto& s : sets) {
    if (s.radius <= 0) throw PreconditionError("radii must be positive");
    total += s.radius;
    for (const auto& p : s.points)
      if (!torus_distance(p, s.center).less_than(s.radius)) throw PreconditionError("a point lies outside its ball");
  }
  if (total > preconvexity_radius()) throw PreconditionError("the chain does not fit in one convex chart");
  const int n = static_cast<int>(sets.size());
  Vector base = lift(sets[0].center);
  BallCertificate cert;
  std::vector<char> used(n, 0);
  std::vector<TorusPoint> merged = sets[0].points;
  Vector c = base;
  Rational radius = sets[0].radius;
  used[0] = 1;
  cert.order.push_back(0);
  for (int step = 1; step < n; ++step) {
    int next = -1;
    for (int k = 0; k < n && next < 0; ++k) {
      if (used[k]) continue;
      for (const auto& p : sets[k].points)
        if (std::find(merged.begin(), merged.end(), p) != merged.end()) {
          next = k;
          break;
        }
    }
    if (next < 0) throw PreconditionError("point sets are not chained by shared points");
    Vector ck = lift_near(sets[next].center, base);
    Rational w = sets[next].radius / (radius + sets[next].radius);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += w * (ck[i] - c[i]);
    radius += sets[next].radius;
    used[next] = 1;
    cert.order.push_back(next);
    merged.insert(merged.end(), sets[next].points.begin(), sets[next].points.end());
  }
  for (const auto& p : merged)
    if (squared_norm(lift_near(p, base), c) >= radius * radius) throw Error("merged ball misses a point");
  cert.center = project(c);
  cert.radius = radius;
  return cert;
}

// ---------------------------------------------------------------------------
// the BV check on SD(0, 1, 1)

struct RotationCheck {
  bool ok = true;
  Rational rotation;  // p(Gamma), the input parameter of the output start
  std::vector<Rational> mismatches;
};

inline Rational bv_rotation(const StringDiagram& d) {
  const auto& s = d.shape;
  if (s.tree_count() != 0 || s.inputs != 1 || s.outputs != 1)
    throw PreconditionError("diagram is not in SD(0, 1, 1)");
  auto g = realization(d);
  auto io = inputs_outputs(s);
  auto classes = zero_classes(g);
  auto walk = marked_walk(g, io.outputs[0], true);
  Rational p = boundary_preimage(g, io.inputs[0], RealizationPoint::at_vertex(g.fatgraph.source(walk.front())), classes);
  return frac_part(p / cycle_length(g, io.inputs[0]));
}

/// outputs(heart) against gamma rotated by p(Gamma) at the sample times.
inline RotationCheck bv_rotation_check(const StringDiagram& d, const TorusLoop& gamma,
                                       const std::vector<Rational>& samples) {
  RotationCheck r;
  r.rotation = bv_rotation(d);
  auto out = Heart(d, {gamma}).outputs().at(0);
  for (const auto& t : samples)
    if (!(out(t) == gamma(t + r.rotation))) {
      r.ok = false;
      r.mismatches.push_back(t);
    }
  return r;
}

}  // namespace strtop
