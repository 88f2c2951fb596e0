#pragma once
// JSON and DOT interchange.  Rationals are always "p/q" strings.

#include <json.hpp>
#include <sstream>

#include "strtop/homology.hpp"
#include "strtop/torus.hpp"

namespace strtop::io {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline int as_int(const json& j) {
  if (!j.is_number_integer()) throw ParseError("expected an integer, got " + j.dump());
  return j.get<int>();
}

inline int key_int(const std::string& k) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(k, &pos);
    if (pos != k.size()) throw ParseError("bad key '" + k + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad key '" + k + "'");
  }
}

inline std::vector<int> int_list(const json& j) {
  if (!j.is_array()) throw ParseError("expected a list, got " + j.dump());
  std::vector<int> out;
  for (const auto& x : j) out.push_back(as_int(x));
  return out;
}

inline Rational as_rational(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("expected a rational string, got " + j.dump());
}

inline json integer(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

}  // namespace detail

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

// ---------------------------------------------------------------------------
// fatgraphs

inline json to_json(const Fatgraph& g) {
  json j;
  j["half_edges"] = json::array();
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) j["half_edges"].push_back(h);
  j["source"] = json::object();
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) j["source"][std::to_string(h)] = g.source(h);
  j["involution"] = json::array();
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h)
    if (h <= g.partner(h)) j["involution"].push_back({h, g.partner(h)});
  j["cyclic_order"] = json::object();
  for (Vertex v = 0; v < g.vertex_count(); ++v) j["cyclic_order"][std::to_string(v)] = g.cyclic_order(v);
  return j;
}

inline Fatgraph fatgraph_from_json(const json& j) {
  auto hs = detail::int_list(detail::field(j, "half_edges"));
  const int n = static_cast<int>(hs.size());
  for (int i = 0; i < n; ++i)
    if (hs[i] != i) throw ParseError("half_edges must be 0..n-1");
  std::vector<HalfEdge> inv(n, kNone);
  for (const auto& pair : detail::field(j, "involution")) {
    auto p = detail::int_list(pair);
    if (p.size() != 2) throw ParseError("involution entries are pairs");
    for (int h : p)
      if (h < 0 || h >= n) throw ValidationError("involution names unknown half-edge " + std::to_string(h));
    if (inv[p[0]] != kNone || inv[p[1]] != kNone) throw ValidationError("half-edge paired twice");
    inv[p[0]] = p[1];
    inv[p[1]] = p[0];
  }
  for (HalfEdge h = 0; h < n; ++h)
    if (inv[h] == kNone) throw ValidationError("half-edge " + std::to_string(h) + " is unpaired");
  const auto& co = detail::field(j, "cyclic_order");
  if (!co.is_object()) throw ParseError("cyclic_order must be an object");
  int vc = 0;
  for (const auto& [k, v] : co.items()) vc = std::max(vc, detail::key_int(k) + 1);
  std::vector<std::vector<HalfEdge>> orders(vc);
  for (const auto& [k, v] : co.items()) orders[detail::key_int(k)] = detail::int_list(v);
  auto g = Fatgraph::from_orders(inv, orders);
  if (j.contains("source")) {
    for (const auto& [k, v] : j.at("source").items()) {
      int h = detail::key_int(k);
      if (h < 0 || h >= n || g.source(h) != detail::as_int(v))
        throw ValidationError("source disagrees with cyclic_order at half-edge " + k);
    }
  }
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------
// string diagrams

inline json to_json(const CombinatorialStringDiagram& d) {
  json j = to_json(d.fatgraph);
  json q = json::array(), l = json::array(), t = json::array();
  for (int i = 0; i < d.inputs; ++i) q.push_back(d.half_edges_of(Part::input, i));
  for (int i = 0; i < d.outputs; ++i) l.push_back(d.half_edges_of(Part::output, i));
  for (int k = 0; k < d.tree_count(); ++k)
    t.push_back({{"edges", d.half_edges_of(Part::tree, k)}, {"fundamental", d.fundamental[k]}});
  j["subgraphs"] = {{"Q", q}, {"L", l}, {"T", t}};
  return j;
}

inline json to_json(const StringDiagram& d) {
  json j = to_json(d.shape);
  const Fatgraph& g = d.shape.fatgraph;
  j["lengths"] = json::object();
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h)
    if (h < g.partner(h)) j["lengths"][std::to_string(h)] = to_string(d.length[h]);
  j["ordering"] = {{"trees", d.orientation.ordering.trees}, {"leaves", d.orientation.ordering.leaves}};
  j["sign"] = d.orientation.sign;
  return j;
}

inline CombinatorialStringDiagram combinatorial_from_json(const json& j) {
  CombinatorialStringDiagram d;
  d.fatgraph = fatgraph_from_json(j);
  const int n = d.fatgraph.half_edge_count();
  const auto& sub = detail::field(j, "subgraphs");
  std::vector<char> seen(n, 0);
  auto take = [&](const json& list, Part p, int index) {
    for (int h : detail::int_list(list)) {
      if (h < 0 || h >= n) throw ValidationError("subgraph names unknown half-edge " + std::to_string(h));
      if (seen[h]) throw ValidationError("half-edge " + std::to_string(h) + " lies in two subgraphs");
      seen[h] = 1;
      d.tag.resize(n);
      d.tag[h] = {p, index};
    }
  };
  d.tag.assign(n, {});
  const auto& q = detail::field(sub, "Q");
  const auto& l = detail::field(sub, "L");
  const auto& t = detail::field(sub, "T");
  for (std::size_t i = 0; i < q.size(); ++i) take(q[i], Part::input, static_cast<int>(i));
  for (std::size_t i = 0; i < l.size(); ++i) take(l[i], Part::output, static_cast<int>(i));
  for (std::size_t i = 0; i < t.size(); ++i) {
    take(detail::field(t[i], "edges"), Part::tree, static_cast<int>(i));
    auto f = detail::int_list(detail::field(t[i], "fundamental"));
    std::sort(f.begin(), f.end());
    d.fundamental.push_back(f);
  }
  for (HalfEdge h = 0; h < n; ++h)
    if (!seen[h]) throw ValidationError("half-edge " + std::to_string(h) + " lies in no subgraph");
  d.inputs = static_cast<int>(q.size());
  d.outputs = static_cast<int>(l.size());
  return d;
}

inline bool has_lengths(const json& j) { return j.is_object() && j.contains("lengths"); }

inline StringDiagram diagram_from_json(const json& j) {
  StringDiagram d;
  d.shape = combinatorial_from_json(j);
  const Fatgraph& g = d.shape.fatgraph;
  d.length.assign(g.half_edge_count(), 0);
  std::vector<char> set(g.half_edge_count(), 0);
  for (const auto& [k, v] : detail::field(j, "lengths").items()) {
    int h = detail::key_int(k);
    if (h < 0 || h >= g.half_edge_count()) throw ValidationError("length for unknown half-edge " + k);
    d.length[h] = d.length[g.partner(h)] = detail::as_rational(v);
    set[h] = set[g.partner(h)] = 1;
  }
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h)
    if (!set[h]) throw ValidationError("edge of half-edge " + std::to_string(h) + " has no length");
  d.orientation = reference_orientation(d.shape);
  if (j.contains("ordering")) {
    const auto& o = j.at("ordering");
    d.orientation.ordering.trees = detail::int_list(detail::field(o, "trees"));
    d.orientation.ordering.leaves = detail::int_list(detail::field(o, "leaves"));
  }
  if (j.contains("sign")) d.orientation.sign = detail::as_int(j.at("sign")) < 0 ? -1 : 1;
  return d;
}

inline json to_json(const ValidationReport& r) {
  json items = json::array();
  for (const auto& i : r.items)
    items.push_back({{"condition", i.condition}, {"ok", i.ok}, {"offenders", i.offenders}, {"detail", i.detail}});
  return {{"ok", r.ok()}, {"items", items}};
}

// ---------------------------------------------------------------------------
// metric trees, points and simplices

/// A tree is the graph schema plus "lengths".
inline PseudometricFatgraph metric_tree_from_json(const json& j) {
  PseudometricFatgraph t{fatgraph_from_json(j), {}};
  t.length.assign(t.fatgraph.half_edge_count(), 0);
  for (const auto& [k, v] : detail::field(j, "lengths").items()) {
    int h = detail::key_int(k);
    if (h < 0 || h >= t.fatgraph.half_edge_count()) throw ValidationError("length for unknown half-edge " + k);
    t.length[h] = t.length[t.fatgraph.partner(h)] = detail::as_rational(v);
  }
  return t;
}

inline json to_json(const PseudometricFatgraph& t) {
  json j = to_json(t.fatgraph);
  j["lengths"] = json::object();
  for (HalfEdge h = 0; h < t.fatgraph.half_edge_count(); ++h)
    if (h < t.fatgraph.partner(h)) j["lengths"][std::to_string(h)] = to_string(t.length[h]);
  return j;
}

/// "v3" is vertex 3; "e5:1/3" is offset 1/3 along half-edge 5.
inline RealizationPoint parse_point(const std::string& s) {
  if (s.size() >= 2 && s[0] == 'v') return RealizationPoint::at_vertex(detail::key_int(s.substr(1)));
  auto colon = s.find(':');
  if (s.size() >= 4 && s[0] == 'e' && colon != std::string::npos)
    return RealizationPoint::on_edge(detail::key_int(s.substr(1, colon - 1)), parse_rational(s.substr(colon + 1)));
  throw ParseError("not a point: '" + s + "' (use v<vertex> or e<half-edge>:<offset>)");
}

inline std::string point_string(const RealizationPoint& p) {
  return p.is_vertex() ? "v" + std::to_string(p.vertex) : "e" + std::to_string(p.edge) + ":" + to_string(p.t);
}

inline json to_json(const SimplexPoint& p) {
  json j = json::object();
  for (const auto& [k, a] : p.coords) j[std::to_string(k)] = to_string(a);
  return j;
}

inline SimplexPoint simplex_point_from_json(const json& j) {
  SimplexPoint p;
  for (const auto& [k, v] : j.items()) p.coords[detail::key_int(k)] = detail::as_rational(v);
  return p;
}

// ---------------------------------------------------------------------------
// torus data

inline json to_json(const TorusPoint& p) {
  json j = json::array();
  for (const auto& x : p.x) j.push_back(to_string(x));
  return j;
}

inline TorusPoint torus_point_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("a torus point is a list of rationals");
  std::vector<Rational> x;
  for (const auto& c : j) x.push_back(detail::as_rational(c));
  return TorusPoint(x);
}

inline json to_json(const TorusLoop& l) {
  json b = json::array();
  for (std::size_t i = 0; i < l.times.size(); ++i) b.push_back({to_string(l.times[i]), to_json(l.points[i])});
  return {{"d", l.dimension()}, {"breakpoints", b}};
}

/// The closing breakpoint at t = 1 may be left out.
inline TorusLoop loop_from_json(const json& j) {
  TorusLoop l;
  const int d = detail::as_int(detail::field(j, "d"));
  for (const auto& b : detail::field(j, "breakpoints")) {
    if (!b.is_array() || b.size() != 2) throw ParseError("breakpoints are [time, point] pairs");
    l.times.push_back(detail::as_rational(b[0]));
    l.points.push_back(torus_point_from_json(b[1]));
    if (l.points.back().dimension() != d) throw ValidationError("breakpoint of the wrong dimension");
  }
  if (l.times.empty()) throw ValidationError("loop without breakpoints");
  if (l.times.back() != 1) {
    l.times.push_back(1);
    l.points.push_back(l.points.front());
  }
  l.validate();
  return l;
}

/// A single loop object or a list of them.
inline LoopTuple loops_from_json(const json& j) {
  LoopTuple g;
  if (j.is_array())
    for (const auto& l : j) g.push_back(loop_from_json(l));
  else
    g.push_back(loop_from_json(j));
  return g;
}

inline json to_json(const LoopTuple& g) {
  json j = json::array();
  for (const auto& l : g) j.push_back(to_json(l));
  return j;
}

inline json to_json(const LeafConfiguration& f) {
  json j = json::object();
  for (const auto& [h, p] : f) j[std::to_string(h)] = to_json(p);
  return j;
}

inline LeafConfiguration configuration_from_json(const json& j) {
  LeafConfiguration f;
  for (const auto& [k, v] : j.items()) f[detail::key_int(k)] = torus_point_from_json(v);
  return f;
}

// ---------------------------------------------------------------------------
// complexes and homology

inline json to_json(const AffineForm& f) {
  json c = json::array();
  for (const auto& x : f.coef) c.push_back(to_string(x));
  return {{"coef", c}, {"constant", to_string(f.constant)}};
}

inline json codim2_summary(const std::vector<Codim2Report>& reports) {
  int checked = 0, failures = 0;
  std::map<std::string, int> kinds;
  json bad = json::array();
  for (const auto& r : reports) {
    checked += r.faces_checked;
    failures += static_cast<int>(r.failures.size());
    for (const auto& [k, n] : r.by_kind) kinds[k] += n;
    for (const auto& f : r.failures)
      bad.push_back({{"type", r.code}, {"facets", {f.first, f.second}}, {"detail", f.detail}});
  }
  return {{"verified", true}, {"faces_checked", checked}, {"by_kind", kinds}, {"failures", bad}};
}

/// Pass the codimension-two reports to record that they were run.
inline json to_json(const CellComplex& cx, const std::vector<Codim2Report>* reports = nullptr) {
  json j;
  j["params"] = {{"chi", cx.chi}, {"k", cx.k}, {"l", cx.l}};
  json cells = json::array();
  for (int c = 0; c < static_cast<int>(cx.cells.size()); ++c) {
    const auto& cell = cx.cells[c];
    const auto& p = *cx.types[cell.type].polytope;
    auto poly = p.polytope();
    json eq = json::array(), in = json::array();
    for (const auto& f : poly.equalities) eq.push_back(to_json(f));
    for (const auto& f : poly.inequalities) in.push_back(to_json(f));
    StringDiagram d{p.diagram, std::vector<Rational>(p.diagram.fatgraph.half_edge_count(), 0),
                    reference_orientation(p.diagram, cell.orientation)};
    json dj = to_json(p.diagram);
    dj["ordering"] = {{"trees", d.orientation.ordering.trees}, {"leaves", d.orientation.ordering.leaves}};
    dj["sign"] = d.orientation.sign;
    cells.push_back({{"id", c},
                     {"code", cx.types[cell.type].code},
                     {"name", cx.cell_name(c)},
                     {"orientation", cell.orientation},
                     {"dim", cell.dimension},
                     {"diagram", dj},
                     {"polytope", {{"coordinates", p.edges}, {"equalities", eq}, {"inequalities", in}}}});
  }
  j["cells"] = cells;
  json faces = json::array();
  for (const auto& f : cx.faces)
    faces.push_back({{"cell", f.cell},
                     {"facet_id", f.constraint},
                     {"target", f.target},
                     {"sign", f.sign},
                     {"coord_map", f.coord_map}});
  j["faces"] = faces;
  j["problems"] = cx.problems;
  j["codim2"] = reports ? codim2_summary(*reports) : json{{"verified", false}};
  return j;
}

/// Chains from a serialized complex.  Refuses unverified or failed ones.
inline ChainComplex chain_complex_from_json(const json& j, bool require_verified = true) {
  const auto& cells = detail::field(j, "cells");
  if (require_verified) {
    const auto& c2 = detail::field(j, "codim2");
    if (!detail::field(c2, "verified").get<bool>())
      throw PreconditionError("complex was saved without the codimension two check");
    if (!detail::field(c2, "failures").empty()) throw PreconditionError("complex failed the codimension two check");
    if (j.contains("problems") && !j.at("problems").empty())
      throw PreconditionError("complex has unresolved faces");
  }
  std::vector<int> dim, index;
  std::vector<int> size;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (detail::as_int(detail::field(cells[c], "id")) != static_cast<int>(c)) throw ParseError("cell ids must be 0..n-1");
    int n = detail::as_int(detail::field(cells[c], "dim"));
    if (n < 0) throw ParseError("negative cell dimension");
    dim.push_back(n);
    if (static_cast<int>(size.size()) <= n) size.resize(n + 1, 0);
    index.push_back(size[n]++);
  }
  ChainComplex c;
  c.size = size;
  for (int n = 0; n <= c.top(); ++n) c.boundary.emplace_back(n ? size[n - 1] : 0, size[n]);
  for (const auto& f : detail::field(j, "faces")) {
    int from = detail::as_int(detail::field(f, "cell"));
    int to = detail::as_int(detail::field(f, "target"));
    if (from < 0 || to < 0 || from >= static_cast<int>(dim.size()) || to >= static_cast<int>(dim.size()))
      throw ParseError("face names an unknown cell");
    if (dim[to] != dim[from] - 1) throw ValidationError("face does not drop dimension by one");
    c.boundary[dim[from]].add(index[to], index[from], detail::as_int(detail::field(f, "sign")));
  }
  return c;
}

inline json to_json(const std::vector<HomologyGroup>& h) {
  json j = json::object();
  for (std::size_t n = 0; n < h.size(); ++n) {
    json t = json::array();
    for (const auto& z : h[n].torsion) t.push_back(detail::integer(z));
    j[std::to_string(n)] = {{"betti", h[n].betti}, {"torsion", t}};
  }
  return j;
}

inline json to_json(const CoverReport& r) {
  return {{"components", r.components},
          {"unoriented_components", r.unoriented_components},
          {"has_trees", r.has_trees},
          {"split", r.split}};
}

// ---------------------------------------------------------------------------
// DOT

/// One record node per vertex with a port per half-edge in cyclic order, one
/// edge per pair of half-edges.  Inputs blue, outputs grey, trees green.
inline std::string to_dot(const Fatgraph& g, const CombinatorialStringDiagram* d = nullptr,
                          const std::vector<Rational>* length = nullptr) {
  std::ostringstream s;
  s << "graph fatgraph {\n  node [shape=record, fontsize=10];\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    s << "  v" << v << " [label=\"v" << v;
    for (HalfEdge h : g.cyclic_order(v)) s << "|<h" << h << ">" << h;
    s << "\"];\n";
  }
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
    HalfEdge p = g.partner(h);
    if (h > p) continue;
    s << "  v" << g.source(h) << ":h" << h << " -- v" << g.source(p) << ":h" << p;
    std::vector<std::string> attrs;
    if (d) {
      const auto& t = d->tag[h];
      const char* colour = t.part == Part::input ? "blue" : t.part == Part::output ? "grey50" : "darkgreen";
      const char* name = t.part == Part::input ? "Q" : t.part == Part::output ? "L" : "T";
      attrs.push_back(std::string("color=") + colour);
      std::string label = name + std::to_string(t.index);
      if (length) label += " " + to_string((*length)[h]);
      attrs.push_back("label=\"" + label + "\"");
    } else if (length) {
      attrs.push_back("label=\"" + to_string((*length)[h]) + "\"");
    }
    if (!attrs.empty()) {
      s << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) s << (i ? ", " : "") << attrs[i];
      s << "]";
    }
    s << ";\n";
  }
  s << "}\n";
  return s.str();
}

inline std::string to_dot(const CombinatorialStringDiagram& d) { return to_dot(d.fatgraph, &d); }
inline std::string to_dot(const StringDiagram& d) { return to_dot(d.shape.fatgraph, &d.shape, &d.length); }

}  // namespace strtop::io
