// strtop: command line front end.  JSON goes to stdout (or --out), summaries
// to stderr.  Exit codes: 0 ok, 1 failed check or bad input, 2 usage.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "strtop/io.hpp"

using namespace strtop;
using io::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const std::string& path) { return io::parse(read_file(path)); }

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ParseError("cannot write " + out);
  f << text;
}

HomologyOptions coefficients(const std::string& c) {
  if (c == "Z") return {Coefficients::integers, 2};
  if (c == "Q") return {Coefficients::rationals, 2};
  if (c.size() > 1 && c[0] == 'Z') {
    long p = std::stol(c.substr(1));
    if (p < 2) throw ParseError("bad modulus in --coeff " + c);
    for (long d = 2; d * d <= p; ++d)
      if (p % d == 0) throw ParseError("--coeff Zp needs a prime, got " + c);
    return {Coefficients::mod_p, p};
  }
  throw ParseError("--coeff takes Z, Q or Zp with p prime");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"String diagrams, their moduli cells and the heart map on the flat torus"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  app.add_option("--out", out, "write JSON here instead of stdout");

  auto* validate_cmd = app.add_subcommand("validate", "check a diagram against every well-formedness condition");
  std::string diagram_path;
  validate_cmd->add_option("diagram", diagram_path, "diagram JSON")->required()->check(CLI::ExistingFile);

  auto* enumerate_cmd = app.add_subcommand("enumerate", "enumerate the cells of SD(chi, k, l)");
  int chi = 0, k = 1, l = 1, max_abs_chi = 2;
  unsigned threads = 0;
  bool no_verify = false;
  enumerate_cmd->add_option("--chi", chi, "Euler characteristic (<= 0)")->required();
  enumerate_cmd->add_option("--inputs,-k", k, "number of inputs")->required();
  enumerate_cmd->add_option("--outputs,-l", l, "number of outputs")->required();
  enumerate_cmd->add_option("--threads", threads, "worker threads (0: all cores)");
  enumerate_cmd->add_option("--max-abs-chi", max_abs_chi, "enumeration budget on |chi|");
  enumerate_cmd->add_flag("--no-verify", no_verify, "skip the codimension two check");

  auto* homology_cmd = app.add_subcommand("homology", "cellular homology of an enumerated complex");
  std::string complex_path, coeff = "Z";
  homology_cmd->add_option("complex", complex_path, "complex JSON from enumerate")->required()->check(CLI::ExistingFile);
  homology_cmd->add_option("--coeff", coeff, "Z, Q or Zp");

  auto* straighten_cmd = app.add_subcommand("straighten", "barycentric coordinates of a point of a metric tree");
  std::string tree_path;
  std::vector<std::string> points;
  straighten_cmd->add_option("tree", tree_path, "tree JSON (graph schema with lengths)")
      ->required()
      ->check(CLI::ExistingFile);
  straighten_cmd->add_option("--point", points, "v<vertex> or e<half-edge>:<offset>")->required();

  auto* heart_cmd = app.add_subcommand("heart", "evaluate Theta and the output loops");
  std::string loops_path;
  std::vector<std::string> evals;
  bool show_outputs = false, show_leaves = false;
  heart_cmd->add_option("diagram", diagram_path, "metric diagram JSON")->required()->check(CLI::ExistingFile);
  heart_cmd->add_option("loops", loops_path, "loop JSON (one loop or a list)")->required()->check(CLI::ExistingFile);
  heart_cmd->add_option("--eval", evals, "points v<vertex> or e<half-edge>:<offset>");
  heart_cmd->add_flag("--outputs", show_outputs, "print the output loops");
  heart_cmd->add_flag("--leaves", show_leaves, "print the leaf configuration");

  auto* bv_cmd = app.add_subcommand("bv", "compare outputs with the rotated input on SD(0, 1, 1)");
  std::string loop_path;
  int samples = 64;
  bv_cmd->add_option("--diagram", diagram_path, "diagram with one input, one output, no trees")
      ->required()
      ->check(CLI::ExistingFile);
  bv_cmd->add_option("--loop", loop_path, "loop JSON")->required()->check(CLI::ExistingFile);
  bv_cmd->add_option("--samples", samples, "number of equally spaced sample times")->check(CLI::PositiveNumber);

  auto* cover_cmd = app.add_subcommand("cover", "components of the orientation double cover");
  cover_cmd->add_option("--chi", chi, "Euler characteristic (<= 0)")->required();
  cover_cmd->add_option("--inputs,-k", k, "number of inputs")->required();
  cover_cmd->add_option("--outputs,-l", l, "number of outputs")->required();
  cover_cmd->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz rendering of a fatgraph or diagram");
  std::string graph_path;
  dot_cmd->add_option("graph", graph_path, "fatgraph or diagram JSON")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate_cmd) {
      auto j = read_json(diagram_path);
      ValidationReport r = io::has_lengths(j) ? validate(io::diagram_from_json(j))
                                              : validate_combinatorial(io::combinatorial_from_json(j));
      emit(io::dump(io::to_json(r)), out);
      for (const auto& i : r.items)
        if (!i.ok) std::cerr << "failed: " << i.condition << (i.detail.empty() ? "" : " (" + i.detail + ")") << "\n";
      std::cerr << (r.ok() ? "valid\n" : "invalid\n");
      return r.ok() ? 0 : 1;
    }

    if (*enumerate_cmd) {
      auto t0 = std::chrono::steady_clock::now();
      EnumerationOptions opt;
      opt.max_abs_chi = max_abs_chi;
      opt.threads = threads;
      auto cx = enumerate_cells(chi, k, l, opt);
      json j;
      bool ok = cx.problems.empty();
      if (no_verify) {
        j = io::to_json(cx);
      } else {
        auto reports = verify_codim2(cx, threads);
        for (const auto& r : reports) ok = ok && r.ok();
        j = io::to_json(cx, &reports);
      }
      emit(io::dump(j), out);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cerr << cx.cells.size() << " cells, " << cx.faces.size() << " faces, " << secs << " s"
                << (ok ? "" : ", consistency problems") << "\n";
      return ok ? 0 : 1;
    }

    if (*homology_cmd) {
      auto c = io::chain_complex_from_json(read_json(complex_path));
      if (int bad = boundary_squared_failure(c); bad >= 0)
        throw PreconditionError("boundary squared is not zero in degree " + std::to_string(bad));
      auto h = homology(c, coefficients(coeff));
      emit(io::dump(io::to_json(h)), out);
      for (std::size_t n = 0; n < h.size(); ++n) {
        std::cerr << "H" << n << ": rank " << h[n].betti;
        for (const auto& z : h[n].torsion) std::cerr << " + Z/" << z;
        std::cerr << "\n";
      }
      return 0;
    }

    if (*straighten_cmd) {
      auto t = io::metric_tree_from_json(read_json(tree_path));
      json j = json::object();
      for (const auto& p : points) j[p] = io::to_json(straighten_tree(t, io::parse_point(p)));
      emit(io::dump(j), out);
      return 0;
    }

    if (*heart_cmd) {
      auto d = io::diagram_from_json(read_json(diagram_path));
      auto g = io::loops_from_json(read_json(loops_path));
      Heart h(d, g);
      json j = json::object();
      json ev = json::object();
      for (const auto& p : evals) ev[p] = io::to_json(h(io::parse_point(p)));
      j["eval"] = ev;
      if (show_outputs) j["outputs"] = io::to_json(h.outputs());
      if (show_leaves) j["leaves"] = io::to_json(evaluate_leaves(d, g));
      emit(io::dump(j), out);
      return 0;
    }

    if (*bv_cmd) {
      auto d = io::diagram_from_json(read_json(diagram_path));
      auto g = io::loops_from_json(read_json(loop_path));
      if (g.size() != 1) throw PreconditionError("bv takes exactly one loop");
      std::vector<Rational> ts;
      for (int i = 0; i < samples; ++i) ts.push_back(fraction(i, samples));
      auto r = bv_rotation_check(d, g[0], ts);
      json mism = json::array();
      for (const auto& t : r.mismatches) mism.push_back(to_string(t));
      emit(io::dump({{"ok", r.ok}, {"rotation", to_string(r.rotation)}, {"mismatches", mism}}), out);
      std::cerr << (r.ok ? "output is the input rotated by " : "mismatch; rotation ") << to_string(r.rotation) << "\n";
      return r.ok ? 0 : 1;
    }

    if (*cover_cmd) {
      EnumerationOptions opt;
      opt.threads = threads;
      auto r = orientation_cover_components(enumerate_cells(chi, k, l, opt));
      emit(io::dump(io::to_json(r)), out);
      return 0;
    }

    if (*dot_cmd) {
      auto j = read_json(graph_path);
      if (!j.contains("subgraphs")) emit(io::to_dot(io::fatgraph_from_json(j)), out);
      else if (io::has_lengths(j)) emit(io::to_dot(io::diagram_from_json(j)), out);
      else emit(io::to_dot(io::combinatorial_from_json(j)), out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
