#pragma once

#include <future>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "strtop/moduli.hpp"

namespace strtop {

using IntMatrix = std::vector<std::vector<Integer>>;  // row major

// ---------------------------------------------------------------------------
// dense Smith normal form

struct SmithForm {
  IntMatrix d, u, v;  // d = u m v
};

inline IntMatrix identity_matrix(int n) {
  IntMatrix m(n, std::vector<Integer>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b, int inner, int cols) {
  IntMatrix c(a.size(), std::vector<Integer>(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (int j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

/// Smith normal form with the transforms.  The pivot is always an entry of
/// least absolute value in the remaining block.
inline SmithForm smith_normal_form(const IntMatrix& m, int cols) {
  const int rows = static_cast<int>(m.size());
  SmithForm s{m, identity_matrix(rows), identity_matrix(cols)};
  auto& a = s.d;
  auto swap_rows = [&](int i, int j) {
    std::swap(a[i], a[j]);
    std::swap(s.u[i], s.u[j]);
  };
  auto swap_cols = [&](int i, int j) {
    for (auto& r : a) std::swap(r[i], r[j]);
    for (auto& r : s.v) std::swap(r[i], r[j]);
  };
  auto add_row = [&](int to, int from, const Integer& f) {  // row to -= f row from
    for (int j = 0; j < cols; ++j) a[to][j] -= f * a[from][j];
    for (int j = 0; j < rows; ++j) s.u[to][j] -= f * s.u[from][j];
  };
  auto add_col = [&](int to, int from, const Integer& f) {
    for (int i = 0; i < rows; ++i) a[i][to] -= f * a[i][from];
    for (int i = 0; i < cols; ++i) s.v[i][to] -= f * s.v[i][from];
  };
  for (int t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      int pi = -1, pj = -1;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pi < 0 || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) return s;
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Integer f = a[i][t] / a[t][t];
        add_row(i, t, f);
        clean = clean && a[i][t] == 0;
      }
      for (int j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Integer f = a[t][j] / a[t][t];
        add_col(j, t, f);
        clean = clean && a[t][j] == 0;
      }
      if (!clean) continue;
      // divisibility: fold in a row holding an entry the pivot does not divide
      int bad = -1;
      for (int i = t + 1; i < rows && bad < 0; ++i)
        for (int j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      add_row(t, bad, -1);
    }
    if (a[t][t] < 0) {
      for (int j = 0; j < cols; ++j) a[t][j] = -a[t][j];
      for (int j = 0; j < rows; ++j) s.u[t][j] = -s.u[t][j];
    }
  }
  return s;
}

inline SmithForm smith_normal_form(const IntMatrix& m) {
  return smith_normal_form(m, m.empty() ? 0 : static_cast<int>(m[0].size()));
}

/// Nonzero diagonal of a Smith form.
inline std::vector<Integer> invariant_factors(const IntMatrix& m, int cols) {
  auto s = smith_normal_form(m, cols);
  std::vector<Integer> out;
  for (int t = 0; t < std::min(static_cast<int>(m.size()), cols); ++t)
    if (s.d[t][t] != 0) out.push_back(s.d[t][t]);
  return out;
}

// ---------------------------------------------------------------------------
// sparse matrices

/// Column major; zero entries are never stored.
struct SparseMatrix {
  int rows = 0, cols = 0;
  std::vector<std::map<int, Integer>> col;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c), col(c) {}

  void add(int r, int c, const Integer& x) {
    auto& e = col[c][r];
    e += x;
    if (e == 0) col[c].erase(r);
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : col) n += c.size();
    return n;
  }

  bool zero() const { return nonzeros() == 0; }

  IntMatrix dense() const {
    IntMatrix m(rows, std::vector<Integer>(cols, 0));
    for (int c = 0; c < cols; ++c)
      for (const auto& [r, x] : col[c]) m[r][c] = x;
    return m;
  }
};

/// a b
inline SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols != b.rows) throw PreconditionError("matrix shapes do not compose");
  SparseMatrix c(a.rows, b.cols);
  for (int j = 0; j < b.cols; ++j)
    for (const auto& [k, x] : b.col[j])
      for (const auto& [i, y] : a.col[k]) c.add(i, j, y * x);
  return c;
}

namespace detail {

/// Eliminates unit pivots.  Returns their count and leaves the rest of the
/// matrix, whose Smith form supplies the remaining invariant factors.  With a
/// positive modulus every nonzero entry is a unit and nothing remains.
inline int eliminate_units(const SparseMatrix& m, long modulus, IntMatrix& rest, int& rest_cols) {
  std::vector<std::map<int, Integer>> row(m.rows);
  std::vector<std::set<int>> in_col(m.cols);
  for (int c = 0; c < m.cols; ++c)
    for (const auto& [r, x] : m.col[c]) {
      Integer v = x;
      if (modulus) {
        v %= modulus;
        if (v < 0) v += modulus;
      }
      if (v == 0) continue;
      row[r][c] = v;
      in_col[c].insert(r);
    }
  auto unit = [&](const Integer& x) { return modulus ? x != 0 : abs(x) == 1; };
  std::vector<char> row_dead(m.rows, 0), col_dead(m.cols, 0);
  int pivots = 0;
  for (bool progress = true; progress;) {
    progress = false;
    std::vector<int> order;
    for (int c = 0; c < m.cols; ++c)
      if (!col_dead[c] && !in_col[c].empty()) order.push_back(c);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return in_col[a].size() < in_col[b].size(); });
    for (int c : order) {
      if (col_dead[c] || in_col[c].empty()) continue;
      int p = -1;
      for (int r : in_col[c])
        if (unit(row[r].at(c)) && (p < 0 || row[r].size() < row[p].size())) p = r;
      if (p < 0) continue;
      Integer inv = row[p].at(c);
      if (modulus) {
        mpz_invert(inv.get_mpz_t(), inv.get_mpz_t(), Integer(modulus).get_mpz_t());
      }
      std::vector<int> others(in_col[c].begin(), in_col[c].end());
      for (int r : others) {
        if (r == p) continue;
        Integer f = row[r].at(c) * inv;
        if (modulus) f %= modulus;
        for (const auto& [cc, x] : row[p]) {
          auto& e = row[r][cc];
          e -= f * x;
          if (modulus) {
            e %= modulus;
            if (e < 0) e += modulus;
          }
          if (e == 0) {
            row[r].erase(cc);
            in_col[cc].erase(r);
          } else {
            in_col[cc].insert(r);
          }
        }
      }
      for (const auto& [cc, x] : row[p]) in_col[cc].erase(p);
      row[p].clear();
      row_dead[p] = 1;
      col_dead[c] = 1;
      ++pivots;
      progress = true;
    }
  }
  std::vector<int> rmap(m.rows, -1), cmap(m.cols, -1);
  int nr = 0, nc = 0;
  for (int r = 0; r < m.rows; ++r)
    if (!row[r].empty()) rmap[r] = nr++;
  for (int c = 0; c < m.cols; ++c)
    if (!in_col[c].empty()) cmap[c] = nc++;
  rest.assign(nr, std::vector<Integer>(nc, 0));
  rest_cols = nc;
  for (int r = 0; r < m.rows; ++r)
    for (const auto& [c, x] : row[r]) rest[rmap[r]][cmap[c]] = x;
  return pivots;
}

}  // namespace detail

/// Nonzero invariant factors (1s included); over Z/p just the rank many 1s.
inline std::vector<Integer> invariant_factors(const SparseMatrix& m, long modulus = 0) {
  IntMatrix rest;
  int rest_cols = 0;
  int units = detail::eliminate_units(m, modulus, rest, rest_cols);
  std::vector<Integer> out(units, 1);
  if (!rest.empty() && rest_cols > 0) {
    if (modulus) throw Error("elimination mod p left a nonzero block");
    for (auto& x : invariant_factors(rest, rest_cols)) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// chain complexes

/// boundary[n] maps n-chains to (n-1)-chains; boundary[0] is 0 x size[0].
struct ChainComplex {
  std::vector<int> size;
  std::vector<SparseMatrix> boundary;

  int top() const { return static_cast<int>(size.size()) - 1; }

  int euler_characteristic() const {
    int e = 0;
    for (int n = 0; n <= top(); ++n) e += (n % 2 ? -1 : 1) * size[n];
    return e;
  }
};

/// Largest n with boundary[n-1] boundary[n] nonzero, or -1 when d d = 0.
inline int boundary_squared_failure(const ChainComplex& c) {
  for (int n = 2; n <= c.top(); ++n)
    if (!multiply(c.boundary[n - 1], c.boundary[n]).zero()) return n;
  return -1;
}

inline ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
  ChainComplex c;
  int top = std::max(a.top(), b.top());
  auto at = [](const ChainComplex& x, int n) { return n <= x.top() ? x.size[n] : 0; };
  for (int n = 0; n <= top; ++n) c.size.push_back(at(a, n) + at(b, n));
  for (int n = 0; n <= top; ++n) {
    SparseMatrix m(n ? c.size[n - 1] : 0, c.size[n]);
    if (n > 0) {
      if (n <= a.top())
        for (int j = 0; j < a.size[n]; ++j)
          for (const auto& [i, x] : a.boundary[n].col[j]) m.add(i, j, x);
      if (n <= b.top())
        for (int j = 0; j < b.size[n]; ++j)
          for (const auto& [i, x] : b.boundary[n].col[j]) m.add(at(a, n - 1) + i, at(a, n) + j, x);
    }
    c.boundary.push_back(std::move(m));
  }
  return c;
}

/// Cell indices inside each dimension, in complex order.
struct CellIndexing {
  std::vector<int> dimension_index;             // by cell
  std::vector<std::vector<int>> cells_of_dim;   // dim -> cells
};

inline CellIndexing cell_indexing(const CellComplex& cx) {
  CellIndexing ix;
  ix.dimension_index.resize(cx.cells.size());
  ix.cells_of_dim.resize(std::max(cx.max_dimension() + 1, 0));
  for (int c = 0; c < static_cast<int>(cx.cells.size()); ++c) {
    auto& v = ix.cells_of_dim[cx.cells[c].dimension];
    ix.dimension_index[c] = static_cast<int>(v.size());
    v.push_back(c);
  }
  return ix;
}

/// Cellular chains; entry (K', K) sums the signs of the facets of K attached to K'.
inline ChainComplex chain_complex_unchecked(const CellComplex& cx) {
  auto ix = cell_indexing(cx);
  ChainComplex c;
  for (const auto& v : ix.cells_of_dim) c.size.push_back(static_cast<int>(v.size()));
  for (int n = 0; n <= c.top(); ++n) c.boundary.emplace_back(n ? c.size[n - 1] : 0, c.size[n]);
  for (const auto& f : cx.faces) {
    int n = cx.cells[f.cell].dimension;
    if (cx.cells[f.target].dimension != n - 1) throw Error("face does not drop dimension by one");
    c.boundary[n].add(ix.dimension_index[f.target], ix.dimension_index[f.cell], f.sign);
  }
  return c;
}

/// Refuses complexes whose attaching data has not been certified.
inline ChainComplex chain_complex(const CellComplex& cx, const std::vector<Codim2Report>& reports) {
  if (!cx.problems.empty()) throw PreconditionError("complex has unresolved faces: " + cx.problems.front());
  if (reports.size() != cx.types.size()) throw PreconditionError("codimension two report does not match the complex");
  for (const auto& r : reports)
    if (!r.ok()) throw PreconditionError("codimension two check failed on " + r.code);
  return chain_complex_unchecked(cx);
}

inline ChainComplex chain_complex(const CellComplex& cx) { return chain_complex(cx, verify_codim2(cx)); }

enum class Coefficients { integers, rationals, mod_p };

struct HomologyGroup {
  int betti = 0;
  std::vector<Integer> torsion;  // invariant factors > 1
};

struct HomologyOptions {
  Coefficients coefficients = Coefficients::integers;
  long prime = 2;
};

/// All homology groups, dimensions reduced in parallel.
inline std::vector<HomologyGroup> homology(const ChainComplex& c, const HomologyOptions& opt = {}) {
  const int top = c.top();
  if (opt.coefficients == Coefficients::mod_p && opt.prime < 2) throw PreconditionError("modulus must be a prime");
  long modulus = opt.coefficients == Coefficients::mod_p ? opt.prime : 0;
  std::vector<std::future<std::vector<Integer>>> jobs;
  for (int n = 0; n <= top; ++n)
    jobs.push_back(std::async(std::launch::async, [&, n] { return invariant_factors(c.boundary[n], modulus); }));
  std::vector<std::vector<Integer>> f;
  for (auto& j : jobs) f.push_back(j.get());
  std::vector<HomologyGroup> out(top + 1);
  for (int n = 0; n <= top; ++n) {
    int rank_in = n < top ? static_cast<int>(f[n + 1].size()) : 0;
    out[n].betti = c.size[n] - static_cast<int>(f[n].size()) - rank_in;
    if (opt.coefficients == Coefficients::integers && n < top)
      for (const auto& x : f[n + 1])
        if (x > 1) out[n].torsion.push_back(x);
  }
  return out;
}

inline HomologyGroup homology(const ChainComplex& c, int n, const HomologyOptions& opt = {}) {
  if (n < 0 || n > c.top()) return {};
  return homology(c, opt)[n];
}

}  // namespace strtop
