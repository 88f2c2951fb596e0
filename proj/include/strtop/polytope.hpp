#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "strtop/error.hpp"
#include "strtop/rational.hpp"

namespace strtop {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;  // row major

// ---------------------------------------------------------------------------
// exact linear algebra

struct RowEchelon {
  Matrix rows;
  std::vector<int> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form.
inline RowEchelon rref(Matrix m, int cols) {
  RowEchelon r;
  int row = 0;
  const int n = static_cast<int>(m.size());
  for (int c = 0; c < cols && row < n; ++c) {
    int p = -1;
    for (int i = row; i < n; ++i)
      if (m[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[row], m[p]);
    Rational inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == row || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (int k = 0; k < static_cast<int>(m[i].size()); ++k) m[i][k] -= f * m[row][k];
    }
    r.pivots.push_back(c);
    ++row;
  }
  m.resize(row);
  r.rows = std::move(m);
  return r;
}

inline int rank(const Matrix& m) {
  if (m.empty()) return 0;
  return static_cast<int>(rref(m, static_cast<int>(m[0].size())).pivots.size());
}

inline Rational determinant(Matrix m) {
  const int n = static_cast<int>(m.size());
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (m[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[c][c];
      for (int k = c; k < n; ++k) m[i][k] -= f * m[c][k];
    }
  }
  return det;
}

/// Basis of {x : m x = 0}.
inline Matrix kernel(const Matrix& m, int cols) {
  auto r = rref(m, cols);
  std::vector<char> pivot(cols, 0);
  for (int c : r.pivots) pivot[c] = 1;
  Matrix basis;
  for (int f = 0; f < cols; ++f) {
    if (pivot[f]) continue;
    Vector v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.rows[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some solution of m x = b, or false.
inline bool solve(const Matrix& m, const Vector& b, int cols, Vector& x) {
  Matrix aug = m;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto r = rref(aug, cols + 1);
  x.assign(cols, 0);
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    if (r.pivots[i] == cols) return false;
    x[r.pivots[i]] = r.rows[i][cols];
  }
  return true;
}

/// Affine rank of a point set (dimension of its affine hull), -1 if empty.
inline int affine_rank(const std::vector<Vector>& pts) {
  if (pts.empty()) return -1;
  Matrix diff;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Vector d(pts[i].size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = pts[i][k] - pts[0][k];
    diff.push_back(std::move(d));
  }
  return rank(diff);
}

inline Vector centroid(const std::vector<Vector>& pts) {
  if (pts.empty()) throw PreconditionError("centroid of no points");
  Vector c(pts[0].size(), 0);
  for (const auto& p : pts)
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += p[k];
  for (auto& x : c) x /= static_cast<long>(pts.size());
  return c;
}

// ---------------------------------------------------------------------------
// H-polytopes

/// constant + coef . x
struct AffineForm {
  Vector coef;
  Rational constant;

  Rational operator()(const Vector& x) const {
    Rational s = constant;
    for (std::size_t k = 0; k < coef.size(); ++k) s += coef[k] * x[k];
    return s;
  }
};

/// {x : equalities == 0, inequalities >= 0}
struct Polytope {
  int ambient = 0;
  std::vector<AffineForm> equalities;
  std::vector<AffineForm> inequalities;

  bool contains(const Vector& x) const {
    for (const auto& e : equalities)
      if (e(x) != 0) return false;
    for (const auto& f : inequalities)
      if (f(x) < 0) return false;
    return true;
  }
};

/// Exact vertex enumeration by brute force over tight subsets; fine for the
/// handful of coordinates a single cell factor has.
inline std::vector<Vector> vertices(const Polytope& p) {
  const int n = p.ambient;
  Matrix a;
  Vector b;
  for (const auto& e : p.equalities) {
    a.push_back(e.coef);
    b.push_back(-e.constant);
  }
  Vector x0(n, 0);
  if (!a.empty() && !solve(a, b, n, x0)) return {};
  Matrix basis = a.empty() ? Matrix{} : kernel(a, n);
  if (a.empty())
    for (int i = 0; i < n; ++i) {
      Vector v(n, 0);
      v[i] = 1;
      basis.push_back(v);
    }
  const int d = static_cast<int>(basis.size());
  // inequalities in the parameters y: g . y + c >= 0
  std::vector<AffineForm> in;
  for (const auto& f : p.inequalities) {
    AffineForm g;
    g.constant = f(x0);
    g.coef.assign(d, 0);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < n; ++k) g.coef[j] += f.coef[k] * basis[j][k];
    in.push_back(std::move(g));
  }
  auto lift = [&](const Vector& y) {
    Vector x = x0;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < n; ++k) x[k] += y[j] * basis[j][k];
    return x;
  };
  std::set<Vector> found;
  if (d == 0) {
    if (p.contains(x0)) found.insert(x0);
    return {found.begin(), found.end()};
  }
  const int m = static_cast<int>(in.size());
  std::vector<int> pick(d);
  for (int i = 0; i < d; ++i) pick[i] = i;
  while (d <= m) {
    Matrix sq;
    Vector rhs;
    for (int i : pick) {
      sq.push_back(in[i].coef);
      rhs.push_back(-in[i].constant);
    }
    if (determinant(sq) != 0) {
      Vector y;
      solve(sq, rhs, d, y);
      bool ok = true;
      for (const auto& g : in)
        if (g(y) < 0) {
          ok = false;
          break;
        }
      if (ok) found.insert(lift(y));
    }
    int i = d - 1;
    while (i >= 0 && pick[i] == m - d + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < d; ++k) pick[k] = pick[k - 1] + 1;
  }
  return {found.begin(), found.end()};
}

inline int dimension(const Polytope& p) { return affine_rank(vertices(p)); }

}  // namespace strtop
