#pragma once

// Division-free column elimination shared by the concrete and symbolic paths.
//
// Ops requirements:
//   T zero(); T one();
//   T mul(const T&, const T&); T sub(const T&, const T&);
//   bool nonzero(const T&);          // may branch / record a guard literal
//   T alpha(int i);                  // form constant (value or symbol)
//   T star(const T&);                // field involution
// Both instantiations perform the same operations in the same order, so the
// value sequence of a symbolic run evaluated at a point equals the concrete run.

#include <utility>
#include <vector>

#include "latgeo/matrix.hpp"

namespace latgeo::detail {

template <class T>
struct Echelon {
  BasicMatrix<T> W;  ///< rows x rows
  PivotMap f;
  T r;
};

template <class T, class Ops>
Echelon<T> eliminate(const BasicMatrix<T>& a, Ops& ops) {
  const int d = a.rows();
  const int m = a.cols();
  std::vector<std::vector<T>> cols(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) cols[j] = a.column(j);

  PivotMap f;
  int k = 0;
  for (int i = 0; i < d && k < m; ++i) {
    int c = -1;
    for (int j = k; j < m; ++j) {
      if (ops.nonzero(cols[j][i])) {
        c = j;
        break;
      }
      cols[j][i] = ops.zero();
    }
    if (c < 0) continue;
    std::swap(cols[c], cols[k]);
    const T p = cols[k][i];
    for (int j = 0; j < m; ++j) {
      if (j == k) continue;
      const T q = cols[j][i];
      for (int l = 0; l < d; ++l) {
        if (l == i) continue;
        cols[j][l] = ops.sub(ops.mul(p, cols[j][l]), ops.mul(q, cols[k][l]));
      }
      cols[j][i] = ops.zero();
    }
    f.push_back(i);
    ++k;
  }

  std::vector<T> piv(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) piv[j] = cols[j][f[j]];
  T r = ops.one();
  for (int j = 0; j < k; ++j) r = ops.mul(r, piv[j]);
  for (int j = 0; j < k; ++j) {
    T others = ops.one();
    for (int l = 0; l < k; ++l) {
      if (l != j) others = ops.mul(others, piv[l]);
    }
    for (int l = 0; l < d; ++l) {
      if (l == f[j]) {
        cols[j][l] = r;
      } else {
        cols[j][l] = ops.mul(others, cols[j][l]);
      }
    }
  }

  Echelon<T> out{BasicMatrix<T>(d, d, ops.zero()), f, r};
  for (int j = 0; j < k; ++j) out.W.set_column(j, cols[j]);
  return out;
}

/// Orthocomplement term matrix for a d x d matrix in f-wNF, multiplied
/// through by the product of all form constants.
template <class T, class Ops>
BasicMatrix<T> ortho_matrix(const BasicMatrix<T>& x, const PivotMap& f, Ops& ops) {
  const int d = x.rows();
  BasicMatrix<T> q(d, d, ops.zero());
  if (f.empty()) {
    for (int i = 0; i < d; ++i) q(i, i) = ops.one();
    return q;
  }
  const std::vector<int> pi = pivot_permutation(d, f);
  std::vector<T> except(static_cast<std::size_t>(d));
  T all = ops.one();
  for (int l = 0; l < d; ++l) all = ops.mul(all, ops.alpha(l));
  for (int i = 0; i < d; ++i) {
    T e = ops.one();
    for (int l = 0; l < d; ++l) {
      if (l != i) e = ops.mul(e, ops.alpha(l));
    }
    except[i] = e;
  }
  const T rs = ops.star(x(f[0], 0));
  const T diag = ops.mul(all, rs);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      T term = ops.mul(ops.mul(except[pi[i]], ops.alpha(pi[j])), ops.star(x(pi[j], i)));
      q(pi[i], j) = i == j ? ops.sub(diag, term) : ops.sub(ops.zero(), term);
    }
  }
  return q;
}

template <class T>
struct Meet {
  BasicMatrix<T> B;  ///< d x d in f-wNF
  PivotMap f;
  T r;
};

/// Column Zassenhaus on [[A, B], [A, 0]]; the lower halves of the pivot
/// columns whose pivot row lies in the lower block span Sp(A) & Sp(B).
template <class T, class Ops>
Meet<T> zassenhaus(const BasicMatrix<T>& a, const BasicMatrix<T>& b, Ops& ops) {
  const int d = a.rows();
  if (b.rows() != d) throw UsageError("zassenhaus: row count mismatch");
  const int ka = a.cols();
  BasicMatrix<T> m(2 * d, ka + b.cols(), ops.zero());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < ka; ++j) {
      m(i, j) = a(i, j);
      m(d + i, j) = a(i, j);
    }
    for (int j = 0; j < b.cols(); ++j) m(i, ka + j) = b(i, j);
  }
  Echelon<T> e = eliminate(m, ops);
  Meet<T> out{BasicMatrix<T>(d, d, ops.zero()), {}, ops.one()};
  int c = 0;
  for (std::size_t j = 0; j < e.f.size(); ++j) {
    if (e.f[j] < d) continue;
    for (int i = 0; i < d; ++i) out.B(i, c) = e.W(d + i, static_cast<int>(j));
    out.f.push_back(e.f[j] - d);
    ++c;
  }
  if (c > 0) out.r = e.r;
  return out;
}

}  // namespace latgeo::detail
