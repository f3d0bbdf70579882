#include <algorithm>
#include <sstream>

#include "latgeo/detail/elimination.hpp"
#include "latgeo/matrix.hpp"

namespace latgeo {

namespace {

struct ScalarOps {
  FieldKind kind = FieldKind::Rational;
  const FormConstants* consts = nullptr;

  Scalar zero() const { return Scalar(); }
  Scalar one() const { return Scalar(1); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return a * b; }
  Scalar sub(const Scalar& a, const Scalar& b) const { return a - b; }
  bool nonzero(const Scalar& a) const { return !a.is_zero(); }
  Scalar alpha(int i) const { return (*consts)[i]; }
  Scalar star(const Scalar& a) const { return involution(kind, a); }
};

void check_indices(const std::vector<int>& idx, int bound, const char* what) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= bound) {
      throw UsageError(std::string("minor: ") + what + " index out of range");
    }
    if (i > 0 && idx[i] <= idx[i - 1]) {
      throw UsageError(std::string("minor: ") + what + " indices not strictly increasing");
    }
  }
}

}  // namespace

std::string to_string(const PivotMap& f) {
  std::string s = "(";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(f[i] + 1);
  }
  return s + ")";
}

Matrix identity(int d) {
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = Scalar(1);
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw UsageError("matrix product: inner dimension mismatch");
  Matrix m(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int l = 0; l < a.cols(); ++l) {
      if (a(i, l).is_zero()) continue;
      for (int j = 0; j < b.cols(); ++j) m(i, j) += a(i, l) * b(l, j);
    }
  }
  return m;
}

Matrix transpose(const Matrix& a) {
  Matrix m(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) m(j, i) = a(i, j);
  }
  return m;
}

Matrix conjugate_transpose(FieldKind kind, const Matrix& a) {
  Matrix m(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) m(j, i) = involution(kind, a(i, j));
  }
  return m;
}

std::string to_string(const Matrix& a) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < a.rows(); ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < a.cols(); ++j) os << (j ? " " : "") << a(i, j);
  }
  os << "]";
  return os.str();
}

NormalForm column_nf(const Matrix& a) {
  const int d = a.rows();
  const int m = a.cols();
  std::vector<std::vector<Scalar>> cols(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) cols[j] = a.column(j);
  PivotMap f;
  int k = 0;
  for (int i = 0; i < d && k < m; ++i) {
    int c = -1;
    for (int j = k; j < m; ++j) {
      if (!cols[j][i].is_zero()) {
        c = j;
        break;
      }
    }
    if (c < 0) continue;
    std::swap(cols[c], cols[k]);
    const Scalar inv = cols[k][i].inverse();
    for (auto& x : cols[k]) x *= inv;
    for (int j = 0; j < m; ++j) {
      if (j == k || cols[j][i].is_zero()) continue;
      const Scalar q = cols[j][i];
      for (int l = 0; l < d; ++l) cols[j][l] -= q * cols[k][l];
    }
    f.push_back(i);
    ++k;
  }
  NormalForm out{Matrix(d, d), f};
  for (int j = 0; j < k; ++j) out.N.set_column(j, cols[j]);
  return out;
}

WeakNormalForm column_wnf_division_free(const Matrix& a) {
  ScalarOps ops;
  auto e = detail::eliminate(a, ops);
  return {std::move(e.W), std::move(e.f), std::move(e.r)};
}

int rank(const Matrix& a) { return static_cast<int>(column_nf(a).f.size()); }

bool span_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) return false;
  return column_nf(a).N == column_nf(b).N;
}

Scalar determinant(const Matrix& a) {
  if (a.rows() != a.cols()) throw UsageError("determinant of non-square matrix");
  const int n = a.rows();
  if (n == 0) return Scalar(1);
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  Matrix m = a;
  Scalar det(1);
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return Scalar(0);
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    const Scalar inv = m(c, c).inverse();
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      const Scalar q = m(i, c) * inv;
      for (int j = c; j < n; ++j) m(i, j) -= q * m(c, j);
    }
  }
  return det;
}

Scalar minor(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.size() != cols.size()) throw UsageError("minor: row/column selection length mismatch");
  check_indices(rows, a.rows(), "row");
  check_indices(cols, a.cols(), "column");
  return determinant(submatrix(a, rows, cols));
}

Matrix dagger(FieldKind kind, const Matrix& a, const FormConstants& alpha) {
  if (a.rows() != a.cols()) throw UsageError("dagger: matrix must be square");
  if (alpha.dim() != a.rows()) throw UsageError("dagger: form constants length mismatch");
  const int d = a.rows();
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      m(i, j) = alpha[i].inverse() * involution(kind, a(j, i)) * alpha[j];
    }
  }
  return m;
}

bool is_wnf(const Matrix& a, const PivotMap& f) {
  const int d = a.rows();
  const int k = static_cast<int>(f.size());
  if (k > a.cols()) return false;
  for (int j = 0; j < k; ++j) {
    if (f[j] < 0 || f[j] >= d || (j > 0 && f[j] <= f[j - 1])) return false;
  }
  if (k > 0 && a(f[0], 0).is_zero()) return false;
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < d; ++i) {
      const Scalar& x = a(i, j);
      if (j >= k) {
        if (!x.is_zero()) return false;
        continue;
      }
      if (i == f[j]) {
        if (x != a(f[0], 0)) return false;
      } else if (i < f[j] || std::find(f.begin(), f.end(), i) != f.end()) {
        if (!x.is_zero()) return false;
      }
    }
  }
  return true;
}

std::vector<int> pivot_permutation(int d, const PivotMap& f) {
  std::vector<int> pi(f.begin(), f.end());
  for (int i = 0; i < d; ++i) {
    if (std::find(f.begin(), f.end(), i) == f.end()) pi.push_back(i);
  }
  return pi;
}

Matrix ortho_complement(FieldKind kind, const Matrix& a, const PivotMap& f,
                        const FormConstants& alpha) {
  if (a.rows() != a.cols()) throw UsageError("ortho_complement: matrix must be square");
  if (alpha.dim() != a.rows()) throw UsageError("ortho_complement: form constants length mismatch");
  if (!is_wnf(a, f)) throw UsageError("ortho_complement: input is not in " + to_string(f) + "-wNF");
  ScalarOps ops{kind, &alpha};
  return detail::ortho_matrix(a, f, ops);
}

Matrix ortho_complement_of_span(FieldKind kind, const Matrix& a, const FormConstants& alpha) {
  NormalForm nf = column_nf(a);
  return ortho_complement(kind, nf.N, nf.f, alpha);
}

Matrix zassenhaus_meet(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw UsageError("zassenhaus_meet: row count mismatch");
  ScalarOps ops;
  return detail::zassenhaus(a, b, ops).B;
}

}  // namespace latgeo
