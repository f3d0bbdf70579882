#pragma once

#include <string>
#include <vector>

#include "latgeo/errors.hpp"
#include "latgeo/scalar.hpp"

namespace latgeo {

/// Strictly increasing 0-based pivot rows; printed 1-based.
using PivotMap = std::vector<int>;

std::string to_string(const PivotMap& f);

/// Dense row-major matrix; the entry type is either Scalar or a symbolic term.
template <class T>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  BasicMatrix(int rows, int cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw UsageError("negative matrix dimension");
  }

  static BasicMatrix from_rows(const std::vector<std::vector<T>>& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    BasicMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rows[i].size()) != c) throw UsageError("ragged matrix rows");
      for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static BasicMatrix from_columns(int rows, const std::vector<std::vector<T>>& cols) {
    BasicMatrix m(rows, static_cast<int>(cols.size()));
    for (int j = 0; j < m.cols(); ++j) m.set_column(j, cols[j]);
    return m;
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  std::vector<T> column(int j) const {
    std::vector<T> c(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_column(int j, const std::vector<T>& c) {
    if (static_cast<int>(c.size()) != rows_) throw UsageError("column length mismatch");
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  friend bool operator==(const BasicMatrix& a, const BasicMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const BasicMatrix& a, const BasicMatrix& b) { return !(a == b); }

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw UsageError("matrix index out of range");
    return static_cast<std::size_t>(i) * cols_ + j;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

template <class T>
BasicMatrix<T> hstack(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
  if (a.rows() != b.rows()) throw UsageError("hstack: row count mismatch");
  BasicMatrix<T> m(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (int j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

template <class T>
BasicMatrix<T> select_columns(const BasicMatrix<T>& a, const std::vector<int>& cols) {
  BasicMatrix<T> m(a.rows(), static_cast<int>(cols.size()));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) m(i, j) = a(i, cols[j]);
  }
  return m;
}

template <class T>
BasicMatrix<T> submatrix(const BasicMatrix<T>& a, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
  BasicMatrix<T> m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) m(i, j) = a(rows[i], cols[j]);
  }
  return m;
}

/// Pads with zero columns or truncates trailing columns to `cols`.
template <class T>
BasicMatrix<T> resize_columns(const BasicMatrix<T>& a, int cols) {
  BasicMatrix<T> m(a.rows(), cols);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < cols && j < a.cols(); ++j) m(i, j) = a(i, j);
  }
  return m;
}

using Matrix = BasicMatrix<Scalar>;

Matrix identity(int d);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix conjugate_transpose(FieldKind kind, const Matrix& a);
std::string to_string(const Matrix& a);

struct NormalForm {
  Matrix N;  ///< d x d, reduced column echelon, zero columns trailing
  PivotMap f;
};

struct WeakNormalForm {
  Matrix W;  ///< d x d, equals r * N
  PivotMap f;
  Scalar r;
};

/// Canonical reduced column echelon form (uses division).
NormalForm column_nf(const Matrix& a);

/// Weak normal form via cross-scaled elimination; never inverts a scalar.
WeakNormalForm column_wnf_division_free(const Matrix& a);

int rank(const Matrix& a);
bool span_equal(const Matrix& a, const Matrix& b);

/// Determinant of the submatrix on the given rows and columns (0-based,
/// strictly increasing, equal length).
Scalar minor(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols);
Scalar determinant(const Matrix& a);

/// D^{-1} A^* D for D = diag(alpha).
Matrix dagger(FieldKind kind, const Matrix& a, const FormConstants& alpha);

/// True when `a` is in f-weak-normal-form: all pivots equal and nonzero,
/// reduced echelon zero pattern, columns beyond |f| zero.
bool is_wnf(const Matrix& a, const PivotMap& f);

/// Columns spanning Sp(a)^perp in F^d_alpha; `a` must be d x d in f-wNF.
/// Entries are multiplied through by the product of all alpha_i.
Matrix ortho_complement(FieldKind kind, const Matrix& a, const PivotMap& f,
                        const FormConstants& alpha);

/// Convenience: complement of the column span of an arbitrary matrix.
Matrix ortho_complement_of_span(FieldKind kind, const Matrix& a, const FormConstants& alpha);

/// Column Zassenhaus meet: d x d matrix spanning Sp(a) & Sp(b).
Matrix zassenhaus_meet(const Matrix& a, const Matrix& b);

/// Order of the rows in the permutation used by the orthocomplement:
/// pivot rows in f-order, then the remaining rows ascending.
std::vector<int> pivot_permutation(int d, const PivotMap& f);

}  // namespace latgeo
