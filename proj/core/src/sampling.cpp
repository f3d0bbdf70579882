#include "latgeo/sampling.hpp"

#include <algorithm>

#include "latgeo/errors.hpp"

namespace latgeo {

int Sampler::uniform(int lo, int hi) {
  if (hi < lo) throw UsageError("uniform: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng_() % span);
}

Scalar Sampler::integer_scalar() {
  if (kind_ == FieldKind::Gaussian) return Scalar(Rational(uniform(-bound_, bound_)), Rational(uniform(-bound_, bound_)));
  return Scalar(uniform(-bound_, bound_));
}

Scalar Sampler::nonzero_scalar() {
  while (true) {
    Scalar s = rational_scalar();
    if (!s.is_zero()) return s;
  }
}

Scalar Sampler::rational_scalar() {
  auto part = [&] {
    Rational q(uniform(-bound_, bound_), uniform(1, bound_));
    q.canonicalize();
    return q;
  };
  if (kind_ == FieldKind::Gaussian) {
    Rational re = part();
    return Scalar(re, part());
  }
  return Scalar(part());
}

Matrix Sampler::matrix(int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = integer_scalar();
  }
  return m;
}

Matrix Sampler::rank_matrix(int rows, int cols, int k) {
  if (k < 0 || k > std::min(rows, cols)) throw UsageError("rank_matrix: rank out of range");
  if (k == 0) return Matrix(rows, cols);
  while (true) {
    Matrix m = matrix(rows, k) * matrix(k, cols);
    if (rank(m) == k) return m;
  }
}

Matrix Sampler::random_rank_matrix(int rows, int cols) {
  return rank_matrix(rows, cols, uniform(0, std::min(rows, cols)));
}

Matrix Sampler::invertible(int n) { return rank_matrix(n, n, n); }

Subspace Sampler::subspace(int d) { return Subspace::span(random_rank_matrix(d, d)); }

Subspace Sampler::subspace_of_dim(int d, int k) { return Subspace::span(rank_matrix(d, k, k)); }

Matrix Sampler::wnf_matrix(int d, const PivotMap& f, const Scalar& r) {
  Matrix m(d, d);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const int c = static_cast<int>(j);
    m(f[j], c) = r;
    for (int i = f[j] + 1; i < d; ++i) {
      if (std::find(f.begin(), f.end(), i) == f.end()) m(i, c) = integer_scalar();
    }
  }
  return m;
}

LatticeTerm Sampler::term(int vars, int max_depth, LatticeMode mode) {
  if (vars < 1) throw UsageError("term: need at least one variable");
  if (max_depth <= 0 || uniform(0, 3) == 0) {
    if (uniform(0, 9) == 0) return uniform(0, 1) ? LatticeTerm::zero() : (mode == LatticeMode::Plain ? LatticeTerm::one() : LatticeTerm::perp(LatticeTerm::zero()));
    return LatticeTerm::var(uniform(0, vars - 1));
  }
  const int op = uniform(0, 3);
  if (mode == LatticeMode::Plain) {
    LatticeTerm a = term(vars, max_depth - 1, mode);
    LatticeTerm b = term(vars, max_depth - 1, mode);
    return op < 2 ? LatticeTerm::join(a, b) : LatticeTerm::meet(a, b);
  }
  if (op == 0) return LatticeTerm::perp(term(vars, max_depth - 1, mode));
  LatticeTerm a = term(vars, max_depth - 1, mode);
  LatticeTerm b = term(vars, max_depth - 1, mode);
  if (op == 3) return expand_derived(LatticeTerm::meet(a, b));
  return LatticeTerm::join(a, b);
}

LatticeFormula Sampler::formula(int vars, int max_depth, int atoms, LatticeMode mode) {
  const int n = uniform(1, std::max(1, atoms));
  std::vector<LatticeFormula> lits;
  for (int i = 0; i < n; ++i) {
    LatticeFormula e = LatticeFormula::eq(term(vars, max_depth, mode), term(vars, max_depth, mode));
    lits.push_back(uniform(0, 2) == 0 ? LatticeFormula::negate(e) : e);
  }
  if (lits.size() == 1) return lits[0];
  return uniform(0, 1) ? LatticeFormula::conj(lits) : LatticeFormula::disj(lits);
}

std::vector<PivotMap> pivot_maps(int d, int k) {
  std::vector<PivotMap> out;
  if (k < 0 || k > d) return out;
  PivotMap f(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) f[i] = i;
  while (true) {
    out.push_back(f);
    int i = k - 1;
    while (i >= 0 && f[i] == d - k + i) --i;
    if (i < 0) break;
    ++f[i];
    for (int j = i + 1; j < k; ++j) f[j] = f[j - 1] + 1;
  }
  return out;
}

std::vector<PivotMap> all_pivot_maps(int d) {
  std::vector<PivotMap> out;
  for (int k = 0; k <= d; ++k) {
    for (auto& f : pivot_maps(d, k)) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace latgeo
