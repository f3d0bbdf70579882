#pragma once

#include <set>
#include <string>
#include <vector>

#include "latgeo/gauss.hpp"
#include "latgeo/lattice.hpp"
#include "latgeo/plucker.hpp"
#include "latgeo/sampling.hpp"

namespace latgeo::fixtures {

/// Matrix tuples that hit equalities often: besides random matrices, later
/// entries may copy, join or complement earlier ones, or be 0 or F^d.
inline std::vector<Matrix> structured_tuple(Sampler& s, int d, int n, const FormConstants& alpha) {
  std::vector<Matrix> out;
  for (int k = 0; k < n; ++k) {
    const int pick = k == 0 ? s.uniform(0, 5) : s.uniform(0, 9);
    Matrix m;
    if (pick <= 3) {
      m = s.random_rank_matrix(d, d);
    } else if (pick == 4) {
      m = Matrix(d, d);
    } else if (pick == 5) {
      m = s.invertible(d);
    } else if (pick == 6) {
      m = out[s.uniform(0, k - 1)] * s.invertible(d);
    } else if (pick == 7) {
      const Matrix& a = out[s.uniform(0, k - 1)];
      const Matrix& b = out[s.uniform(0, k - 1)];
      m = resize_columns(Subspace::span(hstack(a, b)).basis(), d) * s.invertible(d);
    } else {
      const Matrix& a = out[s.uniform(0, k - 1)];
      m = resize_columns(ortho_complement_of_span(s.kind(), a, alpha), d);
      if (pick == 9) m = m * s.invertible(d);
    }
    out.push_back(std::move(m));
  }
  return out;
}

/// Distinct random quantifier-free formulas (<= 3 variables, term depth
/// <= 2, <= 2 atoms) preceded by a fixed list.
inline std::vector<ParsedFormula> formula_suite(std::uint64_t seed, int count, LatticeMode mode) {
  std::vector<ParsedFormula> out;
  std::set<std::string> seen;
  const std::vector<std::string> fixed =
      mode == LatticeMode::Involutive
          ? std::vector<std::string>{"x1 = x2", "x1 + x2 = x3'", "x1 & x1' = 0", "x1'' = x1",
                                     "x1 + x2 = x2 + x1 && x1 != 0", "(x1 + x2)' = x1' & x2'",
                                     "x1 = x2' || x1 = 0", "x1 + x3 = 1 && x1 & x3 = 0"}
          : std::vector<std::string>{"x1 = x2", "x1 & x2 = x3", "x1 & (x1 + x2) = x1", "x1 + x2 = 1 && x1 & x2 = 0",
                                     "x1 & x2 = 0 || x3 = 1", "x1 + x2 & x3 = x2"};
  for (const auto& t : fixed) {
    auto pf = parse_lattice_formula(t, mode);
    seen.insert(to_text(pf.formula));
    out.push_back(std::move(pf));
  }
  Sampler s(seed);
  while (static_cast<int>(out.size()) < count) {
    LatticeFormula f = s.formula(3, 2, 2, mode);
    const std::string key = to_text(f);
    if (!seen.insert(key).second) continue;
    ParsedFormula pf;
    pf.formula = f;
    pf.mode = mode;
    for (int i = 0; i < 3; ++i) pf.names.push_back("x" + std::to_string(i + 1));
    out.push_back(std::move(pf));
  }
  return out;
}

/// Distinct terms over x1..x3 of surface depth <= 2.
inline std::vector<LatticeTerm> term_suite(std::uint64_t seed, int count, LatticeMode mode) {
  std::vector<LatticeTerm> out;
  std::set<std::uint64_t> seen;
  const std::vector<std::string> fixed = mode == LatticeMode::Involutive
                                             ? std::vector<std::string>{"x1", "x1'", "x1 + x2", "(x1 + x2)'",
                                                                        "x1 & x2", "x1' + x2", "x1 & x1'", "0'"}
                                             : std::vector<std::string>{"x1", "x1 + x2", "x1 & x2", "x1 & x2 + x3",
                                                                        "(x1 + x2) & x3", "1"};
  for (const auto& t : fixed) {
    LatticeTerm lt = parse_lattice_term(t, mode);
    if (seen.insert(lt.id()).second) out.push_back(lt);
  }
  Sampler s(seed);
  while (static_cast<int>(out.size()) < count) {
    LatticeTerm t = s.term(3, 2, mode);
    if (surface_depth(t) > 2 || !seen.insert(t.id()).second) continue;
    out.push_back(t);
  }
  return out;
}

inline plucker::PluckerVector random_point(Sampler& s, int d, int k) {
  if (k == 0) return plucker::plucker_of(Matrix(d, 0), 0);
  return plucker::scaled(plucker::plucker_of(s.rank_matrix(d, k, k), k), s.nonzero_scalar());
}

}  // namespace latgeo::fixtures
