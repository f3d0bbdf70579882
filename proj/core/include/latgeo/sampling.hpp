#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "latgeo/lattice.hpp"
#include "latgeo/matrix.hpp"
#include "latgeo/scalar.hpp"

namespace latgeo {

/// Deterministic sampler.  All draws go through an mt19937_64 seeded by the
/// caller; entries are integers in [-bound, bound] (real and imaginary parts
/// independently in Gaussian mode).
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed, FieldKind kind = FieldKind::Rational, int bound = 5)
      : rng_(seed), kind_(kind), bound_(bound) {}

  std::mt19937_64& rng() noexcept { return rng_; }
  FieldKind kind() const noexcept { return kind_; }

  int uniform(int lo, int hi);
  Scalar integer_scalar();
  Scalar nonzero_scalar();
  /// p/q with |p| <= bound, 1 <= q <= bound (both parts in Gaussian mode).
  Scalar rational_scalar();
  Matrix matrix(int rows, int cols);
  /// Uniform rank in [0, min(rows, cols)] unless `rank` is given.
  Matrix rank_matrix(int rows, int cols, int rank);
  Matrix random_rank_matrix(int rows, int cols);
  Matrix invertible(int n);
  Subspace subspace(int d);
  Subspace subspace_of_dim(int d, int k);
  /// Matrix in f-wNF (pivot value `r`, free fill entries random).
  Matrix wnf_matrix(int d, const PivotMap& f, const Scalar& r);

  /// Random lattice term with at most `max_depth` operator levels over
  /// variables 0..vars-1.
  LatticeTerm term(int vars, int max_depth, LatticeMode mode = LatticeMode::Involutive);
  /// Boolean combination of at most `atoms` equations.
  LatticeFormula formula(int vars, int max_depth, int atoms, LatticeMode mode = LatticeMode::Involutive);

 private:
  std::mt19937_64 rng_;
  FieldKind kind_;
  int bound_;
};

/// All pivot maps of length k in {0..d-1}, lexicographic.
std::vector<PivotMap> pivot_maps(int d, int k);
/// All pivot maps for d, ordered by length then lexicographically.
std::vector<PivotMap> all_pivot_maps(int d);

}  // namespace latgeo
