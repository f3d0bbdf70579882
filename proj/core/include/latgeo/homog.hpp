#pragma once

#include <cstddef>
#include <vector>

#include "latgeo/fieldlang.hpp"
#include "latgeo/lattice.hpp"
#include "latgeo/plucker.hpp"

namespace latgeo::homog {

/// Formula over sorted Pluecker blocks.  Free blocks are described by the
/// layout; quantifier nodes carry their own blocks.
struct HomogeneousFormula {
  int d = 0;
  Formula formula;
  plucker::Layout free;
};

nlohmann::json to_json(const HomogeneousFormula& h);

/// d x sort matrix A_f(x) of the block (the recovery terms; d x 0 for sort 0).
gauss::SymMatrix block_matrix(int d, const PivotMap& f, const VarBlock& b);

/// theta(x0) = theta(x1); sorts must agree.
Formula eta(int d, const VarBlock& x0, const VarBlock& x1);
/// theta(x0) = theta(x1) + theta(x2); needs d1, d2 <= d0 <= min(d, d1 + d2).
Formula sigma(int d, const VarBlock& x0, const VarBlock& x1, const VarBlock& x2);
/// theta(x0) = theta(x1)^perp; needs d0 + d1 = d.  Constants are cleared.
Formula kappa(int d, const VarBlock& x0, const VarBlock& x1, const FormConstants& alpha, FieldKind kind);
/// theta(x0) <= theta(x1); needs d0 <= d1.
Formula eta_leq(int d, const VarBlock& x0, const VarBlock& x1);
/// theta(x0) <= theta(x1)^perp; needs d0 + d1 <= d.
Formula kappa_leq(int d, const VarBlock& x0, const VarBlock& x1, const FormConstants& alpha, FieldKind kind);

/// The builders on fresh blocks x1, x2 (, x3) numbered from variable 0.
HomogeneousFormula build_eta(int d, int d0, int d1);
HomogeneousFormula build_sigma(int d, int d0, int d1, int d2);
HomogeneousFormula build_kappa(int d, int d0, int d1, const FormConstants& alpha, FieldKind kind);

/// Dimension of every variable of the system, originals first.
using Delta = std::vector<int>;

/// All admissible dimension assignments with the originals fixed to dims.
std::vector<Delta> admissible_deltas(const SpecialSystem& sys, const std::vector<int>& dims, int d,
                                     std::size_t cap = 1u << 20);

enum class Quant : std::uint8_t { Exists, Forall };

struct HomogOptions {
  Quant mode = Quant::Exists;
  FieldKind kind = FieldKind::Rational;
  /// Translate a negated equation between blocks of different sorts to
  /// false in forall mode, as the construction is literally stated.  The
  /// default (true) is the value the lattice side has.
  bool literal_forall_negation = false;
  std::size_t max_deltas = 1u << 16;
};

struct HomogTranslation {
  HomogeneousFormula result;
  SpecialSystem sys;
  std::vector<Delta> deltas;
  std::vector<int> dims;
  FormConstants alpha = FormConstants::ones(1);
  FieldKind kind = FieldKind::Rational;
};

/// phi must be quantifier free: a conjunction of equations and negated
/// equations in exists mode, a disjunction in forall mode.
HomogTranslation homog_translate(const ParsedFormula& phi, const std::vector<int>& dims,
                                 const FormConstants& alpha, const HomogOptions& opt = {});

/// Translations for every dimension vector in {0..d}^n.
std::vector<HomogTranslation> homog_translate_all(const ParsedFormula& phi, const FormConstants& alpha,
                                                  const HomogOptions& opt = {});

/// Candidate witnesses for the quantifier blocks: the Pluecker coordinates
/// of the values the flattened system assigns to its fresh variables.  With
/// bounded_height >= 0 every subspace of bounded height of the right sort is
/// offered as well.
WitnessProvider witness_provider(const HomogTranslation& t, int bounded_height = -1);

/// Truth of the translation at sorted points (sorts must match dims).
bool eval_homog(const HomogTranslation& t, const std::vector<plucker::PluckerVector>& points,
                int bounded_height = -1);

/// After star-stripping, every atom is homogeneous in each block and has
/// integer coefficients.
bool certify_homogeneous(const HomogeneousFormula& h);
bool atom_is_homogeneous(const Expr& p, const std::vector<VarBlock>& blocks, FieldKind kind);

/// x_i <= x_j or x_i <= x_j^perp.
struct OrderAtom {
  int lhs = 0;
  int rhs = 0;
  bool perp = false;
};
/// Quantifier-free homogeneous translation of a conjunction of order atoms.
HomogeneousFormula translate_order_atoms(const std::vector<OrderAtom>& atoms, const std::vector<int>& dims,
                                         int d, const FormConstants& alpha, FieldKind kind);

}  // namespace latgeo::homog
