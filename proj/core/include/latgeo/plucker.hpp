#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latgeo/fieldlang.hpp"
#include "latgeo/gauss.hpp"
#include "latgeo/lattice.hpp"
#include "latgeo/matrix.hpp"

namespace latgeo::plucker {

using gauss::SymMatrix;

/// Strictly increasing k-tuples from {0..d-1} in lexicographic order.
class IndexFamily {
 public:
  IndexFamily(int d, int k);
  int d() const noexcept { return d_; }
  int k() const noexcept { return k_; }
  int size() const noexcept { return static_cast<int>(tuples_.size()); }
  const std::vector<int>& operator[](int pos) const { return tuples_.at(static_cast<std::size_t>(pos)); }
  const std::vector<std::vector<int>>& tuples() const noexcept { return tuples_; }
  /// Position of a tuple; -1 if absent.
  int position(const std::vector<int>& tuple) const;

 private:
  int d_, k_;
  std::vector<std::vector<int>> tuples_;
  std::map<std::vector<int>, int> pos_;
};

/// Coordinates indexed by I_k.  For k = 0 the vector is the single constant 0.
struct PluckerVector {
  int d = 0;
  int k = 0;
  std::vector<Scalar> coords;
  bool is_zero() const;
  friend bool operator==(const PluckerVector&, const PluckerVector&) = default;
};

PluckerVector scaled(const PluckerVector& r, const Scalar& mu);
/// true iff one vector is a nonzero multiple of the other.
bool proportional(const PluckerVector& a, const PluckerVector& b);

/// Minors on rows I_k of the first k columns.
PluckerVector plucker_of(const Matrix& a, int k);
/// Minors on rows I_k of the selected columns.
PluckerVector plucker_of_columns(const Matrix& a, const std::vector<int>& cols);
/// f with f_0 the first index carrying a nonzero coordinate.
PivotMap pivot_of(const PluckerVector& r);

struct Recovery {
  Matrix A;  ///< d x k, in f-wNF when r is a member
  Scalar lambda;
  PivotMap f;
};
Recovery recover_matrix(const PluckerVector& r);
bool grassmann_membership(const PluckerVector& r);
Subspace theta_point(const PluckerVector& r);

/// Three-term relations p_ij p_kl - p_ik p_jl + p_il p_jk (k = 2) over the
/// variables 0..C(d,2)-1 in I_2 order.
std::vector<Expr> three_term_relations(int d);
bool satisfies_three_term_relations(const PluckerVector& r);

nlohmann::json to_json(const PluckerVector& r);
PluckerVector plucker_from_json(const nlohmann::json& j, int d);

// ---------------------------------------------------------------------------
// Symbolic forms

/// The recovery matrix P^f(y) (d x |f|): y_{f_0} at the pivots and signed
/// coordinates at the fill positions.
SymMatrix recovery_terms(int d, const PivotMap& f, const std::vector<Expr>& y);
/// pi_f(y): coordinates before f_0 vanish and y_{f_0} does not.
Formula pivot_guard(int d, const PivotMap& f, const std::vector<Expr>& y);
/// D_k(P^f(y)) - y_{f_0}^{k-1} y = 0, coordinatewise.
Formula recovery_equations(int d, const PivotMap& f, const std::vector<Expr>& y);
/// Disjunction over f of pi_f(y) and the recovery equations: membership in
/// the Grassmannian of sort k.  k = 0 gives true.
Formula membership_formula(int d, int k, const std::vector<Expr>& y);
/// Minors on rows I_k of the given columns of x.
std::vector<Expr> minor_vector(const SymMatrix& x, const std::vector<int>& cols);

std::vector<Expr> block_terms(const VarBlock& b);

/// Scalar-variable layout of sorted blocks: block k has C(d, dims[k])
/// variables (none for sort 0), numbered consecutively from `base`.
struct Layout {
  int d = 0;
  std::vector<int> dims;
  std::vector<VarBlock> blocks;
  int end = 0;  ///< one past the last variable
};
Layout make_layout(int d, const std::vector<int>& dims, int base, const std::string& prefix = "y");
/// Assignment vector of size layout.end with the coordinates in place.
std::vector<Scalar> flatten(const Layout& layout, const std::vector<PluckerVector>& points,
                            std::vector<Scalar> base = {});
/// Coordinates of block `k` read back from an assignment.
PluckerVector block_value(const Layout& layout, int k, const std::vector<Scalar>& assignment);

struct PluckerTranslation {
  Formula chi;
  Layout layout;
};

/// psi over matrix blocks 0..n-1 (n = dims.size()) to chi over sorted
/// Pluecker blocks.  The membership conjuncts are rendered as recovery
/// equations under each pivot guard.
PluckerTranslation tau_field_to_plucker(const Formula& psi, const std::vector<int>& dims, int d,
                                        FieldKind kind);
/// chi over the layout's blocks to a formula over matrix blocks 0..n-1.
/// Besides the column-selection disjunction, the output requires
/// rank(X_k) = dims[k] so that it defines a subset of the rank stratum.
Formula tau_plucker_to_field(const Formula& chi, const Layout& layout, FieldKind kind);

}  // namespace latgeo::plucker
