#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "latgeo/expr.hpp"
#include "latgeo/scalar.hpp"

namespace latgeo {

using poly::Expr;

/// A named group of scalar variables, e.g. the Pluecker coordinates of one
/// subspace variable of sort k.
struct VarBlock {
  std::string name;
  int sort = 0;
  std::vector<int> vars;
  friend bool operator==(const VarBlock&, const VarBlock&) = default;
};

enum class FKind : std::uint8_t { True, False, Atom, Not, And, Or, Exists, Forall };

struct FNode;

/// Field formula: boolean combination of atoms p = 0 with optional
/// quantifier blocks.  p != 0 is represented as Not(Atom).  Builders
/// constant-fold, flatten nested conjunctions/disjunctions and cancel
/// double negations.
class Formula {
 public:
  Formula();  // true

  static Formula top();
  static Formula bottom();
  static Formula eq0(const Expr& p);
  static Formula neq0(const Expr& p);
  static Formula negate(const Formula& a);
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula implies(const Formula& a, const Formula& b);
  static Formula exists(std::vector<int> vars, const Formula& body, std::vector<VarBlock> blocks = {});
  static Formula forall(std::vector<int> vars, const Formula& body, std::vector<VarBlock> blocks = {});

  FKind kind() const noexcept;
  const FNode& node() const noexcept { return *n_; }
  bool is_true() const noexcept { return kind() == FKind::True; }
  bool is_false() const noexcept { return kind() == FKind::False; }
  bool quantifier_free() const;

  friend Formula operator&&(const Formula& a, const Formula& b) { return conj({a, b}); }
  friend Formula operator||(const Formula& a, const Formula& b) { return disj({a, b}); }
  Formula operator!() const { return negate(*this); }

 private:
  explicit Formula(std::shared_ptr<const FNode> n) : n_(std::move(n)) {}
  std::shared_ptr<const FNode> n_;
};

struct FNode {
  FKind kind = FKind::True;
  Expr poly;                   ///< Atom
  std::vector<Formula> kids;   ///< Not (one), And/Or (many), quantifiers (one)
  std::vector<int> bound;      ///< quantifiers
  std::vector<VarBlock> blocks;
};

/// Atoms in first-occurrence order (deduplicated by term identity).
std::vector<Expr> atoms(const Formula& f);
/// Every atom of the formula, visited once per distinct atom.
void for_each_atom(const Formula& f, const std::function<void(const Expr&)>& fn);
/// Rebuilds the formula with each atom p = 0 replaced by map(p).
Formula map_atoms(const Formula& f, const std::function<Formula(const Expr&)>& map);

struct FormulaStats {
  std::size_t atoms = 0;
  std::size_t literals = 0;  ///< atom occurrences in the tree
  std::size_t dag_nodes = 0;
  int max_degree = 0;
};
FormulaStats stats(const Formula& f);
/// Largest variable id occurring free or bound; -1 if there is none.
int max_variable(const Formula& f);

/// Supplies candidate witnesses for a quantifier block given the current
/// assignment.  An Exists node holds iff some candidate satisfies its body;
/// a Forall node holds iff every candidate does.
using WitnessProvider =
    std::function<std::vector<std::vector<Scalar>>(const FNode& quantifier, const std::vector<Scalar>& env)>;

struct FieldContext {
  FieldKind kind = FieldKind::Rational;
  std::vector<Scalar> constants;  ///< values of c_1..c_d
  WitnessProvider witnesses;
};

FieldContext make_context(FieldKind kind, const FormConstants& alpha);

/// Exact evaluation.  Throws UsageError on unbound variables and on
/// quantifiers without a witness provider.
bool eval_field_formula(const Formula& f, const std::vector<Scalar>& assignment,
                        const FieldContext& ctx);

/// Quantifier-free evaluation sharing a caller-owned term evaluator.
bool eval_field_formula(const Formula& f, poly::Evaluator& values);

struct BasicFormula {
  std::vector<Expr> zeros;
  std::vector<Expr> nonzeros;
  Formula to_formula() const;
};

/// Pairwise disjoint basic formulas whose union defines the same set.
std::vector<BasicFormula> to_disjoint_basic(const Formula& f);

/// Replaces c_j by alpha_j and clears denominators atom by atom so that all
/// coefficients are integers.  Truth is preserved at every assignment.
Formula clear_constants(const Formula& f, const FormConstants& alpha);
Expr clear_constants(const Expr& p, const FormConstants& alpha);

/// Text grammar: x1, x1*, c1, integers, + - *, parentheses, p = q, p != q,
/// true, false, &&, ||, !, E x1 x2 . phi, A x1 . phi.
Formula parse_field_formula(std::string_view text, FieldKind kind);
Expr parse_polynomial(std::string_view text, FieldKind kind);

/// Infix rendering (small formulas only; shared terms are repeated).
std::string to_text(const Formula& f);

/// JSON with a shared node table for the term DAG:
/// {"nodes":[...], "formula":{...}, "blocks":[...]}.
nlohmann::json to_json(const Formula& f);
Formula formula_from_json(const nlohmann::json& j);

}  // namespace latgeo
