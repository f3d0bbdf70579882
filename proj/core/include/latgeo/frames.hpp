#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latgeo/fieldlang.hpp"
#include "latgeo/homog.hpp"
#include "latgeo/lattice.hpp"

namespace latgeo::frames {

/// System a_ij (i, j < d) of subspaces; a_ii is written a_i.
struct Frame {
  int d = 0;
  FieldKind kind = FieldKind::Rational;
  FormConstants alpha = FormConstants::ones(1);
  std::vector<std::vector<Subspace>> a;
  const Subspace& at(int i, int j) const { return a.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j)); }
};

/// a_i = v_i F, a_ij = (v_j - v_i) F.  The columns must form a perp-basis
/// whose norms are mu * alpha_i for one common nonzero mu.
Frame frame_from_basis(const Matrix& v, const FormConstants& alpha, FieldKind kind);
/// Same construction without the orthogonality and norm checks.
Frame frame_of_basis(const Matrix& v, const FormConstants& alpha, FieldKind kind);

bool frame_axioms_hold(const Frame& f);
/// Basis (v_1, ..., v_d) inducing the frame, unique up to a common scalar.
std::optional<Matrix> frame_basis(const Frame& f);
/// Frame axioms, a_i meet a_i^perp = 0, a_i <= a_j^perp, and a perp-basis
/// with norms proportional to alpha inducing the frame.
bool is_alpha_frame(const Frame& f);

/// u with u + a_2 = a_1 + a_2 and u meet a_2 = 0.
bool in_ring(const Subspace& u, const Frame& f);
/// (v_1 - r v_2) F.
Subspace ring_encode(const Scalar& r, const Frame& f);
Scalar ring_decode(const Subspace& u, const Frame& f);

nlohmann::json to_json(const Frame& f);

// ---------------------------------------------------------------------------
// Lattice terms

/// Frame variables z_ij (i <= j) come first, numbered row by row.
int num_frame_vars(int d);
int frame_var(int i, int j, int d);
std::vector<std::string> frame_var_names(int d);
/// Lattice assignment: the frame entries in variable order, then `points`.
std::vector<Subspace> frame_assignment(const Frame& f, const std::vector<Subspace>& points = {});

/// Ring operations on R_21 as lattice terms in the frame variables.
class RingTerms {
 public:
  RingTerms(int d, const FormConstants& alpha);
  int d() const noexcept { return d_; }
  LatticeTerm z(int i, int j) const;
  LatticeTerm add(const LatticeTerm& x, const LatticeTerm& y) const;
  LatticeTerm mult(const LatticeTerm& x, const LatticeTerm& y) const;
  LatticeTerm negate(const LatticeTerm& x) const;
  LatticeTerm star(const LatticeTerm& x) const;
  /// Exchanges the coordinates of a point on a_1 + a_2 (r to 1/r on R_21).
  LatticeTerm swap(const LatticeTerm& x) const;
  /// omega(q) for rational q.
  LatticeTerm constant(const Rational& q) const;
  /// Projection of a point of a_1 + a_3 onto a_1 + a_2 through a_23.
  LatticeTerm project_31(const LatticeTerm& x) const;

 private:
  LatticeTerm integer(const BigInt& n) const;
  int d_;
  FormConstants alpha_;
};

/// The four operations applied to the point variables x = z-count and
/// y = z-count + 1.
struct RingOps {
  LatticeTerm x, y;
  LatticeTerm add, mult, negate, star;
};
RingOps ring_term_ops(const Frame& f);

enum class EncodeMode : std::uint8_t { Conjunctive, Dnf };

struct FrameEncoding {
  int d = 0;
  int num_points = 0;
  LatticeTerm term;
  std::vector<LatticeTerm> conditions;  ///< the summands of term
  std::vector<std::string> names;       ///< frame variables, then x1..xn
};

/// Single term t(z, x) with t = 0 iff z is an alpha-frame, every x_k lies in
/// R_21 and phi holds at the decoded scalars.  phi must be a conjunction of
/// atoms p = 0 and p != 0 over the scalar variables 0..num_points-1.
FrameEncoding encode_field_formula(const Formula& phi, int num_points, int d, const FormConstants& alpha,
                                   EncodeMode mode = EncodeMode::Conjunctive);
bool eval_encoding(const FrameEncoding& enc, const Frame& f, const std::vector<Subspace>& points);

/// The encoding equation t = 0 as a lattice formula (meets expanded).
ParsedFormula encoding_formula(const FrameEncoding& enc);
/// Homogeneous existential translation of t = 0 at dimension vector (1, ..., 1).
homog::HomogTranslation encode_homogeneous(const FrameEncoding& enc, const FormConstants& alpha, FieldKind kind,
                                           std::size_t max_deltas = 1u << 12);

}  // namespace latgeo::frames
