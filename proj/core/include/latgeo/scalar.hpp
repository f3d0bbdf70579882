#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace latgeo {

using BigInt = mpz_class;
using Rational = mpq_class;

/// The two supported fields with involution.
enum class FieldKind : std::uint8_t {
  Rational,  ///< Q with the identity involution
  Gaussian,  ///< Q(i) with complex conjugation
};

const char* to_string(FieldKind kind);
FieldKind parse_field_kind(std::string_view text);

/// Element of Q(i); rational scalars carry a zero imaginary part.
///
/// Values are always canonical: GMP keeps rationals reduced with a positive
/// denominator, so structural and numeric equality coincide.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  Scalar(const BigInt& value) : re_(value) {}  // NOLINT
  Scalar(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  const Rational& re() const noexcept { return re_; }
  const Rational& im() const noexcept { return im_; }

  bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const noexcept { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const noexcept { return sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }

  /// Multiplicative inverse; throws UsageError on zero.  Every call is
  /// counted by InversionCounter.
  Scalar inverse() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const { return Scalar(-re_, -im_); }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::size_t hash() const;

  /// "p" or "p/q" for rationals, "p/q+r/s i" when the imaginary part is nonzero.
  std::string to_string() const;
  /// Accepts "p", "p/q", "p/q+r/s i", "p/q-r/s i", "r/s i" and "i" forms.
  static Scalar parse(std::string_view text);

 private:
  Rational re_;
  Rational im_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// Per-thread count of scalar inversions, used to certify the division-free
/// elimination engine.
struct InversionCounter {
  static std::uint64_t count() noexcept;
  static void reset() noexcept;
};

/// Involution of the chosen field: identity on Q, conjugation on Q(i).
Scalar involution(FieldKind kind, const Scalar& x);

/// Total inverse with 0^{-1} = 0.
Scalar safe_inverse(const Scalar& x);

/// True when `x` lies in the field (rational mode forbids imaginary parts).
bool field_contains(FieldKind kind, const Scalar& x);

/// Admissible form constants (1, alpha_2, ..., alpha_d): alpha_1 = 1 and every
/// alpha_i is a nonzero rational (hence fixed by the involution).
class FormConstants {
 public:
  /// Throws UsageError when the vector is not admissible.
  explicit FormConstants(std::vector<Scalar> alpha);
  static FormConstants ones(int d);
  /// Parses a comma-separated list such as "1,2,1" or "1,3/2".
  static FormConstants parse(std::string_view text);

  int dim() const noexcept { return static_cast<int>(alpha_.size()); }
  const Scalar& operator[](int i) const { return alpha_.at(static_cast<std::size_t>(i)); }
  const std::vector<Scalar>& values() const noexcept { return alpha_; }
  bool all_positive() const;
  bool all_integral() const;
  /// Sesquilinear form sum_i u_i^* alpha_i w_i.
  Scalar form(FieldKind kind, const std::vector<Scalar>& u, const std::vector<Scalar>& w) const;

  friend bool operator==(const FormConstants& a, const FormConstants& b) {
    return a.alpha_ == b.alpha_;
  }

 private:
  std::vector<Scalar> alpha_;
};

}  // namespace latgeo

template <>
struct std::hash<latgeo::Scalar> {
  std::size_t operator()(const latgeo::Scalar& s) const { return s.hash(); }
};
