#include "latgeo/scalar.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

#include "latgeo/errors.hpp"

namespace latgeo {

namespace {

thread_local std::uint64_t g_inversions = 0;

std::string rational_text(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out;
  for (std::size_t i = b; i < e; ++i) {
    if (!std::isspace(static_cast<unsigned char>(s[i]))) out.push_back(s[i]);
  }
  return out;
}

Rational parse_rational(const std::string& s, std::string_view whole) {
  if (s.empty()) throw ParseError("empty rational in scalar '" + std::string(whole) + "'", 0);
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+')) {
      throw ParseError("invalid character in scalar '" + std::string(whole) + "'", 0);
    }
  }
  Rational q;
  std::string body = s;
  if (!body.empty() && body[0] == '+') body.erase(0, 1);
  if (q.set_str(body, 10) != 0 || q.get_den() == 0) {
    throw ParseError("invalid rational '" + s + "'", 0);
  }
  q.canonicalize();
  return q;
}

}  // namespace

const char* to_string(FieldKind kind) {
  return kind == FieldKind::Rational ? "rat" : "gauss";
}

FieldKind parse_field_kind(std::string_view text) {
  if (text == "rat" || text == "rational") return FieldKind::Rational;
  if (text == "gauss" || text == "gaussian") return FieldKind::Gaussian;
  throw UsageError("unknown field '" + std::string(text) + "' (expected rat or gauss)");
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw UsageError("inverse of zero scalar");
  ++g_inversions;
  if (is_real()) return Scalar(Rational(1) / re_);
  Rational n = re_ * re_ + im_ * im_;
  return Scalar(re_ / n, -im_ / n);
}

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  Rational r = re_ * o.re_ - im_ * o.im_;
  Rational i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

std::size_t Scalar::hash() const {
  std::size_t h = std::hash<std::string>{}(re_.get_str());
  if (!is_real()) h ^= std::hash<std::string>{}(im_.get_str()) * 0x9e3779b97f4a7c15ULL;
  return h;
}

std::string Scalar::to_string() const {
  if (is_real()) return rational_text(re_);
  std::string out = rational_text(re_);
  if (sgn(im_) > 0) out += "+";
  out += rational_text(im_) + " i";
  return out;
}

Scalar Scalar::parse(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw ParseError("empty scalar", 0);
  if (s.back() != 'i') return Scalar(parse_rational(s, text));
  s.pop_back();
  // Split into real and imaginary parts at the last sign not at position 0.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if (s[i] == '+' || s[i] == '-') {
      split = i;
      break;
    }
  }
  std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  Rational re = re_part.empty() ? Rational(0) : parse_rational(re_part, text);
  return Scalar(re, parse_rational(im_part, text));
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

std::uint64_t InversionCounter::count() noexcept { return g_inversions; }
void InversionCounter::reset() noexcept { g_inversions = 0; }

Scalar involution(FieldKind kind, const Scalar& x) {
  return kind == FieldKind::Rational ? x : x.conj();
}

Scalar safe_inverse(const Scalar& x) { return x.is_zero() ? Scalar(0) : x.inverse(); }

bool field_contains(FieldKind kind, const Scalar& x) {
  return kind == FieldKind::Gaussian || x.is_real();
}

FormConstants::FormConstants(std::vector<Scalar> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw UsageError("form constants need dimension >= 1");
  if (!alpha_[0].is_one()) throw UsageError("form constants must have alpha_1 = 1");
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    if (alpha_[i].is_zero()) {
      throw UsageError("form constant alpha_" + std::to_string(i + 1) + " is zero");
    }
    if (!alpha_[i].is_real()) {
      throw UsageError("form constant alpha_" + std::to_string(i + 1) +
                       " is not fixed by the involution");
    }
  }
}

FormConstants FormConstants::ones(int d) {
  return FormConstants(std::vector<Scalar>(static_cast<std::size_t>(d), Scalar(1)));
}

FormConstants FormConstants::parse(std::string_view text) {
  std::vector<Scalar> values;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) values.push_back(Scalar::parse(item));
  return FormConstants(std::move(values));
}

bool FormConstants::all_positive() const {
  for (const auto& a : alpha_) {
    if (sgn(a.re()) <= 0) return false;
  }
  return true;
}

bool FormConstants::all_integral() const {
  for (const auto& a : alpha_) {
    if (a.re().get_den() != 1) return false;
  }
  return true;
}

Scalar FormConstants::form(FieldKind kind, const std::vector<Scalar>& u,
                           const std::vector<Scalar>& w) const {
  if (u.size() != alpha_.size() || w.size() != alpha_.size()) {
    throw UsageError("form: vector length does not match dimension");
  }
  Scalar acc;
  for (std::size_t i = 0; i < u.size(); ++i) acc += involution(kind, u[i]) * alpha_[i] * w[i];
  return acc;
}

}  // namespace latgeo
