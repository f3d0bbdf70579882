#include "latgeo/expr.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_set>

#include "latgeo/errors.hpp"

namespace latgeo::poly {

namespace {

std::size_t mix(std::size_t h, std::size_t x) {
  x += 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  x ^= x >> 31;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  return h ^ x;
}

std::size_t hash_big(const BigInt& v) {
  std::size_t h = mpz_get_ui(v.get_mpz_t());
  h = mix(h, static_cast<std::size_t>(mpz_sgn(v.get_mpz_t()) + 2));
  h = mix(h, mpz_size(v.get_mpz_t()));
  return h;
}

struct Table {
  std::mutex mu;
  std::unordered_map<std::size_t, std::vector<std::pair<const Node*, std::weak_ptr<const Node>>>>
      buckets;
  std::uint64_t next_id = 1;
  std::size_t live = 0;
};

Table& table() {
  static Table* t = new Table;
  return *t;
}

struct NodeDeleter {
  void operator()(const Node* p) const {
    {
      Table& t = table();
      std::lock_guard<std::mutex> lock(t.mu);
      auto it = t.buckets.find(p->hash);
      if (it != t.buckets.end()) {
        auto& vec = it->second;
        for (std::size_t i = 0; i < vec.size(); ++i) {
          if (vec[i].first == p) {
            vec[i] = std::move(vec.back());
            vec.pop_back();
            break;
          }
        }
        if (vec.empty()) t.buckets.erase(it);
      }
      --t.live;
    }
    delete p;
  }
};

bool same_structure(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.index != b.index || a.star != b.star) return false;
  if (a.value != b.value) return false;
  if (a.terms.size() != b.terms.size() || a.factors.size() != b.factors.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].first != b.terms[i].first || a.terms[i].second != b.terms[i].second) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    if (a.factors[i].first != b.factors[i].first || a.factors[i].second != b.factors[i].second) {
      return false;
    }
  }
  return true;
}

bool order_less(const Expr& a, const Expr& b) {
  if (a.hash() != b.hash()) return a.hash() < b.hash();
  return a.id() < b.id();
}

}  // namespace

struct Builder {
  static Expr intern(Node&& n) {
    std::size_t h = mix(static_cast<std::size_t>(n.kind) + 1, hash_big(n.value));
    h = mix(h, static_cast<std::size_t>(n.index) * 2 + (n.star ? 1 : 0));
    for (const auto& [t, c] : n.terms) h = mix(mix(h, t.hash()), hash_big(c));
    for (const auto& [f, e] : n.factors) h = mix(mix(h, f.hash()), e);
    n.hash = h;
    Table& tab = table();
    std::lock_guard<std::mutex> lock(tab.mu);
    auto& bucket = tab.buckets[h];
    for (auto& [raw, weak] : bucket) {
      if (same_structure(*raw, n)) {
        if (auto sp = weak.lock()) return Expr(std::move(sp));
      }
    }
    n.id = tab.next_id++;
    auto* raw = new Node(std::move(n));
    std::shared_ptr<const Node> sp(raw, NodeDeleter{});
    bucket.emplace_back(raw, sp);
    ++tab.live;
    return Expr(std::move(sp));
  }

  static Expr constant(const BigInt& v) {
    Node n;
    n.kind = Kind::Const;
    n.value = v;
    return intern(std::move(n));
  }

  // terms: arbitrary order, may contain duplicates and zero coefficients.
  static Expr sum(BigInt c, std::vector<std::pair<Expr, BigInt>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return order_less(a.first, b.first); });
    std::vector<std::pair<Expr, BigInt>> merged;
    merged.reserve(terms.size());
    for (auto& t : terms) {
      if (!merged.empty() && merged.back().first == t.first) {
        merged.back().second += t.second;
      } else {
        if (!merged.empty() && merged.back().second == 0) merged.pop_back();
        merged.push_back(std::move(t));
      }
    }
    if (!merged.empty() && merged.back().second == 0) merged.pop_back();
    if (merged.empty()) return constant(c);
    if (c == 0 && merged.size() == 1 && merged[0].second == 1) return merged[0].first;
    Node n;
    n.kind = Kind::Sum;
    n.value = std::move(c);
    n.terms = std::move(merged);
    return intern(std::move(n));
  }

  static Expr prod(const BigInt& k, std::vector<std::pair<Expr, unsigned>> factors) {
    if (k == 0) return zero();
    std::sort(factors.begin(), factors.end(),
              [](const auto& a, const auto& b) { return order_less(a.first, b.first); });
    std::vector<std::pair<Expr, unsigned>> merged;
    merged.reserve(factors.size());
    for (auto& f : factors) {
      if (!merged.empty() && merged.back().first == f.first) {
        merged.back().second += f.second;
      } else {
        merged.push_back(std::move(f));
      }
    }
    if (merged.empty()) return constant(k);
    Expr core;
    if (merged.size() == 1 && merged[0].second == 1) {
      core = merged[0].first;
    } else {
      Node n;
      n.kind = Kind::Prod;
      n.factors = std::move(merged);
      core = intern(std::move(n));
    }
    return scale(k, core);
  }

  static const Expr& zero() {
    static const Expr* z = new Expr(constant(BigInt(0)));
    return *z;
  }
  static const Expr& one() {
    static const Expr* o = new Expr(constant(BigInt(1)));
    return *o;
  }

  static void add_parts(const Expr& e, const BigInt& k, BigInt& c,
                        std::vector<std::pair<Expr, BigInt>>& terms) {
    const Node& n = e.node();
    if (n.kind == Kind::Const) {
      c += k * n.value;
    } else if (n.kind == Kind::Sum) {
      c += k * n.value;
      for (const auto& [t, coef] : n.terms) terms.emplace_back(t, k * coef);
    } else {
      terms.emplace_back(e, k);
    }
  }

  static void factor_parts(const Expr& core, unsigned mult,
                           std::vector<std::pair<Expr, unsigned>>& out) {
    const Node& n = core.node();
    if (n.kind == Kind::Const) return;
    if (n.kind == Kind::Prod) {
      for (const auto& [f, e] : n.factors) out.emplace_back(f, e * mult);
    } else {
      out.emplace_back(core, mult);
    }
  }
};

Expr::Expr() : n_(Builder::zero().n_) {}
Expr::Expr(long value)
    : n_(value == 0   ? Builder::zero().n_
         : value == 1 ? Builder::one().n_
                      : Builder::constant(BigInt(value)).n_) {}
Expr::Expr(const BigInt& value) : n_(Builder::constant(value).n_) {}

Expr Expr::var(int id, bool star) {
  if (id < 0) throw UsageError("negative variable id");
  Node n;
  n.kind = Kind::Var;
  n.index = id;
  n.star = star;
  return Builder::intern(std::move(n));
}

Expr Expr::csym(int j) {
  if (j < 0) throw UsageError("negative constant index");
  Node n;
  n.kind = Kind::CSym;
  n.index = j;
  return Builder::intern(std::move(n));
}

Kind Expr::kind() const noexcept { return n_->kind; }
std::uint64_t Expr::id() const noexcept { return n_->id; }
std::size_t Expr::hash() const noexcept { return n_->hash; }
bool Expr::is_zero() const noexcept { return n_->kind == Kind::Const && n_->value == 0; }
bool Expr::is_one() const noexcept { return n_->kind == Kind::Const && n_->value == 1; }
const BigInt& Expr::const_value() const {
  if (n_->kind != Kind::Const) throw UsageError("const_value on non-constant term");
  return n_->value;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_const() && b.is_const()) return Builder::constant(a.const_value() + b.const_value());
  BigInt c = 0;
  std::vector<std::pair<Expr, BigInt>> terms;
  Builder::add_parts(a, BigInt(1), c, terms);
  Builder::add_parts(b, BigInt(1), c, terms);
  return Builder::sum(std::move(c), std::move(terms));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a == b) return Builder::zero();
  if (a.is_const() && b.is_const()) return Builder::constant(a.const_value() - b.const_value());
  BigInt c = 0;
  std::vector<std::pair<Expr, BigInt>> terms;
  Builder::add_parts(a, BigInt(1), c, terms);
  Builder::add_parts(b, BigInt(-1), c, terms);
  return Builder::sum(std::move(c), std::move(terms));
}

Expr Expr::operator-() const { return scale(BigInt(-1), *this); }

std::pair<BigInt, Expr> split_coefficient(const Expr& e) {
  const Node& n = e.node();
  if (n.kind == Kind::Const) return {n.value, Builder::one()};
  if (n.kind == Kind::Sum && n.value == 0 && n.terms.size() == 1) {
    return {n.terms[0].second, n.terms[0].first};
  }
  return {BigInt(1), e};
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Builder::zero();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  auto [ka, ca] = split_coefficient(a);
  auto [kb, cb] = split_coefficient(b);
  std::vector<std::pair<Expr, unsigned>> factors;
  Builder::factor_parts(ca, 1, factors);
  Builder::factor_parts(cb, 1, factors);
  return Builder::prod(ka * kb, std::move(factors));
}

Expr scale(const BigInt& k, const Expr& e) {
  if (k == 0 || e.is_zero()) return Builder::zero();
  if (k == 1) return e;
  const Node& n = e.node();
  if (n.kind == Kind::Const) return Builder::constant(k * n.value);
  Node s;
  s.kind = Kind::Sum;
  if (n.kind == Kind::Sum) {
    s.value = k * n.value;
    s.terms.reserve(n.terms.size());
    for (const auto& [t, c] : n.terms) s.terms.emplace_back(t, k * c);
  } else {
    s.value = 0;
    s.terms.emplace_back(e, k);
  }
  return Builder::intern(std::move(s));
}

Expr pow(const Expr& e, unsigned n) {
  if (n == 0) return Builder::one();
  if (n == 1) return e;
  auto [k, core] = split_coefficient(e);
  BigInt kn;
  mpz_pow_ui(kn.get_mpz_t(), k.get_mpz_t(), n);
  std::vector<std::pair<Expr, unsigned>> factors;
  Builder::factor_parts(core, n, factors);
  return Builder::prod(kn, std::move(factors));
}

std::size_t live_nodes() {
  Table& t = table();
  std::lock_guard<std::mutex> lock(t.mu);
  return t.live;
}

Expr StarMap::operator()(const Expr& e) {
  if (kind_ == FieldKind::Rational) return e;
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Const:
    case Kind::CSym:
      return e;
    case Kind::Var:
      return Expr::var(n.index, !n.star);
    default:
      break;
  }
  auto it = memo_.find(e.id());
  if (it != memo_.end()) return it->second;
  Expr out;
  if (n.kind == Kind::Sum) {
    std::vector<std::pair<Expr, BigInt>> terms;
    terms.reserve(n.terms.size());
    for (const auto& [t, c] : n.terms) terms.emplace_back((*this)(t), c);
    out = Builder::sum(n.value, std::move(terms));
  } else {
    std::vector<std::pair<Expr, unsigned>> factors;
    factors.reserve(n.factors.size());
    for (const auto& [f, k] : n.factors) factors.emplace_back((*this)(f), k);
    out = Builder::prod(BigInt(1), std::move(factors));
  }
  memo_.emplace(e.id(), out);
  return out;
}

namespace {

Scalar power(Scalar base, unsigned n) {
  Scalar acc(1);
  while (n) {
    if (n & 1U) acc *= base;
    n >>= 1U;
    if (n) base *= base;
  }
  return acc;
}

}  // namespace

Scalar Evaluator::operator()(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Const:
      return Scalar(n.value);
    case Kind::Var: {
      if (!vars_ || n.index >= static_cast<int>(vars_->size())) {
        throw UsageError("unbound variable x" + std::to_string(n.index + 1));
      }
      const Scalar& v = (*vars_)[n.index];
      return n.star ? involution(kind_, v) : v;
    }
    case Kind::CSym:
      if (!csyms_ || n.index >= static_cast<int>(csyms_->size())) {
        throw UsageError("unbound constant c" + std::to_string(n.index + 1));
      }
      return (*csyms_)[n.index];
    default:
      break;
  }
  auto it = memo_.find(n.id);
  if (it != memo_.end()) return it->second;
  Scalar v;
  if (n.kind == Kind::Sum) {
    v = Scalar(n.value);
    for (const auto& [t, c] : n.terms) {
      Scalar x = (*this)(t);
      if (c == 1) {
        v += x;
      } else {
        v += Scalar(c) * x;
      }
    }
  } else {
    v = Scalar(1);
    for (const auto& [f, k] : n.factors) {
      v *= power((*this)(f), k);
      if (v.is_zero()) break;
    }
  }
  memo_.emplace(n.id, v);
  return v;
}

Expr Substitution::operator()(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Const:
    case Kind::CSym:
      return e;
    default:
      break;
  }
  auto it = memo_.find(n.id);
  if (it != memo_.end()) return it->second;
  Expr out;
  if (n.kind == Kind::Var) {
    out = map_(n.index);
    if (n.star) out = star_(out);
  } else if (n.kind == Kind::Sum) {
    out = Expr(n.value);
    for (const auto& [t, c] : n.terms) out = out + scale(c, (*this)(t));
  } else {
    out = Expr(1);
    for (const auto& [f, k] : n.factors) out = out * pow((*this)(f), k);
  }
  memo_.emplace(n.id, out);
  return out;
}

int DegreeMap::total(const Expr& e) {
  const Node& n = e.node();
  if (n.kind == Kind::Const) return 0;
  if (n.kind == Kind::Var || n.kind == Kind::CSym) return 1;
  auto it = total_.find(n.id);
  if (it != total_.end()) return it->second;
  int d = 0;
  if (n.kind == Kind::Sum) {
    for (const auto& t : n.terms) d = std::max(d, total(t.first));
  } else {
    for (const auto& [f, k] : n.factors) d += static_cast<int>(k) * total(f);
  }
  total_.emplace(n.id, d);
  return d;
}

int DegreeMap::in_constants(const Expr& e) {
  const Node& n = e.node();
  if (n.kind == Kind::Const || n.kind == Kind::Var) return 0;
  if (n.kind == Kind::CSym) return 1;
  auto it = cdeg_.find(n.id);
  if (it != cdeg_.end()) return it->second;
  int d = 0;
  if (n.kind == Kind::Sum) {
    for (const auto& t : n.terms) d = std::max(d, in_constants(t.first));
  } else {
    for (const auto& [f, k] : n.factors) d += static_cast<int>(k) * in_constants(f);
  }
  cdeg_.emplace(n.id, d);
  return d;
}

namespace {

template <class Fn>
void visit_dag(const std::vector<Expr>& roots, Fn&& fn) {
  std::unordered_set<std::uint64_t> seen;
  std::vector<const Node*> stack;
  for (const auto& r : roots) stack.push_back(r.get());
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n->id).second) continue;
    fn(*n);
    for (const auto& t : n->terms) stack.push_back(t.first.get());
    for (const auto& f : n->factors) stack.push_back(f.first.get());
  }
}

}  // namespace

std::size_t dag_size(const std::vector<Expr>& roots) {
  std::size_t count = 0;
  visit_dag(roots, [&](const Node&) { ++count; });
  return count;
}

std::vector<int> variables(const std::vector<Expr>& roots) {
  std::vector<int> out;
  visit_dag(roots, [&](const Node& n) {
    if (n.kind == Kind::Var) out.push_back(n.index);
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::string text_of(const Expr& e, bool as_factor) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Const: {
      std::string s = n.value.get_str();
      return (as_factor && n.value < 0) ? "(" + s + ")" : s;
    }
    case Kind::Var:
      return "x" + std::to_string(n.index + 1) + (n.star ? "*" : "");
    case Kind::CSym:
      return "c" + std::to_string(n.index + 1);
    case Kind::Prod: {
      std::string s;
      for (const auto& [f, k] : n.factors) {
        for (unsigned i = 0; i < k; ++i) {
          if (!s.empty()) s += "*";
          s += text_of(f, true);
        }
      }
      return s;
    }
    case Kind::Sum: {
      std::string s;
      for (const auto& [t, c] : n.terms) {
        std::string body = text_of(t, true);
        if (s.empty()) {
          if (c == 1) {
            s = body;
          } else if (c == -1) {
            s = "-" + body;
          } else {
            s = c.get_str() + "*" + body;
          }
        } else if (c < 0) {
          BigInt m = -c;
          s += " - " + (m == 1 ? body : m.get_str() + "*" + body);
        } else {
          s += " + " + (c == 1 ? body : c.get_str() + "*" + body);
        }
      }
      if (n.value > 0) s += " + " + n.value.get_str();
      if (n.value < 0) s += " - " + BigInt(-n.value).get_str();
      const bool single = n.terms.size() == 1 && n.value == 0;
      return (as_factor && !single) || (as_factor && s[0] == '-') ? "(" + s + ")" : s;
    }
  }
  return {};
}

}  // namespace

std::string to_text(const Expr& e) { return text_of(e, false); }

// ---------------------------------------------------------------------------

StarPolynomial StarPolynomial::constant(const BigInt& c) {
  StarPolynomial p;
  if (c != 0) p.terms_.emplace(Monomial{}, c);
  return p;
}

StarPolynomial StarPolynomial::atom(const Atom& a) {
  StarPolynomial p;
  p.terms_.emplace(Monomial{{a, 1U}}, BigInt(1));
  return p;
}

void StarPolynomial::add_term(const Monomial& m, const BigInt& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

StarPolynomial operator+(const StarPolynomial& a, const StarPolynomial& b) {
  StarPolynomial r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, c);
  return r;
}

StarPolynomial operator-(const StarPolynomial& a, const StarPolynomial& b) {
  StarPolynomial r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
  return r;
}

namespace {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

StarPolynomial operator*(const StarPolynomial& a, const StarPolynomial& b) {
  StarPolynomial r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
  }
  return r;
}

StarPolynomial StarPolynomial::scaled(const BigInt& k) const {
  StarPolynomial r;
  if (k == 0) return r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * k);
  return r;
}

int StarPolynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int t = 0;
    for (const auto& [a, e] : m) t += static_cast<int>(e);
    d = std::max(d, t);
  }
  return d;
}

StarPolynomial StarPolynomial::star_stripped() const {
  StarPolynomial r;
  for (const auto& [m, c] : terms_) {
    Monomial stripped;
    for (auto [a, e] : m) {
      a.star = false;
      stripped = mono_mul(stripped, Monomial{{a, e}});
    }
    r.add_term(stripped, c);
  }
  return r;
}

bool StarPolynomial::has_star() const {
  for (const auto& [m, c] : terms_) {
    for (const auto& [a, e] : m) {
      if (a.star) return true;
    }
  }
  return false;
}

bool StarPolynomial::has_constants() const {
  for (const auto& [m, c] : terms_) {
    for (const auto& [a, e] : m) {
      if (a.type == Atom::C) return true;
    }
  }
  return false;
}

Expr StarPolynomial::to_expr() const {
  Expr out;
  for (const auto& [m, c] : terms_) {
    Expr t = Expr(c);
    for (const auto& [a, e] : m) {
      Expr base = a.type == Atom::C ? Expr::csym(a.index) : Expr::var(a.index, a.star);
      t = t * pow(base, e);
    }
    out = out + t;
  }
  return out;
}

std::string StarPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : terms_) {
    std::string body;
    for (const auto& [a, e] : m) {
      std::string name = a.type == Atom::C ? "c" + std::to_string(a.index + 1)
                                           : "x" + std::to_string(a.index + 1) + (a.star ? "*" : "");
      for (unsigned i = 0; i < e; ++i) body += (body.empty() ? "" : "*") + name;
    }
    BigInt mag = c < 0 ? BigInt(-c) : c;
    std::string piece = body.empty() ? mag.get_str() : (mag == 1 ? body : mag.get_str() + "*" + body);
    if (s.empty()) {
      s = (c < 0 ? "-" : "") + piece;
    } else {
      s += (c < 0 ? " - " : " + ") + piece;
    }
  }
  return s;
}

namespace {

class Expander {
 public:
  explicit Expander(FieldKind kind) : kind_(kind) {}
  const StarPolynomial& operator()(const Expr& e) {
    auto it = memo_.find(e.id());
    if (it != memo_.end()) return it->second;
    const Node& n = e.node();
    StarPolynomial p;
    switch (n.kind) {
      case Kind::Const:
        p = StarPolynomial::constant(n.value);
        break;
      case Kind::Var:
        p = StarPolynomial::atom(
            Atom{Atom::X, n.index, kind_ == FieldKind::Gaussian && n.star});
        break;
      case Kind::CSym:
        p = StarPolynomial::atom(Atom{Atom::C, n.index, false});
        break;
      case Kind::Sum:
        p = StarPolynomial::constant(n.value);
        for (const auto& [t, c] : n.terms) p = p + (*this)(t).scaled(c);
        break;
      case Kind::Prod:
        p = StarPolynomial::constant(BigInt(1));
        for (const auto& [f, k] : n.factors) {
          const StarPolynomial& base = (*this)(f);
          for (unsigned i = 0; i < k; ++i) p = p * base;
        }
        break;
    }
    return memo_.emplace(e.id(), std::move(p)).first->second;
  }

 private:
  FieldKind kind_;
  std::unordered_map<std::uint64_t, StarPolynomial> memo_;
};

}  // namespace

StarPolynomial expand(const Expr& e, FieldKind kind) {
  Expander ex(kind);
  return ex(e);
}

}  // namespace latgeo::poly
