#include "latgeo/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>
#include <unordered_map>

#include "latgeo/errors.hpp"

namespace latgeo {

// ---------------------------------------------------------------------------
// Subspace

Subspace Subspace::span(const Matrix& a) {
  NormalForm nf = column_nf(a);
  Subspace u;
  u.nf_ = std::move(nf.N);
  u.f_ = std::move(nf.f);
  return u;
}

Subspace Subspace::zero(int d) { return span(Matrix(d, 0)); }
Subspace Subspace::full(int d) { return span(identity(d)); }

Matrix Subspace::basis() const { return resize_columns(nf_, dim()); }

bool Subspace::contains(const std::vector<Scalar>& v) const {
  if (static_cast<int>(v.size()) != ambient()) throw UsageError("contains: vector length mismatch");
  Matrix col = Matrix::from_columns(ambient(), {v});
  return rank(hstack(basis(), col)) == dim();
}

bool Subspace::leq(const Subspace& other) const { return join(*this, other) == other; }

Subspace join(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw UsageError("join: dimension mismatch");
  return Subspace::span(hstack(a.basis(), b.basis()));
}

Subspace meet(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw UsageError("meet: dimension mismatch");
  return Subspace::span(zassenhaus_meet(a.basis(), b.basis()));
}

Subspace perp(FieldKind kind, const Subspace& a, const FormConstants& alpha) {
  return Subspace::span(ortho_complement(kind, a.normal_form(), a.pivots(), alpha));
}

std::string to_string(const Subspace& u) {
  if (u.dim() == 0) return "{0}";
  std::string s = "span{";
  const Matrix b = u.basis();
  for (int j = 0; j < b.cols(); ++j) {
    s += j ? ",(" : "(";
    for (int i = 0; i < b.rows(); ++i) s += (i ? "," : "") + b(i, j).to_string();
    s += ")";
  }
  return s + "}";
}

nlohmann::json to_json(const Scalar& s) { return s.to_string(); }

Scalar scalar_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Scalar::parse(j.get<std::string>());
  if (j.is_number_integer()) return Scalar(j.get<long>());
  throw ParseError("scalar must be a string or an integer", 0);
}

nlohmann::json to_json(const Matrix& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < a.cols(); ++j) row.push_back(to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows", 0);
  std::vector<std::vector<Scalar>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw ParseError("matrix row must be an array", 0);
    std::vector<Scalar> row;
    for (const auto& x : r) row.push_back(scalar_from_json(x));
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("ragged matrix rows", 0);
    rows.push_back(std::move(row));
  }
  if (rows.front().empty()) return Matrix(static_cast<int>(rows.size()), 0);
  return Matrix::from_rows(rows);
}

nlohmann::json to_json(const Subspace& u) {
  nlohmann::json piv = nlohmann::json::array();
  for (int p : u.pivots()) piv.push_back(p + 1);
  return {{"d", u.ambient()}, {"dim", u.dim()}, {"pivots", piv}, {"basis", to_json(u.basis())}};
}

Subspace subspace_from_json(const nlohmann::json& j) {
  try {
    const int d = j.at("d").get<int>();
    Matrix b = matrix_from_json(j.at("basis"));
    if (b.rows() != d) throw ParseError("subspace basis has wrong row count", 0);
    return Subspace::span(b);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed subspace JSON: ") + e.what(), 0);
  }
}

// ---------------------------------------------------------------------------
// Terms

std::string to_string(LatticeMode m) { return m == LatticeMode::Involutive ? "inv" : "plain"; }

LatticeMode parse_lattice_mode(std::string_view s) {
  if (s == "inv") return LatticeMode::Involutive;
  if (s == "plain") return LatticeMode::Plain;
  throw UsageError("unknown lattice mode '" + std::string(s) + "' (expected inv or plain)");
}

LatticeTerm::LatticeTerm() : LatticeTerm(zero()) {}

LatticeTerm LatticeTerm::intern(LOp op, int index, std::vector<LatticeTerm> kids) {
  const LNode* a = kids.size() > 0 ? kids[0].n_.get() : nullptr;
  const LNode* b = kids.size() > 1 ? kids[1].n_.get() : nullptr;
  using Key = std::tuple<int, int, std::uint64_t, std::uint64_t>;
  static std::mutex mu;
  static auto* table = new std::map<Key, std::shared_ptr<const LNode>>();
  static std::uint64_t next = 1;
  const Key key{static_cast<int>(op), index, a ? a->id : 0, b ? b->id : 0};
  std::lock_guard<std::mutex> lock(mu);
  auto it = table->find(key);
  if (it != table->end()) return LatticeTerm(it->second);
  auto n = std::make_shared<LNode>();
  n->op = op;
  n->index = index;
  n->id = next++;
  n->kids = std::move(kids);
  std::shared_ptr<const LNode> out = n;
  table->emplace(key, out);
  return LatticeTerm(out);
}

LatticeTerm LatticeTerm::var(int index) {
  if (index < 0) throw UsageError("negative variable index");
  return intern(LOp::Var, index, {});
}

LatticeTerm LatticeTerm::zero() {
  static const LatticeTerm* z = new LatticeTerm(intern(LOp::Zero, 0, {}));
  return *z;
}

LatticeTerm LatticeTerm::one() { return intern(LOp::One, 0, {}); }

LatticeTerm LatticeTerm::join(const LatticeTerm& a, const LatticeTerm& b) {
  return intern(LOp::Join, 0, {a, b});
}

LatticeTerm LatticeTerm::meet(const LatticeTerm& a, const LatticeTerm& b) {
  return intern(LOp::Meet, 0, {a, b});
}

LatticeTerm LatticeTerm::perp(const LatticeTerm& a) { return intern(LOp::Perp, 0, {a}); }

LOp LatticeTerm::op() const noexcept { return n_->op; }
std::uint64_t LatticeTerm::id() const noexcept { return n_->id; }

const LatticeTerm& LatticeTerm::lhs() const {
  if (n_->kids.empty()) throw UsageError("lattice term has no operands");
  return n_->kids[0];
}

const LatticeTerm& LatticeTerm::rhs() const {
  if (n_->kids.size() < 2) throw UsageError("lattice term has no second operand");
  return n_->kids[1];
}

int LatticeTerm::index() const {
  if (op() != LOp::Var) throw UsageError("not a variable");
  return n_->index;
}

LatticeTerm expand_derived(const LatticeTerm& t) {
  switch (t.op()) {
    case LOp::Var:
    case LOp::Zero:
      return t;
    case LOp::One:
      return LatticeTerm::perp(LatticeTerm::zero());
    case LOp::Join:
      return LatticeTerm::join(expand_derived(t.lhs()), expand_derived(t.rhs()));
    case LOp::Meet:
      return LatticeTerm::perp(LatticeTerm::join(LatticeTerm::perp(expand_derived(t.lhs())),
                                                 LatticeTerm::perp(expand_derived(t.rhs()))));
    case LOp::Perp:
      return LatticeTerm::perp(expand_derived(t.lhs()));
  }
  return t;
}

int depth(const LatticeTerm& t) {
  int d = 0;
  for (const auto& k : t.node().kids) d = std::max(d, depth(k) + 1);
  return d;
}

int surface_depth(const LatticeTerm& t) {
  if (t.op() == LOp::Perp) {
    const LatticeTerm& a = t.lhs();
    if (a.op() == LOp::Zero) return 0;
    if (a.op() == LOp::Join && a.lhs().op() == LOp::Perp && a.rhs().op() == LOp::Perp) {
      return 1 + std::max(surface_depth(a.lhs().lhs()), surface_depth(a.rhs().lhs()));
    }
  }
  int d = 0;
  for (const auto& k : t.node().kids) d = std::max(d, surface_depth(k) + 1);
  return d;
}

namespace {

void collect_vars(const LatticeTerm& t, std::vector<int>& out) {
  if (t.op() == LOp::Var) out.push_back(t.index());
  for (const auto& k : t.node().kids) collect_vars(k, out);
}

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string var_name(int i, const std::vector<std::string>* names) {
  if (names && i < static_cast<int>(names->size())) return (*names)[i];
  return "x" + std::to_string(i + 1);
}

std::string term_text(const LatticeTerm& t, int prec, const std::vector<std::string>* names) {
  switch (t.op()) {
    case LOp::Var:
      return var_name(t.index(), names);
    case LOp::Zero:
      return "0";
    case LOp::One:
      return "1";
    case LOp::Perp:
      return term_text(t.lhs(), 3, names) + "'";
    case LOp::Join:
    case LOp::Meet: {
      const int p = t.op() == LOp::Join ? 1 : 2;
      std::string s = term_text(t.lhs(), p, names) + (p == 1 ? " + " : " & ") + term_text(t.rhs(), p + 1, names);
      return p < prec ? "(" + s + ")" : s;
    }
  }
  return {};
}

}  // namespace

std::vector<int> variables(const LatticeTerm& t) {
  std::vector<int> v;
  collect_vars(t, v);
  sort_unique(v);
  return v;
}

bool uses_perp(const LatticeTerm& t) {
  if (t.op() == LOp::Perp) return true;
  for (const auto& k : t.node().kids) {
    if (uses_perp(k)) return true;
  }
  return false;
}

std::string to_text(const LatticeTerm& t, const std::vector<std::string>* names) { return term_text(t, 0, names); }

// ---------------------------------------------------------------------------
// Formulas

namespace {

std::shared_ptr<const LFNode> lf_node(LFNode n) { return std::make_shared<const LFNode>(std::move(n)); }

LFNode lf(LFKind k) {
  LFNode n;
  n.kind = k;
  return n;
}

}  // namespace

LatticeFormula::LatticeFormula() : LatticeFormula(top()) {}

LatticeFormula LatticeFormula::top() {
  static const std::shared_ptr<const LFNode> n = lf_node(lf(LFKind::True));
  return LatticeFormula(n);
}

LatticeFormula LatticeFormula::bottom() {
  static const std::shared_ptr<const LFNode> n = lf_node(lf(LFKind::False));
  return LatticeFormula(n);
}

LatticeFormula LatticeFormula::eq(const LatticeTerm& a, const LatticeTerm& b) {
  LFNode n = lf(LFKind::Eq);
  n.lhs = a;
  n.rhs = b;
  return LatticeFormula(lf_node(std::move(n)));
}

LatticeFormula LatticeFormula::negate(const LatticeFormula& a) {
  if (a.kind() == LFKind::True) return bottom();
  if (a.kind() == LFKind::False) return top();
  if (a.kind() == LFKind::Not) return a.node().kids[0];
  LFNode n = lf(LFKind::Not);
  n.kids.push_back(a);
  return LatticeFormula(lf_node(std::move(n)));
}

LatticeFormula LatticeFormula::conj(std::vector<LatticeFormula> parts) {
  std::vector<LatticeFormula> flat;
  for (auto& p : parts) {
    if (p.kind() == LFKind::True) continue;
    if (p.kind() == LFKind::False) return bottom();
    if (p.kind() == LFKind::And) {
      for (const auto& k : p.node().kids) flat.push_back(k);
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return top();
  if (flat.size() == 1) return flat[0];
  LFNode n = lf(LFKind::And);
  n.kids = std::move(flat);
  return LatticeFormula(lf_node(std::move(n)));
}

LatticeFormula LatticeFormula::disj(std::vector<LatticeFormula> parts) {
  std::vector<LatticeFormula> flat;
  for (auto& p : parts) {
    if (p.kind() == LFKind::False) continue;
    if (p.kind() == LFKind::True) return top();
    if (p.kind() == LFKind::Or) {
      for (const auto& k : p.node().kids) flat.push_back(k);
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return bottom();
  if (flat.size() == 1) return flat[0];
  LFNode n = lf(LFKind::Or);
  n.kids = std::move(flat);
  return LatticeFormula(lf_node(std::move(n)));
}

LatticeFormula LatticeFormula::exists(std::vector<int> vars, const LatticeFormula& body) {
  if (vars.empty()) return body;
  LFNode n = lf(LFKind::Exists);
  n.bound = std::move(vars);
  n.kids.push_back(body);
  return LatticeFormula(lf_node(std::move(n)));
}

LatticeFormula LatticeFormula::forall(std::vector<int> vars, const LatticeFormula& body) {
  if (vars.empty()) return body;
  LFNode n = lf(LFKind::Forall);
  n.bound = std::move(vars);
  n.kids.push_back(body);
  return LatticeFormula(lf_node(std::move(n)));
}

LFKind LatticeFormula::kind() const noexcept { return n_->kind; }

bool LatticeFormula::quantifier_free() const {
  if (kind() == LFKind::Exists || kind() == LFKind::Forall) return false;
  for (const auto& k : node().kids) {
    if (!k.quantifier_free()) return false;
  }
  return true;
}

namespace {

void collect_equations(const LatticeFormula& f, std::vector<std::pair<LatticeTerm, LatticeTerm>>& out) {
  if (f.kind() == LFKind::Eq) {
    std::pair<LatticeTerm, LatticeTerm> e{f.node().lhs, f.node().rhs};
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    return;
  }
  for (const auto& k : f.node().kids) collect_equations(k, out);
}

std::string formula_text(const LatticeFormula& f, int prec, const std::vector<std::string>* names) {
  const LFNode& n = f.node();
  switch (n.kind) {
    case LFKind::True:
      return "true";
    case LFKind::False:
      return "false";
    case LFKind::Eq:
      return to_text(n.lhs, names) + " = " + to_text(n.rhs, names);
    case LFKind::Not: {
      const LFNode& k = n.kids[0].node();
      if (k.kind == LFKind::Eq) return to_text(k.lhs, names) + " != " + to_text(k.rhs, names);
      return "!" + formula_text(n.kids[0], 3, names);
    }
    case LFKind::And:
    case LFKind::Or: {
      const int p = n.kind == LFKind::And ? 2 : 1;
      std::string s;
      for (const auto& k : n.kids) {
        if (!s.empty()) s += p == 2 ? " && " : " || ";
        s += formula_text(k, p + 1, names);
      }
      return p < prec ? "(" + s + ")" : s;
    }
    case LFKind::Exists:
    case LFKind::Forall: {
      std::string s = n.kind == LFKind::Exists ? "E" : "A";
      for (int v : n.bound) s += " " + var_name(v, names);
      s += " . " + formula_text(n.kids[0], 0, names);
      return prec > 0 ? "(" + s + ")" : s;
    }
  }
  return {};
}

}  // namespace

std::vector<std::pair<LatticeTerm, LatticeTerm>> equations(const LatticeFormula& f) {
  std::vector<std::pair<LatticeTerm, LatticeTerm>> out;
  collect_equations(f, out);
  return out;
}

std::vector<int> variables(const LatticeFormula& f) {
  std::vector<int> v;
  for (const auto& [a, b] : equations(f)) {
    collect_vars(a, v);
    collect_vars(b, v);
  }
  std::function<void(const LatticeFormula&)> bound = [&](const LatticeFormula& g) {
    for (int x : g.node().bound) v.push_back(x);
    for (const auto& k : g.node().kids) bound(k);
  };
  bound(f);
  sort_unique(v);
  return v;
}

int max_depth(const LatticeFormula& f) {
  int d = 0;
  for (const auto& [a, b] : equations(f)) d = std::max({d, depth(a), depth(b)});
  return d;
}

std::string to_text(const LatticeFormula& f, const std::vector<std::string>* names) {
  return formula_text(f, 0, names);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, Zero, One, Plus, Amp, Prime, Eq, Neq, And, Or, Not, LParen, RParen, Dot, Exists, Forall, True, False, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    auto two = [&](std::string_view t) { return s.substr(i, 2) == t; };
    if (two("&&")) {
      out.push_back({Tok::And, i, "&&"});
      i += 2;
    } else if (two("||")) {
      out.push_back({Tok::Or, i, "||"});
      i += 2;
    } else if (two("!=")) {
      out.push_back({Tok::Neq, i, "!="});
      i += 2;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string w(s.substr(i, j - i));
      Tok k = Tok::Ident;
      if (w == "E") k = Tok::Exists;
      else if (w == "A") k = Tok::Forall;
      else if (w == "true") k = Tok::True;
      else if (w == "false") k = Tok::False;
      out.push_back({k, i, std::move(w)});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      const std::string_view w = s.substr(i, j - i);
      if (w == "0") out.push_back({Tok::Zero, i, "0"});
      else if (w == "1") out.push_back({Tok::One, i, "1"});
      else throw ParseError("only the constants 0 and 1 are allowed", i);
      i = j;
    } else {
      Tok k;
      switch (c) {
        case '+': k = Tok::Plus; break;
        case '&': k = Tok::Amp; break;
        case '\'': k = Tok::Prime; break;
        case '=': k = Tok::Eq; break;
        case '!': k = Tok::Not; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '.': k = Tok::Dot; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", i);
      }
      out.push_back({k, i, std::string(1, c)});
      ++i;
    }
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

bool x_index(const std::string& w, int& idx) {
  if (w.size() < 2 || w[0] != 'x') return false;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(w[i]))) return false;
  }
  if (w[1] == '0') return false;
  idx = std::stoi(w.substr(1)) - 1;
  return true;
}

class LatticeParser {
 public:
  LatticeParser(std::string_view text, LatticeMode mode) : toks_(tokenize(text)), mode_(mode) { number_variables(); }

  ParsedFormula formula_all() {
    LatticeFormula f = disj();
    if (cur().kind != Tok::End) fail("unexpected token '" + cur().text + "'");
    return {f, names_, mode_};
  }

  LatticeTerm term_all() {
    LatticeTerm t = join_term();
    if (cur().kind != Tok::End) fail("unexpected token '" + cur().text + "'");
    return t;
  }

 private:
  void number_variables() {
    int max_x = -1;
    std::vector<std::string> others;
    for (const auto& t : toks_) {
      if (t.kind != Tok::Ident) continue;
      int idx;
      if (x_index(t.text, idx)) {
        if (idx > 98) throw ParseError("variable index above 99", t.offset);
        max_x = std::max(max_x, idx);
      } else if (std::find(others.begin(), others.end(), t.text) == others.end()) {
        others.push_back(t.text);
      }
    }
    for (int i = 0; i <= max_x; ++i) names_.push_back("x" + std::to_string(i + 1));
    for (auto& o : others) names_.push_back(o);
  }

  int lookup(const std::string& w) const {
    int idx;
    if (x_index(w, idx)) return idx;
    return static_cast<int>(std::find(names_.begin(), names_.end(), w) - names_.begin());
  }

  const Token& cur() const { return toks_[pos_]; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, cur().offset); }
  bool accept(Tok k) {
    if (cur().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }

  LatticeFormula disj() {
    std::vector<LatticeFormula> parts{conj()};
    while (accept(Tok::Or)) parts.push_back(conj());
    return LatticeFormula::disj(std::move(parts));
  }

  LatticeFormula conj() {
    std::vector<LatticeFormula> parts{unary()};
    while (accept(Tok::And)) parts.push_back(unary());
    return LatticeFormula::conj(std::move(parts));
  }

  LatticeFormula unary() {
    if (accept(Tok::Not)) return LatticeFormula::negate(unary());
    if (cur().kind == Tok::Exists || cur().kind == Tok::Forall) {
      const bool ex = cur().kind == Tok::Exists;
      ++pos_;
      std::vector<int> vars;
      while (cur().kind == Tok::Ident) {
        vars.push_back(lookup(cur().text));
        ++pos_;
      }
      if (vars.empty()) fail("expected quantified variable");
      expect(Tok::Dot, "'.'");
      LatticeFormula body = disj();
      return ex ? LatticeFormula::exists(vars, body) : LatticeFormula::forall(vars, body);
    }
    if (accept(Tok::True)) return LatticeFormula::top();
    if (accept(Tok::False)) return LatticeFormula::bottom();
    if (cur().kind == Tok::LParen) {
      const std::size_t save = pos_;
      std::size_t err_at = 0;
      std::string err;
      try {
        ++pos_;
        LatticeFormula f = disj();
        expect(Tok::RParen, "')'");
        const Tok k = cur().kind;
        if (k != Tok::Eq && k != Tok::Neq && k != Tok::Plus && k != Tok::Amp && k != Tok::Prime) return f;
      } catch (const ParseError& e) {
        err_at = e.offset();
        err = e.what();
      }
      pos_ = save;
      try {
        return equation();
      } catch (const ParseError& e) {
        if (err_at > e.offset()) throw ParseError(err.substr(0, err.rfind(" at offset ")), err_at);
        throw;
      }
    }
    return equation();
  }

  LatticeFormula equation() {
    LatticeTerm a = join_term();
    if (accept(Tok::Eq)) return LatticeFormula::eq(a, join_term());
    if (accept(Tok::Neq)) return LatticeFormula::negate(LatticeFormula::eq(a, join_term()));
    fail("expected '=' or '!='");
  }

  LatticeTerm join_term() {
    LatticeTerm t = meet_term();
    while (accept(Tok::Plus)) t = LatticeTerm::join(t, meet_term());
    return t;
  }

  LatticeTerm meet_term() {
    LatticeTerm t = postfix();
    while (accept(Tok::Amp)) {
      LatticeTerm r = postfix();
      t = mode_ == LatticeMode::Plain ? LatticeTerm::meet(t, r)
                                      : LatticeTerm::perp(LatticeTerm::join(LatticeTerm::perp(t), LatticeTerm::perp(r)));
    }
    return t;
  }

  LatticeTerm postfix() {
    LatticeTerm t = atom();
    while (cur().kind == Tok::Prime) {
      if (mode_ == LatticeMode::Plain) fail("orthocomplement is not available in plain mode");
      ++pos_;
      t = LatticeTerm::perp(t);
    }
    return t;
  }

  LatticeTerm atom() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Ident:
        ++pos_;
        return LatticeTerm::var(lookup(t.text));
      case Tok::Zero:
        ++pos_;
        return LatticeTerm::zero();
      case Tok::One:
        ++pos_;
        return mode_ == LatticeMode::Plain ? LatticeTerm::one() : LatticeTerm::perp(LatticeTerm::zero());
      case Tok::LParen: {
        ++pos_;
        LatticeTerm inner = join_term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail(t.kind == Tok::End ? "unexpected end of input" : "expected term, found '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  LatticeMode mode_;
  std::size_t pos_ = 0;
  std::vector<std::string> names_;
};

}  // namespace

ParsedFormula parse_lattice_formula(std::string_view text, LatticeMode mode) {
  LatticeParser p(text, mode);
  return p.formula_all();
}

LatticeTerm parse_lattice_term(std::string_view text, LatticeMode mode) {
  LatticeParser p(text, mode);
  return p.term_all();
}

// ---------------------------------------------------------------------------
// Evaluation

LatticeSpace LatticeSpace::make(int d, FieldKind kind, const FormConstants& alpha) {
  if (d < 1) throw UsageError("dimension must be positive");
  if (alpha.dim() != d) throw UsageError("form constants length does not match dimension");
  if (kind == FieldKind::Rational) {
    for (const auto& a : alpha.values()) {
      if (!field_contains(kind, a)) throw UsageError("form constant outside the field");
    }
  }
  return LatticeSpace{d, kind, alpha};
}

namespace {

class TermEvaluator {
 public:
  TermEvaluator(const std::vector<Subspace>& u, const LatticeSpace& space) : u_(u), space_(space) {
    for (const auto& x : u) {
      if (x.ambient() != space.d) throw UsageError("subspace dimension mismatch");
    }
  }

  Subspace operator()(const LatticeTerm& t) {
    auto it = memo_.find(t.id());
    if (it != memo_.end()) return it->second;
    Subspace v;
    switch (t.op()) {
      case LOp::Var:
        if (t.index() >= static_cast<int>(u_.size()) || u_[t.index()].ambient() == 0) {
          throw UsageError("unbound variable x" + std::to_string(t.index() + 1));
        }
        v = u_[t.index()];
        break;
      case LOp::Zero:
        v = Subspace::zero(space_.d);
        break;
      case LOp::One:
        v = Subspace::full(space_.d);
        break;
      case LOp::Join:
        v = join((*this)(t.lhs()), (*this)(t.rhs()));
        break;
      case LOp::Meet:
        v = meet((*this)(t.lhs()), (*this)(t.rhs()));
        break;
      case LOp::Perp:
        v = perp(space_.kind, (*this)(t.lhs()), space_.alpha);
        break;
    }
    memo_.emplace(t.id(), v);
    return v;
  }

 private:
  const std::vector<Subspace>& u_;
  const LatticeSpace& space_;
  std::unordered_map<std::uint64_t, Subspace> memo_;
};

bool eval_rec(const LatticeFormula& f, std::vector<Subspace>& u, const LatticeSpace& space,
              const BoundedSearch* search, const std::vector<Subspace>* pool) {
  const LFNode& n = f.node();
  switch (n.kind) {
    case LFKind::True:
      return true;
    case LFKind::False:
      return false;
    case LFKind::Eq: {
      TermEvaluator ev(u, space);
      return ev(n.lhs) == ev(n.rhs);
    }
    case LFKind::Not:
      return !eval_rec(n.kids[0], u, space, search, pool);
    case LFKind::And:
      for (const auto& k : n.kids) {
        if (!eval_rec(k, u, space, search, pool)) return false;
      }
      return true;
    case LFKind::Or:
      for (const auto& k : n.kids) {
        if (eval_rec(k, u, space, search, pool)) return true;
      }
      return false;
    case LFKind::Exists:
    case LFKind::Forall: {
      if (!search) throw UsageError("quantified lattice formula: use the bounded search evaluator");
      const bool ex = n.kind == LFKind::Exists;
      int need = 0;
      for (int v : n.bound) need = std::max(need, v + 1);
      if (static_cast<int>(u.size()) < need) u.resize(need);
      std::vector<Subspace> saved;
      for (int v : n.bound) saved.push_back(u[v]);
      std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == n.bound.size()) return eval_rec(n.kids[0], u, space, search, pool);
        for (const auto& cand : *pool) {
          u[n.bound[i]] = cand;
          const bool r = rec(i + 1);
          if (ex && r) return true;
          if (!ex && !r) return false;
        }
        return !ex;
      };
      const bool r = rec(0);
      for (std::size_t i = 0; i < n.bound.size(); ++i) u[n.bound[i]] = saved[i];
      return r;
    }
  }
  return false;
}

}  // namespace

Subspace eval_term(const LatticeTerm& t, const std::vector<Subspace>& u, const LatticeSpace& space) {
  TermEvaluator ev(u, space);
  return ev(t);
}

bool eval_formula(const LatticeFormula& f, const std::vector<Subspace>& u, const LatticeSpace& space) {
  std::vector<Subspace> env = u;
  return eval_rec(f, env, space, nullptr, nullptr);
}

std::vector<Subspace> enumerate_bounded_subspaces(int d, int height) {
  std::vector<Subspace> out;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    PivotMap f;
    for (int i = 0; i < d; ++i) {
      if (mask & (1u << i)) f.push_back(i);
    }
    std::vector<std::pair<int, int>> fill;
    for (std::size_t j = 0; j < f.size(); ++j) {
      for (int i = f[j] + 1; i < d; ++i) {
        if (std::find(f.begin(), f.end(), i) == f.end()) fill.emplace_back(i, static_cast<int>(j));
      }
    }
    std::vector<int> vals(fill.size(), -height);
    while (true) {
      Matrix m(d, static_cast<int>(f.size()));
      for (std::size_t j = 0; j < f.size(); ++j) m(f[j], static_cast<int>(j)) = Scalar(1);
      for (std::size_t q = 0; q < fill.size(); ++q) m(fill[q].first, fill[q].second) = Scalar(vals[q]);
      out.push_back(Subspace::span(m));
      std::size_t q = 0;
      while (q < vals.size() && vals[q] == height) vals[q++] = -height;
      if (q == vals.size()) break;
      ++vals[q];
    }
  }
  return out;
}

bool eval_formula_bounded(const LatticeFormula& f, const std::vector<Subspace>& u,
                          const LatticeSpace& space, const BoundedSearch& search) {
  const std::vector<Subspace> pool = enumerate_bounded_subspaces(space.d, search.height);
  std::vector<Subspace> env = u;
  return eval_rec(f, env, space, &search, &pool);
}

std::vector<Subspace> theta_span(const std::vector<Matrix>& mats) {
  std::vector<Subspace> out;
  for (const auto& a : mats) {
    if (!mats.empty() && a.rows() != mats.front().rows()) throw UsageError("theta_span: dimension mismatch");
    out.push_back(Subspace::span(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flattening

namespace {

class Flattener {
 public:
  Flattener(int n, std::vector<std::string> names) {
    sys_.num_original = n;
    sys_.names = std::move(names);
    for (int i = static_cast<int>(sys_.names.size()); i < n; ++i) sys_.names.push_back("x" + std::to_string(i + 1));
    sys_.names.resize(n);
  }

  SpecialSystem run(const LatticeFormula& f) {
    sys_.residual = rewrite(f);
    return std::move(sys_);
  }

 private:
  std::string fresh_name() {
    while (true) {
      std::string s = "z" + std::to_string(++counter_);
      if (std::find(sys_.names.begin(), sys_.names.end(), s) == sys_.names.end()) return s;
    }
  }

  int name_of(const LatticeTerm& t) {
    if (t.op() == LOp::Var) {
      if (t.index() >= sys_.num_original) throw UsageError("flatten_special: variable outside the declared range");
      return t.index();
    }
    auto it = memo_.find(t.id());
    if (it != memo_.end()) return it->second;
    SpecialEquation e{};
    switch (t.op()) {
      case LOp::Zero:
        e.kind = SpecialKind::Zero;
        break;
      case LOp::One:
        e.kind = SpecialKind::One;
        break;
      case LOp::Join:
        e.kind = SpecialKind::Join;
        e.a = name_of(t.lhs());
        e.b = name_of(t.rhs());
        break;
      case LOp::Meet:
        e.kind = SpecialKind::Meet;
        e.a = name_of(t.lhs());
        e.b = name_of(t.rhs());
        break;
      case LOp::Perp:
        e.kind = SpecialKind::Perp;
        e.a = name_of(t.lhs());
        break;
      case LOp::Var:
        break;
    }
    e.target = sys_.num_vars();
    sys_.names.push_back(fresh_name());
    sys_.defs.push_back(e);
    memo_.emplace(t.id(), e.target);
    return e.target;
  }

  LatticeFormula rewrite(const LatticeFormula& f) {
    const LFNode& n = f.node();
    switch (n.kind) {
      case LFKind::True:
      case LFKind::False:
        return f;
      case LFKind::Eq: {
        const int a = name_of(n.lhs);
        const int b = name_of(n.rhs);
        return LatticeFormula::eq(LatticeTerm::var(a), LatticeTerm::var(b));
      }
      case LFKind::Not:
        return LatticeFormula::negate(rewrite(n.kids[0]));
      case LFKind::And:
      case LFKind::Or: {
        std::vector<LatticeFormula> parts;
        for (const auto& k : n.kids) parts.push_back(rewrite(k));
        return n.kind == LFKind::And ? LatticeFormula::conj(std::move(parts)) : LatticeFormula::disj(std::move(parts));
      }
      case LFKind::Exists:
      case LFKind::Forall:
        throw UsageError("flatten_special requires a quantifier-free formula");
    }
    return f;
  }

  SpecialSystem sys_;
  std::unordered_map<std::uint64_t, int> memo_;
  int counter_ = 0;
};

Subspace apply_def(const SpecialEquation& e, const std::vector<Subspace>& all, const LatticeSpace& space) {
  switch (e.kind) {
    case SpecialKind::Zero:
      return Subspace::zero(space.d);
    case SpecialKind::One:
      return Subspace::full(space.d);
    case SpecialKind::Join:
      return join(all[e.a], all[e.b]);
    case SpecialKind::Meet:
      return meet(all[e.a], all[e.b]);
    case SpecialKind::Perp:
      return perp(space.kind, all[e.a], space.alpha);
  }
  return {};
}

}  // namespace

SpecialSystem flatten_special(const LatticeFormula& f, int num_original, std::vector<std::string> names) {
  Flattener fl(num_original, std::move(names));
  return fl.run(f);
}

std::vector<Subspace> eval_system(const SpecialSystem& sys, const std::vector<Subspace>& u,
                                  const LatticeSpace& space) {
  if (static_cast<int>(u.size()) < sys.num_original) throw UsageError("eval_system: missing values for original variables");
  std::vector<Subspace> all(u.begin(), u.begin() + sys.num_original);
  all.resize(sys.num_vars());
  for (const auto& e : sys.defs) all[e.target] = apply_def(e, all, space);
  return all;
}

bool satisfies_defs(const SpecialSystem& sys, const std::vector<Subspace>& all, const LatticeSpace& space) {
  for (const auto& e : sys.defs) {
    if (all[e.target] != apply_def(e, all, space)) return false;
  }
  return true;
}

std::string to_text(const SpecialSystem& sys) {
  std::string s;
  auto nm = [&](int i) { return sys.names[i]; };
  for (const auto& e : sys.defs) {
    s += nm(e.target) + " = ";
    switch (e.kind) {
      case SpecialKind::Zero: s += "0"; break;
      case SpecialKind::One: s += "1"; break;
      case SpecialKind::Join: s += nm(e.a) + " + " + nm(e.b); break;
      case SpecialKind::Meet: s += nm(e.a) + " & " + nm(e.b); break;
      case SpecialKind::Perp: s += nm(e.a) + "'"; break;
    }
    s += "; ";
  }
  return s + "| " + to_text(sys.residual, &sys.names);
}

}  // namespace latgeo
