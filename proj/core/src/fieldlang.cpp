#include "latgeo/fieldlang.hpp"

#include <cctype>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "latgeo/errors.hpp"

namespace latgeo {

using poly::Kind;

namespace {

FNode fnode(FKind k) {
  FNode n;
  n.kind = k;
  return n;
}

std::shared_ptr<const FNode> make_node(FNode n) { return std::make_shared<const FNode>(std::move(n)); }

const Formula& true_formula() {
  static const Formula* f = new Formula(Formula::top());
  return *f;
}

}  // namespace

Formula::Formula() : n_(true_formula().n_) {}

Formula Formula::top() {
  static const std::shared_ptr<const FNode> n = make_node(fnode(FKind::True));
  return Formula(n);
}

Formula Formula::bottom() {
  static const std::shared_ptr<const FNode> n = make_node(fnode(FKind::False));
  return Formula(n);
}

Formula Formula::eq0(const Expr& p) {
  if (p.is_const()) return p.is_zero() ? top() : bottom();
  FNode n = fnode(FKind::Atom);
  n.poly = p;
  return Formula(make_node(std::move(n)));
}

Formula Formula::neq0(const Expr& p) { return negate(eq0(p)); }

Formula Formula::negate(const Formula& a) {
  switch (a.kind()) {
    case FKind::True:
      return bottom();
    case FKind::False:
      return top();
    case FKind::Not:
      return a.node().kids[0];
    default:
      break;
  }
  FNode n = fnode(FKind::Not);
  n.kids.push_back(a);
  return Formula(make_node(std::move(n)));
}

Formula Formula::conj(std::vector<Formula> parts) {
  std::vector<Formula> flat;
  for (auto& p : parts) {
    if (p.is_true()) continue;
    if (p.is_false()) return bottom();
    if (p.kind() == FKind::And) {
      for (const auto& k : p.node().kids) flat.push_back(k);
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return top();
  if (flat.size() == 1) return flat[0];
  FNode n = fnode(FKind::And);
  n.kids = std::move(flat);
  return Formula(make_node(std::move(n)));
}

Formula Formula::disj(std::vector<Formula> parts) {
  std::vector<Formula> flat;
  for (auto& p : parts) {
    if (p.is_false()) continue;
    if (p.is_true()) return top();
    if (p.kind() == FKind::Or) {
      for (const auto& k : p.node().kids) flat.push_back(k);
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return bottom();
  if (flat.size() == 1) return flat[0];
  FNode n = fnode(FKind::Or);
  n.kids = std::move(flat);
  return Formula(make_node(std::move(n)));
}

Formula Formula::implies(const Formula& a, const Formula& b) { return disj({negate(a), b}); }

Formula Formula::exists(std::vector<int> vars, const Formula& body, std::vector<VarBlock> blocks) {
  if (vars.empty() || body.is_true() || body.is_false()) return body;
  FNode n = fnode(FKind::Exists);
  n.bound = std::move(vars);
  n.blocks = std::move(blocks);
  n.kids.push_back(body);
  return Formula(make_node(std::move(n)));
}

Formula Formula::forall(std::vector<int> vars, const Formula& body, std::vector<VarBlock> blocks) {
  if (vars.empty() || body.is_true() || body.is_false()) return body;
  FNode n = fnode(FKind::Forall);
  n.bound = std::move(vars);
  n.blocks = std::move(blocks);
  n.kids.push_back(body);
  return Formula(make_node(std::move(n)));
}

FKind Formula::kind() const noexcept { return n_->kind; }

bool Formula::quantifier_free() const {
  switch (kind()) {
    case FKind::Exists:
    case FKind::Forall:
      return false;
    default:
      for (const auto& k : node().kids) {
        if (!k.quantifier_free()) return false;
      }
      return true;
  }
}

// ---------------------------------------------------------------------------

namespace {

void collect_atoms(const Formula& f, std::unordered_set<const FNode*>& seen_nodes,
                   std::unordered_set<std::uint64_t>& seen, const std::function<void(const Expr&)>& fn) {
  if (!seen_nodes.insert(&f.node()).second) return;
  if (f.kind() == FKind::Atom) {
    if (seen.insert(f.node().poly.id()).second) fn(f.node().poly);
    return;
  }
  for (const auto& k : f.node().kids) collect_atoms(k, seen_nodes, seen, fn);
}

}  // namespace

void for_each_atom(const Formula& f, const std::function<void(const Expr&)>& fn) {
  std::unordered_set<const FNode*> nodes;
  std::unordered_set<std::uint64_t> seen;
  collect_atoms(f, nodes, seen, fn);
}

std::vector<Expr> atoms(const Formula& f) {
  std::vector<Expr> out;
  for_each_atom(f, [&](const Expr& p) { out.push_back(p); });
  return out;
}

namespace {

Formula map_rec(const Formula& f, const std::function<Formula(const Expr&)>& map,
                std::unordered_map<const FNode*, Formula>& memo,
                std::unordered_map<std::uint64_t, Formula>& atom_memo) {
  auto it = memo.find(&f.node());
  if (it != memo.end()) return it->second;
  const FNode& n = f.node();
  Formula out;
  switch (n.kind) {
    case FKind::True:
    case FKind::False:
      out = f;
      break;
    case FKind::Atom: {
      auto a = atom_memo.find(n.poly.id());
      if (a == atom_memo.end()) a = atom_memo.emplace(n.poly.id(), map(n.poly)).first;
      out = a->second;
      break;
    }
    case FKind::Not:
      out = Formula::negate(map_rec(n.kids[0], map, memo, atom_memo));
      break;
    case FKind::And:
    case FKind::Or: {
      std::vector<Formula> parts;
      parts.reserve(n.kids.size());
      for (const auto& k : n.kids) parts.push_back(map_rec(k, map, memo, atom_memo));
      out = n.kind == FKind::And ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
      break;
    }
    case FKind::Exists:
      out = Formula::exists(n.bound, map_rec(n.kids[0], map, memo, atom_memo), n.blocks);
      break;
    case FKind::Forall:
      out = Formula::forall(n.bound, map_rec(n.kids[0], map, memo, atom_memo), n.blocks);
      break;
  }
  memo.emplace(&n, out);
  return out;
}

}  // namespace

Formula map_atoms(const Formula& f, const std::function<Formula(const Expr&)>& map) {
  std::unordered_map<const FNode*, Formula> memo;
  std::unordered_map<std::uint64_t, Formula> atom_memo;
  return map_rec(f, map, memo, atom_memo);
}

FormulaStats stats(const Formula& f) {
  FormulaStats s;
  std::vector<Expr> roots = atoms(f);
  s.atoms = roots.size();
  s.dag_nodes = poly::dag_size(roots);
  poly::DegreeMap deg;
  for (const auto& p : roots) s.max_degree = std::max(s.max_degree, deg.total(p));
  std::function<void(const Formula&)> count = [&](const Formula& g) {
    if (g.kind() == FKind::Atom) ++s.literals;
    for (const auto& k : g.node().kids) count(k);
  };
  count(f);
  return s;
}

int max_variable(const Formula& f) {
  int best = -1;
  for (int v : poly::variables(atoms(f))) best = std::max(best, v);
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    for (int v : g.node().bound) best = std::max(best, v);
    for (const auto& k : g.node().kids) walk(k);
  };
  walk(f);
  return best;
}

// ---------------------------------------------------------------------------

FieldContext make_context(FieldKind kind, const FormConstants& alpha) {
  FieldContext ctx;
  ctx.kind = kind;
  ctx.constants = alpha.values();
  return ctx;
}

namespace {

class FormulaEvaluator {
 public:
  FormulaEvaluator(const std::vector<Scalar>& env, const FieldContext& ctx)
      : env_(env), ctx_(ctx), values_(ctx.kind, &env_, &ctx.constants) {}

  bool operator()(const Formula& f) {
    const FNode& n = f.node();
    switch (n.kind) {
      case FKind::True:
        return true;
      case FKind::False:
        return false;
      case FKind::Atom: {
        auto it = atom_memo_.find(n.poly.id());
        if (it != atom_memo_.end()) return it->second;
        bool v = values_(n.poly).is_zero();
        atom_memo_.emplace(n.poly.id(), v);
        return v;
      }
      case FKind::Not:
        return !(*this)(n.kids[0]);
      case FKind::And:
        for (const auto& k : n.kids) {
          if (!(*this)(k)) return false;
        }
        return true;
      case FKind::Or:
        for (const auto& k : n.kids) {
          if ((*this)(k)) return true;
        }
        return false;
      case FKind::Exists:
      case FKind::Forall:
        return quantified(n);
    }
    return false;
  }

 private:
  bool quantified(const FNode& n) {
    if (!ctx_.witnesses) {
      throw UsageError("quantifier evaluation requires a witness provider");
    }
    const bool exists = n.kind == FKind::Exists;
    for (const auto& cand : ctx_.witnesses(n, env_)) {
      if (cand.size() != n.bound.size()) throw UsageError("witness length does not match block");
      std::vector<Scalar> inner = env_;
      for (std::size_t i = 0; i < n.bound.size(); ++i) {
        const auto v = static_cast<std::size_t>(n.bound[i]);
        if (inner.size() <= v) inner.resize(v + 1);
        inner[v] = cand[i];
      }
      FormulaEvaluator sub(inner, ctx_);
      const bool holds = sub(n.kids[0]);
      if (exists && holds) return true;
      if (!exists && !holds) return false;
    }
    return !exists;
  }

  std::vector<Scalar> env_;
  const FieldContext& ctx_;
  poly::Evaluator values_;
  std::unordered_map<std::uint64_t, bool> atom_memo_;
};

}  // namespace

bool eval_field_formula(const Formula& f, const std::vector<Scalar>& assignment,
                        const FieldContext& ctx) {
  FormulaEvaluator ev(assignment, ctx);
  return ev(f);
}

bool eval_field_formula(const Formula& f, poly::Evaluator& values) {
  const FNode& n = f.node();
  switch (n.kind) {
    case FKind::True:
      return true;
    case FKind::False:
      return false;
    case FKind::Atom:
      return values(n.poly).is_zero();
    case FKind::Not:
      return !eval_field_formula(n.kids[0], values);
    case FKind::And:
      for (const auto& k : n.kids) {
        if (!eval_field_formula(k, values)) return false;
      }
      return true;
    case FKind::Or:
      for (const auto& k : n.kids) {
        if (eval_field_formula(k, values)) return true;
      }
      return false;
    default:
      throw UsageError("eval_field_formula: quantified formula needs a context");
  }
}

// ---------------------------------------------------------------------------

Formula BasicFormula::to_formula() const {
  std::vector<Formula> parts;
  for (const auto& p : zeros) parts.push_back(Formula::eq0(p));
  for (const auto& q : nonzeros) parts.push_back(Formula::neq0(q));
  return Formula::conj(std::move(parts));
}

namespace {

void shannon(const Formula& f, BasicFormula& cur, std::vector<BasicFormula>& out) {
  if (f.is_false()) return;
  if (f.is_true()) {
    out.push_back(cur);
    return;
  }
  const Expr a = atoms(f).front();
  auto restrict_to = [&](bool zero) {
    return map_atoms(f, [&](const Expr& p) {
      if (p == a) return zero ? Formula::top() : Formula::bottom();
      return Formula::eq0(p);
    });
  };
  cur.zeros.push_back(a);
  shannon(restrict_to(true), cur, out);
  cur.zeros.pop_back();
  cur.nonzeros.push_back(a);
  shannon(restrict_to(false), cur, out);
  cur.nonzeros.pop_back();
}

}  // namespace

std::vector<BasicFormula> to_disjoint_basic(const Formula& f) {
  if (!f.quantifier_free()) throw UsageError("to_disjoint_basic requires a quantifier-free formula");
  std::vector<BasicFormula> out;
  BasicFormula cur;
  shannon(f, cur, out);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class ConstantClearer {
 public:
  explicit ConstantClearer(const FormConstants& alpha) {
    t_ = 1;
    for (const auto& a : alpha.values()) {
      if (!a.is_real()) throw UsageError("clear_constants: non-rational constant");
      BigInt den = a.re().get_den();
      mpz_lcm(t_.get_mpz_t(), t_.get_mpz_t(), den.get_mpz_t());
    }
    for (const auto& a : alpha.values()) {
      Rational scaled = a.re() * Rational(t_);
      s_.push_back(scaled.get_num());
    }
  }

  Expr atom(const Expr& p) { return clear(p, deg_.in_constants(p)); }

 private:
  BigInt tpow(int k) const {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), t_.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
  }

  Expr clear(const Expr& e, int k) {
    if (deg_.in_constants(e) == 0) return poly::scale(tpow(k), e);
    const auto key = std::make_pair(e.id(), k);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const poly::Node& n = e.node();
    Expr out;
    if (n.kind == Kind::CSym) {
      if (n.index >= static_cast<int>(s_.size())) {
        throw UsageError("clear_constants: c" + std::to_string(n.index + 1) + " has no value");
      }
      out = Expr(BigInt(s_[n.index] * tpow(k - 1)));
    } else if (n.kind == Kind::Sum) {
      out = Expr(BigInt(n.value * tpow(k)));
      for (const auto& [t, c] : n.terms) out = out + poly::scale(c, clear(t, k));
    } else {
      int used = 0;
      out = Expr(1);
      for (const auto& [f, m] : n.factors) {
        const int df = deg_.in_constants(f);
        used += df * static_cast<int>(m);
        out = out * poly::pow(clear(f, df), m);
      }
      out = poly::scale(tpow(k - used), out);
    }
    memo_.emplace(key, out);
    return out;
  }

  BigInt t_;
  std::vector<BigInt> s_;
  poly::DegreeMap deg_;
  std::map<std::pair<std::uint64_t, int>, Expr> memo_;
};

}  // namespace

Formula clear_constants(const Formula& f, const FormConstants& alpha) {
  ConstantClearer c(alpha);
  return map_atoms(f, [&](const Expr& p) { return Formula::eq0(c.atom(p)); });
}

Expr clear_constants(const Expr& p, const FormConstants& alpha) {
  ConstantClearer c(alpha);
  return c.atom(p);
}

// ---------------------------------------------------------------------------

namespace {

class FieldParser {
 public:
  FieldParser(std::string_view text, FieldKind kind) : s_(text), kind_(kind) {}

  Formula formula_all() {
    Formula f = disj();
    skip();
    if (pos_ != s_.size()) fail("unexpected input");
    return f;
  }

  Expr poly_all() {
    Expr p = poly_expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip();
    return s_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  bool peek_word(std::string_view w) {
    skip();
    if (s_.substr(pos_, w.size()) != w) return false;
    const std::size_t e = pos_ + w.size();
    return e >= s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[e])) || s_[e] == '_');
  }

  int index_after(char prefix) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != prefix) fail(std::string("expected '") + prefix + "<n>'");
    std::size_t p = pos_ + 1;
    const std::size_t start = p;
    while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
    if (p == start) fail("expected index");
    const int v = std::stoi(std::string(s_.substr(start, p - start)));
    if (v < 1) fail("indices start at 1");
    pos_ = p;
    return v - 1;
  }

  Formula disj() {
    std::vector<Formula> parts{conj()};
    while (accept("||")) parts.push_back(conj());
    return Formula::disj(std::move(parts));
  }

  Formula conj() {
    std::vector<Formula> parts{unary()};
    while (accept("&&")) parts.push_back(unary());
    return Formula::conj(std::move(parts));
  }

  Formula unary() {
    skip();
    if (peek("!=")) fail("unexpected '!='");
    if (accept("!")) return Formula::negate(unary());
    if (peek_word("E") || peek_word("A")) {
      const bool ex = s_[pos_] == 'E';
      ++pos_;
      std::vector<int> vars;
      while (true) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == 'x') {
          vars.push_back(index_after('x'));
        } else {
          break;
        }
      }
      if (vars.empty()) fail("quantifier without variables");
      expect(".");
      Formula body = disj();
      return ex ? Formula::exists(vars, body) : Formula::forall(vars, body);
    }
    if (peek_word("true")) {
      pos_ += 4;
      return Formula::top();
    }
    if (peek_word("false")) {
      pos_ += 5;
      return Formula::bottom();
    }
    if (peek("(")) {
      const std::size_t save = pos_;
      std::size_t formula_error = 0;
      std::string formula_msg;
      try {
        ++pos_;
        Formula f = disj();
        expect(")");
        skip();
        const bool arith = pos_ < s_.size() && std::string_view("+-*=").find(s_[pos_]) != std::string_view::npos;
        if (!arith && !peek("!=")) return f;
      } catch (const ParseError& e) {
        formula_error = e.offset();
        formula_msg = e.what();
      }
      pos_ = save;
      try {
        return relation();
      } catch (const ParseError& e) {
        if (formula_error > e.offset()) throw ParseError(strip_offset(formula_msg), formula_error);
        throw;
      }
    }
    return relation();
  }

  static std::string strip_offset(const std::string& msg) {
    const auto at = msg.rfind(" at offset ");
    return at == std::string::npos ? msg : msg.substr(0, at);
  }

  Formula relation() {
    Expr lhs = poly_expr();
    if (accept("!=")) return Formula::neq0(lhs - poly_expr());
    if (accept("=")) return Formula::eq0(lhs - poly_expr());
    fail("expected '=' or '!='");
  }

  Expr poly_expr() {
    skip();
    Expr acc = term();
    while (true) {
      if (accept("+")) {
        acc = acc + term();
      } else if (peek("-")) {
        ++pos_;
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Expr acc = factor();
    while (true) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  bool factor_start() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '-';
  }

  Expr factor() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == '(') {
      ++pos_;
      Expr e = poly_expr();
      expect(")");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t p = pos_;
      while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
      BigInt v(std::string(s_.substr(pos_, p - pos_)));
      pos_ = p;
      return Expr(v);
    }
    if (c == 'x') {
      const int id = index_after('x');
      bool star = false;
      // A '*' directly after a variable is the involution unless another
      // factor follows it; a minus sign only starts a factor when it is
      // adjacent to the '*' ("x1*-2" multiplies, "x1* - 2" subtracts).
      const std::size_t save = pos_;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        const bool adjacent = pos_ < s_.size() && s_[pos_] == '-';
        if (adjacent || (factor_start() && s_[pos_] != '-')) {
          pos_ = save;
        } else {
          star = true;
        }
      } else {
        pos_ = save;
      }
      return Expr::var(id, star && kind_ == FieldKind::Gaussian);
    }
    if (c == 'c') return Expr::csym(index_after('c'));
    fail("unexpected character");
  }

  std::string_view s_;
  FieldKind kind_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_field_formula(std::string_view text, FieldKind kind) {
  FieldParser p(text, kind);
  return p.formula_all();
}

Expr parse_polynomial(std::string_view text, FieldKind kind) {
  FieldParser p(text, kind);
  return p.poly_all();
}

// ---------------------------------------------------------------------------

namespace {

std::string vars_text(const std::vector<int>& vars) {
  std::string s;
  for (int v : vars) s += " x" + std::to_string(v + 1);
  return s;
}

std::string formula_text(const Formula& f, int parent_prec) {
  const FNode& n = f.node();
  switch (n.kind) {
    case FKind::True:
      return "true";
    case FKind::False:
      return "false";
    case FKind::Atom:
      return poly::to_text(n.poly) + " = 0";
    case FKind::Not:
      if (n.kids[0].kind() == FKind::Atom) return poly::to_text(n.kids[0].node().poly) + " != 0";
      return "!" + formula_text(n.kids[0], 3);
    case FKind::And:
    case FKind::Or: {
      const int prec = n.kind == FKind::And ? 2 : 1;
      std::string s;
      for (const auto& k : n.kids) {
        if (!s.empty()) s += prec == 2 ? " && " : " || ";
        s += formula_text(k, prec);
      }
      return prec < parent_prec ? "(" + s + ")" : s;
    }
    case FKind::Exists:
    case FKind::Forall: {
      std::string s = (n.kind == FKind::Exists ? "E" : "A") + vars_text(n.bound) + " . " +
                      formula_text(n.kids[0], 0);
      return parent_prec > 0 ? "(" + s + ")" : s;
    }
  }
  return {};
}

class JsonWriter {
 public:
  nlohmann::json run(const Formula& f) {
    nlohmann::json body = formula(f);
    nlohmann::json out;
    out["nodes"] = std::move(nodes_);
    out["formula"] = std::move(body);
    return out;
  }

 private:
  std::size_t expr(const Expr& e) {
    auto it = index_.find(e.id());
    if (it != index_.end()) return it->second;
    const poly::Node& n = e.node();
    nlohmann::json j;
    switch (n.kind) {
      case Kind::Const:
        j = {{"k", "const"}, {"v", n.value.get_str()}};
        break;
      case Kind::Var:
        j = {{"k", "var"}, {"id", n.index + 1}, {"star", n.star}};
        break;
      case Kind::CSym:
        j = {{"k", "c"}, {"j", n.index + 1}};
        break;
      case Kind::Sum: {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [t, c] : n.terms) terms.push_back({expr(t), c.get_str()});
        j = {{"k", "sum"}, {"c", n.value.get_str()}, {"t", std::move(terms)}};
        break;
      }
      case Kind::Prod: {
        nlohmann::json fs = nlohmann::json::array();
        for (const auto& [g, k] : n.factors) fs.push_back({expr(g), k});
        j = {{"k", "prod"}, {"f", std::move(fs)}};
        break;
      }
    }
    const std::size_t idx = nodes_.size();
    nodes_.push_back(std::move(j));
    index_.emplace(e.id(), idx);
    return idx;
  }

  nlohmann::json formula(const Formula& f) {
    const FNode& n = f.node();
    switch (n.kind) {
      case FKind::True:
        return {{"op", "true"}};
      case FKind::False:
        return {{"op", "false"}};
      case FKind::Atom:
        return {{"op", "atom"}, {"p", expr(n.poly)}};
      case FKind::Not:
        return {{"op", "not"}, {"arg", formula(n.kids[0])}};
      case FKind::And:
      case FKind::Or: {
        nlohmann::json args = nlohmann::json::array();
        for (const auto& k : n.kids) args.push_back(formula(k));
        return {{"op", n.kind == FKind::And ? "and" : "or"}, {"args", std::move(args)}};
      }
      case FKind::Exists:
      case FKind::Forall: {
        nlohmann::json vars = nlohmann::json::array();
        for (int v : n.bound) vars.push_back(v + 1);
        nlohmann::json j = {{"op", n.kind == FKind::Exists ? "exists" : "forall"},
                            {"vars", std::move(vars)}};
        if (!n.blocks.empty()) {
          nlohmann::json blocks = nlohmann::json::array();
          for (const auto& b : n.blocks) {
            nlohmann::json bv = nlohmann::json::array();
            for (int v : b.vars) bv.push_back(v + 1);
            blocks.push_back({{"var", b.name}, {"sort", b.sort}, {"scalars", std::move(bv)}});
          }
          j["blocks"] = std::move(blocks);
        }
        j["body"] = formula(n.kids[0]);
        return j;
      }
    }
    return {};
  }

  nlohmann::json nodes_ = nlohmann::json::array();
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

Formula formula_from(const nlohmann::json& j, const std::vector<Expr>& nodes) {
  const std::string op = j.at("op").get<std::string>();
  if (op == "true") return Formula::top();
  if (op == "false") return Formula::bottom();
  if (op == "atom") return Formula::eq0(nodes.at(j.at("p").get<std::size_t>()));
  if (op == "not") return Formula::negate(formula_from(j.at("arg"), nodes));
  if (op == "and" || op == "or") {
    std::vector<Formula> parts;
    for (const auto& a : j.at("args")) parts.push_back(formula_from(a, nodes));
    return op == "and" ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
  }
  if (op == "exists" || op == "forall") {
    std::vector<int> vars;
    for (const auto& v : j.at("vars")) vars.push_back(v.get<int>() - 1);
    std::vector<VarBlock> blocks;
    if (j.contains("blocks")) {
      for (const auto& b : j.at("blocks")) {
        VarBlock vb{b.at("var").get<std::string>(), b.at("sort").get<int>(), {}};
        for (const auto& v : b.at("scalars")) vb.vars.push_back(v.get<int>() - 1);
        blocks.push_back(std::move(vb));
      }
    }
    Formula body = formula_from(j.at("body"), nodes);
    return op == "exists" ? Formula::exists(vars, body, blocks) : Formula::forall(vars, body, blocks);
  }
  throw ParseError("unknown formula op '" + op + "'", 0);
}

}  // namespace

std::string to_text(const Formula& f) { return formula_text(f, 0); }

nlohmann::json to_json(const Formula& f) {
  JsonWriter w;
  return w.run(f);
}

Formula formula_from_json(const nlohmann::json& j) {
  try {
    std::vector<Expr> nodes;
    for (const auto& n : j.at("nodes")) {
      const std::string k = n.at("k").get<std::string>();
      if (k == "const") {
        nodes.emplace_back(BigInt(n.at("v").get<std::string>()));
      } else if (k == "var") {
        nodes.push_back(Expr::var(n.at("id").get<int>() - 1, n.at("star").get<bool>()));
      } else if (k == "c") {
        nodes.push_back(Expr::csym(n.at("j").get<int>() - 1));
      } else if (k == "sum") {
        Expr acc(BigInt(n.at("c").get<std::string>()));
        for (const auto& t : n.at("t")) {
          acc = acc + poly::scale(BigInt(t.at(1).get<std::string>()), nodes.at(t.at(0).get<std::size_t>()));
        }
        nodes.push_back(acc);
      } else if (k == "prod") {
        Expr acc(1);
        for (const auto& f : n.at("f")) {
          acc = acc * poly::pow(nodes.at(f.at(0).get<std::size_t>()), f.at(1).get<unsigned>());
        }
        nodes.push_back(acc);
      } else {
        throw ParseError("unknown node kind '" + k + "'", 0);
      }
    }
    return formula_from(j.at("formula"), nodes);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed formula JSON: ") + e.what(), 0);
  }
}

}  // namespace latgeo
