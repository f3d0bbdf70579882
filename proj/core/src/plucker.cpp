#include "latgeo/plucker.hpp"

#include <algorithm>
#include <sstream>

#include "latgeo/errors.hpp"

namespace latgeo::plucker {

using gauss::combinations;

IndexFamily::IndexFamily(int d, int k) : d_(d), k_(k) {
  if (d < 0 || k < 0 || k > d) throw UsageError("index family: need 0 <= k <= d");
  tuples_ = combinations(d, k);
  for (std::size_t i = 0; i < tuples_.size(); ++i) pos_.emplace(tuples_[i], static_cast<int>(i));
}

int IndexFamily::position(const std::vector<int>& tuple) const {
  auto it = pos_.find(tuple);
  return it == pos_.end() ? -1 : it->second;
}

bool PluckerVector::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const Scalar& s) { return s.is_zero(); });
}

PluckerVector scaled(const PluckerVector& r, const Scalar& mu) {
  PluckerVector out = r;
  for (auto& c : out.coords) c *= mu;
  return out;
}

bool proportional(const PluckerVector& a, const PluckerVector& b) {
  if (a.d != b.d || a.k != b.k || a.coords.size() != b.coords.size()) return false;
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    for (std::size_t j = i + 1; j < a.coords.size(); ++j) {
      if (a.coords[i] * b.coords[j] != a.coords[j] * b.coords[i]) return false;
    }
    if (a.coords[i].is_zero() != b.coords[i].is_zero()) return false;
  }
  return true;
}

PluckerVector plucker_of_columns(const Matrix& a, const std::vector<int>& cols) {
  const int d = a.rows();
  const int k = static_cast<int>(cols.size());
  if (k > a.cols()) throw UsageError("plucker_of: k = " + std::to_string(k) + " exceeds the column count");
  PluckerVector r{d, k, {}};
  if (k == 0) {
    r.coords.push_back(Scalar(0));
    return r;
  }
  for (const auto& rows : combinations(d, k)) r.coords.push_back(minor(a, rows, cols));
  return r;
}

PluckerVector plucker_of(const Matrix& a, int k) {
  if (k < 0 || k > a.cols() || k > a.rows()) {
    throw UsageError("plucker_of: k = " + std::to_string(k) + " exceeds the column count");
  }
  std::vector<int> cols(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) cols[j] = j;
  return plucker_of_columns(a, cols);
}

PivotMap pivot_of(const PluckerVector& r) {
  if (r.k == 0 || r.is_zero()) throw UsageError("pivot_of: zero vector");
  IndexFamily fam(r.d, r.k);
  for (int i = 0; i < fam.size(); ++i) {
    if (!r.coords[i].is_zero()) return fam[i];
  }
  throw UsageError("pivot_of: zero vector");
}

namespace {

/// Fill positions (i, j) with the index tuple whose coordinate goes there
/// and its sign.  Row i lies strictly between pivots h and h+1 (1-based),
/// columns j <= h receive entries.
struct Fill {
  int row, col;
  std::vector<int> tuple;
  int sign;
};

std::vector<Fill> fill_positions(int d, const PivotMap& f) {
  std::vector<Fill> out;
  const int k = static_cast<int>(f.size());
  for (int i = 0; i < d; ++i) {
    if (std::find(f.begin(), f.end(), i) != f.end()) continue;
    const int h = static_cast<int>(std::count_if(f.begin(), f.end(), [&](int p) { return p < i; }));
    for (int j = 0; j < h; ++j) {
      std::vector<int> t;
      for (int l = 0; l < k; ++l) {
        if (l != j) t.push_back(f[l]);
      }
      t.push_back(i);
      std::sort(t.begin(), t.end());
      out.push_back({i, j, std::move(t), ((h - (j + 1)) % 2 == 0) ? 1 : -1});
    }
  }
  return out;
}

template <class T, class Neg>
BasicMatrix<T> recovery_generic(int d, const PivotMap& f, const std::vector<T>& y, const T& zero, Neg neg) {
  const int k = static_cast<int>(f.size());
  IndexFamily fam(d, k);
  if (static_cast<int>(y.size()) != fam.size()) throw UsageError("recovery: coordinate count mismatch");
  BasicMatrix<T> a(d, k, zero);
  const T& head = y[static_cast<std::size_t>(fam.position(f))];
  for (int j = 0; j < k; ++j) a(f[j], j) = head;
  for (const Fill& p : fill_positions(d, f)) {
    const T& v = y[static_cast<std::size_t>(fam.position(p.tuple))];
    a(p.row, p.col) = p.sign > 0 ? v : neg(v);
  }
  return a;
}

}  // namespace

Recovery recover_matrix(const PluckerVector& r) {
  if (r.k == 0) return {Matrix(r.d, 0), Scalar(1), {}};
  const PivotMap f = pivot_of(r);
  IndexFamily fam(r.d, r.k);
  Recovery out;
  out.f = f;
  out.A = recovery_generic<Scalar>(r.d, f, r.coords, Scalar(0), [](const Scalar& s) { return -s; });
  const Scalar& head = r.coords[static_cast<std::size_t>(fam.position(f))];
  out.lambda = Scalar(1);
  for (int i = 1; i < r.k; ++i) out.lambda *= head;
  return out;
}

bool grassmann_membership(const PluckerVector& r) {
  if (r.k == 0) return true;
  if (r.is_zero()) return false;
  const Recovery rec = recover_matrix(r);
  return plucker_of(rec.A, r.k) == scaled(r, rec.lambda);
}

Subspace theta_point(const PluckerVector& r) {
  if (!grassmann_membership(r)) throw UsageError("theta_point: not a point of the Grassmannian");
  if (r.k == 0) return Subspace::zero(r.d);
  return Subspace::span(recover_matrix(r).A);
}

std::vector<Expr> three_term_relations(int d) {
  IndexFamily fam(d, 2);
  auto p = [&](int a, int b) { return Expr::var(fam.position({a, b})); };
  std::vector<Expr> out;
  for (const auto& q : combinations(d, 4)) {
    const int i = q[0], j = q[1], k = q[2], l = q[3];
    out.push_back(p(i, j) * p(k, l) - p(i, k) * p(j, l) + p(i, l) * p(j, k));
  }
  return out;
}

bool satisfies_three_term_relations(const PluckerVector& r) {
  if (r.k != 2) throw UsageError("three-term relations are defined for k = 2");
  poly::Evaluator ev(FieldKind::Gaussian, &r.coords, nullptr);
  const std::vector<Expr> rel = three_term_relations(r.d);
  return std::all_of(rel.begin(), rel.end(), [&](const Expr& e) { return ev(e).is_zero(); });
}

nlohmann::json to_json(const PluckerVector& r) {
  nlohmann::json j = nlohmann::json::object();
  if (r.k == 0) {
    j[""] = "0";
    return j;
  }
  IndexFamily fam(r.d, r.k);
  for (int i = 0; i < fam.size(); ++i) {
    std::string key;
    for (std::size_t l = 0; l < fam[i].size(); ++l) {
      if (l) key += ',';
      key += std::to_string(fam[i][l] + 1);
    }
    j[key] = r.coords[i].to_string();
  }
  return j;
}

PluckerVector plucker_from_json(const nlohmann::json& j, int d) {
  if (!j.is_object() || j.empty()) throw ParseError("pluecker vector must be a non-empty object", 0);
  int k = -1;
  std::map<std::vector<int>, Scalar> entries;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::vector<int> t;
    std::stringstream ss(it.key());
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("bad index tuple '" + it.key() + "'", 0);
      }
      t.push_back(std::stoi(part) - 1);
    }
    if (k >= 0 && static_cast<int>(t.size()) != k) throw ParseError("index tuples of different lengths", 0);
    k = static_cast<int>(t.size());
    for (std::size_t l = 0; l < t.size(); ++l) {
      if (t[l] < 0 || t[l] >= d || (l > 0 && t[l] <= t[l - 1])) {
        throw ParseError("index tuple '" + it.key() + "' out of range", 0);
      }
    }
    if (!it.value().is_string() && !it.value().is_number_integer()) {
      throw ParseError("coordinate values must be strings", 0);
    }
    entries[t] = it.value().is_string() ? Scalar::parse(it.value().get<std::string>())
                                        : Scalar(it.value().get<long>());
  }
  PluckerVector r{d, k, {}};
  if (k == 0) {
    r.coords.push_back(Scalar(0));
    return r;
  }
  IndexFamily fam(d, k);
  for (const auto& t : fam.tuples()) {
    auto it = entries.find(t);
    r.coords.push_back(it == entries.end() ? Scalar(0) : it->second);
  }
  return r;
}

// ---------------------------------------------------------------------------

SymMatrix recovery_terms(int d, const PivotMap& f, const std::vector<Expr>& y) {
  return recovery_generic<Expr>(d, f, y, Expr(0), [](const Expr& e) { return -e; });
}

Formula pivot_guard(int d, const PivotMap& f, const std::vector<Expr>& y) {
  IndexFamily fam(d, static_cast<int>(f.size()));
  const int head = fam.position(f);
  std::vector<Formula> parts;
  for (int i = 0; i < head; ++i) parts.push_back(Formula::eq0(y[i]));
  parts.push_back(Formula::neq0(y[static_cast<std::size_t>(head)]));
  return Formula::conj(std::move(parts));
}

std::vector<Expr> minor_vector(const SymMatrix& x, const std::vector<int>& cols) {
  gauss::MinorCache cache(x);
  std::vector<Expr> out;
  for (const auto& rows : combinations(x.rows(), static_cast<int>(cols.size()))) {
    out.push_back(cache.minor(rows, cols));
  }
  return out;
}

Formula recovery_equations(int d, const PivotMap& f, const std::vector<Expr>& y) {
  const int k = static_cast<int>(f.size());
  IndexFamily fam(d, k);
  const SymMatrix p = recovery_terms(d, f, y);
  std::vector<int> cols(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) cols[j] = j;
  const std::vector<Expr> dk = minor_vector(p, cols);
  const Expr lambda = poly::pow(y[static_cast<std::size_t>(fam.position(f))], static_cast<unsigned>(k - 1));
  std::vector<Formula> parts;
  for (int i = 0; i < fam.size(); ++i) parts.push_back(Formula::eq0(dk[i] - lambda * y[i]));
  return Formula::conj(std::move(parts));
}

Formula membership_formula(int d, int k, const std::vector<Expr>& y) {
  if (k == 0) return Formula::top();
  std::vector<Formula> cases;
  for (const auto& f : combinations(d, k)) {
    cases.push_back(pivot_guard(d, f, y) && recovery_equations(d, f, y));
  }
  return Formula::disj(std::move(cases));
}

std::vector<Expr> block_terms(const VarBlock& b) {
  std::vector<Expr> out;
  out.reserve(b.vars.size());
  for (int v : b.vars) out.push_back(Expr::var(v));
  return out;
}

Layout make_layout(int d, const std::vector<int>& dims, int base, const std::string& prefix) {
  Layout l;
  l.d = d;
  l.dims = dims;
  int next = base;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (dims[k] < 0 || dims[k] > d) {
      throw UsageError("dimension " + std::to_string(dims[k]) + " out of range for d = " + std::to_string(d));
    }
    VarBlock b{prefix + std::to_string(k + 1), dims[k], {}};
    if (dims[k] > 0) {
      const int n = IndexFamily(d, dims[k]).size();
      for (int i = 0; i < n; ++i) b.vars.push_back(next++);
    }
    l.blocks.push_back(std::move(b));
  }
  l.end = next;
  return l;
}

std::vector<Scalar> flatten(const Layout& layout, const std::vector<PluckerVector>& points, std::vector<Scalar> base) {
  if (points.size() != layout.blocks.size()) throw UsageError("flatten: one point per block required");
  if (static_cast<int>(base.size()) < layout.end) base.resize(static_cast<std::size_t>(layout.end), Scalar(0));
  for (std::size_t k = 0; k < points.size(); ++k) {
    const VarBlock& b = layout.blocks[k];
    if (points[k].k != b.sort) throw UsageError("flatten: point of sort " + std::to_string(points[k].k) +
                                                " for block of sort " + std::to_string(b.sort));
    for (std::size_t i = 0; i < b.vars.size(); ++i) base[static_cast<std::size_t>(b.vars[i])] = points[k].coords[i];
  }
  return base;
}

PluckerVector block_value(const Layout& layout, int k, const std::vector<Scalar>& assignment) {
  const VarBlock& b = layout.blocks.at(static_cast<std::size_t>(k));
  PluckerVector r{layout.d, b.sort, {}};
  if (b.sort == 0) {
    r.coords.push_back(Scalar(0));
    return r;
  }
  for (int v : b.vars) r.coords.push_back(assignment.at(static_cast<std::size_t>(v)));
  return r;
}

namespace {

/// All tuples (one entry per dims[k]) of k-subsets of {0..d-1}.
std::vector<std::vector<std::vector<int>>> selection_tuples(int d, const std::vector<int>& dims) {
  std::vector<std::vector<std::vector<int>>> out{{}};
  for (int k : dims) {
    const auto opts = combinations(d, k);
    std::vector<std::vector<std::vector<int>>> next;
    for (const auto& prefix : out) {
      for (const auto& o : opts) {
        auto t = prefix;
        t.push_back(o);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

PluckerTranslation tau_field_to_plucker(const Formula& psi, const std::vector<int>& dims, int d, FieldKind kind) {
  const int n = static_cast<int>(dims.size());
  const int base = std::max(n * d * d, max_variable(psi) + 1);
  PluckerTranslation out{Formula::top(), make_layout(d, dims, base)};
  const Layout& lay = out.layout;

  std::vector<Formula> parts;
  for (int k = 0; k < n; ++k) parts.push_back(membership_formula(d, dims[k], block_terms(lay.blocks[k])));

  std::vector<Formula> cases;
  for (const auto& fs : selection_tuples(d, dims)) {
    std::vector<Formula> guard;
    std::vector<SymMatrix> subst(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const auto y = block_terms(lay.blocks[k]);
      if (dims[k] > 0) guard.push_back(pivot_guard(d, fs[k], y));
      subst[k] = resize_columns(recovery_terms(d, fs[k], y), d);
    }
    poly::Substitution sub(kind, [&](int v) -> Expr {
      if (v < n * d * d) {
        const int blk = v / (d * d), rem = v % (d * d);
        return subst[blk](rem / d, rem % d);
      }
      return Expr::var(v);
    });
    Formula body = map_atoms(psi, [&](const Expr& p) { return Formula::eq0(sub(p)); });
    guard.push_back(body);
    cases.push_back(Formula::conj(std::move(guard)));
  }
  parts.push_back(Formula::disj(std::move(cases)));
  out.chi = Formula::conj(std::move(parts));
  return out;
}

Formula tau_plucker_to_field(const Formula& chi, const Layout& layout, FieldKind kind) {
  const int d = layout.d;
  const int n = static_cast<int>(layout.dims.size());
  std::vector<Formula> domain;
  std::vector<SymMatrix> xs;
  for (int k = 0; k < n; ++k) {
    xs.push_back(gauss::matrix_variable(k, d));
    domain.push_back(gauss::rank_formula(xs[k], layout.dims[k]));
  }
  std::vector<Formula> cases;
  for (const auto& js : selection_tuples(d, layout.dims)) {
    std::vector<Formula> parts;
    std::map<int, Expr> table;
    for (int k = 0; k < n; ++k) {
      if (layout.dims[k] == 0) continue;
      const SymMatrix sel = select_columns(xs[k], js[k]);
      parts.push_back(gauss::rank_formula(sel, layout.dims[k]));
      const auto dk = minor_vector(xs[k], js[k]);
      for (std::size_t i = 0; i < dk.size(); ++i) table.emplace(layout.blocks[k].vars[i], dk[i]);
    }
    poly::Substitution sub(kind, [&](int v) -> Expr {
      auto it = table.find(v);
      return it == table.end() ? Expr::var(v) : it->second;
    });
    parts.push_back(map_atoms(chi, [&](const Expr& p) { return Formula::eq0(sub(p)); }));
    cases.push_back(Formula::conj(std::move(parts)));
  }
  domain.push_back(Formula::disj(std::move(cases)));
  return Formula::conj(std::move(domain));
}

}  // namespace latgeo::plucker
