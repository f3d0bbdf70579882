#include "latgeo/homog.hpp"

#include <algorithm>
#include <map>

#include "latgeo/detail/elimination.hpp"
#include "latgeo/errors.hpp"

namespace latgeo::homog {

using gauss::combinations;
using gauss::SymMatrix;
using plucker::PluckerVector;

namespace {

struct SymOps {
  poly::StarMap star_map;
  Expr zero() { return Expr(0); }
  Expr one() { return Expr(1); }
  Expr mul(const Expr& a, const Expr& b) { return a * b; }
  Expr sub(const Expr& a, const Expr& b) { return a - b; }
  bool nonzero(const Expr&) { throw UsageError("homog: unexpected branching"); }
  Expr alpha(int i) { return i == 0 ? Expr(1) : Expr::csym(i); }
  Expr star(const Expr& e) { return star_map(e); }
};

Formula minors_vanish(const SymMatrix& m, int size) {
  if (size > std::min(m.rows(), m.cols())) return Formula::top();
  gauss::MinorCache cache(m);
  std::vector<Formula> parts;
  for (const auto& r : combinations(m.rows(), size)) {
    for (const auto& c : combinations(m.cols(), size)) parts.push_back(Formula::eq0(cache.minor(r, c)));
  }
  return Formula::conj(std::move(parts));
}

Formula some_minor_nonzero(const SymMatrix& m, int size) {
  if (size == 0) return Formula::top();
  if (size > std::min(m.rows(), m.cols())) return Formula::bottom();
  gauss::MinorCache cache(m);
  std::vector<Formula> parts;
  for (const auto& r : combinations(m.rows(), size)) {
    for (const auto& c : combinations(m.cols(), size)) parts.push_back(Formula::neq0(cache.minor(r, c)));
  }
  return Formula::disj(std::move(parts));
}

Formula guard(int d, const PivotMap& f, const VarBlock& b) {
  if (b.sort == 0) return Formula::top();
  return plucker::pivot_guard(d, f, plucker::block_terms(b));
}

/// Disjunction over pivot tuples of the blocks: guards and body(A_f...).
template <class Body>
Formula pivot_cases(int d, const std::vector<const VarBlock*>& blocks, Body body) {
  std::vector<std::vector<PivotMap>> tuples{{}};
  for (const VarBlock* b : blocks) {
    std::vector<std::vector<PivotMap>> next;
    for (const auto& t : tuples) {
      for (const auto& f : combinations(d, b->sort)) {
        auto u = t;
        u.push_back(f);
        next.push_back(std::move(u));
      }
    }
    tuples = std::move(next);
  }
  std::vector<Formula> cases;
  for (const auto& t : tuples) {
    std::vector<Formula> parts;
    std::vector<SymMatrix> mats;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      parts.push_back(guard(d, t[i], *blocks[i]));
      mats.push_back(block_matrix(d, t[i], *blocks[i]));
    }
    parts.push_back(body(mats, t));
    cases.push_back(Formula::conj(std::move(parts)));
  }
  return Formula::disj(std::move(cases));
}

void check_sort(int d, const VarBlock& b) {
  if (b.sort < 0 || b.sort > d) throw UsageError("block " + b.name + " has sort out of range");
}

SymMatrix complement_terms(int d, const SymMatrix& a, const PivotMap& f, FieldKind kind) {
  SymOps ops{poly::StarMap(kind)};
  return detail::ortho_matrix(resize_columns(a, d), f, ops);
}

}  // namespace

SymMatrix block_matrix(int d, const PivotMap& f, const VarBlock& b) {
  if (b.sort == 0) return SymMatrix(d, 0);
  return plucker::recovery_terms(d, f, plucker::block_terms(b));
}

Formula eta_leq(int d, const VarBlock& x0, const VarBlock& x1) {
  check_sort(d, x0);
  check_sort(d, x1);
  if (x0.sort > x1.sort) throw UsageError("eta_leq: sort of first block exceeds the second");
  if (x0.sort == 0 || x1.sort == d) return Formula::top();
  const int k = x1.sort;
  return pivot_cases(d, {&x0, &x1}, [&](const std::vector<SymMatrix>& m, const auto&) {
    return minors_vanish(hstack(m[0], m[1]), k + 1);
  });
}

Formula eta(int d, const VarBlock& x0, const VarBlock& x1) {
  if (x0.sort != x1.sort) throw UsageError("eta: unequal sorts");
  return eta_leq(d, x0, x1);
}

Formula sigma(int d, const VarBlock& x0, const VarBlock& x1, const VarBlock& x2) {
  check_sort(d, x0);
  check_sort(d, x1);
  check_sort(d, x2);
  const int d0 = x0.sort;
  if (x1.sort > d0 || x2.sort > d0 || d0 > x1.sort + x2.sort) {
    throw UsageError("sigma: dimensions violate d1, d2 <= d0 <= d1 + d2");
  }
  return pivot_cases(d, {&x0, &x1, &x2}, [&](const std::vector<SymMatrix>& m, const auto&) {
    const SymMatrix parts = hstack(m[1], m[2]);
    Formula upper = d0 < d ? minors_vanish(hstack(m[0], parts), d0 + 1) : Formula::top();
    return upper && some_minor_nonzero(parts, d0);
  });
}

Formula kappa_leq(int d, const VarBlock& x0, const VarBlock& x1, const FormConstants& alpha, FieldKind kind) {
  check_sort(d, x0);
  check_sort(d, x1);
  if (alpha.dim() != d) throw UsageError("kappa: form constants of the wrong length");
  if (x0.sort + x1.sort > d) throw UsageError("kappa_leq: d0 + d1 exceeds d");
  if (x0.sort == 0 || x1.sort == 0) return Formula::top();
  const int k = d - x1.sort;
  Formula f = pivot_cases(d, {&x0, &x1}, [&](const std::vector<SymMatrix>& m, const std::vector<PivotMap>& fs) {
    return minors_vanish(hstack(m[0], complement_terms(d, m[1], fs[1], kind)), k + 1);
  });
  return clear_constants(f, alpha);
}

Formula kappa(int d, const VarBlock& x0, const VarBlock& x1, const FormConstants& alpha, FieldKind kind) {
  if (x0.sort + x1.sort != d) throw UsageError("kappa: d0 + d1 must equal d");
  if (x1.sort == 0) return Formula::top();
  if (x0.sort == 0) {
    // theta(x1) is the whole space; its complement is 0.
    return Formula::top();
  }
  return kappa_leq(d, x0, x1, alpha, kind);
}

namespace {

HomogeneousFormula on_fresh_blocks(int d, const std::vector<int>& sorts) {
  HomogeneousFormula h;
  h.d = d;
  h.free = plucker::make_layout(d, sorts, 0, "x");
  return h;
}

}  // namespace

HomogeneousFormula build_eta(int d, int d0, int d1) {
  HomogeneousFormula h = on_fresh_blocks(d, {d0, d1});
  h.formula = eta(d, h.free.blocks[0], h.free.blocks[1]);
  return h;
}

HomogeneousFormula build_sigma(int d, int d0, int d1, int d2) {
  HomogeneousFormula h = on_fresh_blocks(d, {d0, d1, d2});
  h.formula = sigma(d, h.free.blocks[0], h.free.blocks[1], h.free.blocks[2]);
  return h;
}

HomogeneousFormula build_kappa(int d, int d0, int d1, const FormConstants& alpha, FieldKind kind) {
  HomogeneousFormula h = on_fresh_blocks(d, {d0, d1});
  h.formula = kappa(d, h.free.blocks[0], h.free.blocks[1], alpha, kind);
  return h;
}

// ---------------------------------------------------------------------------

std::vector<Delta> admissible_deltas(const SpecialSystem& sys, const std::vector<int>& dims, int d, std::size_t cap) {
  if (static_cast<int>(dims.size()) != sys.num_original) {
    throw UsageError("dimension vector has " + std::to_string(dims.size()) + " entries, formula has " +
                     std::to_string(sys.num_original) + " variables");
  }
  for (int k : dims) {
    if (k < 0 || k > d) throw UsageError("dimension " + std::to_string(k) + " out of range");
  }
  std::vector<Delta> out;
  Delta delta(static_cast<std::size_t>(sys.num_vars()), -1);
  for (int i = 0; i < sys.num_original; ++i) delta[i] = dims[i];

  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == sys.defs.size()) {
      if (out.size() >= cap) throw CapacityError("more than " + std::to_string(cap) + " dimension assignments");
      out.push_back(delta);
      return;
    }
    const SpecialEquation& e = sys.defs[pos];
    int lo = 0, hi = 0;
    switch (e.kind) {
      case SpecialKind::Zero:
        lo = hi = 0;
        break;
      case SpecialKind::One:
        lo = hi = d;
        break;
      case SpecialKind::Perp:
        lo = hi = d - delta[e.a];
        break;
      case SpecialKind::Join:
        lo = std::max(delta[e.a], delta[e.b]);
        hi = std::min(d, delta[e.a] + delta[e.b]);
        break;
      case SpecialKind::Meet:
        lo = std::max(0, delta[e.a] + delta[e.b] - d);
        hi = std::min(delta[e.a], delta[e.b]);
        break;
    }
    for (int v = lo; v <= hi; ++v) {
      delta[e.target] = v;
      rec(pos + 1);
    }
    delta[e.target] = -1;
  };
  rec(0);
  return out;
}

namespace {

struct ResidualLiteral {
  int a, b;
  bool negated;
};

int as_variable(const LatticeTerm& t) {
  if (t.op() != LOp::Var) throw UsageError("homog: residual equation between compound terms");
  return t.index();
}

std::vector<ResidualLiteral> residual_literals(const LatticeFormula& f, Quant mode) {
  auto literal = [](const LatticeFormula& g, std::vector<ResidualLiteral>& out) {
    if (g.kind() == LFKind::Eq) {
      out.push_back({as_variable(g.node().lhs), as_variable(g.node().rhs), false});
      return true;
    }
    if (g.kind() == LFKind::Not && g.node().kids[0].kind() == LFKind::Eq) {
      const LFNode& e = g.node().kids[0].node();
      out.push_back({as_variable(e.lhs), as_variable(e.rhs), true});
      return true;
    }
    return false;
  };
  std::vector<ResidualLiteral> out;
  const LFKind outer = mode == Quant::Exists ? LFKind::And : LFKind::Or;
  if (f.kind() == (mode == Quant::Exists ? LFKind::True : LFKind::False)) return out;
  if (literal(f, out)) return out;
  if (f.kind() == outer) {
    for (const auto& k : f.node().kids) {
      if (!literal(k, out)) break;
    }
    if (out.size() == f.node().kids.size()) return out;
  }
  throw UsageError(mode == Quant::Exists
                       ? "homog: exists mode needs a conjunction of equations and negated equations"
                       : "homog: forall mode needs a disjunction of equations and negated equations");
}

}  // namespace

HomogTranslation homog_translate(const ParsedFormula& phi, const std::vector<int>& dims, const FormConstants& alpha,
                                 const HomogOptions& opt) {
  if (!phi.formula.quantifier_free()) throw UsageError("homog: formula must be quantifier free");
  if (phi.mode != LatticeMode::Involutive) throw UsageError("homog: needs the involutive signature");
  const int d = alpha.dim();
  HomogTranslation t;
  t.dims = dims;
  t.alpha = alpha;
  t.kind = opt.kind;
  t.sys = flatten_special(phi.formula, phi.num_vars(), phi.names);
  for (const auto& e : t.sys.defs) {
    if (e.kind == SpecialKind::Meet) throw UsageError("homog: meet is not a special equation");
  }
  const std::vector<ResidualLiteral> lits = residual_literals(t.sys.residual, opt.mode);
  t.deltas = admissible_deltas(t.sys, dims, d, opt.max_deltas);

  HomogeneousFormula& h = t.result;
  h.d = d;
  h.free = plucker::make_layout(d, dims, 0, "x");
  for (int i = 0; i < t.sys.num_original; ++i) h.free.blocks[i].name = t.sys.names[i];

  const bool exists = opt.mode == Quant::Exists;
  std::vector<Formula> per_delta;
  for (const Delta& delta : t.deltas) {
    // Quick rejection: an equation between blocks of different sorts is
    // false, a negated one true (or false in the literal forall rendering).
    bool lits_false = false, lits_true = false;
    for (const auto& l : lits) {
      if (delta[l.a] == delta[l.b]) continue;
      const bool value = l.negated ? !(opt.literal_forall_negation && !exists) : false;
      (value ? lits_true : lits_false) = true;
    }
    if (exists && lits_false) continue;
    if (!exists && lits_true) continue;

    std::vector<VarBlock> blocks(static_cast<std::size_t>(t.sys.num_vars()));
    std::vector<VarBlock> fresh;
    std::vector<int> bound;
    int next = h.free.end;
    for (int v = 0; v < t.sys.num_vars(); ++v) {
      if (v < t.sys.num_original) {
        blocks[v] = h.free.blocks[v];
        continue;
      }
      VarBlock b{t.sys.names[v], delta[v], {}};
      if (delta[v] > 0) {
        const int n = plucker::IndexFamily(d, delta[v]).size();
        for (int i = 0; i < n; ++i) {
          b.vars.push_back(next);
          bound.push_back(next++);
        }
      }
      blocks[v] = b;
      fresh.push_back(b);
    }

    std::vector<Formula> defs;
    for (const auto& e : t.sys.defs) {
      switch (e.kind) {
        case SpecialKind::Join:
          defs.push_back(sigma(d, blocks[e.target], blocks[e.a], blocks[e.b]));
          break;
        case SpecialKind::Perp:
          defs.push_back(kappa(d, blocks[e.target], blocks[e.a], alpha, opt.kind));
          break;
        default:
          break;
      }
    }
    std::vector<Formula> atoms_tr;
    for (const auto& l : lits) {
      if (delta[l.a] != delta[l.b]) {
        atoms_tr.push_back(l.negated && !(opt.literal_forall_negation && !exists) ? Formula::top() : Formula::bottom());
        continue;
      }
      Formula e = eta(d, blocks[l.a], blocks[l.b]);
      atoms_tr.push_back(l.negated ? !e : e);
    }
    Formula body;
    if (exists) {
      defs.insert(defs.end(), atoms_tr.begin(), atoms_tr.end());
      body = Formula::exists(bound, Formula::conj(std::move(defs)), fresh);
    } else {
      body = Formula::forall(bound, Formula::implies(Formula::conj(std::move(defs)), Formula::disj(std::move(atoms_tr))),
                             fresh);
    }
    per_delta.push_back(body);
  }
  h.formula = exists ? Formula::disj(std::move(per_delta)) : Formula::conj(std::move(per_delta));
  return t;
}

std::vector<HomogTranslation> homog_translate_all(const ParsedFormula& phi, const FormConstants& alpha,
                                                  const HomogOptions& opt) {
  const int d = alpha.dim();
  const int n = phi.num_vars();
  std::vector<HomogTranslation> out;
  std::vector<int> dims(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(homog_translate(phi, dims, alpha, opt));
    int i = n - 1;
    while (i >= 0 && dims[i] == d) dims[i--] = 0;
    if (i < 0) break;
    ++dims[i];
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

PluckerVector coordinates_of(const Subspace& u, int sort) {
  const int d = u.ambient();
  if (u.dim() == sort) return plucker::plucker_of(u.basis(), sort);
  // Any member of the requested sort; the formula rejects it.
  return plucker::plucker_of(identity(d), sort);
}

}  // namespace

WitnessProvider witness_provider(const HomogTranslation& t, int bounded_height) {
  const int d = t.result.d;
  const LatticeSpace space = LatticeSpace::make(d, t.kind, t.alpha);
  std::vector<Subspace> bounded;
  if (bounded_height >= 0) bounded = enumerate_bounded_subspaces(d, bounded_height);
  std::map<std::string, int> index;
  for (int v = 0; v < t.sys.num_vars(); ++v) index.emplace(t.sys.names[v], v);

  return [t, space, bounded, index, bounded_height](const FNode& q, const std::vector<Scalar>& env) {
    std::vector<Subspace> u;
    for (int i = 0; i < t.sys.num_original; ++i) {
      u.push_back(plucker::theta_point(plucker::block_value(t.result.free, i, env)));
    }
    const std::vector<Subspace> all = eval_system(t.sys, u, space);
    std::vector<std::vector<Scalar>> out(1);
    for (const VarBlock& b : q.blocks) {
      const PluckerVector r = coordinates_of(all.at(static_cast<std::size_t>(index.at(b.name))), b.sort);
      if (b.sort > 0) out[0].insert(out[0].end(), r.coords.begin(), r.coords.end());
    }
    if (bounded_height >= 0) {
      std::vector<std::vector<Scalar>> combos{{}};
      for (const VarBlock& b : q.blocks) {
        if (b.sort == 0) continue;
        std::vector<std::vector<Scalar>> next;
        for (const auto& c : combos) {
          for (const Subspace& s : bounded) {
            if (s.dim() != b.sort) continue;
            auto e = c;
            const auto r = plucker::plucker_of(s.basis(), b.sort);
            e.insert(e.end(), r.coords.begin(), r.coords.end());
            next.push_back(std::move(e));
          }
        }
        combos = std::move(next);
      }
      out.insert(out.end(), combos.begin(), combos.end());
    }
    return out;
  };
}

bool eval_homog(const HomogTranslation& t, const std::vector<PluckerVector>& points, int bounded_height) {
  FieldContext ctx = make_context(t.kind, t.alpha);
  ctx.witnesses = witness_provider(t, bounded_height);
  return eval_field_formula(t.result.formula, plucker::flatten(t.result.free, points), ctx);
}

// ---------------------------------------------------------------------------

bool atom_is_homogeneous(const Expr& p, const std::vector<VarBlock>& blocks, FieldKind kind) {
  const poly::StarPolynomial s = poly::expand(p, kind).star_stripped();
  if (s.has_constants()) return false;
  std::map<int, std::size_t> owner;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int v : blocks[b].vars) owner[v] = b;
  }
  std::vector<int> degree(blocks.size(), -1);
  for (const auto& [mono, coeff] : s.terms()) {
    std::vector<int> deg(blocks.size(), 0);
    for (const auto& [atom, e] : mono) {
      auto it = owner.find(atom.index);
      if (atom.type == poly::Atom::X && it != owner.end()) deg[it->second] += static_cast<int>(e);
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (degree[b] < 0) degree[b] = deg[b];
      if (degree[b] != deg[b]) return false;
    }
  }
  return true;
}

bool certify_homogeneous(const HomogeneousFormula& h) {
  std::vector<VarBlock> blocks = h.free.blocks;
  std::function<void(const Formula&)> collect = [&](const Formula& f) {
    for (const auto& b : f.node().blocks) blocks.push_back(b);
    for (const auto& k : f.node().kids) collect(k);
  };
  collect(h.formula);
  bool ok = true;
  for_each_atom(h.formula, [&](const Expr& p) {
    if (ok && !atom_is_homogeneous(p, blocks, FieldKind::Gaussian)) ok = false;
  });
  return ok;
}

HomogeneousFormula translate_order_atoms(const std::vector<OrderAtom>& atoms, const std::vector<int>& dims, int d,
                                         const FormConstants& alpha, FieldKind kind) {
  HomogeneousFormula h = on_fresh_blocks(d, dims);
  std::vector<Formula> parts;
  for (const auto& a : atoms) {
    if (a.lhs < 0 || a.rhs < 0 || a.lhs >= static_cast<int>(dims.size()) || a.rhs >= static_cast<int>(dims.size())) {
      throw UsageError("order atom refers to an unknown variable");
    }
    const VarBlock& x = h.free.blocks[a.lhs];
    const VarBlock& y = h.free.blocks[a.rhs];
    if (a.perp) {
      parts.push_back(x.sort + y.sort <= d ? kappa_leq(d, x, y, alpha, kind) : Formula::bottom());
    } else {
      parts.push_back(x.sort <= y.sort ? eta_leq(d, x, y) : Formula::bottom());
    }
  }
  h.formula = Formula::conj(std::move(parts));
  return h;
}

nlohmann::json to_json(const HomogeneousFormula& h) {
  nlohmann::json j = latgeo::to_json(h.formula);
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : h.free.blocks) blocks.push_back({{"var", b.name}, {"sort", b.sort}, {"vars", b.vars}});
  j["blocks"] = blocks;
  j["d"] = h.d;
  return j;
}

}  // namespace latgeo::homog
