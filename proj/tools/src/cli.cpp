#include "latgeo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "latgeo/errors.hpp"
#include "latgeo/fieldlang.hpp"
#include "latgeo/frames.hpp"
#include "latgeo/gauss.hpp"
#include "latgeo/homog.hpp"
#include "latgeo/lattice.hpp"
#include "latgeo/plucker.hpp"
#include "latgeo/sampling.hpp"

namespace latgeo::cli {

namespace {

using json = nlohmann::json;

constexpr std::size_t kDefaultCap = 4096;
constexpr std::size_t kTextLimit = 4000;

struct RawOptions {
  int d = 0;
  std::string alpha;
  std::string field = "rat";
  std::string mode = "inv";
  std::string dims;
  int samples = 100;
  std::uint64_t seed = 1;
  std::size_t cap = 0;
  bool pretty = false;
  bool stats_only = false;
};

struct JobConfig {
  int d = 2;
  FieldKind kind = FieldKind::Rational;
  FormConstants alpha = FormConstants::ones(2);
  LatticeMode mode = LatticeMode::Involutive;
  std::optional<std::vector<int>> dims;
  int samples = 100;
  std::uint64_t seed = 1;
  std::size_t cap = kDefaultCap;
  bool pretty = false;
  bool stats_only = false;

  gauss::Options options() const {
    gauss::Options o;
    o.d = d;
    o.kind = kind;
    o.mode = mode;
    o.max_branches = cap;
    return o;
  }
  LatticeSpace space() const { return LatticeSpace::make(d, kind, alpha); }
};

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("malformed integer list '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

JobConfig resolve(const RawOptions& raw) {
  JobConfig c;
  c.kind = parse_field_kind(raw.field);
  c.mode = parse_lattice_mode(raw.mode);
  if (!raw.alpha.empty()) {
    c.alpha = FormConstants::parse(raw.alpha);
    c.d = raw.d > 0 ? raw.d : c.alpha.dim();
    if (c.alpha.dim() != c.d) throw UsageError("--alpha has length " + std::to_string(c.alpha.dim()) + " but d = " + std::to_string(c.d));
  } else {
    c.d = raw.d > 0 ? raw.d : 2;
    c.alpha = FormConstants::ones(c.d);
  }
  if (c.d < 1) throw UsageError("d must be positive");
  if (!raw.dims.empty()) {
    c.dims = parse_int_list(raw.dims);
    for (int k : *c.dims) {
      if (k < -1 || k > c.d) throw UsageError("dimension " + std::to_string(k) + " outside 0..d");
    }
  }
  if (raw.samples < 0) throw UsageError("-n must be nonnegative");
  c.samples = raw.samples;
  c.seed = raw.seed;
  c.cap = raw.cap > 0 ? raw.cap : gauss::capacity_from_env(kDefaultCap);
  c.pretty = raw.pretty;
  c.stats_only = raw.stats_only;
  return c;
}

json config_json(const JobConfig& c) {
  json a = json::array();
  for (const auto& x : c.alpha.values()) a.push_back(x.to_string());
  json j = {{"d", c.d}, {"field", to_string(c.kind)}, {"alpha", a}, {"mode", to_string(c.mode)}};
  if (c.dims) j["dims"] = *c.dims;
  return j;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

std::string read_payload(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw UsageError("cannot read " + arg.substr(1));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
}

json stats_json(const gauss::Stats& s) {
  return {{"branches", s.branches}, {"equations", s.equations}, {"atoms", s.atoms},
          {"dag_nodes", s.dag_nodes}, {"max_degree", s.max_degree}};
}

std::string formula_text(const Formula& f) {
  if (stats(f).dag_nodes > kTextLimit) return "(formula too large for text; use the JSON output)";
  return to_text(f);
}

std::vector<std::string> vars_of(const ParsedFormula& pf) { return pf.names; }

/// The first equation t1 = t2 becomes t1 = 0.  Used to check that the
/// verification harness detects a broken translation.
LatticeFormula inject_fault(const LatticeFormula& f, bool& done) {
  const LFNode& n = f.node();
  auto kids = [&] {
    std::vector<LatticeFormula> out;
    for (const auto& k : n.kids) out.push_back(inject_fault(k, done));
    return out;
  };
  switch (n.kind) {
    case LFKind::True:
    case LFKind::False:
      return f;
    case LFKind::Eq:
      if (done) return f;
      done = true;
      return LatticeFormula::eq(n.lhs, n.lhs == LatticeTerm::zero() ? LatticeTerm::one() : LatticeTerm::zero());
    case LFKind::Not:
      return LatticeFormula::negate(kids().front());
    case LFKind::And:
      return LatticeFormula::conj(kids());
    case LFKind::Or:
      return LatticeFormula::disj(kids());
    case LFKind::Exists:
      return LatticeFormula::exists(n.bound, kids().front());
    case LFKind::Forall:
      return LatticeFormula::forall(n.bound, kids().front());
  }
  return f;
}

std::size_t entry_size(const Scalar& s) {
  auto bits = [](const Rational& q) {
    return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2) + (sgn(q) != 0 ? 1 : 0);
  };
  return bits(s.re()) + bits(s.im());
}

std::vector<Subspace> spans(const std::vector<Matrix>& mats) {
  std::vector<Subspace> u;
  for (const auto& m : mats) u.push_back(Subspace::span(m));
  return u;
}

// ---------------------------------------------------------------------------

int cmd_translate(const JobConfig& c, const std::string& text, std::ostream& out) {
  const ParsedFormula pf = parse_lattice_formula(text, c.mode);
  gauss::Stats st;
  Formula result;
  if (c.dims) {
    if (static_cast<int>(c.dims->size()) != pf.num_vars()) throw UsageError("--dims needs one entry per variable");
    result = gauss::translate_with_dims(pf.formula, *c.dims, c.alpha, c.options(), &st);
  } else {
    result = gauss::translate_formula(pf.formula, c.alpha, c.options(), &st);
  }
  const FormulaStats fs = stats(result);
  if (c.pretty) {
    out << "input:      " << to_text(pf.formula, &pf.names) << '\n'
        << "d:          " << c.d << '\n'
        << "branches:   " << st.branches << '\n'
        << "equations:  " << st.equations << '\n'
        << "atoms:      " << fs.atoms << '\n'
        << "dag nodes:  " << fs.dag_nodes << '\n'
        << "max degree: " << fs.max_degree << '\n';
    if (!c.stats_only) out << "formula:    " << formula_text(result) << '\n';
    return Ok;
  }
  json j = {{"command", "translate"}, {"config", config_json(c)}, {"input", to_text(pf.formula, &pf.names)},
            {"variables", vars_of(pf)}, {"stats", stats_json(st)}};
  j["stats"]["atoms"] = fs.atoms;
  j["stats"]["dag_nodes"] = fs.dag_nodes;
  j["stats"]["max_degree"] = fs.max_degree;
  j["stats"]["quantifier_free"] = result.quantifier_free();
  if (!c.stats_only) j["formula"] = to_json(result);
  emit(out, j);
  return Ok;
}

struct Sample {
  std::size_t index = 0;
  json inputs;
  bool lattice = false;
  bool translated = false;
  std::size_t size = 0;
};

int report(const JobConfig& c, const std::string& path, const std::string& input, std::size_t agree,
           std::size_t truths, const std::optional<Sample>& worst, bool faulted, std::ostream& out) {
  const std::string summary = std::to_string(agree) + "/" + std::to_string(c.samples) + " agree";
  if (c.pretty) {
    out << summary << '\n';
    if (worst) {
      out << "counterexample (sample " << worst->index << "): lattice " << worst->lattice << ", translated "
          << worst->translated << '\n'
          << worst->inputs.dump() << '\n';
    }
  } else {
    json j = {{"command", "verify"}, {"config", config_json(c)}, {"path", path}, {"input", input},
              {"seed", c.seed}, {"samples", c.samples}, {"agree", agree}, {"lattice_true", truths},
              {"summary", summary}};
    if (faulted) j["fault_injected"] = true;
    if (worst) {
      j["counterexample"] = {{"sample", worst->index}, {"inputs", worst->inputs}, {"lattice", worst->lattice},
                             {"translated", worst->translated}};
    }
    emit(out, j);
  }
  return agree == static_cast<std::size_t>(c.samples) ? Ok : Disagreement;
}

void keep_smallest(std::optional<Sample>& worst, Sample s) {
  if (!worst || s.size < worst->size) worst = std::move(s);
}

int cmd_verify(const JobConfig& c, const std::string& text, bool homog_path, const std::string& quant, bool fault,
               std::ostream& out) {
  const ParsedFormula pf = parse_lattice_formula(text, c.mode);
  if (!pf.formula.quantifier_free()) throw UsageError("verify needs a quantifier-free formula");
  const int n = pf.num_vars();
  bool done = false;
  const LatticeFormula side = fault ? inject_fault(pf.formula, done) : pf.formula;
  const LatticeSpace space = c.space();
  Sampler s(c.seed, c.kind, 5);
  std::size_t agree = 0, truths = 0;
  std::optional<Sample> worst;

  if (homog_path) {
    if (!c.dims || static_cast<int>(c.dims->size()) != n) throw UsageError("--homog needs --dims with one entry per variable");
    homog::HomogOptions ho;
    ho.kind = c.kind;
    ho.mode = quant == "forall" ? homog::Quant::Forall : homog::Quant::Exists;
    ParsedFormula tf = pf;
    tf.formula = side;
    const auto t = homog::homog_translate(tf, *c.dims, c.alpha, ho);
    for (int i = 0; i < c.samples; ++i) {
      std::vector<plucker::PluckerVector> pts;
      std::vector<Subspace> u;
      Sample smp;
      smp.index = static_cast<std::size_t>(i);
      smp.inputs = json::array();
      for (int k : *c.dims) {
        const Matrix a = s.rank_matrix(c.d, std::max(k, 1), k);
        pts.push_back(k == 0 ? plucker::plucker_of(Matrix(c.d, 0), 0)
                             : plucker::scaled(plucker::plucker_of(a, k), s.nonzero_scalar()));
        u.push_back(plucker::theta_point(pts.back()));
        smp.inputs.push_back(plucker::to_json(pts.back()));
        for (const auto& x : pts.back().coords) smp.size += entry_size(x);
      }
      smp.lattice = eval_formula(pf.formula, u, space);
      smp.translated = homog::eval_homog(t, pts);
      truths += smp.lattice;
      if (smp.lattice == smp.translated) {
        ++agree;
      } else {
        keep_smallest(worst, std::move(smp));
      }
    }
    return report(c, "homog", to_text(pf.formula, &pf.names), agree, truths, worst, fault, out);
  }

  if (c.dims && static_cast<int>(c.dims->size()) != n) throw UsageError("--dims needs one entry per variable");
  const gauss::Options opt = c.options();
  for (int i = 0; i < c.samples; ++i) {
    std::vector<Matrix> mats;
    Sample smp;
    smp.index = static_cast<std::size_t>(i);
    smp.inputs = json::array();
    for (int k = 0; k < n; ++k) {
      const int r = c.dims && (*c.dims)[k] >= 0 ? (*c.dims)[k] : s.uniform(0, c.d);
      mats.push_back(s.rank_matrix(c.d, c.d, r));
      smp.inputs.push_back(to_json(mats.back()));
      for (int a = 0; a < c.d; ++a) {
        for (int b = 0; b < c.d; ++b) smp.size += entry_size(mats.back()(a, b));
      }
    }
    smp.lattice = eval_formula(pf.formula, spans(mats), space);
    smp.translated = c.dims ? gauss::eval_translated_with_dims(side, *c.dims, mats, c.alpha, opt)
                            : gauss::eval_translated(side, mats, c.alpha, opt);
    truths += smp.lattice;
    if (smp.lattice == smp.translated) {
      ++agree;
    } else {
      keep_smallest(worst, std::move(smp));
    }
  }
  return report(c, "matrix", to_text(pf.formula, &pf.names), agree, truths, worst, fault, out);
}

int cmd_plucker(const JobConfig& c, const std::string& arg, int k, bool check, bool roundtrip, std::ostream& out) {
  const json in = parse_json(read_payload(arg));
  if (check) {
    const plucker::PluckerVector r = plucker::plucker_from_json(in, c.d);
    const bool member = plucker::grassmann_membership(r);
    json j = {{"command", "plucker"}, {"d", r.d}, {"k", r.k}, {"member", member},
              {"verdict", member ? "member" : "not a member"}};
    if (r.k == 2) j["three_term_relations"] = plucker::satisfies_three_term_relations(r);
    if (member && !r.is_zero()) j["subspace"] = to_json(plucker::theta_point(r));
    if (c.pretty) {
      out << (member ? "member" : "not a member") << '\n';
    } else {
      emit(out, j);
    }
    return Ok;
  }
  const Matrix a = matrix_from_json(in);
  if (k < 0) k = a.cols();
  const plucker::PluckerVector r = plucker::plucker_of(a, k);
  json j = {{"command", "plucker"}, {"d", a.rows()}, {"k", k}, {"coordinates", plucker::to_json(r)}};
  const bool member = plucker::grassmann_membership(r);
  j["member"] = member;
  if (k > 0 && !r.is_zero()) {
    const PivotMap f = plucker::pivot_of(r);
    json piv = json::array();
    for (int p : f) piv.push_back(p + 1);
    j["pivots"] = piv;
    const plucker::Recovery rec = plucker::recover_matrix(r);
    j["recovered"] = {{"matrix", to_json(rec.A)}, {"lambda", rec.lambda.to_string()}};
    if (roundtrip) {
      const plucker::PluckerVector back = plucker::plucker_of(rec.A, k);
      const bool coords_ok = back == plucker::scaled(r, rec.lambda);
      const bool span_ok = span_equal(rec.A, select_columns(a, [&] {
                                        std::vector<int> cols(static_cast<std::size_t>(k));
                                        for (int i = 0; i < k; ++i) cols[i] = i;
                                        return cols;
                                      }()));
      j["roundtrip"] = {{"coordinates_scaled_by_lambda", coords_ok}, {"span_equal", span_ok}};
    }
  } else if (roundtrip) {
    j["roundtrip"] = {{"coordinates_scaled_by_lambda", true}, {"span_equal", rank(a) == 0 || k == 0}};
  }
  if (c.pretty) {
    out << "d = " << a.rows() << ", k = " << k << '\n';
    for (const auto& [key, val] : plucker::to_json(r).items()) out << "  (" << key << ") " << val.get<std::string>() << '\n';
    out << "member: " << (member ? "yes" : "no") << '\n';
    if (j.contains("roundtrip")) out << "roundtrip span equal: " << (j["roundtrip"]["span_equal"].get<bool>() ? "yes" : "no") << '\n';
  } else {
    emit(out, j);
  }
  return Ok;
}

int cmd_homog(const JobConfig& c, const std::string& text, const std::string& quant, std::ostream& out) {
  const ParsedFormula pf = parse_lattice_formula(text, c.mode);
  if (!c.dims || static_cast<int>(c.dims->size()) != pf.num_vars()) throw UsageError("homog needs --dims with one entry per variable");
  homog::HomogOptions ho;
  ho.kind = c.kind;
  ho.mode = quant == "forall" ? homog::Quant::Forall : homog::Quant::Exists;
  const auto t = homog::homog_translate(pf, *c.dims, c.alpha, ho);
  const bool cert = homog::certify_homogeneous(t.result);
  const FormulaStats fs = stats(t.result.formula);
  if (c.pretty) {
    out << "input:        " << to_text(pf.formula, &pf.names) << '\n'
        << "quantifier:   " << quant << '\n'
        << "assignments:  " << t.deltas.size() << '\n'
        << "atoms:        " << fs.atoms << '\n'
        << "homogeneous:  " << (cert ? "yes" : "no") << '\n';
    if (!c.stats_only) out << "formula:      " << formula_text(t.result.formula) << '\n';
    return Ok;
  }
  json j = {{"command", "homog"}, {"config", config_json(c)}, {"input", to_text(pf.formula, &pf.names)},
            {"quant", quant}, {"special_system", to_text(t.sys)}, {"dimension_assignments", t.deltas.size()},
            {"certified_homogeneous", cert},
            {"stats", {{"atoms", fs.atoms}, {"dag_nodes", fs.dag_nodes}, {"max_degree", fs.max_degree}}}};
  if (!c.stats_only) j["result"] = homog::to_json(t.result);
  emit(out, j);
  return Ok;
}

int cmd_frame_encode(const JobConfig& c, const std::string& text, int points, bool check, bool homog_too,
                     std::ostream& out) {
  const Formula phi = parse_field_formula(text, c.kind);
  if (points < 0) points = max_variable(phi) + 1;
  const auto enc = frames::encode_field_formula(phi, points, c.d, c.alpha);
  json j = {{"command", "frame-encode"}, {"config", config_json(c)}, {"input", to_text(phi)},
            {"points", points}, {"conditions", enc.conditions.size()}, {"depth", depth(enc.term)},
            {"variables", enc.names}};
  if (!c.stats_only) j["term"] = to_text(enc.term, &enc.names);
  int code = Ok;
  if (check) {
    Matrix v = identity(c.d);
    const frames::Frame f = frames::frame_from_basis(v, c.alpha, c.kind);
    const FieldContext ctx = make_context(c.kind, c.alpha);
    Sampler s(c.seed, c.kind, 3);
    int agree = 0, truths = 0;
    for (int i = 0; i < c.samples; ++i) {
      std::vector<Scalar> vals;
      std::vector<Subspace> pts;
      for (int k = 0; k < points; ++k) {
        vals.push_back(s.uniform(0, 3) == 0 ? Scalar(0) : s.rational_scalar());
        pts.push_back(frames::ring_encode(vals.back(), f));
      }
      const bool want = eval_field_formula(phi, vals, ctx);
      const bool got = frames::eval_encoding(enc, f, pts);
      truths += want;
      agree += want == got;
    }
    j["check"] = {{"samples", c.samples}, {"agree", agree}, {"formula_true", truths},
                  {"summary", std::to_string(agree) + "/" + std::to_string(c.samples) + " agree"}};
    if (agree != c.samples) code = Disagreement;
  }
  if (homog_too) {
    const auto h = frames::encode_homogeneous(enc, c.alpha, c.kind, c.cap);
    j["homogeneous"] = {{"dimension_assignments", h.deltas.size()},
                        {"certified_homogeneous", homog::certify_homogeneous(h.result)}};
  }
  if (c.pretty) {
    out << "conditions: " << enc.conditions.size() << '\n' << "depth:      " << depth(enc.term) << '\n';
    if (j.contains("check")) out << j["check"]["summary"].get<std::string>() << '\n';
  } else {
    emit(out, j);
  }
  return code;
}

int cmd_eval(const JobConfig& c, const std::string& text, const std::string& at, int height, std::ostream& out) {
  const ParsedFormula pf = parse_lattice_formula(text, c.mode);
  const LatticeSpace space = c.space();
  std::vector<Matrix> mats;
  if (!at.empty()) {
    const json in = parse_json(read_payload(at));
    if (!in.is_array()) throw ParseError("--at expects a JSON array of matrices", 0);
    for (const auto& m : in) mats.push_back(matrix_from_json(m));
  } else {
    Sampler s(c.seed, c.kind, 5);
    for (int k = 0; k < pf.num_vars(); ++k) {
      const int r = c.dims && k < static_cast<int>(c.dims->size()) && (*c.dims)[k] >= 0 ? (*c.dims)[k] : s.uniform(0, c.d);
      mats.push_back(s.rank_matrix(c.d, c.d, r));
    }
  }
  if (static_cast<int>(mats.size()) < pf.num_vars()) throw UsageError("eval: not enough matrices for the free variables");
  for (const auto& m : mats) {
    if (m.rows() != c.d) throw UsageError("eval: matrices must have d rows");
  }
  const std::vector<Subspace> u = spans(mats);
  const bool value = pf.formula.quantifier_free()
                         ? eval_formula(pf.formula, u, space)
                         : eval_formula_bounded(pf.formula, u, space, BoundedSearch{height});
  json eqs = json::array();
  for (const auto& [l, r] : equations(pf.formula)) {
    const auto vars = variables(pf.formula);
    bool closed = true;
    for (int v : variables(l)) closed = closed && v < static_cast<int>(u.size());
    for (int v : variables(r)) closed = closed && v < static_cast<int>(u.size());
    if (!closed || !pf.formula.quantifier_free()) continue;
    eqs.push_back({{"lhs", to_text(l, &pf.names)}, {"rhs", to_text(r, &pf.names)},
                   {"lhs_value", to_json(eval_term(l, u, space))}, {"rhs_value", to_json(eval_term(r, u, space))}});
  }
  if (c.pretty) {
    out << to_text(pf.formula, &pf.names) << " : " << (value ? "true" : "false") << '\n';
    for (std::size_t i = 0; i < u.size(); ++i) out << "  x" << i + 1 << " = " << to_string(u[i]) << '\n';
    return Ok;
  }
  json pts = json::array();
  for (const auto& x : u) pts.push_back(to_json(x));
  emit(out, {{"command", "eval"}, {"config", config_json(c)}, {"input", to_text(pf.formula, &pf.names)},
             {"points", pts}, {"equations", eqs}, {"value", value}});
  return Ok;
}

void add_common(CLI::App* sub, RawOptions& o) {
  sub->add_option("-d", o.d, "ambient dimension");
  sub->add_option("--alpha", o.alpha, "form constants, e.g. 1,2,1");
  sub->add_option("--field", o.field, "rat or gauss")->check(CLI::IsMember({"rat", "gauss"}));
  sub->add_option("--mode", o.mode, "inv or plain")->check(CLI::IsMember({"inv", "plain"}));
  sub->add_option("--dims", o.dims, "dimension vector, e.g. 1,1,2");
  sub->add_option("-n", o.samples, "number of samples");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--cap-branches", o.cap, "case-branch cap (LATGEO_CAP overrides the default)");
  sub->add_flag("--pretty", o.pretty, "human-readable output");
  sub->add_flag("--stats", o.stats_only, "statistics only");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact translations between subspace lattices and field formulas", "latgeo"};
  app.require_subcommand(1);
  RawOptions o;
  std::string input;
  std::string quant = "exists";
  std::string at;
  int k = -1, points = -1, height = 1;
  bool check = false, roundtrip = false, homog_path = false, fault = false, homog_too = false;

  auto* tr = app.add_subcommand("translate", "lattice formula to matrix-coordinate field formula");
  auto* ve = app.add_subcommand("verify", "compare both sides on random instances");
  auto* pl = app.add_subcommand("plucker", "Grassmann-Pluecker coordinates of a matrix (JSON)");
  auto* ho = app.add_subcommand("homog", "homogeneous Pluecker-coordinate translation");
  auto* fe = app.add_subcommand("frame-encode", "encode a field formula as a lattice equation on a frame");
  auto* ev = app.add_subcommand("eval", "evaluate a lattice formula at matrices");
  for (auto* sub : {tr, ve, pl, ho, fe, ev}) add_common(sub, o);
  tr->add_option("formula", input, "lattice formula")->required();
  ve->add_option("formula", input, "lattice formula")->required();
  ve->add_flag("--homog", homog_path, "use the homogeneous path (needs --dims)");
  ve->add_option("--quant", quant, "exists or forall")->check(CLI::IsMember({"exists", "forall"}));
  ve->add_flag("--inject-fault", fault)->group("");
  pl->add_option("input", input, "matrix JSON, or a coordinate object with --check (@file reads a file)")->required();
  pl->add_option("-k", k, "number of leading columns");
  pl->add_flag("--check", check, "membership test for a coordinate vector");
  pl->add_flag("--roundtrip", roundtrip, "recover the matrix and compare spans");
  ho->add_option("formula", input, "lattice formula")->required();
  ho->add_option("--quant", quant, "exists or forall")->check(CLI::IsMember({"exists", "forall"}));
  fe->add_option("formula", input, "field formula (conjunction of p = 0 and p != 0)")->required();
  fe->add_option("--points", points, "number of point variables");
  fe->add_flag("--check", check, "compare against the formula on the standard frame");
  fe->add_flag("--homog", homog_too, "also build the homogeneous existential translation");
  ev->add_option("formula", input, "lattice formula")->required();
  ev->add_option("--at", at, "JSON array of matrices (@file reads a file)");
  ev->add_option("--height", height, "search height for quantified variables");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : BadInput;
  }

  try {
    const JobConfig c = resolve(o);
    if (tr->parsed()) return cmd_translate(c, input, out);
    if (ve->parsed()) return cmd_verify(c, input, homog_path, quant, fault, out);
    if (pl->parsed()) return cmd_plucker(c, input, k, check, roundtrip, out);
    if (ho->parsed()) return cmd_homog(c, input, quant, out);
    if (fe->parsed()) return cmd_frame_encode(c, input, points, check, homog_too, out);
    if (ev->parsed()) return cmd_eval(c, input, at, height, out);
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return Capacity;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return BadInput;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return BadInput;
  } catch (const NotImplementedError& e) {
    err << "not available: " << e.what() << '\n';
    return BadInput;
  }
  return BadInput;
}

}  // namespace latgeo::cli
