#include "mnm/dugundji.hpp"

#include <algorithm>
#include <functional>
#include <thread>

#include <json.hpp>

#include "mnm/calculus.hpp"

namespace mnm {

void DetMatrix::validate() const {
  if (size < 1) throw Error("matrix needs at least one value");
  auto check_unary = [&](const std::vector<int>& t, const char* name) {
    if (int(t.size()) != size) throw Error(std::string(name) + " table size");
    for (int v : t)
      if (v < 0 || v >= size) throw Error("value out of range");
  };
  check_unary(neg, "neg");
  check_unary(box, "box");
  check_unary(dia, "dia");
  if (int(imp.size()) != size * size) throw Error("imp table size");
  for (int v : imp)
    if (v < 0 || v >= size) throw Error("value out of range");
  if (int(designated.size()) != size) throw Error("designated size");
  int d = 0;
  for (bool b : designated) d += b;
  if (d == 0) throw Error("designated set is empty");
  if (d == size) throw Error("designated set is not proper");
}

// ---------------------------------------------------------------------------
// delta / gamma

namespace {

Formula left_disjunction(const std::vector<Formula>& parts) {
  Formula acc = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) acc = Formula::disj(acc, parts[i]);
  return acc;
}

DugundjiFormula build_pigeonhole(int n, DugundjiKind kind) {
  if (n < 3) throw BadN("pigeonhole formulas need n >= 3");

  std::vector<Formula> atoms;
  for (int j = 1; j <= n; ++j)
    atoms.push_back(Formula::atom("p" + std::to_string(j)));

  Formula alpha = left_disjunction(atoms);
  auto wrap = [&](Formula f) {
    return kind == DugundjiKind::Delta
               ? Formula::box(f)
               : Formula::box(Formula::neg(Formula::box(f)));
  };
  std::vector<Formula> betas;
  std::vector<Formula> disjuncts;
  for (int i = 1; i <= n; ++i) {
    std::vector<Formula> rest;
    for (int j = 1; j <= n; ++j)
      if (j != i) rest.push_back(atoms[j - 1]);
    Formula beta = left_disjunction(rest);
    betas.push_back(beta);
    disjuncts.push_back(Formula::imp(wrap(alpha), wrap(beta)));
  }
  return DugundjiFormula{n, kind, left_disjunction(disjuncts), alpha,
                         std::move(betas)};
}

}  // namespace

DugundjiFormula build_delta(int n) {
  return build_pigeonhole(n, DugundjiKind::Delta);
}
DugundjiFormula build_gamma(int n) {
  return build_pigeonhole(n, DugundjiKind::Gamma);
}

std::string render_sugared(Formula f) {
  // prints ~x -> y as x | y; parentheses per the | / -> precedence
  std::function<std::string(Formula, int)> rec = [&](Formula g,
                                                     int min_prec) -> std::string {
    auto wrap_if = [&](const std::string& s, int prec) {
      return prec < min_prec ? "(" + s + ")" : s;
    };
    switch (g.kind()) {
      case Formula::Kind::Atom:
        return std::string(g.atom_name());
      case Formula::Kind::Neg:
        return "~" + rec(g.child(), 3);
      case Formula::Kind::Box:
        return "[]" + rec(g.child(), 3);
      case Formula::Kind::Dia:
        return "<>" + rec(g.child(), 3);
      case Formula::Kind::Imp: {
        if (g.lhs().kind() == Formula::Kind::Neg) {
          // a | b reading; | is left-associative and binds tighter than ->
          std::string l = rec(g.lhs().child(), 2);
          std::string r = rec(g.rhs(), 3);
          return wrap_if(l + " | " + r, 2);
        }
        std::string l = rec(g.lhs(), 2);
        std::string r = rec(g.rhs(), 1);
        return wrap_if(l + " -> " + r, 1);
      }
    }
    return "";
  };
  return rec(f, 0);
}

// ---------------------------------------------------------------------------
// falsification

std::optional<Valuation> falsify(SystemId id, Formula f) {
  Verdict v = decide_valid(builtin(id), f);
  if (v.holds) return std::nullopt;
  return v.witness;
}

std::optional<Valuation> falsify(SystemId id, const DugundjiFormula& df) {
  const Nmatrix& nm = builtin(id);
  // published hint: every atom C+, alpha driven to T+ (delta) or the boxed
  // alpha to F- with the boxed betas at C- (gamma)
  SearchOptions opts;
  for (Formula a : subformulas(df.formula))
    if (a.is_atom()) opts.pins.emplace(a, ValueSet(TruthValue::Cp));
  if (df.kind == DugundjiKind::Delta) {
    opts.pins.emplace(df.alpha, ValueSet(TruthValue::Tp));
    for (Formula b : df.betas) opts.pins.emplace(b, ValueSet(TruthValue::Cp));
  } else {
    opts.pins.emplace(Formula::box(df.alpha), ValueSet(TruthValue::Fn));
    for (Formula b : df.betas)
      opts.pins.emplace(Formula::box(b), ValueSet(TruthValue::Cn));
  }
  Verdict seeded = decide_valid(nm, df.formula, opts);
  if (!seeded.holds) return seeded.witness;
  return falsify(id, df.formula);  // fall back to the unseeded search
}

// ---------------------------------------------------------------------------
// deterministic evaluation

namespace {

int det_eval(const DetMatrix& m, const std::vector<Formula>& topo,
             const std::unordered_map<Formula, int>& index,
             std::vector<int>& vals, const std::vector<int>& atom_vals,
             const std::vector<int>& atom_slots) {
  for (size_t k = 0; k < atom_slots.size(); ++k)
    vals[atom_slots[k]] = atom_vals[k];
  for (size_t i = 0; i < topo.size(); ++i) {
    Formula f = topo[i];
    switch (f.kind()) {
      case Formula::Kind::Atom:
        break;
      case Formula::Kind::Neg:
        vals[i] = m.neg[vals[index.at(f.child())]];
        break;
      case Formula::Kind::Box:
        vals[i] = m.box[vals[index.at(f.child())]];
        break;
      case Formula::Kind::Dia:
        vals[i] = m.dia[vals[index.at(f.child())]];
        break;
      case Formula::Kind::Imp:
        vals[i] = m.apply_imp(vals[index.at(f.lhs())], vals[index.at(f.rhs())]);
        break;
    }
  }
  return vals[topo.size() - 1];
}

}  // namespace

bool validate_det(const DetMatrix& m, Formula f) {
  std::vector<Formula> topo = subformulas(f);
  std::unordered_map<Formula, int> index;
  for (size_t i = 0; i < topo.size(); ++i) index.emplace(topo[i], int(i));
  std::vector<int> atom_slots;
  for (size_t i = 0; i < topo.size(); ++i)
    if (topo[i].is_atom()) atom_slots.push_back(int(i));

  std::vector<int> vals(topo.size(), 0);
  std::vector<int> atom_vals(atom_slots.size(), 0);
  // odometer over atom assignments
  for (;;) {
    int root = det_eval(m, topo, index, vals, atom_vals, atom_slots);
    if (!m.designated[root]) return false;
    int i = 0;
    while (i < int(atom_vals.size()) && ++atom_vals[i] == m.size) {
      atom_vals[i] = 0;
      ++i;
    }
    if (i == int(atom_vals.size())) return true;
  }
}

bool is_model(const DetMatrix& m, SystemId id) {
  // MP must preserve designation at table level
  for (int x = 0; x < m.size; ++x) {
    if (!m.designated[x]) continue;
    for (int y = 0; y < m.size; ++y)
      if (!m.designated[y] && m.designated[m.apply_imp(x, y)]) return false;
  }
  for (const AxiomSchema& ax : axioms_of(id))
    if (!validate_det(m, skeletonize(ax.schema))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// scans

namespace {

// splits a grid index into the candidate tables; returns false when the ->
// cells are not all singletons (non-deterministic or empty grid points)
bool decode_size2(uint64_t idx, DetMatrix& m) {
  // layout: neg(4) * imp(256) * box(4) * dia(4) * designated(3)
  uint64_t rest = idx;
  int neg_i = int(rest % 4);
  rest /= 4;
  uint64_t imp_i = rest % 256;
  rest /= 256;
  int box_i = int(rest % 4);
  rest /= 4;
  int dia_i = int(rest % 4);
  rest /= 4;
  int des_i = int(rest % 3);

  m.size = 2;
  m.neg = {neg_i & 1, (neg_i >> 1) & 1};
  m.box = {box_i & 1, (box_i >> 1) & 1};
  m.dia = {dia_i & 1, (dia_i >> 1) & 1};
  // designated: {0}, {1}, {0,1}; the doubleton is not a proper subset
  switch (des_i) {
    case 0:
      m.designated = {true, false};
      break;
    case 1:
      m.designated = {false, true};
      break;
    default:
      m.designated = {true, true};
      return false;
  }
  m.imp.assign(4, 0);
  for (int cell = 0; cell < 4; ++cell) {
    int sub = int((imp_i >> (2 * cell)) & 3);  // subset of {0,1}
    if (sub == 1)
      m.imp[cell] = 0;
    else if (sub == 2)
      m.imp[cell] = 1;
    else
      return false;  // empty or both values: not a deterministic cell
  }
  return true;
}

DetMatrix random_matrix(int size, uint64_t& state) {
  DetMatrix m;
  m.size = size;
  auto rnd = [&](int bound) { return int(split_mix(state) % uint64_t(bound)); };
  for (int i = 0; i < size; ++i) {
    m.neg.push_back(rnd(size));
    m.box.push_back(rnd(size));
    m.dia.push_back(rnd(size));
  }
  for (int i = 0; i < size * size; ++i) m.imp.push_back(rnd(size));
  for (;;) {
    m.designated.assign(size, false);
    int count = 0;
    for (int i = 0; i < size; ++i) {
      m.designated[i] = rnd(2) == 1;
      count += m.designated[i];
    }
    if (count > 0 && count < size) break;
  }
  return m;
}

}  // namespace

uint64_t split_mix(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

ScanReport scan_matrices(int size, SystemId id, const Formula& f,
                         const ScanOptions& opts) {
  if (size != 2 && size != 3)
    throw BadN("only sizes 2 (exhaustive) and 3 (sampled) are supported");
  ScanReport report;
  report.size = size;
  report.system = std::string(system_name(id));
  report.formula = render(f);
  report.seed = opts.seed;

  if (size == 2) {
    constexpr uint64_t kGrid = 4ull * 256 * 4 * 4 * 3;
    report.candidates = kGrid;

    int jobs = std::max(1, opts.jobs);
    struct Partial {
      uint64_t admissible = 0, models = 0;
      std::vector<ScanViolation> violations;
    };
    std::vector<Partial> parts(jobs);
    auto work = [&](int t) {
      Partial& p = parts[t];
      for (uint64_t idx = t; idx < kGrid; idx += uint64_t(jobs)) {
        DetMatrix m;
        if (!decode_size2(idx, m)) continue;
        ++p.admissible;
        if (!is_model(m, id)) continue;
        ++p.models;
        if (!validate_det(m, f)) p.violations.push_back({idx, m});
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::thread> ts;
      for (int t = 0; t < jobs; ++t) ts.emplace_back(work, t);
      for (auto& t : ts) t.join();
    }
    for (auto& p : parts) {
      report.admissible += p.admissible;
      report.models += p.models;
      for (auto& v : p.violations) report.violations.push_back(v);
    }
    std::sort(report.violations.begin(), report.violations.end(),
              [](const ScanViolation& a, const ScanViolation& b) {
                return a.candidate_index < b.candidate_index;
              });
    return report;
  }

  // size 3: seeded sample
  constexpr uint64_t kSampleCap = 1000000;
  if (opts.budget > kSampleCap)
    throw BudgetExceeded("size-3 sample budget capped at " +
                         std::to_string(kSampleCap));
  uint64_t state = opts.seed;
  for (uint64_t i = 0; i < opts.budget; ++i) {
    DetMatrix m = random_matrix(3, state);
    ++report.candidates;
    ++report.admissible;
    if (!is_model(m, id)) continue;
    ++report.models;
    if (!validate_det(m, f)) report.violations.push_back({i, m});
  }
  return report;
}

// ---------------------------------------------------------------------------
// conservativity and the deterministic 4-valued agreement

bool classical_valid(Formula f) {
  std::vector<Formula> topo = subformulas(f);
  std::unordered_map<Formula, int> index;
  std::vector<int> atom_slots;
  for (size_t i = 0; i < topo.size(); ++i) {
    index.emplace(topo[i], int(i));
    if (topo[i].is_atom()) atom_slots.push_back(int(i));
  }
  if (atom_slots.size() > 20) throw TooLarge("too many atoms");
  std::vector<int> vals(topo.size(), 0);
  for (uint64_t mask = 0; mask < (1ull << atom_slots.size()); ++mask) {
    for (size_t k = 0; k < atom_slots.size(); ++k)
      vals[atom_slots[k]] = int((mask >> k) & 1);
    for (size_t i = 0; i < topo.size(); ++i) {
      Formula g = topo[i];
      switch (g.kind()) {
        case Formula::Kind::Atom:
          break;
        case Formula::Kind::Neg:
          vals[i] = 1 - vals[index.at(g.child())];
          break;
        case Formula::Kind::Imp:
          vals[i] =
              (vals[index.at(g.lhs())] == 1 && vals[index.at(g.rhs())] == 0)
                  ? 0
                  : 1;
          break;
        default:
          throw Error("classical_valid wants a {~,->} formula");
      }
    }
    if (vals[topo.size() - 1] == 0) return false;
  }
  return true;
}

Formula random_formula(uint64_t& state, const FormulaGenOptions& opts) {
  static const char* names[] = {"p", "q", "r", "s", "t", "u"};
  std::function<Formula(int)> gen = [&](int depth) -> Formula {
    int atom_bound = std::min(opts.max_atoms, 6);
    if (depth <= 0)
      return Formula::atom(names[split_mix(state) % uint64_t(atom_bound)]);
    int pick = int(split_mix(state) % (opts.modal ? 6u : 4u));
    switch (pick) {
      case 0:
      case 1:
        return Formula::atom(names[split_mix(state) % uint64_t(atom_bound)]);
      case 2:
        return Formula::neg(gen(depth - 1));
      case 3:
        return Formula::imp(gen(depth - 1), gen(depth - 1));
      case 4:
        return Formula::box(gen(depth - 1));
      default:
        return Formula::dia(gen(depth - 1));
    }
  };
  return gen(opts.max_depth);
}

ConservativityReport conservativity_check(SystemId id, int sample_count,
                                          int max_depth, uint64_t seed) {
  ConservativityReport report;
  report.system = std::string(system_name(id));
  report.samples = sample_count;
  report.max_depth = max_depth;
  report.seed = seed;
  const Nmatrix& nm = builtin(id);
  uint64_t state = seed;
  FormulaGenOptions gopts;
  gopts.max_depth = max_depth;
  gopts.modal = false;
  for (int i = 0; i < sample_count; ++i) {
    Formula f = random_formula(state, gopts);
    bool classical = classical_valid(f);
    bool system_valid = decide_valid(nm, f).holds;
    if (classical != system_valid) {
      ++report.discrepancies;
      if (report.failing.size() < 10) report.failing.push_back(render(f));
    }
  }
  return report;
}

DetMatrix t45md_matrix() {
  // ordinals 0..3 read as T+, C+, C-, F- (i.e. 1, 2/3, 1/3, 0)
  const Nmatrix& nm = builtin(SystemId::T45md);
  static const TruthValue order[4] = {TruthValue::Tp, TruthValue::Cp,
                                      TruthValue::Cn, TruthValue::Fn};
  auto idx_of = [&](TruthValue v) {
    for (int i = 0; i < 4; ++i)
      if (order[i] == v) return i;
    throw Error("value outside the T45md domain");
  };
  DetMatrix m;
  m.size = 4;
  m.neg.resize(4);
  m.box.resize(4);
  m.dia.resize(4);
  m.imp.resize(16);
  m.designated = {true, true, false, false};
  for (int i = 0; i < 4; ++i) {
    TruthValue x = order[i];
    auto single = [&](ValueSet s) {
      if (s.size() != 1) throw Error("T45md tables must be deterministic");
      return idx_of(s.first());
    };
    m.neg[i] = single(nm.algebra.neg[ordinal(x)]);
    m.box[i] = single(nm.algebra.box[ordinal(x)]);
    m.dia[i] = single(nm.algebra.dia[ordinal(x)]);
    for (int j = 0; j < 4; ++j)
      m.imp[i * 4 + j] =
          single(nm.algebra.imp[ordinal(x)][ordinal(order[j])]);
  }
  m.validate();
  return m;
}

AgreementReport t45md_agreement(int sample_count, uint64_t seed) {
  AgreementReport report;
  report.samples = sample_count;
  report.seed = seed;
  DetMatrix m = t45md_matrix();
  const Nmatrix& nm = builtin(SystemId::T45md);
  uint64_t state = seed;
  FormulaGenOptions gopts;
  gopts.max_depth = 4;
  for (int i = 0; i < sample_count; ++i) {
    Formula f = random_formula(state, gopts);
    bool det = validate_det(m, f);
    bool nmx = decide_valid(nm, f).holds;
    if (det != nmx) {
      ++report.disagreements;
      if (report.failing.size() < 10) report.failing.push_back(render(f));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// JSON

std::string scan_to_json(const ScanReport& r) {
  nlohmann::ordered_json j;
  j["size"] = r.size;
  j["system"] = r.system;
  j["formula"] = r.formula;
  j["candidates"] = r.candidates;
  j["admissible"] = r.admissible;
  j["models"] = r.models;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& v : r.violations) arr.push_back(v.candidate_index);
  j["violations"] = arr;
  j["seed"] = r.seed;
  return j.dump(2);
}

std::string conservativity_to_json(const ConservativityReport& r) {
  nlohmann::ordered_json j;
  j["system"] = r.system;
  j["samples"] = r.samples;
  j["max_depth"] = r.max_depth;
  j["seed"] = r.seed;
  j["discrepancies"] = r.discrepancies;
  j["failing"] = r.failing;
  return j.dump(2);
}

std::string agreement_to_json(const AgreementReport& r) {
  nlohmann::ordered_json j;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["disagreements"] = r.disagreements;
  j["failing"] = r.failing;
  return j.dump(2);
}

}  // namespace mnm
