#include "mnm/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mnm/calculus.hpp"

namespace mnm {

std::optional<TruthValue> Valuation::value_of(Formula f) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == f) return values[i];
  return std::nullopt;
}

std::string Valuation::to_string() const {
  std::string out;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += ' ';
    out += render(nodes[i]);
    out += '=';
    out += value_name(values[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// query compilation

namespace {

struct CompiledNode {
  Formula formula;
  Formula::Kind kind = Formula::Kind::Atom;
  int child_a = -1;
  int child_b = -1;
  ValueSet constraint;  // candidates must stay inside this set

  explicit CompiledNode(Formula f) : formula(f), kind(f.kind()) {}
};

struct CompiledQuery {
  const Nmatrix* nm;
  std::vector<CompiledNode> nodes;  // assignment order: atoms first, then topo

  ValueSet candidates(const std::vector<TruthValue>& vals, int i) const {
    const CompiledNode& n = nodes[i];
    ValueSet s;
    switch (n.kind) {
      case Formula::Kind::Atom:
        s = nm->algebra.domain;
        break;
      case Formula::Kind::Neg:
        s = nm->algebra.neg[ordinal(vals[n.child_a])];
        break;
      case Formula::Kind::Box:
        s = nm->algebra.box[ordinal(vals[n.child_a])];
        break;
      case Formula::Kind::Dia:
        s = nm->algebra.dia[ordinal(vals[n.child_a])];
        break;
      case Formula::Kind::Imp:
        s = nm->algebra.imp[ordinal(vals[n.child_a])][ordinal(vals[n.child_b])];
        break;
    }
    return s & n.constraint;
  }
};

CompiledQuery compile(const Nmatrix& nm, std::span<const Formula> premises,
                      std::optional<Formula> conclusion,
                      const SearchOptions& opts) {
  std::vector<Formula> roots(premises.begin(), premises.end());
  if (conclusion) roots.push_back(*conclusion);
  std::vector<Formula> topo = subformulas(roots);

  // atoms first (first-occurrence order), then the rest in topological order
  std::vector<Formula> order;
  for (Formula f : topo)
    if (f.is_atom()) order.push_back(f);
  for (Formula f : topo)
    if (!f.is_atom()) order.push_back(f);

  std::unordered_map<Formula, int> index;
  for (size_t i = 0; i < order.size(); ++i) index.emplace(order[i], int(i));

  CompiledQuery q;
  q.nm = &nm;
  q.nodes.reserve(order.size());
  for (Formula f : order) {
    CompiledNode n(f);
    if (f.kind() == Formula::Kind::Imp) {
      n.child_a = index.at(f.lhs());
      n.child_b = index.at(f.rhs());
    } else if (!f.is_atom()) {
      n.child_a = index.at(f.child());
    }
    n.constraint = nm.algebra.domain;
    q.nodes.push_back(n);
  }

  for (Formula p : premises) q.nodes[index.at(p)].constraint &= nm.designated;
  if (conclusion)
    q.nodes[index.at(*conclusion)].constraint &= ~nm.designated;
  for (const auto& [f, pin] : opts.pins) {
    auto it = index.find(f);
    if (it != index.end()) q.nodes[it->second].constraint &= pin;
  }
  return q;
}

// depth-first search for one falsifying valuation; values tried in canonical
// order so the first witness is deterministic
struct Searcher {
  const CompiledQuery& q;
  std::vector<TruthValue> vals;
  uint64_t explored = 0;

  explicit Searcher(const CompiledQuery& query)
      : q(query), vals(query.nodes.size(), TruthValue::Tp) {}

  bool run(size_t i) {
    if (i == q.nodes.size()) return true;
    ValueSet cand = q.candidates(vals, int(i));
    bool found = false;
    cand.for_each([&](TruthValue v) {
      if (found) return;
      vals[i] = v;
      ++explored;
      if (run(i + 1)) found = true;
    });
    return found;
  }
};

Valuation extract(const CompiledQuery& q, const std::vector<TruthValue>& vals) {
  Valuation w;
  w.nodes.reserve(q.nodes.size());
  for (const auto& n : q.nodes) w.nodes.push_back(n.formula);
  w.values = vals;
  return w;
}

Verdict search_falsifier(const CompiledQuery& q, int jobs) {
  Verdict out;
  if (q.nodes.empty()) {
    out.holds = true;
    return out;
  }

  // find the first real branch point; everything before it is forced
  Searcher probe(q);
  size_t split = q.nodes.size();
  for (size_t i = 0; i < q.nodes.size(); ++i) {
    ValueSet cand = q.candidates(probe.vals, int(i));
    if (cand.empty()) {
      out.holds = true;
      out.nodes_explored = probe.explored;
      return out;
    }
    if (cand.size() > 1 || jobs <= 1) {
      split = i;
      break;
    }
    probe.vals[i] = cand.first();
    ++probe.explored;
  }

  if (jobs <= 1 || split == q.nodes.size()) {
    Searcher s(q);
    bool found = s.run(0);
    out.holds = !found;
    out.nodes_explored = s.explored;
    if (found) out.witness = extract(q, s.vals);
    return out;
  }

  // parallel: split the candidates of the first branch point; the witness of
  // the smallest candidate index wins, independent of finishing order
  ValueSet cand = q.candidates(probe.vals, int(split));
  std::vector<TruthValue> branch_vals;
  cand.for_each([&](TruthValue v) { branch_vals.push_back(v); });

  struct Slot {
    bool found = false;
    std::vector<TruthValue> vals;
    uint64_t explored = 0;
  };
  std::vector<Slot> slots(branch_vals.size());
  std::vector<std::thread> workers;
  size_t nworkers = std::min<size_t>(size_t(jobs), branch_vals.size());
  std::atomic<size_t> next{0};
  for (size_t t = 0; t < nworkers; ++t) {
    workers.emplace_back([&]() {
      for (;;) {
        size_t k = next.fetch_add(1);
        if (k >= branch_vals.size()) return;
        Searcher s(q);
        for (size_t i = 0; i < split; ++i)
          s.vals[i] = probe.vals[i];
        s.vals[split] = branch_vals[k];
        slots[k].found = s.run(split + 1);
        slots[k].vals = s.vals;
        slots[k].explored = s.explored + 1;
      }
    });
  }
  for (auto& w : workers) w.join();

  out.nodes_explored = probe.explored;
  for (auto& sl : slots) out.nodes_explored += sl.explored;
  for (size_t k = 0; k < slots.size(); ++k) {
    if (slots[k].found) {
      out.holds = false;
      out.witness = extract(q, slots[k].vals);
      return out;
    }
  }
  out.holds = true;
  return out;
}

}  // namespace

Verdict decide_consequence(const Nmatrix& nm, std::span<const Formula> premises,
                           Formula conclusion, const SearchOptions& opts) {
  CompiledQuery q = compile(nm, premises, conclusion, opts);
  return search_falsifier(q, std::max(1, opts.jobs));
}

Verdict decide_valid(const Nmatrix& nm, Formula f, const SearchOptions& opts) {
  return decide_consequence(nm, {}, f, opts);
}

Verdict brute_force_consequence(const Nmatrix& nm,
                                std::span<const Formula> premises,
                                Formula conclusion, int max_nodes) {
  std::vector<Formula> roots(premises.begin(), premises.end());
  roots.push_back(conclusion);
  std::vector<Formula> topo = subformulas(roots);
  if (int(topo.size()) > max_nodes)
    throw TooLarge("query has " + std::to_string(topo.size()) +
                   " subformulas, oracle guard is " + std::to_string(max_nodes));

  std::unordered_map<Formula, int> index;
  for (size_t i = 0; i < topo.size(); ++i) index.emplace(topo[i], int(i));

  std::vector<TruthValue> vals(topo.size(), TruthValue::Tp);
  Verdict out;

  // plain product enumeration over every node, legality filtered per node
  auto legal_at = [&](size_t i) {
    Formula f = topo[i];
    TruthValue v = vals[i];
    switch (f.kind()) {
      case Formula::Kind::Atom:
        return true;
      case Formula::Kind::Neg:
        return nm.algebra.neg[ordinal(vals[index.at(f.child())])].contains(v);
      case Formula::Kind::Box:
        return nm.algebra.box[ordinal(vals[index.at(f.child())])].contains(v);
      case Formula::Kind::Dia:
        return nm.algebra.dia[ordinal(vals[index.at(f.child())])].contains(v);
      default:
        return nm.algebra
            .imp[ordinal(vals[index.at(f.lhs())])][ordinal(vals[index.at(f.rhs())])]
            .contains(v);
    }
  };

  bool found = false;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (found) return;
    if (i == topo.size()) {
      for (Formula p : premises)
        if (!nm.is_designated(vals[index.at(p)])) return;
      if (nm.is_designated(vals[index.at(conclusion)])) return;
      found = true;
      Valuation w;
      w.nodes = topo;
      w.values = vals;
      out.witness = std::move(w);
      return;
    }
    nm.algebra.domain.for_each([&](TruthValue v) {
      if (found) return;
      vals[i] = v;
      ++out.nodes_explored;
      if (legal_at(i)) rec(i + 1);
    });
  };
  rec(0);
  out.holds = !found;
  return out;
}

bool verify_witness(const Nmatrix& nm, std::span<const Formula> premises,
                    Formula conclusion, const Valuation& w) {
  auto at = [&](Formula f) -> std::optional<TruthValue> {
    return w.value_of(f);
  };
  // every node value inside the domain, compounds legal per the tables
  for (size_t i = 0; i < w.nodes.size(); ++i) {
    Formula f = w.nodes[i];
    TruthValue v = w.values[i];
    if (!nm.algebra.domain.contains(v)) return false;
    ValueSet cell;
    switch (f.kind()) {
      case Formula::Kind::Atom:
        continue;
      case Formula::Kind::Neg:
        cell = nm.algebra.apply(Connective::Neg, *at(f.child()));
        break;
      case Formula::Kind::Box:
        cell = nm.algebra.apply(Connective::Box, *at(f.child()));
        break;
      case Formula::Kind::Dia:
        cell = nm.algebra.apply(Connective::Dia, *at(f.child()));
        break;
      case Formula::Kind::Imp:
        cell = nm.algebra.apply(Connective::Imp, *at(f.lhs()), *at(f.rhs()));
        break;
    }
    if (!cell.contains(v)) return false;
  }
  for (Formula p : premises) {
    auto v = at(p);
    if (!v || !nm.is_designated(*v)) return false;
  }
  auto c = at(conclusion);
  return c && !nm.is_designated(*c);
}

ValueSet reachable_values(
    const Nmatrix& nm, Formula root,
    const std::unordered_map<Formula, TruthValue>& atom_values) {
  SearchOptions opts;
  for (const auto& [f, v] : atom_values) opts.pins.emplace(f, ValueSet(v));
  CompiledQuery q = compile(nm, {}, root, opts);
  // enumerate every legal valuation, collecting the root's values
  size_t root_idx = 0;
  for (size_t i = 0; i < q.nodes.size(); ++i)
    if (q.nodes[i].formula == root) root_idx = i;
  // drop the conclusion constraint: we want all values, not countermodels
  q.nodes[root_idx].constraint = nm.algebra.domain;
  for (const auto& [f, pin] : opts.pins) {
    for (auto& n : q.nodes)
      if (n.formula == f) n.constraint = pin & nm.algebra.domain;
  }

  ValueSet seen;
  std::vector<TruthValue> vals(q.nodes.size(), TruthValue::Tp);
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == q.nodes.size()) {
      seen |= ValueSet(vals[root_idx]);
      return;
    }
    ValueSet cand = q.candidates(vals, int(i));
    cand.for_each([&](TruthValue v) {
      vals[i] = v;
      rec(i + 1);
    });
  };
  rec(0);
  return seen;
}

ValueSet DerivedTable::at(std::span<const TruthValue> args) const {
  if (args.size() != metavars.size())
    throw Error("derived table wants " + std::to_string(metavars.size()) +
                " arguments");
  uint64_t key = 0;
  uint64_t mul = 1;
  for (TruthValue v : args) {
    key += ordinal(v) * mul;
    mul *= 8;
  }
  auto it = cells.find(key);
  if (it == cells.end()) throw Error("tuple outside the derived table");
  return it->second;
}

DerivedTable derived_table(const Nmatrix& nm, Schema skeleton) {
  DerivedTable out;
  out.metavars = metavars_of(skeleton);
  out.domain = nm.algebra.domain;

  // instantiate metavariables with fresh atoms, then pin those atoms
  Binding binding;
  std::vector<Formula> fresh;
  for (const std::string& mv : out.metavars) {
    std::string name = "v";
    for (char c : mv) name += char(std::tolower(c));
    Formula a = Formula::atom(name);
    binding.emplace(mv, a);
    fresh.push_back(a);
  }
  Formula root = instantiate(skeleton, binding);

  std::vector<TruthValue> tuple(out.metavars.size(), TruthValue::Tp);
  std::vector<TruthValue> members;
  nm.algebra.domain.for_each([&](TruthValue v) { members.push_back(v); });

  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == tuple.size()) {
      std::unordered_map<Formula, TruthValue> pin;
      for (size_t k = 0; k < fresh.size(); ++k) pin.emplace(fresh[k], tuple[k]);
      uint64_t key = 0;
      uint64_t mul = 1;
      for (TruthValue v : tuple) {
        key += ordinal(v) * mul;
        mul *= 8;
      }
      out.cells.emplace(key, reachable_values(nm, root, pin));
      return;
    }
    for (TruthValue v : members) {
      tuple[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------------------
// audits

bool mp_preserves_designation(const Nmatrix& nm) {
  bool ok = true;
  nm.algebra.domain.for_each([&](TruthValue x) {
    if (!nm.is_designated(x)) return;
    nm.algebra.domain.for_each([&](TruthValue y) {
      if (nm.is_designated(y)) return;
      if (!(nm.algebra.imp[ordinal(x)][ordinal(y)] & nm.designated).empty())
        ok = false;
    });
  });
  return ok;
}

Formula skeletonize(Schema s) {
  Binding b;
  for (const std::string& mv : metavars_of(s)) {
    std::string name;
    for (char c : mv) name += char(std::tolower(c));
    b.emplace(mv, Formula::atom(name));
  }
  return instantiate(s, b);
}

AuditReport audit_schemas(const Nmatrix& nm, std::string_view label,
                          std::span<const std::pair<std::string, Schema>> axioms) {
  AuditReport report;
  report.system = std::string(label);
  report.all_valid = true;
  for (const auto& [name, schema] : axioms) {
    Formula skeleton = skeletonize(schema);
    SchemaAudit a{name, skeleton, decide_valid(nm, skeleton)};
    if (!a.verdict.holds) report.all_valid = false;
    report.schemas.push_back(std::move(a));
  }
  report.mp_preserves_designation = mp_preserves_designation(nm);
  return report;
}

AuditReport audit_system(SystemId id, const TableOptions& topts) {
  std::vector<std::pair<std::string, Schema>> axioms;
  for (const AxiomSchema& ax : axioms_of(id))
    axioms.emplace_back(ax.name, ax.schema);
  return audit_schemas(builtin(id, topts), system_name(id), axioms);
}

SchemaAudit audit_schema_over(SystemId id, std::string_view schema_name,
                              const TableOptions& topts) {
  const AxiomSchema* ax = find_schema(schema_name);
  if (!ax) throw Error("unknown axiom schema: " + std::string(schema_name));
  Formula skeleton = skeletonize(ax->schema);
  return SchemaAudit{ax->name, skeleton, decide_valid(builtin(id, topts), skeleton)};
}

std::vector<LemmaCheck> verify_lemma_suite() {
  const Nmatrix& km = builtin(SystemId::Km);
  std::vector<LemmaCheck> out;

  auto entails = [&](std::vector<std::string> premises, std::string concl) {
    std::vector<Formula> ps;
    for (const auto& s : premises) ps.push_back(parse(s));
    return decide_consequence(km, ps, parse(concl)).holds;
  };
  auto equiv = [&](const std::string& a, const std::string& b) {
    return entails({a}, b) && entails({b}, a);
  };

  out.push_back({"Lemma43.i", "<>~p  =||=  ~[]p", equiv("<>~p", "~[]p")});
  out.push_back({"Lemma43.ii", "[]p  =||=  ~<>~p", equiv("[]p", "~<>~p")});
  out.push_back({"Lemma43.iii", "[]~p  =||=  ~<>p", equiv("[]~p", "~<>p")});
  out.push_back({"Lemma43.iv", "<>p  =||=  <>~~p", equiv("<>p", "<>~~p")});

  out.push_back({"Lemma44.i", "[]p, <>p, <>~q |= <>~(p->q)",
                 entails({"[]p", "<>p", "<>~q"}, "<>~(p->q)")});
  out.push_back({"Lemma44.ii", "<>p, []~q, <>~q |= <>~(p->q)",
                 entails({"<>p", "[]~q", "<>~q"}, "<>~(p->q)")});
  out.push_back({"Lemma44.iii", "[]p, <>p, []~q |= []~(p->q)",
                 entails({"[]p", "<>p", "[]~q"}, "[]~(p->q)")});
  out.push_back({"Lemma44.iv", "<>p, <>q |= <>(p->q)",
                 entails({"<>p", "<>q"}, "<>(p->q)")});
  out.push_back({"Lemma44.v", "<>~p, <>q |= <>(p->q)",
                 entails({"<>~p", "<>q"}, "<>(p->q)")});
  out.push_back({"Lemma44.vi", "<>~p, <>~q |= <>(p->q)",
                 entails({"<>~p", "<>~q"}, "<>(p->q)")});
  return out;
}

std::string verdict_to_json(const Nmatrix& nm,
                            std::span<const Formula> premises,
                            Formula conclusion, const Verdict& v,
                            int64_t time_ms) {
  nlohmann::ordered_json j;
  std::string query;
  for (size_t i = 0; i < premises.size(); ++i) {
    if (i) query += ", ";
    query += render(premises[i]);
  }
  query += premises.empty() ? "|- " : " |- ";
  query += render(conclusion);
  j["query"] = query;
  j["system"] = nm.name;
  j["verdict"] = v.holds ? "holds" : "fails";
  if (v.witness) {
    nlohmann::ordered_json w = nlohmann::ordered_json::object();
    for (size_t i = 0; i < v.witness->nodes.size(); ++i)
      w[render(v.witness->nodes[i])] = value_name(v.witness->values[i]);
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["nodes_explored"] = v.nodes_explored;
  j["time_ms"] = time_ms;
  return j.dump(2);
}

}  // namespace mnm
