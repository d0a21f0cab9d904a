#include "mnm/recovery.hpp"

#include <algorithm>

#include <json.hpp>

namespace mnm {

Formula circ(Formula f) { return Formula::imp(Formula::box(f), Formula::dia(f)); }

Formula bullet(Formula f) { return Formula::neg(circ(f)); }

Formula circ_prime(Formula f) {
  Formula nf = Formula::neg(f);
  return Formula::conj(Formula::imp(Formula::box(f), f),
                       Formula::imp(Formula::box(nf), nf));
}

SystemId dat_source(DatKind k) {
  return k == DatKind::KmFromDm ? SystemId::Dm : SystemId::Tm;
}

SystemId dat_target(DatKind k) {
  return k == DatKind::DmFromTm ? SystemId::Dm : SystemId::Km;
}

std::string_view dat_kind_name(DatKind k) {
  switch (k) {
    case DatKind::KmFromDm:
      return "circ";
    case DatKind::DmFromTm:
      return "circt";
    default:
      return "both";
  }
}

std::optional<DatKind> parse_dat_kind(std::string_view name) {
  if (name == "circ") return DatKind::KmFromDm;
  if (name == "circt") return DatKind::DmFromTm;
  if (name == "both") return DatKind::KmFromTm;
  return std::nullopt;
}

bool dat_verify(const DatQuery& q, const DatWitness& w) {
  std::vector<Formula> premises = q.premises;
  for (Formula f : w.upsilon) premises.push_back(circ(f));
  for (Formula f : w.upsilon_prime) premises.push_back(circ_prime(f));
  const Nmatrix& target = builtin(dat_target(q.kind));
  return decide_consequence(target, premises, q.conclusion).holds;
}

std::vector<Formula> dat_pool(const DatQuery& q, int pool_depth) {
  std::vector<Formula> roots = q.premises;
  roots.push_back(q.conclusion);
  std::vector<Formula> pool = subformulas(roots);

  if (pool_depth > 0) {
    // widen with every formula up to the requested depth over the atoms
    std::vector<Formula> atoms;
    for (Formula f : pool)
      if (f.is_atom()) atoms.push_back(f);
    std::vector<Formula> level = atoms;
    std::vector<Formula> all = atoms;
    for (int d = 1; d <= pool_depth; ++d) {
      std::vector<Formula> next;
      for (Formula f : level) {
        next.push_back(Formula::neg(f));
        next.push_back(Formula::box(f));
        next.push_back(Formula::dia(f));
      }
      for (Formula f : level)
        for (Formula g : all) {
          next.push_back(Formula::imp(f, g));
          next.push_back(Formula::imp(g, f));
        }
      for (Formula f : next) all.push_back(f);
      level = std::move(next);
    }
    for (Formula f : all)
      if (std::find(pool.begin(), pool.end(), f) == pool.end())
        pool.push_back(f);
  }
  return pool;
}

namespace {

// enumerates k-subsets of [0, n) in lexicographic order
struct SubsetIter {
  int n, k;
  std::vector<int> idx;
  bool done = false;

  SubsetIter(int n_, int k_) : n(n_), k(k_) {
    if (k > n) {
      done = true;
      return;
    }
    for (int i = 0; i < k; ++i) idx.push_back(i);
  }
  bool next() {
    if (done) return false;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) {
      done = true;
      return false;
    }
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  }
};

}  // namespace

DatSearchResult dat_search(const DatQuery& q, const DatSearchOptions& opts) {
  DatSearchResult out;
  const Nmatrix& source = builtin(dat_source(q.kind));
  out.source_holds =
      decide_consequence(source, q.premises, q.conclusion).holds;
  if (!out.source_holds) return out;  // no spurious witness can exist

  std::vector<Formula> pool = dat_pool(q, opts.pool_depth);
  int n = int(pool.size());
  bool use_circ = q.kind != DatKind::DmFromTm;
  bool use_circt = q.kind != DatKind::KmFromDm;

  auto try_witness = [&](const DatWitness& w) {
    ++out.candidates_tried;
    return dat_verify(q, w);
  };

  for (int total = 0; total <= opts.max_size; ++total) {
    for (int k_circ = use_circ ? std::min(total, n) : 0; k_circ >= 0; --k_circ) {
      int k_ct = total - k_circ;
      if (!use_circ && k_circ > 0) continue;
      if (!use_circt && k_ct > 0) continue;
      if (k_ct > n) continue;
      // iterate both subset choices lexicographically
      SubsetIter a(n, k_circ);
      if (a.done) continue;
      do {
        SubsetIter b(n, k_ct);
        if (b.done) continue;
        do {
          DatWitness w;
          for (int i : a.idx) w.upsilon.push_back(pool[i]);
          for (int i : b.idx) w.upsilon_prime.push_back(pool[i]);
          if (try_witness(w)) {
            out.witness = std::move(w);
            return out;
          }
        } while (b.next());
      } while (a.next());
    }
  }
  return out;
}

std::string dat_to_json(const DatQuery& q, const DatSearchResult& r) {
  nlohmann::ordered_json j;
  j["source"] = system_name(dat_source(q.kind));
  j["target"] = system_name(dat_target(q.kind));
  j["kind"] = dat_kind_name(q.kind);
  std::string query;
  for (size_t i = 0; i < q.premises.size(); ++i) {
    if (i) query += ", ";
    query += render(q.premises[i]);
  }
  query += q.premises.empty() ? "|- " : " |- ";
  query += render(q.conclusion);
  j["query"] = query;
  j["source_holds"] = r.source_holds;
  auto arr = nlohmann::ordered_json::array();
  auto arr2 = nlohmann::ordered_json::array();
  if (r.witness) {
    for (Formula f : r.witness->upsilon) arr.push_back(render(f));
    for (Formula f : r.witness->upsilon_prime) arr2.push_back(render(f));
  }
  j["upsilon"] = arr;
  j["upsilon_prime"] = arr2;
  j["verified"] = r.witness.has_value();
  return j.dump(2);
}

}  // namespace mnm
