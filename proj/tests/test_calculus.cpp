#include <doctest.h>

#include <fstream>
#include <sstream>

#include "mnm/derivations.hpp"
#include "mnm/dugundji.hpp"
#include "mnm/semantics.hpp"

using namespace mnm;

#ifndef MNM_TEST_DATA_DIR
#define MNM_TEST_DATA_DIR "tests/data"
#endif

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
Derivation load_drv(const std::string& name) {
  return parse_derivation(
      slurp(std::string(MNM_TEST_DATA_DIR) + "/derivations/" + name));
}
}  // namespace

TEST_CASE("axiom registries") {
  auto has = [](SystemId id, const std::string& name) {
    for (const AxiomSchema& ax : axioms_of(id))
      if (ax.name == name) return true;
    return false;
  };
  CHECK(has(SystemId::Tm, "T"));
  CHECK(!has(SystemId::Dm, "T"));
  CHECK(has(SystemId::Dm, "D"));
  CHECK(!has(SystemId::Km, "K"));
  CHECK(has(SystemId::Km, "K'"));
  CHECK(has(SystemId::Km, "I1"));
  CHECK(has(SystemId::T45md, "Kdet"));
  CHECK(has(SystemId::T45md, "5"));
  CHECK(!has(SystemId::Tmd, "K1"));
  CHECK(has(SystemId::T45m, "5"));
  CHECK(!has(SystemId::T4m, "5"));
  for (SystemId id : kAllSystems) {
    CHECK(has(id, "A1"));
    CHECK(has(id, "A2"));
    CHECK(has(id, "A3"));
    CHECK(has(id, "DN1"));
    CHECK(has(id, "M2"));
  }
  CHECK(km_circ_axioms().size() == 14);
  CHECK(find_schema("I2''") != nullptr);
  CHECK(find_schema("Delta5") != nullptr);
  CHECK(find_schema("nope") == nullptr);
}

TEST_CASE("check_derivation on the shipped files") {
  for (const char* name : {"pc_identity.drv", "circ_mp.drv", "pc_chain.drv",
                           "km_guarded.drv", "dn_chain.drv"}) {
    Derivation d = load_drv(name);
    auto err = check_derivation(d);
    INFO(name, err ? (" step " + std::to_string(err->index) + ": " + err->detail)
                   : "");
    CHECK(!err);
    // every checked sequent is semantically good
    CHECK(decide_consequence(builtin(d.system), d.hypotheses, d.conclusion())
              .holds);
  }

  Derivation bad = load_drv("bad/k_in_km.drv");
  auto err = check_derivation(bad);
  REQUIRE(err);
  CHECK(err->index == 1);
  CHECK(err->reason == StepError::Reason::NotAnInstance);
}

TEST_CASE("step errors") {
  Formula p = Formula::atom("p"), q = Formula::atom("q");

  Derivation d;
  d.system = SystemId::Km;
  d.steps.push_back({p, Justification::hyp()});
  auto e1 = check_derivation(d);
  REQUIRE(e1);
  CHECK(e1->reason == StepError::Reason::NotAHypothesis);

  Derivation d2;
  d2.system = SystemId::Km;
  d2.hypotheses = {p, q};
  d2.steps.push_back({p, Justification::hyp()});
  d2.steps.push_back({q, Justification::hyp()});
  d2.steps.push_back({Formula::imp(p, q), Justification::mp(1, 2)});
  auto e2 = check_derivation(d2);
  REQUIRE(e2);
  CHECK(e2->index == 3);
  CHECK(e2->reason == StepError::Reason::BadMP);

  Derivation d3;
  d3.system = SystemId::Km;
  d3.hypotheses = {p};
  d3.steps.push_back({p, Justification::mp(1, 2)});
  auto e3 = check_derivation(d3);
  REQUIRE(e3);
  CHECK(e3->reason == StepError::Reason::IndexOutOfRange);

  // a wrong explicit binding is rejected
  Derivation d4;
  d4.system = SystemId::Km;
  d4.steps.push_back(
      {parse("p -> (q -> p)"),
       Justification::ax("A1", Binding{{"A", q}, {"B", p}})});
  auto e4 = check_derivation(d4);
  REQUIRE(e4);
  CHECK(e4->reason == StepError::Reason::NotAnInstance);
}

TEST_CASE("deduction transform") {
  Formula p = Formula::atom("p"), q = Formula::atom("q");

  // one-step derivation of p from {p} becomes |- p -> p
  Derivation d;
  d.system = SystemId::Km;
  d.hypotheses = {p};
  d.steps.push_back({p, Justification::hyp()});
  Derivation t = deduction_transform(d, p);
  CHECK(!check_derivation(t));
  CHECK(t.hypotheses.empty());
  CHECK(t.conclusion() == Formula::imp(p, p));

  // discharging p in {p -> q, p} |- q yields {p -> q} |- p -> q
  Derivation d2;
  d2.system = SystemId::Km;
  d2.hypotheses = {Formula::imp(p, q), p};
  d2.steps.push_back({p, Justification::hyp()});
  d2.steps.push_back({Formula::imp(p, q), Justification::hyp()});
  d2.steps.push_back({q, Justification::mp(1, 2)});
  Derivation t2 = deduction_transform(d2, p);
  CHECK(!check_derivation(t2));
  CHECK(t2.hypotheses == std::vector<Formula>{Formula::imp(p, q)});
  CHECK(t2.conclusion() == Formula::imp(p, q));

  // rejects unchecked input
  Derivation broken;
  broken.system = SystemId::Km;
  broken.steps.push_back({p, Justification::hyp()});
  CHECK_THROWS_AS(deduction_transform(broken, p), InvalidDerivation);
}

TEST_CASE("transform of random checked derivations keeps checking") {
  // build derivations by randomly mixing axiom instances, hypotheses and MP
  uint64_t state = 777;
  Formula p = Formula::atom("p"), q = Formula::atom("q");
  std::vector<Formula> hyp_pool = {p, q, parse("p -> q"), parse("[]p"),
                                   parse("<>p -> q")};
  for (int round = 0; round < 40; ++round) {
    DerivationBuilder b(SystemId::Km, hyp_pool);
    std::vector<int> usable;
    int steps = 3 + int(split_mix(state) % 6);
    for (int i = 0; i < steps; ++i) {
      int choice = int(split_mix(state) % 3);
      if (choice == 0) {
        usable.push_back(
            b.hyp(hyp_pool[split_mix(state) % hyp_pool.size()]));
      } else if (choice == 1) {
        Binding bind{{"A", hyp_pool[split_mix(state) % hyp_pool.size()]},
                     {"B", hyp_pool[split_mix(state) % hyp_pool.size()]}};
        usable.push_back(b.ax("A1", bind));
      } else if (!usable.empty()) {
        // try to find an applicable MP pair
        bool applied = false;
        for (int i1 : usable) {
          for (int i2 : usable) {
            Formula f2 = b.at(i2);
            if (f2.kind() == Formula::Kind::Imp && f2.lhs() == b.at(i1)) {
              usable.push_back(b.mp(i1, i2));
              applied = true;
              break;
            }
          }
          if (applied) break;
        }
      }
    }
    if (b.size() == 0) continue;
    Derivation d = b.take();
    REQUIRE(!check_derivation(d));
    Formula discharged = hyp_pool[split_mix(state) % hyp_pool.size()];
    Derivation t = deduction_transform(d, discharged);
    auto err = check_derivation(t);
    INFO("round ", round);
    CHECK(!err);
    CHECK(t.conclusion() ==
          Formula::imp(discharged, d.conclusion()));
  }
}

TEST_CASE("derivation corpus checks, transforms and is semantically sound") {
  auto corpus = derivation_corpus();
  CHECK(corpus.size() >= 14);
  for (const CorpusEntry& e : corpus) {
    INFO(e.name);
    auto err = check_derivation(e.derivation);
    CHECK(!err);
    CHECK(decide_consequence(builtin(e.derivation.system),
                             e.derivation.hypotheses,
                             e.derivation.conclusion())
              .holds);
    // discharge every hypothesis one by one; the checker stays green
    Derivation d = e.derivation;
    while (!d.hypotheses.empty()) {
      d = deduction_transform(d, d.hypotheses.back());
      CHECK(!check_derivation(d));
    }
    CHECK(
        decide_valid(builtin(d.system), d.conclusion()).holds);
  }
}

TEST_CASE("derivation file round-trip") {
  for (const char* name : {"pc_identity.drv", "circ_mp.drv", "km_guarded.drv"}) {
    Derivation d = load_drv(name);
    Derivation back = parse_derivation(render_derivation(d));
    CHECK(back.system == d.system);
    CHECK(back.hypotheses == d.hypotheses);
    REQUIRE(back.steps.size() == d.steps.size());
    for (size_t i = 0; i < d.steps.size(); ++i)
      CHECK(back.steps[i].formula == d.steps[i].formula);
    CHECK(!check_derivation(back));
  }
  CHECK_THROWS_AS(parse_derivation("1. p ; hyp\n"), DerivationFileError);
  CHECK_THROWS_AS(parse_derivation("system Nope\n1. p ; hyp\n"),
                  DerivationFileError);
}

TEST_CASE("Lemma 5.2 facts hold semantically over Km") {
  const Nmatrix& km = builtin(SystemId::Km);
  auto valid = [&](const std::string& s) {
    return decide_valid(km, parse(s)).holds;
  };
  CHECK(valid("<>p -> circ p"));
  CHECK(valid("<>~p -> circ p"));
  CHECK(valid("(<>p | <>~p) -> circ p"));
  CHECK(valid("(circ p -> ([](p -> q) -> ([]p -> []q))) -> (<>p -> ([](p -> q) -> ([]p -> []q)))"));
  CHECK(valid("(circ q -> ([](p -> q) -> (<>p -> <>q))) -> (<>~q -> ([](p -> q) -> (<>p -> <>q)))"));
  CHECK(valid("(circ p -> (<>(p -> q) -> ([]p -> <>q))) -> (<>p -> (<>(p -> q) -> ([]p -> <>q)))"));
  CHECK(valid("(circ p -> (<>q -> <>(p -> q))) -> ((<>p | <>~p) -> (<>q -> <>(p -> q)))"));
  CHECK(valid("(circ q -> (<>~p -> <>(p -> q))) -> (<>~q -> (<>~p -> <>(p -> q)))"));
  // bullet propagation is equivalent to the I axioms
  auto equiv = [&](const std::string& a, const std::string& b) {
    return decide_consequence(km, std::vector<Formula>{parse(a)}, parse(b))
               .holds &&
           decide_consequence(km, std::vector<Formula>{parse(b)}, parse(a))
               .holds;
  };
  CHECK(equiv("bullet p -> bullet(p -> q)",
              "([]p & []~p) -> ([](p -> q) & []~(p -> q))"));
  CHECK(equiv("bullet q -> bullet(p -> q)",
              "([]q & []~q) -> ([](p -> q) & []~(p -> q))"));
}

TEST_CASE("Km-circ axioms are valid over Km and vice versa") {
  const Nmatrix& km = builtin(SystemId::Km);
  for (const AxiomSchema& ax : km_circ_axioms())
    CHECK(decide_valid(km, skeletonize(ax.schema)).holds);
  // retropropagation forms as well
  CHECK(decide_valid(km, skeletonize(find_schema("I1''")->schema)).holds);
  CHECK(decide_valid(km, skeletonize(find_schema("I2''")->schema)).holds);
}
