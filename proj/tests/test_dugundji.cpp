#include <doctest.h>

#include <functional>

#include "mnm/dugundji.hpp"

using namespace mnm;

TEST_CASE("delta and gamma construction") {
  DugundjiFormula d3 = build_delta(3);
  CHECK(d3.n == 3);
  // the displayed three-disjunct formula, in ASCII with | sugar
  Formula displayed = parse(
      "(([]((p1 | p2) | p3) -> [](p2 | p3))"
      " | ([]((p1 | p2) | p3) -> [](p1 | p3)))"
      " | ([]((p1 | p2) | p3) -> [](p1 | p2))");
  CHECK(d3.formula == displayed);
  CHECK(parse(render_sugared(d3.formula)) == d3.formula);
  CHECK(render_sugared(d3.formula) ==
        "([](p1 | p2 | p3) -> [](p2 | p3)) | ([](p1 | p2 | p3) -> [](p1 | "
        "p3)) | ([](p1 | p2 | p3) -> [](p1 | p2))");

  for (int n = 3; n <= 6; ++n) {
    int atoms = 0;
    for (Formula f : subformulas(build_delta(n).formula))
      if (f.is_atom()) ++atoms;
    CHECK(atoms == n);
  }

  DugundjiFormula g3 = build_gamma(3);
  // each gamma disjunct's antecedent is box-neg-box: modal depth 2
  CHECK(modal_depth(Formula::box(Formula::neg(Formula::box(g3.alpha)))) == 2);
  CHECK(!(g3.formula == d3.formula));

  CHECK_THROWS_AS(build_delta(2), BadN);
  CHECK_THROWS_AS(build_gamma(1), BadN);
}

TEST_CASE("falsification with the published hint") {
  for (int n = 3; n <= 6; ++n) {
    auto w = falsify(SystemId::T45m, build_delta(n));
    REQUIRE(w);
    for (int j = 1; j <= n; ++j)
      CHECK(*w->value_of(Formula::atom("p" + std::to_string(j))) ==
            TruthValue::Cp);
  }
  for (SystemId id : {SystemId::Tmd, SystemId::T4md}) {
    for (int n = 3; n <= 6; ++n) {
      DugundjiFormula g = build_gamma(n);
      auto w = falsify(id, g);
      REQUIRE(w);
      CHECK(*w->value_of(Formula::box(g.alpha)) == TruthValue::Fn);
      for (Formula beta : g.betas)
        CHECK(*w->value_of(Formula::box(beta)) == TruthValue::Cn);
    }
  }
  CHECK(!falsify(SystemId::Km, parse("p -> p")));
}

TEST_CASE("deterministic matrices") {
  // two-element Boolean matrix with identity modalities
  DetMatrix boolean{2, {1, 0}, {0, 1}, {0, 1}, {1, 1, 0, 1}, {false, true}};
  boolean.validate();
  CHECK(is_model(boolean, SystemId::Km));
  CHECK(is_model(boolean, SystemId::T45m));
  CHECK(validate_det(boolean, build_delta(3).formula));
  CHECK(!validate_det(boolean, parse("p -> q")));

  // constant-box matrix falsifies (T)
  DetMatrix const_box{2, {1, 0}, {1, 1}, {1, 1}, {1, 1, 0, 1}, {false, true}};
  CHECK(is_model(const_box, SystemId::Km));
  CHECK(!is_model(const_box, SystemId::Tm));

  DetMatrix broken{2, {1, 0}, {0, 1}, {0, 1}, {1, 1, 1, 1}, {false, true}};
  // 1 -> 0 designated breaks MP preservation
  CHECK(!is_model(broken, SystemId::Km));

  DetMatrix bad{2, {1, 0}, {0, 1}, {0, 1}, {1, 1, 0, 1}, {true, true}};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("size-2 scan grid") {
  ScanOptions opts;
  opts.jobs = 4;
  ScanReport r = scan_matrices(2, SystemId::Km, build_delta(3).formula, opts);
  CHECK(r.candidates == 49152);
  CHECK(r.admissible == 2048);
  CHECK(r.models == 10);  // frozen by the first exhaustive run
  CHECK(r.violations.empty());

  ScanReport rg = scan_matrices(2, SystemId::Tmd, build_gamma(3).formula, opts);
  CHECK(rg.candidates == 49152);
  CHECK(rg.models == 4);
  CHECK(rg.violations.empty());

  CHECK_THROWS_AS(scan_matrices(4, SystemId::Km, parse("p -> p"), {}), BadN);
  ScanOptions over;
  over.budget = 5000000;
  CHECK_THROWS_AS(scan_matrices(3, SystemId::Km, parse("p -> p"), over),
                  BudgetExceeded);
}

TEST_CASE("every system between Km and T45m scans clean at size 2") {
  ScanOptions opts;
  opts.jobs = 4;
  Formula d3 = build_delta(3).formula;
  for (SystemId id :
       {SystemId::Km, SystemId::K4m, SystemId::K45m, SystemId::Dm,
        SystemId::D4m, SystemId::D45m, SystemId::Tm, SystemId::T4m,
        SystemId::T45m}) {
    ScanReport r = scan_matrices(2, id, d3, opts);
    INFO(system_name(id), " models=", r.models);
    CHECK(r.models > 0);
    CHECK(r.violations.empty());
  }
}

TEST_CASE("size-3 sampled scan") {
  ScanOptions opts;
  opts.seed = 11;
  opts.budget = 3000;
  ScanReport r = scan_matrices(3, SystemId::Km, build_delta(4).formula, opts);
  CHECK(r.candidates == 3000);
  CHECK(r.violations.empty());  // models must validate delta(4)
}

TEST_CASE("substitution behavior of models") {
  // over every size-2 model of Km: if h(p_i) = h(p_k) for the pigeonhole
  // pair, then alpha(3) and beta_i(3) evaluate equal
  DugundjiFormula d3 = build_delta(3);
  // exhaustive over all 1024 deterministic two-element tables with D={1}
  for (int neg_i = 0; neg_i < 4; ++neg_i)
    for (int imp_i = 0; imp_i < 16; ++imp_i)
      for (int box_i = 0; box_i < 4; ++box_i)
        for (int dia_i = 0; dia_i < 4; ++dia_i) {
          DetMatrix m{2,
                      {neg_i & 1, (neg_i >> 1) & 1},
                      {box_i & 1, (box_i >> 1) & 1},
                      {dia_i & 1, (dia_i >> 1) & 1},
                      {imp_i & 1, (imp_i >> 1) & 1, (imp_i >> 2) & 1,
                       (imp_i >> 3) & 1},
                      {false, true}};
          if (!is_model(m, SystemId::Km)) continue;
          // all assignments with a repeated value among p1..p3
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int c = 0; c < 2; ++c) {
                auto eval = [&](Formula f) {
                  DetMatrix mm = m;
                  // tiny evaluator over atoms p1,p2,p3
                  std::function<int(Formula)> go = [&](Formula g) -> int {
                    switch (g.kind()) {
                      case Formula::Kind::Atom:
                        if (g.atom_name() == "p1") return a;
                        if (g.atom_name() == "p2") return b;
                        return c;
                      case Formula::Kind::Neg:
                        return mm.neg[go(g.child())];
                      case Formula::Kind::Box:
                        return mm.box[go(g.child())];
                      case Formula::Kind::Dia:
                        return mm.dia[go(g.child())];
                      default:
                        return mm.apply_imp(go(g.lhs()), go(g.rhs()));
                    }
                  };
                  return go(f);
                };
                int vals[3] = {a, b, c};
                for (int i = 0; i < 3; ++i)
                  for (int k = 0; k < 3; ++k) {
                    if (i == k || vals[i] != vals[k]) continue;
                    CHECK(eval(d3.alpha) == eval(d3.betas[i]));
                  }
              }
        }
}

TEST_CASE("the deterministic system validates the pigeonhole formulas") {
  // T45md is the one system characterized by a finite deterministic matrix;
  // with only 4 values, delta(n) and gamma(n) are valid there for n >= 3
  // (decided by the engine, frozen here)
  for (int n = 3; n <= 5; ++n) {
    CHECK(!falsify(SystemId::T45md, build_delta(n)));
    CHECK(!falsify(SystemId::T45md, build_gamma(n)));
    CHECK(validate_det(t45md_matrix(), build_delta(n).formula));
  }
}

TEST_CASE("conservativity over the classical fragment") {
  for (SystemId id : {SystemId::Km, SystemId::T45m, SystemId::Tmd}) {
    ConservativityReport r = conservativity_check(id, 300, 6, 911);
    CHECK(r.discrepancies == 0);
  }
  CHECK(classical_valid(parse("p -> (q -> p)")));
  CHECK(!classical_valid(parse("~p")));
}

TEST_CASE("the deterministic 4-valued matrix agrees with the T45md Nmatrix") {
  DetMatrix m = t45md_matrix();
  CHECK(m.size == 4);
  m.validate();
  AgreementReport r = t45md_agreement(300, 5);
  CHECK(r.disagreements == 0);
  CHECK(validate_det(m, parse("[]p -> [][]p")));
  CHECK(decide_valid(builtin(SystemId::T45md), parse("[]p -> [][]p")).holds);
}
