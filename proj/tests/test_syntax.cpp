#include <doctest.h>

#include "mnm/dugundji.hpp"
#include "mnm/syntax.hpp"

using namespace mnm;

TEST_CASE("parsing and derived connectives") {
  Formula p = Formula::atom("p"), q = Formula::atom("q");
  CHECK(parse("[]p -> <>p") == Formula::imp(Formula::box(p), Formula::dia(p)));
  CHECK(parse("p | q") == Formula::imp(Formula::neg(p), q));
  CHECK(parse("p & q") == Formula::neg(Formula::imp(p, Formula::neg(q))));
  CHECK(parse("circ p") == Formula::imp(Formula::box(p), Formula::dia(p)));
  CHECK(parse("bullet p") ==
        Formula::neg(Formula::imp(Formula::box(p), Formula::dia(p))));
  Formula np = Formula::neg(p);
  CHECK(parse("circt p") ==
        Formula::conj(Formula::imp(Formula::box(p), p),
                      Formula::imp(Formula::box(np), np)));
  // -> is right-associative, | and & bind tighter
  CHECK(parse("p -> q -> p") == Formula::imp(p, Formula::imp(q, p)));
  CHECK(parse("~p | q -> p") ==
        Formula::imp(Formula::imp(Formula::neg(np), q), p));
  CHECK(parse("p1 -> p2") ==
        Formula::imp(Formula::atom("p1"), Formula::atom("p2")));
}

TEST_CASE("unicode aliases") {
  CHECK(parse("¬p") == parse("~p"));
  CHECK(parse("□p → ◇p") == parse("[]p -> <>p"));
  CHECK(parse("p ∨ q") == parse("p | q"));
  CHECK(parse("p ∧ q") == parse("p & q"));
  CHECK(parse("∘p") == parse("circ p"));
  CHECK(parse("•p") == parse("bullet p"));
  CHECK(parse("∘'p") == parse("circt p"));
  CHECK(parse("∘′p") == parse("circt p"));
}

TEST_CASE("syntax errors carry offsets and expectations") {
  CHECK_THROWS_AS(parse("p ->"), SyntaxError);
  CHECK_THROWS_AS(parse("(p -> q"), SyntaxError);
  CHECK_THROWS_AS(parse(""), SyntaxError);
  CHECK_THROWS_AS(parse("p q"), SyntaxError);
  try {
    parse("p -> $");
  } catch (const SyntaxError& e) {
    CHECK(e.offset == 5);
    CHECK(!e.expected.empty());
  }
  // metavariables are rejected in concrete formulas, accepted in schemas
  CHECK_THROWS_AS(parse("A -> p"), SyntaxError);
  CHECK(parse_schema("A -> p").has_metavars());
  CHECK_THROWS_AS(parse("Abc"), SyntaxError);
}

TEST_CASE("rendering round-trips") {
  Formula p = Formula::atom("p");
  CHECK(render(Formula::imp(Formula::box(p), p)) == "[]p -> p");
  CHECK(render(Formula::neg(Formula::neg(p))) == "~~p");
  CHECK(render(parse("(p -> q) -> p")) == "(p -> q) -> p");
  CHECK(render(parse("~(p -> q)")) == "~(p -> q)");
  CHECK(render(parse("p -> (q -> p)")) == "p -> q -> p");

  uint64_t state = 20240817;
  FormulaGenOptions gopts;
  gopts.max_depth = 7;
  gopts.max_atoms = 4;
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(state, gopts);
    if (f.tree_size() > 200) continue;
    CHECK(parse(render(f)) == f);
  }
}

TEST_CASE("subformulas are deduped and child-first") {
  Formula p = Formula::atom("p");
  auto subs = subformulas(parse("[]p -> p"));
  REQUIRE(subs.size() == 3);
  CHECK(subs[0] == p);
  CHECK(subs[1] == Formula::box(p));
  CHECK(subs[2] == parse("[]p -> p"));

  CHECK(subformulas(p).size() == 1);

  auto subs2 = subformulas(parse("~(p -> p)"));
  REQUIRE(subs2.size() == 3);  // p is shared
  CHECK(subs2[0] == p);
  CHECK(subs2[1] == parse("p -> p"));
  CHECK(subs2[2] == parse("~(p -> p)"));

  uint64_t state = 7;
  FormulaGenOptions gopts;
  for (int i = 0; i < 200; ++i) {
    Formula f = random_formula(state, gopts);
    auto subs3 = subformulas(f);
    CHECK(int(subs3.size()) <= f.tree_size());
    // children precede parents
    for (size_t k = 0; k < subs3.size(); ++k) {
      auto before = [&](Formula g) {
        for (size_t j = 0; j < k; ++j)
          if (subs3[j] == g) return true;
        return false;
      };
      Formula g = subs3[k];
      if (g.kind() == Formula::Kind::Imp) {
        CHECK(before(g.lhs()));
        CHECK(before(g.rhs()));
      } else if (!g.is_atom()) {
        CHECK(before(g.child()));
      }
    }
  }
}

TEST_CASE("parser rejects garbage without crashing") {
  uint64_t state = 8675309;
  const char charset[] = "pq() ->~[]<>|&AZ19_$#";
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    int len = int(split_mix(state) % 24);
    for (int k = 0; k < len; ++k)
      text += charset[split_mix(state) % (sizeof(charset) - 1)];
    try {
      Formula f = parse(text);
      CHECK(parse(render(f)) == f);  // whatever parses, round-trips
    } catch (const SyntaxError&) {
      // fine: garbage is rejected with a diagnostic
    }
  }
}

TEST_CASE("structure helpers") {
  CHECK(modal_depth(parse("p -> q")) == 0);
  CHECK(modal_depth(parse("[]<>p -> q")) == 2);
  CHECK(modal_depth(parse("~[]~[]p")) == 2);
  CHECK(atoms_of(parse("q -> (p -> q)")) ==
        std::vector<std::string>{"q", "p"});
  CHECK(metavars_of(parse_schema("B -> (A -> B)")) ==
        std::vector<std::string>{"A", "B"});
  CHECK(parse("[] [] p").tree_size() == 3);
}

TEST_CASE("instantiate and match") {
  Schema K = parse_schema("[](A -> B) -> ([]A -> []B)");
  Formula inst = instantiate(
      K, {{"A", Formula::atom("p")}, {"B", Formula::atom("q")}});
  CHECK(inst == parse("[](p -> q) -> ([]p -> []q)"));

  auto b = match_schema(K, inst);
  REQUIRE(b.has_value());
  CHECK(b->at("A") == Formula::atom("p"));
  CHECK(b->at("B") == Formula::atom("q"));

  Schema D = parse_schema("[]A -> <>A");
  CHECK(instantiate(D, {{"A", parse("[]p")}}) == parse("[][]p -> <>[]p"));

  Schema T = parse_schema("[]A -> A");
  CHECK(instantiate(T, {{"A", parse("p | q")}}) ==
        parse("[](~p -> q) -> (~p -> q)"));
  CHECK(!match_schema(T, parse("[]p -> q")).has_value());

  Schema DN1 = parse_schema("[]A -> []~~A");
  auto b2 = match_schema(DN1, parse("[]~p -> []~~~p"));
  REQUIRE(b2.has_value());
  CHECK(b2->at("A") == parse("~p"));

  CHECK_THROWS_AS(instantiate(K, {{"A", Formula::atom("p")}}), MissingBinding);

  // instantiate(match) is the identity when the match succeeds
  uint64_t state = 99;
  FormulaGenOptions gopts;
  gopts.max_depth = 4;
  for (const char* stext : {"A -> (B -> A)", "[](A -> B) -> ([]A -> []B)",
                            "<>~B -> (<>~A -> <>(A -> B))"}) {
    Schema s = parse_schema(stext);
    for (int i = 0; i < 50; ++i) {
      Binding bind;
      for (const std::string& mv : metavars_of(s))
        bind.emplace(mv, random_formula(state, gopts));
      Formula f = instantiate(s, bind);
      auto back = match_schema(s, f);
      REQUIRE(back.has_value());
      CHECK(instantiate(s, *back) == f);
    }
  }
}
