#include "mnm/derivations.hpp"

#include <algorithm>

namespace mnm {

DerivationBuilder::DerivationBuilder(SystemId system,
                                     std::vector<Formula> hypotheses) {
  d_.system = system;
  d_.hypotheses = std::move(hypotheses);
}

int DerivationBuilder::hyp(Formula f) {
  if (std::find(d_.hypotheses.begin(), d_.hypotheses.end(), f) ==
      d_.hypotheses.end())
    throw Error("hyp step is not among the hypotheses: " + render(f));
  d_.steps.push_back({f, Justification::hyp()});
  return size();
}

int DerivationBuilder::ax(const std::string& name, Binding binding) {
  const AxiomSchema* schema = find_schema(name);
  if (!schema) throw Error("unknown axiom schema " + name);
  Formula inst = instantiate(schema->schema, binding);
  d_.steps.push_back({inst, Justification::ax(name, std::move(binding))});
  return size();
}

int DerivationBuilder::mp(int antecedent, int implication) {
  Formula impl = at(implication);
  if (impl.kind() != Formula::Kind::Imp || !(impl.lhs() == at(antecedent)))
    throw Error("mp mismatch while building");
  d_.steps.push_back({impl.rhs(), Justification::mp(antecedent, implication)});
  return size();
}

int DerivationBuilder::inline_theorem(const Derivation& theorem) {
  if (!theorem.hypotheses.empty())
    throw Error("only hypothesis-free derivations can be inlined");
  int offset = size();
  for (const Step& st : theorem.steps) {
    Step copy = st;
    if (copy.just.kind == Justification::Kind::MP) {
      copy.just.from += offset;
      copy.just.impl += offset;
    }
    d_.steps.push_back(std::move(copy));
  }
  return size();
}

int DerivationBuilder::syllogism(int i, int j) {
  Formula xy = at(i);
  Formula yz = at(j);
  if (xy.kind() != Formula::Kind::Imp || yz.kind() != Formula::Kind::Imp ||
      !(xy.rhs() == yz.lhs()))
    throw Error("syllogism wants X -> Y and Y -> Z");
  Formula x = xy.lhs(), z = yz.rhs();
  int s1 = ax("A1", {{"A", yz}, {"B", x}});
  int s2 = mp(j, s1);  // x -> (y -> z)
  int s3 = ax("A2", {{"A", x}, {"B", xy.rhs()}, {"C", z}});
  int s4 = mp(s2, s3);  // (x -> y) -> (x -> z)
  return mp(i, s4);
}

Formula DerivationBuilder::at(int index) const {
  if (index < 1 || index > size()) throw Error("step index out of range");
  return d_.steps[index - 1].formula;
}

// ---------------------------------------------------------------------------
// propositional theorems

Derivation thm_identity(SystemId sys, Formula a) {
  DerivationBuilder b(sys);
  Formula aa = Formula::imp(a, a);
  int s1 = b.ax("A1", {{"A", a}, {"B", aa}});
  int s2 = b.ax("A2", {{"A", a}, {"B", aa}, {"C", a}});
  int s3 = b.mp(s1, s2);
  int s4 = b.ax("A1", {{"A", a}, {"B", a}});
  b.mp(s4, s3);
  return b.take();
}

Derivation thm_explosion(SystemId sys, Formula a, Formula b) {
  Formula na = Formula::neg(a), nb = Formula::neg(b);
  DerivationBuilder bld(sys, {na, a});
  int h1 = bld.hyp(na);
  int h2 = bld.hyp(a);
  int s3 = bld.ax("A1", {{"A", a}, {"B", nb}});
  int s4 = bld.mp(h2, s3);  // ~b -> a
  int s5 = bld.ax("A1", {{"A", na}, {"B", nb}});
  int s6 = bld.mp(h1, s5);  // ~b -> ~a
  int s7 = bld.ax("A3", {{"A", a}, {"B", b}});
  int s8 = bld.mp(s6, s7);
  bld.mp(s4, s8);  // b
  Derivation d = bld.take();
  d = deduction_transform(d, a);
  return deduction_transform(d, na);
}

Derivation thm_dn_elim(SystemId sys, Formula a) {
  Formula na = Formula::neg(a), nna = Formula::neg(na);
  DerivationBuilder bld(sys, {nna});
  int h1 = bld.hyp(nna);
  int s2 = bld.ax("A1", {{"A", nna}, {"B", na}});
  int s3 = bld.mp(h1, s2);  // ~a -> ~~a
  int s4 = bld.ax("A3", {{"A", na}, {"B", a}});
  int s5 = bld.mp(s3, s4);  // (~a -> ~a) -> a
  int s6 = bld.inline_theorem(thm_identity(sys, na));
  bld.mp(s6, s5);
  return deduction_transform(bld.take(), nna);
}

Derivation thm_dn_intro(SystemId sys, Formula a) {
  Formula na = Formula::neg(a);
  Formula nna = Formula::neg(na);
  Formula nnna = Formula::neg(nna);
  DerivationBuilder bld(sys, {a});
  int h1 = bld.hyp(a);
  int s2 = bld.inline_theorem(thm_dn_elim(sys, na));  // ~~~a -> ~a
  int s3 = bld.ax("A3", {{"A", a}, {"B", nna}});
  int s4 = bld.mp(s2, s3);  // (~~~a -> a) -> ~~a
  int s5 = bld.ax("A1", {{"A", a}, {"B", nnna}});
  int s6 = bld.mp(h1, s5);  // ~~~a -> a
  bld.mp(s6, s4);           // ~~a
  return deduction_transform(bld.take(), a);
}

Derivation thm_contrapose(SystemId sys, Formula a, Formula b) {
  Formula ab = Formula::imp(a, b);
  Formula nb = Formula::neg(b);
  Formula na = Formula::neg(a);
  Formula nna = Formula::neg(na);
  DerivationBuilder bld(sys, {ab, nb});
  int h1 = bld.hyp(ab);
  int h2 = bld.hyp(nb);
  int s3 = bld.inline_theorem(thm_dn_elim(sys, a));  // ~~a -> a
  int s4 = bld.syllogism(s3, h1);                    // ~~a -> b
  int s5 = bld.ax("A1", {{"A", nb}, {"B", nna}});
  int s6 = bld.mp(h2, s5);                           // ~~a -> ~b
  int s7 = bld.ax("A3", {{"A", b}, {"B", na}});
  // (~~a -> ~b) -> ((~~a -> b) -> ~a)
  int s8 = bld.mp(s6, s7);
  bld.mp(s4, s8);  // ~a
  Derivation d = deduction_transform(bld.take(), nb);
  return deduction_transform(d, ab);
}

Derivation thm_disj_intro_left(SystemId sys, Formula a, Formula b) {
  Formula na = Formula::neg(a);
  DerivationBuilder bld(sys, {a});
  int h1 = bld.hyp(a);
  int s2 = bld.inline_theorem(thm_explosion(sys, a, b));  // ~a -> (a -> b)
  int s3 = bld.ax("A2", {{"A", na}, {"B", a}, {"C", b}});
  int s4 = bld.mp(s2, s3);  // (~a -> a) -> (~a -> b)
  int s5 = bld.ax("A1", {{"A", a}, {"B", na}});
  int s6 = bld.mp(h1, s5);  // ~a -> a
  bld.mp(s6, s4);           // ~a -> b
  return deduction_transform(bld.take(), a);
}

Derivation thm_disj_intro_right(SystemId sys, Formula a, Formula b) {
  DerivationBuilder bld(sys);
  bld.ax("A1", {{"A", b}, {"B", Formula::neg(a)}});
  return bld.take();
}

Derivation thm_conj_elim1(SystemId sys, Formula a, Formula b) {
  // (a & b) -> a, with a & b := ~(a -> ~b)
  Formula nb = Formula::neg(b);
  Formula x = Formula::imp(a, nb);
  DerivationBuilder bld(sys);
  int s1 = bld.inline_theorem(thm_explosion(sys, a, nb));  // ~a -> (a -> ~b)
  int s2 = bld.inline_theorem(thm_contrapose(sys, Formula::neg(a), x));
  int s3 = bld.mp(s1, s2);  // ~(a -> ~b) -> ~~a
  int s4 = bld.inline_theorem(thm_dn_elim(sys, a));
  bld.syllogism(s3, s4);
  return bld.take();
}

Derivation thm_conj_elim2(SystemId sys, Formula a, Formula b) {
  Formula nb = Formula::neg(b);
  Formula x = Formula::imp(a, nb);
  DerivationBuilder bld(sys);
  int s1 = bld.ax("A1", {{"A", nb}, {"B", a}});  // ~b -> (a -> ~b)
  int s2 = bld.inline_theorem(thm_contrapose(sys, nb, x));
  int s3 = bld.mp(s1, s2);  // ~(a -> ~b) -> ~~b
  int s4 = bld.inline_theorem(thm_dn_elim(sys, b));
  bld.syllogism(s3, s4);
  return bld.take();
}

// ---------------------------------------------------------------------------
// corpus

std::vector<CorpusEntry> derivation_corpus() {
  std::vector<CorpusEntry> out;
  Formula p = Formula::atom("p");
  Formula q = Formula::atom("q");
  Formula r = Formula::atom("r");
  auto add = [&](std::string name, Derivation d) {
    out.push_back({std::move(name), std::move(d)});
  };

  // PC warm-ups
  add("pc.identity", thm_identity(SystemId::Km, p));
  {
    DerivationBuilder b(SystemId::Km,
                        {Formula::imp(p, q), Formula::imp(q, r), p});
    int h1 = b.hyp(Formula::imp(p, q));
    int h2 = b.hyp(Formula::imp(q, r));
    int h3 = b.hyp(p);
    int s4 = b.mp(h3, h1);
    b.mp(s4, h2);
    add("pc.chain", b.take());
  }
  add("pc.explosion", thm_explosion(SystemId::Km, p, q));
  add("pc.contrapose", thm_contrapose(SystemId::Km, p, q));

  // the recovery-operator MP pattern: {[]p, circ p} |- <>p
  {
    Formula circ_p = Formula::imp(Formula::box(p), Formula::dia(p));
    DerivationBuilder b(SystemId::Km, {Formula::box(p), circ_p});
    int h1 = b.hyp(circ_p);
    int h2 = b.hyp(Formula::box(p));
    b.mp(h2, h1);
    add("recovery.circ_mp", b.take());
  }

  // double-negation modality equivalences, in the ~[]~ reading
  auto contrapose_axiom = [&](std::string name, const std::string& axiom,
                              Formula arg) {
    // from axiom X -> Y, derive ~Y -> ~X
    DerivationBuilder b(SystemId::Km);
    int s1 = b.ax(axiom, {{"A", arg}});
    Formula inst = b.at(s1);
    int s2 = b.inline_theorem(
        thm_contrapose(SystemId::Km, inst.lhs(), inst.rhs()));
    b.mp(s1, s2);
    add(std::move(name), b.take());
  };
  // (i) <>~p <-> ~[]p, i.e. ~[]~~p <-> ~[]p
  contrapose_axiom("lemma43.i.fw", "DN1", p);   // ~[]~~p -> ~[]p
  contrapose_axiom("lemma43.i.bw", "DN2", p);   // ~[]p -> ~[]~~p
  {
    // (ii) []p -> ~~[]~~p and back
    DerivationBuilder b(SystemId::Km);
    int s1 = b.ax("DN1", {{"A", p}});  // []p -> []~~p
    int s2 = b.inline_theorem(
        thm_dn_intro(SystemId::Km, Formula::box(Formula::neg(Formula::neg(p)))));
    b.syllogism(s1, s2);
    add("lemma43.ii.fw", b.take());
  }
  {
    DerivationBuilder b(SystemId::Km);
    int s1 = b.inline_theorem(
        thm_dn_elim(SystemId::Km, Formula::box(Formula::neg(Formula::neg(p)))));
    int s2 = b.ax("DN2", {{"A", p}});
    b.syllogism(s1, s2);
    add("lemma43.ii.bw", b.take());
  }
  // (iii) []~p <-> ~~[]~p
  add("lemma43.iii.fw",
      thm_dn_intro(SystemId::Km, Formula::box(Formula::neg(p))));
  add("lemma43.iii.bw",
      thm_dn_elim(SystemId::Km, Formula::box(Formula::neg(p))));
  // (iv) ~[]~p <-> ~[]~~~p
  contrapose_axiom("lemma43.iv.fw", "DN2", Formula::neg(p));
  contrapose_axiom("lemma43.iv.bw", "DN1", Formula::neg(p));

  // possibility entailments reached by the guarded Km axioms
  {
    // (iv) <>p, <>q |- <>(p -> q)
    Formula dp = Formula::dia(p), dq = Formula::dia(q);
    DerivationBuilder b(SystemId::Km, {dp, dq});
    int h1 = b.hyp(dp);
    int h2 = b.hyp(dq);
    int s3 = b.inline_theorem(
        thm_disj_intro_left(SystemId::Km, dp, Formula::dia(Formula::neg(p))));
    int s4 = b.mp(h1, s3);  // <>p | <>~p
    int s5 = b.ax("M3'", {{"A", p}, {"B", q}});
    int s6 = b.mp(s4, s5);
    b.mp(h2, s6);
    add("lemma44.iv", b.take());
  }
  {
    // (v) <>~p, <>q |- <>(p -> q)
    Formula dnp = Formula::dia(Formula::neg(p)), dq = Formula::dia(q);
    DerivationBuilder b(SystemId::Km, {dnp, dq});
    int h1 = b.hyp(dnp);
    int h2 = b.hyp(dq);
    int s3 = b.inline_theorem(
        thm_disj_intro_right(SystemId::Km, Formula::dia(p), dnp));
    int s4 = b.mp(h1, s3);  // <>p | <>~p
    int s5 = b.ax("M3'", {{"A", p}, {"B", q}});
    int s6 = b.mp(s4, s5);
    b.mp(h2, s6);
    add("lemma44.v", b.take());
  }
  {
    // (vi) <>~p, <>~q |- <>(p -> q)
    Formula dnp = Formula::dia(Formula::neg(p));
    Formula dnq = Formula::dia(Formula::neg(q));
    DerivationBuilder b(SystemId::Km, {dnp, dnq});
    int h1 = b.hyp(dnp);
    int h2 = b.hyp(dnq);
    int s3 = b.ax("M4'", {{"A", p}, {"B", q}});  // <>~q -> (<>~p -> <>(p->q))
    int s4 = b.mp(h2, s3);
    b.mp(h1, s4);
    add("lemma44.vi", b.take());
  }
  return out;
}

}  // namespace mnm
