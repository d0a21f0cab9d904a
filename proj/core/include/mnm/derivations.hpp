#pragma once

#include <string>
#include <vector>

#include "mnm/calculus.hpp"

namespace mnm {

// Incremental construction of Hilbert derivations. Indices are 1-based, as
// in the file format.
class DerivationBuilder {
 public:
  DerivationBuilder(SystemId system, std::vector<Formula> hypotheses = {});

  int hyp(Formula f);
  int ax(const std::string& name, Binding binding);
  int mp(int antecedent, int implication);
  // splices a hypothesis-free derivation, remapping its mp indices;
  // returns the index of its conclusion
  int inline_theorem(const Derivation& theorem);
  // from i: X -> Y and j: Y -> Z appends X -> Z
  int syllogism(int i, int j);

  Formula at(int index) const;
  int size() const { return int(d_.steps.size()); }
  Derivation take() { return std::move(d_); }
  const Derivation& peek() const { return d_; }

 private:
  Derivation d_;
};

// Machine-built propositional theorems (hypothesis-free derivations), valid
// in every system since all of them extend the PC base.
Derivation thm_identity(SystemId sys, Formula a);          // a -> a
Derivation thm_explosion(SystemId sys, Formula a, Formula b);  // ~a -> (a -> b)
Derivation thm_dn_elim(SystemId sys, Formula a);           // ~~a -> a
Derivation thm_dn_intro(SystemId sys, Formula a);          // a -> ~~a
Derivation thm_contrapose(SystemId sys, Formula a, Formula b);
// (a -> b) -> (~b -> ~a)
Derivation thm_disj_intro_left(SystemId sys, Formula a, Formula b);
// a -> (a | b)
Derivation thm_disj_intro_right(SystemId sys, Formula a, Formula b);
// b -> (a | b)
Derivation thm_conj_elim1(SystemId sys, Formula a, Formula b);  // (a & b) -> a
Derivation thm_conj_elim2(SystemId sys, Formula a, Formula b);  // (a & b) -> b

struct CorpusEntry {
  std::string name;
  Derivation derivation;
};

// The shipped derivation corpus: PC warm-ups, the recovery-operator MP
// pattern, the double-negation modality equivalences and the possibility
// entailments that the Km axioms reach directly.
std::vector<CorpusEntry> derivation_corpus();

}  // namespace mnm
