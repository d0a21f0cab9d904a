#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mnm/nmatrix.hpp"
#include "mnm/syntax.hpp"

namespace mnm {

struct AxiomSchema {
  std::string name;
  Schema schema;
};

// Every named schema: the Mendelson PC base (A1-A3), the modal axioms, the
// Km primed forms, the recovery-operator forms, Kdet and the Delta axioms.
const std::vector<AxiomSchema>& schema_catalogue();
const AxiomSchema* find_schema(std::string_view name);

// The Hilbert calculus of a built-in system (PC base + modal schemas, MP as
// the only rule).
const std::vector<AxiomSchema>& axioms_of(SystemId id);
// The alternate axiomatization of Km via the recovery operator.
const std::vector<AxiomSchema>& km_circ_axioms();

// -- derivations --------------------------------------------------------------

struct Justification {
  enum class Kind { Hyp, Ax, MP };
  Kind kind = Kind::Hyp;
  std::string axiom;               // Ax
  std::optional<Binding> binding;  // Ax; inferred via match_schema when absent
  int from = 0;  // MP: 1-based index of the antecedent step
  int impl = 0;  // MP: 1-based index of the implication step

  static Justification hyp() { return {}; }
  static Justification ax(std::string name,
                          std::optional<Binding> b = std::nullopt) {
    Justification j;
    j.kind = Kind::Ax;
    j.axiom = std::move(name);
    j.binding = std::move(b);
    return j;
  }
  static Justification mp(int from, int impl) {
    Justification j;
    j.kind = Kind::MP;
    j.from = from;
    j.impl = impl;
    return j;
  }
};

struct Step {
  Formula formula;
  Justification just;
};

struct Derivation {
  SystemId system = SystemId::Km;
  std::vector<Formula> hypotheses;
  std::vector<Step> steps;

  Formula conclusion() const;
};

struct StepError {
  enum class Reason { NotAnInstance, BadMP, IndexOutOfRange, NotAHypothesis };
  int index = 0;  // 1-based
  Reason reason = Reason::NotAnInstance;
  std::string detail;
};

std::string_view step_error_reason_name(StepError::Reason r);

// nullopt = every step checks out.
std::optional<StepError> check_derivation(const Derivation& d);

struct InvalidDerivation : Error {
  using Error::Error;
};

// Mendelson construction: from a checked derivation of b from G u {a},
// a derivation of a -> b from G (all occurrences of a discharged).
// Throws InvalidDerivation when d does not check.
Derivation deduction_transform(const Derivation& d, Formula discharged);

// -- file format ---------------------------------------------------------------

struct DerivationFileError : Error {
  DerivationFileError(std::string msg, int line);
  int line;
};

Derivation parse_derivation(std::string_view text);
std::string render_derivation(const Derivation& d);

}  // namespace mnm
