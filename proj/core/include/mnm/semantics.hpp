#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mnm/nmatrix.hpp"
#include "mnm/syntax.hpp"

namespace mnm {

// A legal assignment of truth-values to the subformula closure of a query.
struct Valuation {
  std::vector<Formula> nodes;  // children before parents
  std::vector<TruthValue> values;

  std::optional<TruthValue> value_of(Formula f) const;
  std::string to_string() const;  // "p=I+ q=C+ ..."
};

struct Verdict {
  bool holds = false;
  std::optional<Valuation> witness;  // legal and falsifying when present
  uint64_t nodes_explored = 0;

  explicit operator bool() const { return holds; }
};

struct SearchOptions {
  int jobs = 1;  // >1 splits the first branch point; result is order-stable
  // values forced on specific subformulas before the search starts
  std::unordered_map<Formula, ValueSet> pins;
};

struct TooLarge : Error {
  using Error::Error;
};

// Def-style consequence over an Nmatrix: holds iff every legal valuation on
// the subformula closure designating all premises designates the conclusion.
// Backtracking over the DAG in topological order, atoms first, candidate
// values in canonical order; the first falsifying valuation is the witness.
Verdict decide_consequence(const Nmatrix& nm, std::span<const Formula> premises,
                           Formula conclusion, const SearchOptions& opts = {});
Verdict decide_valid(const Nmatrix& nm, Formula f,
                     const SearchOptions& opts = {});

// Independent oracle: exhaustive product enumeration over all value tuples
// with a per-node legality filter. Guarded by max_nodes (default 12).
Verdict brute_force_consequence(const Nmatrix& nm,
                                std::span<const Formula> premises,
                                Formula conclusion, int max_nodes = 12);

// Re-checks a witness from scratch: legality of every compound cell, all
// premises designated, conclusion not.
bool verify_witness(const Nmatrix& nm, std::span<const Formula> premises,
                    Formula conclusion, const Valuation& w);

// Every value the root can take across legal valuations of the subformula
// DAG, with atoms pinned per `atom_values`.
ValueSet reachable_values(const Nmatrix& nm, Formula root,
                          const std::unordered_map<Formula, TruthValue>& atom_values);

// derived_table: the composed multioperation of a skeleton over the system's
// tables. Metavariables are taken in sorted name order.
struct DerivedTable {
  std::vector<std::string> metavars;
  ValueSet domain;
  // index = sum of ordinal(arg_i) * 8^i over metavars in order
  std::unordered_map<uint64_t, ValueSet> cells;

  ValueSet at(std::span<const TruthValue> args) const;
};
DerivedTable derived_table(const Nmatrix& nm, Schema skeleton);

// -- audits ------------------------------------------------------------------

struct SchemaAudit {
  std::string name;
  Formula skeleton;  // metavariables replaced by fresh atoms
  Verdict verdict;
};

struct AuditReport {
  std::string system;
  std::vector<SchemaAudit> schemas;
  bool mp_preserves_designation = false;
  bool all_valid = false;

  bool ok() const { return all_valid && mp_preserves_designation; }
};

// x designated and y non-designated imply ->(x,y) wholly non-designated.
bool mp_preserves_designation(const Nmatrix& nm);

// Validity of every axiom schema of the system over its own Nmatrix, plus
// the table-level MP check.
AuditReport audit_system(SystemId id, const TableOptions& topts = {});
// Same check for an arbitrary schema list over an arbitrary Nmatrix (used
// for the Km-circ alternate axiom set and for cross-system probes).
AuditReport audit_schemas(const Nmatrix& nm, std::string_view label,
                          std::span<const std::pair<std::string, Schema>> axioms);
// One schema over one system ("does (K) hold in Km?").
SchemaAudit audit_schema_over(SystemId id, std::string_view schema_name,
                              const TableOptions& topts = {});

Formula skeletonize(Schema s);  // metavariable X -> atom x

struct LemmaCheck {
  std::string name;
  std::string statement;
  bool holds = false;
};

// Semantic checks, over Km: the four double-negation/modality equivalences
// and the six implication entailments.
std::vector<LemmaCheck> verify_lemma_suite();

std::string verdict_to_json(const Nmatrix& nm,
                            std::span<const Formula> premises,
                            Formula conclusion, const Verdict& v,
                            int64_t time_ms = 0);

}  // namespace mnm
