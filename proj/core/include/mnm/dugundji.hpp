#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mnm/semantics.hpp"

namespace mnm {

struct BadN : Error {
  using Error::Error;
};
struct BudgetExceeded : Error {
  using Error::Error;
};

// A finite deterministic logical matrix: abstract ordinals 0..size-1, a
// nonempty proper designated subset, single-valued tables for all four
// connectives.
struct DetMatrix {
  int size = 2;
  std::vector<int> neg, box, dia;  // size entries each
  std::vector<int> imp;            // size*size, row-major
  std::vector<bool> designated;

  int apply_imp(int x, int y) const { return imp[x * size + y]; }
  void validate() const;  // shapes, ranges, designated nonempty and proper
};

enum class DugundjiKind { Delta, Gamma };

struct DugundjiFormula {
  int n;
  DugundjiKind kind;
  Formula formula;
  Formula alpha;                // the full disjunction of atoms
  std::vector<Formula> betas;   // beta_i, one per dropped atom
};

// delta(n): the disjunction over i of ([]alpha(n) -> []beta_i(n));
// gamma(n) replaces [] by []~[] on both sides. n >= 3.
DugundjiFormula build_delta(int n);
DugundjiFormula build_gamma(int n);

// Renders with the | sugar, matching the published display shape.
std::string render_sugared(Formula f);

// A legal falsifying valuation over the system's Nmatrix, or nullopt when
// the formula is valid. For delta/gamma the published all-C+ hint seeds the
// search before falling back to an unseeded run.
std::optional<Valuation> falsify(SystemId id, Formula f);
std::optional<Valuation> falsify(SystemId id, const DugundjiFormula& df);

// truth-functional evaluation over every atom assignment
bool validate_det(const DetMatrix& m, Formula f);
// every axiom-schema skeleton of the system valid in m, plus table-level MP
bool is_model(const DetMatrix& m, SystemId id);

struct ScanViolation {
  uint64_t candidate_index;
  DetMatrix matrix;
};

struct ScanReport {
  int size = 2;
  std::string system;
  std::string formula;
  uint64_t candidates = 0;   // raw grid points enumerated
  uint64_t admissible = 0;   // genuine deterministic matrices among them
  uint64_t models = 0;
  std::vector<ScanViolation> violations;  // models that fail the formula
  uint64_t seed = 0;
};

struct ScanOptions {
  uint64_t seed = 0;
  uint64_t budget = 50000;  // size-3 sample count
  int jobs = 1;
};

// size 2: exhaustive over the 4*256*4*4*3 = 49,152-point grid (unary tables
// deterministic, -> cells ranging over all subsets, nonempty designated
// sets); size 3: seeded uniform sample of genuine DetMatrix candidates.
ScanReport scan_matrices(int size, SystemId id, const Formula& f,
                         const ScanOptions& opts = {});

struct ConservativityReport {
  std::string system;
  int samples = 0;
  int max_depth = 0;
  uint64_t seed = 0;
  int discrepancies = 0;
  std::vector<std::string> failing;  // rendered formulas, if any
};

// classical two-valued validity vs decide_valid on random {~,->} formulas
ConservativityReport conservativity_check(SystemId id, int sample_count,
                                          int max_depth, uint64_t seed = 0);

bool classical_valid(Formula f);  // {~,->} fragment, truth tables

struct AgreementReport {
  int samples = 0;
  uint64_t seed = 0;
  int disagreements = 0;
  std::vector<std::string> failing;
};

// The 4-valued deterministic matrix of T45md (values re-readable as
// 1, 2/3, 1/3, 0 with {1, 2/3} designated) against the Nmatrix engine.
DetMatrix t45md_matrix();
AgreementReport t45md_agreement(int sample_count, uint64_t seed = 0);

std::string scan_to_json(const ScanReport& r);
std::string conservativity_to_json(const ConservativityReport& r);
std::string agreement_to_json(const AgreementReport& r);

// seeded random formula generation (shared by tests and the CLI)
struct FormulaGenOptions {
  int max_depth = 5;
  int max_atoms = 3;
  bool modal = true;  // allow [] and <>
};
Formula random_formula(uint64_t& state, const FormulaGenOptions& opts);
uint64_t split_mix(uint64_t& state);

}  // namespace mnm
