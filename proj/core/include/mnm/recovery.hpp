#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mnm/semantics.hpp"

namespace mnm {

// circ f   = []f -> <>f
// bullet f = ~([]f -> <>f)
// circt f  = ([]f -> f) & ([]~f -> ~f), conjunction expanded
Formula circ(Formula f);
Formula bullet(Formula f);
Formula circ_prime(Formula f);

// Which derivability-adjustment direction is being exercised. The source is
// the stronger logic, the target the weaker one that recovers it.
enum class DatKind {
  KmFromDm,  // circ marks, target Km, source Dm
  DmFromTm,  // circ-prime marks, target Dm, source Tm
  KmFromTm,  // both operators, target Km, source Tm
};

SystemId dat_source(DatKind k);
SystemId dat_target(DatKind k);
std::string_view dat_kind_name(DatKind k);
std::optional<DatKind> parse_dat_kind(std::string_view name);

struct DatQuery {
  DatKind kind = DatKind::KmFromDm;
  std::vector<Formula> premises;
  Formula conclusion;
};

struct DatWitness {
  std::vector<Formula> upsilon;        // circ-marked
  std::vector<Formula> upsilon_prime;  // circ-prime-marked
};

// True iff premises + marked assumptions entail the conclusion over the
// TARGET system's Nmatrix.
bool dat_verify(const DatQuery& q, const DatWitness& w);

struct DatSearchResult {
  bool source_holds = false;
  std::optional<DatWitness> witness;
  uint64_t candidates_tried = 0;
};

struct DatSearchOptions {
  int max_size = 3;  // cap on |upsilon| + |upsilon_prime|
  // extra pool entries beyond the subformula closure; depth > 0 adds all
  // formulas of that tree depth over the query's atoms
  int pool_depth = 0;
};

// Breadth-first over subset sizes of the pool (subformula closure of the
// query by default), lexicographic within a size; the first verified witness
// is returned. Checks the source-side consequence first and returns early
// with source_holds=false when it fails.
DatSearchResult dat_search(const DatQuery& q, const DatSearchOptions& opts = {});

std::vector<Formula> dat_pool(const DatQuery& q, int pool_depth = 0);

std::string dat_to_json(const DatQuery& q, const DatSearchResult& r);

}  // namespace mnm
