#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mnm/syntax.hpp"
#include "mnm/values.hpp"

namespace mnm {

enum class Connective : uint8_t { Neg, Imp, Box, Dia };

std::string_view connective_name(Connective c);
int connective_arity(Connective c);
std::optional<Connective> parse_connective(std::string_view name);

// A multialgebra over {~, ->, [], <>}: one total multioperation per
// connective, every cell a nonempty subset of the domain. Cells are stored
// densely by value ordinal; entries outside the domain are unused.
struct Multialgebra {
  ValueSet domain;
  std::array<ValueSet, 8> neg{};
  std::array<ValueSet, 8> box{};
  std::array<ValueSet, 8> dia{};
  std::array<std::array<ValueSet, 8>, 8> imp{};

  ValueSet cell(Connective c, TruthValue x) const;
  ValueSet cell(Connective c, TruthValue x, TruthValue y) const;
  ValueSet& cell_ref(Connective c, TruthValue x);
  ValueSet& cell_ref(Connective c, TruthValue x, TruthValue y);

  // Checked application; throws Error on args outside the domain.
  ValueSet apply(Connective c, TruthValue x) const;
  ValueSet apply(Connective c, TruthValue x, TruthValue y) const;

  // totality over the domain and nonemptiness of every cell
  void validate() const;

  bool operator==(const Multialgebra&) const = default;
};

// c^A(a) <= c^B(a) cell-for-cell on A's domain, and dom(A) <= dom(B).
bool is_submultialgebra(const Multialgebra& a, const Multialgebra& b);

struct Nmatrix {
  std::string name;
  Multialgebra algebra;
  ValueSet designated;

  bool is_designated(TruthValue v) const { return designated.contains(v); }
  bool operator==(const Nmatrix&) const = default;
};

enum class SystemId {
  Tm,
  T4m,
  T45m,
  Dm,
  D4m,
  D45m,
  Km,
  K4m,
  K45m,
  Tmd,
  T4md,
  T45md,
};

inline constexpr std::array<SystemId, 12> kAllSystems = {
    SystemId::Tm,  SystemId::T4m,  SystemId::T45m, SystemId::Dm,
    SystemId::D4m, SystemId::D45m, SystemId::Km,   SystemId::K4m,
    SystemId::K45m, SystemId::Tmd, SystemId::T4md, SystemId::T45md,
};

std::string_view system_name(SystemId id);
std::optional<SystemId> parse_system(std::string_view name);
DomainKind system_domain(SystemId id);

struct TableOptions {
  // reproduce the paper's cells verbatim (facsimile mode: the Tm anomaly
  // cell and the printed D45m box(T-) reading)
  bool strict_paper = false;
};

// The built-in Nmatrix for a system. Default tables are the rule-generated
// coherent ones; strict_paper swaps in the printed cells.
const Nmatrix& builtin(SystemId id, const TableOptions& opts = {});

// Transcription of the published tables, used for diffing only.
const Nmatrix& printed_facsimile(SystemId id);

struct Deviation {
  SystemId system;
  Connective connective;
  std::vector<TruthValue> args;
  ValueSet printed;
  ValueSet used;
  std::string note;
};

// Cell-level differences between the default built-ins and the printed
// facsimiles, plus pure-typography notes. Stable order.
std::vector<Deviation> deviation_report();

struct ChainEntry {
  SystemId smaller;
  SystemId larger;
  bool holds;
};

// Tm <=sm Dm <=sm Km and the analogous (4)/(45) comparisons.
std::vector<ChainEntry> submultialgebra_chain_report(
    const TableOptions& opts = {});

// -- file format -------------------------------------------------------------

struct NmatrixFileError : Error {
  enum class Kind {
    Parse,
    EmptyCell,
    MissingCell,
    DuplicateCell,
    ValueOutsideDomain,
  };
  NmatrixFileError(Kind kind, std::string msg, int line);
  Kind kind;
  int line;
};

Nmatrix load_nmatrix(std::string_view text);
std::string save_nmatrix(const Nmatrix& nm);

// Human-readable grids in the layout of the published tables.
std::string format_tables(const Nmatrix& nm);

}  // namespace mnm
