#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mnm/values.hpp"

namespace mnm {

// Modal formulas over atoms, ~, ->, [] and <>. Nodes are hash-consed into a
// process-wide pool, so Formula is a cheap value handle and structural
// equality is pointer equality. Derived connectives (| & circ bullet circt)
// are expanded by the parser and never appear in the tree.
class Formula {
 public:
  enum class Kind : uint8_t { Atom, Neg, Imp, Box, Dia };

  struct Node {
    Kind kind;
    std::string atom;  // Atom only
    const Node* a = nullptr;
    const Node* b = nullptr;  // Imp only
    size_t hash = 0;
    int tree_size = 1;
  };

  static Formula atom(std::string_view name);
  static Formula neg(Formula f);
  static Formula imp(Formula lhs, Formula rhs);
  static Formula box(Formula f);
  static Formula dia(Formula f);
  // ~(a -> ~b), the conjunction macro used by circt and the axiom catalogue
  static Formula conj(Formula a, Formula b);
  // ~a -> b
  static Formula disj(Formula a, Formula b);

  Kind kind() const { return node_->kind; }
  bool is_atom() const { return kind() == Kind::Atom; }
  const std::string& atom_name() const { return node_->atom; }
  Formula child() const { return Formula(node_->a); }
  Formula lhs() const { return Formula(node_->a); }
  Formula rhs() const { return Formula(node_->b); }
  int tree_size() const { return node_->tree_size; }

  // Metavariables are single uppercase letters; everything else is an
  // object-level atom.
  bool is_metavar() const;
  bool has_metavars() const;

  bool operator==(const Formula& o) const = default;
  const Node* raw() const { return node_; }

 private:
  explicit Formula(const Node* n) : node_(n) {}
  const Node* node_;
  friend struct std::hash<Formula>;
};

using Schema = Formula;
using Binding = std::map<std::string, Formula>;

struct SyntaxError : Error {
  SyntaxError(std::string msg, size_t offset, std::vector<std::string> expected);
  size_t offset;
  std::vector<std::string> expected;
};

struct MissingBinding : Error {
  using Error::Error;
};

// Parses the ASCII grammar (unicode aliases accepted). Object atoms only;
// a metavariable raises SyntaxError.
Formula parse(std::string_view text);
// Same grammar, but single uppercase letters are accepted as metavariables.
Schema parse_schema(std::string_view text);

// Minimal-parenthesis concrete syntax; parse(render(f)) == f.
std::string render(Formula f);

// All distinct subtrees, children before parents, no duplicates.
std::vector<Formula> subformulas(Formula f);
std::vector<Formula> subformulas(const std::vector<Formula>& roots);

std::vector<std::string> metavars_of(Schema s);  // sorted, deduped
std::vector<std::string> atoms_of(Formula f);    // in first-occurrence order

// Uniform substitution; throws MissingBinding when a metavariable of s has
// no image.
Formula instantiate(Schema s, const Binding& binding);

// Inverse of instantiate when it exists (then unique).
std::optional<Binding> match_schema(Schema s, Formula f);

int modal_depth(Formula f);

}  // namespace mnm

template <>
struct std::hash<mnm::Formula> {
  size_t operator()(const mnm::Formula& f) const {
    return std::hash<const void*>()(f.raw());
  }
};
