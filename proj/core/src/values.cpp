#include "mnm/values.hpp"

namespace mnm {

namespace {
constexpr std::array<std::string_view, 8> kNames = {"T+", "C+", "F+", "I+",
                                                    "T-", "C-", "F-", "I-"};
constexpr std::array<std::string_view, 4> kModeNames = {"T", "C", "F", "I"};
}  // namespace

std::string_view value_name(TruthValue v) { return kNames[ordinal(v)]; }

std::string_view mode_name(Mode m) { return kModeNames[static_cast<int>(m)]; }

TruthValue parse_value(std::string_view name) {
  for (int i = 0; i < kValueCount; ++i)
    if (kNames[i] == name) return static_cast<TruthValue>(i);
  throw Error("unknown truth-value name: '" + std::string(name) + "'");
}

TruthValue ValueSet::first() const {
  for (int i = 0; i < kValueCount; ++i)
    if ((bits_ >> i) & 1) return static_cast<TruthValue>(i);
  throw Error("ValueSet::first on empty set");
}

std::string ValueSet::to_string() const {
  std::string out = "{";
  bool sep = false;
  for_each([&](TruthValue v) {
    if (sep) out += ' ';
    out += value_name(v);
    sep = true;
  });
  out += '}';
  return out;
}

ValueSet domain(DomainKind kind) {
  ValueSet out;
  for (int i = 0; i < kValueCount; ++i) {
    auto v = static_cast<TruthValue>(i);
    bool in = true;
    switch (kind) {
      case DomainKind::Dom8:
        break;
      case DomainKind::Dom6:
        in = !necessary(v) || possible(v);  // n <= p
        break;
      case DomainKind::Dom4:
        in = (!necessary(v) || actual(v)) && (!actual(v) || possible(v));
        break;
    }
    if (in) out |= ValueSet(v);
  }
  return out;
}

ValueSet designated_set(DomainKind kind) { return designated_in(domain(kind)); }

std::string_view domain_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::Dom4:
      return "Dom4";
    case DomainKind::Dom6:
      return "Dom6";
    default:
      return "Dom8";
  }
}

}  // namespace mnm
