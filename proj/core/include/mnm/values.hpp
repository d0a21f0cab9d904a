#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mnm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The eight modal truth-values. Ordinal order is the canonical value order
// used everywhere a deterministic scan is required (first-witness selection,
// serialization, table printing).
enum class TruthValue : uint8_t {
  Tp = 0,  // T+  necessary, possible, actual
  Cp = 1,  // C+  contingent, actual
  Fp = 2,  // F+  impossible, actual
  Ip = 3,  // I+  necessary and impossible, actual
  Tn = 4,  // T-
  Cn = 5,  // C-
  Fn = 6,  // F-
  In = 7,  // I-
};

enum class Mode : uint8_t { T = 0, C = 1, F = 2, I = 3 };

constexpr int kValueCount = 8;

constexpr uint8_t ordinal(TruthValue v) { return static_cast<uint8_t>(v); }

// Flag encoding: each value is the triple (necessary, possible, actual).
constexpr bool necessary(TruthValue v) {
  constexpr uint8_t bits = 0b10011001;  // per-ordinal n flag, Tp..In
  return (bits >> ordinal(v)) & 1;
}
constexpr bool possible(TruthValue v) {
  constexpr uint8_t bits = 0b00110011;
  return (bits >> ordinal(v)) & 1;
}
constexpr bool actual(TruthValue v) {
  constexpr uint8_t bits = 0b00001111;
  return (bits >> ordinal(v)) & 1;
}
constexpr bool designated(TruthValue v) { return actual(v); }

constexpr TruthValue make_value(bool n, bool p, bool a) {
  // mode column from (n,p): T=(1,1) C=(0,1) F=(0,0) I=(1,0)
  uint8_t m = n ? (p ? 0 : 3) : (p ? 1 : 2);
  return static_cast<TruthValue>(m + (a ? 0 : 4));
}

constexpr Mode mode(TruthValue v) { return static_cast<Mode>(ordinal(v) & 3); }

// negation flips sign and swaps the necessary/possible flags:
// (n,p,a) -> (!p,!n,!a). Coincides with every printed negation column.
constexpr TruthValue negate_value(TruthValue v) {
  return make_value(!possible(v), !necessary(v), !actual(v));
}

std::string_view value_name(TruthValue v);
std::string_view mode_name(Mode m);
TruthValue parse_value(std::string_view name);  // throws Error on bad name

// A subset of the eight values as a bitmask over ordinals.
class ValueSet {
 public:
  constexpr ValueSet() = default;
  constexpr explicit ValueSet(uint8_t bits) : bits_(bits) {}
  constexpr ValueSet(TruthValue v) : bits_(uint8_t(1u << ordinal(v))) {}

  static constexpr ValueSet none() { return ValueSet(uint8_t{0}); }
  static constexpr ValueSet all() { return ValueSet(uint8_t{0xff}); }

  constexpr uint8_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const {
    int n = 0;
    for (uint8_t b = bits_; b; b &= uint8_t(b - 1)) ++n;
    return n;
  }
  constexpr bool contains(TruthValue v) const {
    return (bits_ >> ordinal(v)) & 1;
  }
  constexpr bool subset_of(ValueSet o) const { return (bits_ & ~o.bits_) == 0; }

  constexpr ValueSet operator|(ValueSet o) const {
    return ValueSet(uint8_t(bits_ | o.bits_));
  }
  constexpr ValueSet operator&(ValueSet o) const {
    return ValueSet(uint8_t(bits_ & o.bits_));
  }
  constexpr ValueSet operator~() const { return ValueSet(uint8_t(~bits_)); }
  ValueSet& operator|=(ValueSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  ValueSet& operator&=(ValueSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  constexpr bool operator==(const ValueSet&) const = default;

  // Iterates members in canonical ordinal order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (int i = 0; i < kValueCount; ++i)
      if ((bits_ >> i) & 1) fn(static_cast<TruthValue>(i));
  }
  TruthValue first() const;  // throws Error when empty

  std::string to_string() const;  // "{T+ C+}"

 private:
  uint8_t bits_ = 0;
};

enum class DomainKind { Dom4, Dom6, Dom8 };

// Dom8 = all eight; Dom6 drops the I values (n <= p); Dom4 additionally
// requires n <= a <= p, leaving {T+, C+, C-, F-}.
ValueSet domain(DomainKind kind);
ValueSet designated_set(DomainKind kind);
std::string_view domain_name(DomainKind kind);

inline ValueSet designated_in(ValueSet dom) {
  ValueSet out;
  dom.for_each([&](TruthValue v) {
    if (designated(v)) out |= ValueSet(v);
  });
  return out;
}

}  // namespace mnm
