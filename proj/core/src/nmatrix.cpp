#include "mnm/nmatrix.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace mnm {

std::string_view connective_name(Connective c) {
  switch (c) {
    case Connective::Neg:
      return "neg";
    case Connective::Imp:
      return "imp";
    case Connective::Box:
      return "box";
    default:
      return "dia";
  }
}

int connective_arity(Connective c) { return c == Connective::Imp ? 2 : 1; }

std::optional<Connective> parse_connective(std::string_view name) {
  if (name == "neg" || name == "~") return Connective::Neg;
  if (name == "imp" || name == "->") return Connective::Imp;
  if (name == "box" || name == "[]") return Connective::Box;
  if (name == "dia" || name == "<>") return Connective::Dia;
  return std::nullopt;
}

ValueSet Multialgebra::cell(Connective c, TruthValue x) const {
  switch (c) {
    case Connective::Neg:
      return neg[ordinal(x)];
    case Connective::Box:
      return box[ordinal(x)];
    case Connective::Dia:
      return dia[ordinal(x)];
    default:
      throw Error("imp needs two arguments");
  }
}

ValueSet Multialgebra::cell(Connective c, TruthValue x, TruthValue y) const {
  if (c != Connective::Imp) throw Error("unary connective given two arguments");
  return imp[ordinal(x)][ordinal(y)];
}

ValueSet& Multialgebra::cell_ref(Connective c, TruthValue x) {
  switch (c) {
    case Connective::Neg:
      return neg[ordinal(x)];
    case Connective::Box:
      return box[ordinal(x)];
    case Connective::Dia:
      return dia[ordinal(x)];
    default:
      throw Error("imp needs two arguments");
  }
}

ValueSet& Multialgebra::cell_ref(Connective c, TruthValue x, TruthValue y) {
  if (c != Connective::Imp) throw Error("unary connective given two arguments");
  return imp[ordinal(x)][ordinal(y)];
}

ValueSet Multialgebra::apply(Connective c, TruthValue x) const {
  if (!domain.contains(x))
    throw Error(std::string("value outside domain: ") +
                std::string(value_name(x)));
  return cell(c, x);
}

ValueSet Multialgebra::apply(Connective c, TruthValue x, TruthValue y) const {
  if (!domain.contains(x) || !domain.contains(y))
    throw Error("value outside domain");
  return cell(c, x, y);
}

void Multialgebra::validate() const {
  domain.for_each([&](TruthValue x) {
    for (Connective c : {Connective::Neg, Connective::Box, Connective::Dia}) {
      ValueSet s = cell(c, x);
      if (s.empty()) throw Error("empty cell");
      if (!s.subset_of(domain)) throw Error("cell leaves the domain");
    }
    domain.for_each([&](TruthValue y) {
      ValueSet s = imp[ordinal(x)][ordinal(y)];
      if (s.empty()) throw Error("empty cell");
      if (!s.subset_of(domain)) throw Error("cell leaves the domain");
    });
  });
}

bool is_submultialgebra(const Multialgebra& a, const Multialgebra& b) {
  if (!a.domain.subset_of(b.domain)) return false;
  bool ok = true;
  a.domain.for_each([&](TruthValue x) {
    for (Connective c : {Connective::Neg, Connective::Box, Connective::Dia})
      if (!a.cell(c, x).subset_of(b.cell(c, x))) ok = false;
    a.domain.for_each([&](TruthValue y) {
      if (!a.imp[ordinal(x)][ordinal(y)].subset_of(b.imp[ordinal(x)][ordinal(y)]))
        ok = false;
    });
  });
  return ok;
}

// ---------------------------------------------------------------------------
// system identities

namespace {
constexpr std::array<std::string_view, 12> kSystemNames = {
    "Tm", "T4m", "T45m", "Dm",  "D4m",  "D45m",
    "Km", "K4m", "K45m", "Tmd", "T4md", "T45md"};
}

std::string_view system_name(SystemId id) {
  return kSystemNames[static_cast<int>(id)];
}

std::optional<SystemId> parse_system(std::string_view name) {
  for (int i = 0; i < 12; ++i)
    if (kSystemNames[i] == name) return static_cast<SystemId>(i);
  return std::nullopt;
}

DomainKind system_domain(SystemId id) {
  switch (id) {
    case SystemId::Dm:
    case SystemId::D4m:
    case SystemId::D45m:
      return DomainKind::Dom6;
    case SystemId::Km:
    case SystemId::K4m:
    case SystemId::K45m:
      return DomainKind::Dom8;
    default:
      return DomainKind::Dom4;  // Tm and Tmd families
  }
}

// ---------------------------------------------------------------------------
// rule-generated tables

namespace {

enum class ModalStrength { Base, Four, FourFive };

ModalStrength modal_strength(SystemId id) {
  switch (id) {
    case SystemId::Tm:
    case SystemId::Dm:
    case SystemId::Km:
    case SystemId::Tmd:
      return ModalStrength::Base;
    case SystemId::T4m:
    case SystemId::D4m:
    case SystemId::K4m:
    case SystemId::T4md:
      return ModalStrength::Four;
    default:
      return ModalStrength::FourFive;
  }
}

bool deterministic_imp(SystemId id) {
  return id == SystemId::Tmd || id == SystemId::T4md || id == SystemId::T45md;
}

// mode pattern of the non-deterministic implication: F->any and any->T give
// {T}; T->C gives {C}; T->F gives {F}; C->C gives {T,C}; C->F gives {C};
// any I argument infects the output with {I}.
ValueSet imp_mode_set(Mode x, Mode y) {
  auto one = [](Mode m) {
    return ValueSet(uint8_t((1u << static_cast<int>(m)) |
                            (1u << (static_cast<int>(m) + 4))));
  };
  if (x == Mode::I || y == Mode::I) return one(Mode::I);
  if (x == Mode::F || y == Mode::T) return one(Mode::T);
  if (x == Mode::T) return one(y);           // T->C = {C}, T->F = {F}
  return y == Mode::C ? one(Mode::T) | one(Mode::C) : one(Mode::C);
}

ValueSet nondet_imp_cell(ValueSet dom, TruthValue x, TruthValue y) {
  bool sign = !actual(x) || actual(y);  // classical a(x) -> a(y)
  ValueSet signed_vals(uint8_t(sign ? 0x0f : 0xf0));
  ValueSet out = imp_mode_set(mode(x), mode(y)) & signed_vals & dom;
  if (out.empty()) throw Error("implication rule produced an empty cell");
  return out;
}

// deterministic implication: join(~x, y) in the chain F- < C- < C+ < T+
TruthValue det_imp_cell(TruthValue x, TruthValue y) {
  static constexpr std::array<TruthValue, 4> chain = {
      TruthValue::Fn, TruthValue::Cn, TruthValue::Cp, TruthValue::Tp};
  auto rank = [&](TruthValue v) {
    for (int i = 0; i < 4; ++i)
      if (chain[i] == v) return i;
    throw Error("value outside the 4-valued chain");
  };
  TruthValue nx = negate_value(x);
  return rank(nx) >= rank(y) ? nx : y;
}

Nmatrix generate(SystemId id) {
  Nmatrix nm;
  nm.name = system_name(id);
  DomainKind dk = system_domain(id);
  ValueSet dom = domain(dk);
  ValueSet desig = designated_in(dom);
  ValueSet nondesig = dom & ~desig;
  nm.algebra.domain = dom;
  nm.designated = desig;

  ValueSet box_hi = ValueSet(TruthValue::Tp) | ValueSet(TruthValue::Ip);
  ValueSet box_lo = ValueSet(TruthValue::Fn) | ValueSet(TruthValue::In);
  box_hi &= dom;
  box_lo &= dom;
  ModalStrength ms = modal_strength(id);

  dom.for_each([&](TruthValue x) {
    nm.algebra.neg[ordinal(x)] = ValueSet(negate_value(x));

    Mode m = mode(x);
    bool box_up = m == Mode::T || m == Mode::I;
    bool dia_up = m == Mode::T || m == Mode::C;
    switch (ms) {
      case ModalStrength::Base:
        nm.algebra.box[ordinal(x)] = box_up ? desig : nondesig;
        nm.algebra.dia[ordinal(x)] = dia_up ? desig : nondesig;
        break;
      case ModalStrength::Four:
        nm.algebra.box[ordinal(x)] = box_up ? box_hi : nondesig;
        nm.algebra.dia[ordinal(x)] = dia_up ? desig : box_lo;
        break;
      case ModalStrength::FourFive:
        nm.algebra.box[ordinal(x)] = box_up ? box_hi : box_lo;
        nm.algebra.dia[ordinal(x)] = dia_up ? box_hi : box_lo;
        break;
    }

    dom.for_each([&](TruthValue y) {
      nm.algebra.imp[ordinal(x)][ordinal(y)] =
          deterministic_imp(id) ? ValueSet(det_imp_cell(x, y))
                                : nondet_imp_cell(dom, x, y);
    });
  });
  nm.algebra.validate();
  return nm;
}

Nmatrix make_builtin(SystemId id, bool strict_paper) {
  Nmatrix nm = generate(id);
  if (strict_paper) {
    if (id == SystemId::Tm) {
      // printed cells of the published Tm -> table, kept verbatim
      nm.algebra.imp[ordinal(TruthValue::Cn)][ordinal(TruthValue::Fn)] =
          ValueSet(TruthValue::Cn);
    }
    if (id == SystemId::D45m) {
      // printed box(T-) = {F-}; the default keeps the flag-coherent {T+}
      nm.algebra.box[ordinal(TruthValue::Tn)] = ValueSet(TruthValue::Fn);
    }
  }
  return nm;
}

}  // namespace

const Nmatrix& builtin(SystemId id, const TableOptions& opts) {
  static std::mutex mu;
  static std::map<std::pair<int, bool>, Nmatrix> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(static_cast<int>(id), opts.strict_paper);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, make_builtin(id, opts.strict_paper)).first;
  return it->second;
}

const Nmatrix& printed_facsimile(SystemId id) {
  return builtin(id, TableOptions{.strict_paper = true});
}

namespace {
std::string deviation_note(SystemId id, Connective c,
                           const std::vector<TruthValue>& args) {
  if (id == SystemId::Tm && c == Connective::Imp &&
      args == std::vector<TruthValue>{TruthValue::Cn, TruthValue::Fn})
    return "printed {C-} violates the sign law and Tm <=sm Dm; coherent cell "
           "is {C+}";
  if (id == SystemId::D45m && c == Connective::Box &&
      args == std::vector<TruthValue>{TruthValue::Tn})
    return "printed {F-} breaks the box-designation pattern, the <> = ~[]~ "
           "composition and D45m <=sm K45m; default uses {T+}, --strict-paper "
           "restores the printed cell";
  return "undocumented difference";
}
}  // namespace

std::vector<Deviation> deviation_report() {
  std::vector<Deviation> out;
  for (SystemId id : kAllSystems) {
    const Nmatrix& used = builtin(id);
    const Nmatrix& printed = printed_facsimile(id);
    ValueSet dom = used.algebra.domain;
    for (Connective c : {Connective::Neg, Connective::Imp, Connective::Box,
                         Connective::Dia}) {
      dom.for_each([&](TruthValue x) {
        if (connective_arity(c) == 1) {
          ValueSet u = used.algebra.cell(c, x), p = printed.algebra.cell(c, x);
          if (u != p)
            out.push_back(Deviation{id, c, {x}, p, u, deviation_note(id, c, {x})});
          return;
        }
        dom.for_each([&](TruthValue y) {
          ValueSet u = used.algebra.cell(c, x, y);
          ValueSet p = printed.algebra.cell(c, x, y);
          if (u != p)
            out.push_back(
                Deviation{id, c, {x, y}, p, u, deviation_note(id, c, {x, y})});
        });
      });
    }
    if (id == SystemId::Tm) {
      // typography-only record: the published table prints this cell with an
      // unclosed brace; the value itself is unambiguous
      ValueSet tplus(TruthValue::Tp);
      out.push_back(Deviation{
          SystemId::Tm,
          Connective::Imp,
          {TruthValue::Fn, TruthValue::Cn},
          tplus,
          tplus,
          "printed \"{T+\" with an unclosed brace; value read as {T+}, "
          "unchanged"});
    }
  }
  return out;
}

std::vector<ChainEntry> submultialgebra_chain_report(const TableOptions& opts) {
  auto probe = [&](SystemId a, SystemId b) {
    return ChainEntry{a, b,
                      is_submultialgebra(builtin(a, opts).algebra,
                                         builtin(b, opts).algebra)};
  };
  return {
      probe(SystemId::Tm, SystemId::Dm),    probe(SystemId::Dm, SystemId::Km),
      probe(SystemId::T4m, SystemId::D4m),  probe(SystemId::D4m, SystemId::K4m),
      probe(SystemId::T45m, SystemId::D45m),
      probe(SystemId::D45m, SystemId::K45m),
  };
}

// ---------------------------------------------------------------------------
// file format

NmatrixFileError::NmatrixFileError(Kind kind_, std::string msg, int line_)
    : Error(msg + " (line " + std::to_string(line_) + ")"),
      kind(kind_),
      line(line_) {}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

Nmatrix load_nmatrix(std::string_view text) {
  using Kind = NmatrixFileError::Kind;
  Nmatrix nm;
  bool saw_values = false, saw_designated = false;
  std::optional<Connective> current;
  // which tuples were filled, per connective
  std::array<std::array<bool, 64>, 4> filled{};

  auto want_value = [&](const std::string& w, int line) {
    TruthValue v;
    try {
      v = parse_value(w);
    } catch (const Error&) {
      throw NmatrixFileError(Kind::Parse, "bad truth-value '" + w + "'", line);
    }
    if (saw_values && !nm.algebra.domain.contains(v))
      throw NmatrixFileError(Kind::ValueOutsideDomain,
                             "value " + w + " outside the declared domain",
                             line);
    return v;
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    auto words = split_ws(raw);
    if (words.empty()) continue;

    if (words[0] == "system") {
      if (words.size() != 2)
        throw NmatrixFileError(Kind::Parse, "system wants one name", lineno);
      nm.name = words[1];
    } else if (words[0] == "values") {
      for (size_t i = 1; i < words.size(); ++i)
        nm.algebra.domain |= ValueSet(want_value(words[i], lineno));
      if (nm.algebra.domain.empty())
        throw NmatrixFileError(Kind::Parse, "empty domain", lineno);
      saw_values = true;
    } else if (words[0] == "designated") {
      if (!saw_values)
        throw NmatrixFileError(Kind::Parse, "designated before values", lineno);
      for (size_t i = 1; i < words.size(); ++i)
        nm.designated |= ValueSet(want_value(words[i], lineno));
      saw_designated = true;
    } else if (words[0] == "op") {
      if (!saw_values)
        throw NmatrixFileError(Kind::Parse, "op before values", lineno);
      if (words.size() != 3)
        throw NmatrixFileError(Kind::Parse, "op wants a name and an arity",
                               lineno);
      current = parse_connective(words[1]);
      if (!current)
        throw NmatrixFileError(Kind::Parse, "unknown op '" + words[1] + "'",
                               lineno);
      int arity = 0;
      try {
        arity = std::stoi(words[2]);
      } catch (...) {
      }
      if (arity != connective_arity(*current))
        throw NmatrixFileError(Kind::Parse,
                               "wrong arity for op " + words[1], lineno);
    } else {
      // a cell line: <v1> [<v2>] : <w1> <w2> ...
      if (!current)
        throw NmatrixFileError(Kind::Parse, "cell line outside an op block",
                               lineno);
      auto colon = std::find(words.begin(), words.end(), ":");
      if (colon == words.end())
        throw NmatrixFileError(Kind::Parse, "missing ':' in cell line", lineno);
      std::vector<TruthValue> args;
      for (auto it = words.begin(); it != colon; ++it)
        args.push_back(want_value(*it, lineno));
      if (static_cast<int>(args.size()) != connective_arity(*current))
        throw NmatrixFileError(Kind::Parse, "wrong number of arguments",
                               lineno);
      ValueSet cell;
      for (auto it = colon + 1; it != words.end(); ++it)
        cell |= ValueSet(want_value(*it, lineno));
      if (cell.empty())
        throw NmatrixFileError(Kind::EmptyCell, "empty cell", lineno);

      int slot = ordinal(args[0]) * (args.size() == 2 ? 8 : 1) +
                 (args.size() == 2 ? ordinal(args[1]) : 0);
      auto& seen = filled[static_cast<int>(*current)][slot];
      if (seen)
        throw NmatrixFileError(Kind::DuplicateCell, "tuple appears twice",
                               lineno);
      seen = true;
      if (args.size() == 2)
        nm.algebra.cell_ref(*current, args[0], args[1]) = cell;
      else
        nm.algebra.cell_ref(*current, args[0]) = cell;
    }
  }

  if (!saw_values)
    throw NmatrixFileError(Kind::Parse, "missing values line", 0);
  if (!saw_designated)
    throw NmatrixFileError(Kind::Parse, "missing designated line", 0);

  // totality
  for (Connective c : {Connective::Neg, Connective::Imp, Connective::Box,
                       Connective::Dia}) {
    bool binary = connective_arity(c) == 2;
    bool missing = false;
    nm.algebra.domain.for_each([&](TruthValue x) {
      if (!binary) {
        if (!filled[static_cast<int>(c)][ordinal(x)]) missing = true;
        return;
      }
      nm.algebra.domain.for_each([&](TruthValue y) {
        if (!filled[static_cast<int>(c)][ordinal(x) * 8 + ordinal(y)])
          missing = true;
      });
    });
    if (missing)
      throw NmatrixFileError(Kind::MissingCell,
                             std::string("missing tuple for op ") +
                                 std::string(connective_name(c)),
                             0);
  }
  nm.algebra.validate();
  return nm;
}

std::string save_nmatrix(const Nmatrix& nm) {
  std::ostringstream out;
  out << "system " << (nm.name.empty() ? "custom" : nm.name) << "\n";
  out << "values";
  nm.algebra.domain.for_each(
      [&](TruthValue v) { out << ' ' << value_name(v); });
  out << "\ndesignated";
  nm.designated.for_each([&](TruthValue v) { out << ' ' << value_name(v); });
  out << "\n";
  auto emit_set = [&](ValueSet s) {
    s.for_each([&](TruthValue v) { out << ' ' << value_name(v); });
  };
  for (Connective c : {Connective::Neg, Connective::Imp, Connective::Box,
                       Connective::Dia}) {
    out << "op " << connective_name(c) << ' ' << connective_arity(c) << "\n";
    nm.algebra.domain.for_each([&](TruthValue x) {
      if (connective_arity(c) == 1) {
        out << value_name(x) << " :";
        emit_set(nm.algebra.cell(c, x));
        out << "\n";
      } else {
        nm.algebra.domain.for_each([&](TruthValue y) {
          out << value_name(x) << ' ' << value_name(y) << " :";
          emit_set(nm.algebra.cell(c, x, y));
          out << "\n";
        });
      }
    });
  }
  return out.str();
}

std::string format_tables(const Nmatrix& nm) {
  std::ostringstream out;
  out << "system " << nm.name << "  values ";
  nm.algebra.domain.for_each([&](TruthValue v) { out << value_name(v) << ' '; });
  out << " designated ";
  nm.designated.for_each([&](TruthValue v) { out << value_name(v) << ' '; });
  out << "\n";

  auto pad = [](std::string s, size_t w) {
    while (s.size() < w) s += ' ';
    return s;
  };
  size_t w = 14;

  out << "\n" << pad("x", 4) << pad("~x", w) << pad("[]x", w) << pad("<>x", w)
      << "\n";
  nm.algebra.domain.for_each([&](TruthValue x) {
    out << pad(std::string(value_name(x)), 4)
        << pad(nm.algebra.neg[ordinal(x)].to_string(), w)
        << pad(nm.algebra.box[ordinal(x)].to_string(), w)
        << pad(nm.algebra.dia[ordinal(x)].to_string(), w) << "\n";
  });

  out << "\n" << pad("->", 4);
  nm.algebra.domain.for_each(
      [&](TruthValue y) { out << pad(std::string(value_name(y)), w); });
  out << "\n";
  nm.algebra.domain.for_each([&](TruthValue x) {
    out << pad(std::string(value_name(x)), 4);
    nm.algebra.domain.for_each([&](TruthValue y) {
      out << pad(nm.algebra.imp[ordinal(x)][ordinal(y)].to_string(), w);
    });
    out << "\n";
  });
  return out.str();
}

}  // namespace mnm
