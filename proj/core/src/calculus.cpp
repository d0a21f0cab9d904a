#include "mnm/calculus.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mnm {

// ---------------------------------------------------------------------------
// schema catalogue

namespace {

std::vector<AxiomSchema> build_catalogue() {
  auto s = [](const char* name, const char* text) {
    return AxiomSchema{name, parse_schema(text)};
  };
  return {
      // PC base (Mendelson-style)
      s("A1", "A -> (B -> A)"),
      s("A2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))"),
      s("A3", "(~B -> ~A) -> ((~B -> A) -> B)"),
      // modal
      s("K", "[](A -> B) -> ([]A -> []B)"),
      s("K1", "[](A -> B) -> (<>A -> <>B)"),
      s("K2", "<>(A -> B) -> ([]A -> <>B)"),
      s("M1", "~<>A -> [](A -> B)"),
      s("M2", "[]B -> [](A -> B)"),
      s("M3", "<>B -> <>(A -> B)"),
      s("M4", "<>~A -> <>(A -> B)"),
      s("T", "[]A -> A"),
      s("D", "[]A -> <>A"),
      s("4", "[]A -> [][]A"),
      s("5", "<>[]A -> []A"),
      s("DN1", "[]A -> []~~A"),
      s("DN2", "[]~~A -> []A"),
      // Km forms, guarded by possibility assumptions
      s("K'", "<>A -> ([](A -> B) -> ([]A -> []B))"),
      s("K1'", "<>~B -> ([](A -> B) -> (<>A -> <>B))"),
      s("K2'", "<>A -> (<>(A -> B) -> ([]A -> <>B))"),
      s("M3'", "(<>A | <>~A) -> (<>B -> <>(A -> B))"),
      s("M4'", "<>~B -> (<>~A -> <>(A -> B))"),
      s("I1", "([]A & []~A) -> ([](A -> B) & []~(A -> B))"),
      s("I2", "([]B & []~B) -> ([](A -> B) & []~(A -> B))"),
      // Km-circ forms, guarded by the recovery operator
      s("K''", "circ A -> ([](A -> B) -> ([]A -> []B))"),
      s("K1''", "circ B -> ([](A -> B) -> (<>A -> <>B))"),
      s("K2''", "circ A -> (<>(A -> B) -> ([]A -> <>B))"),
      s("M3''", "circ A -> (<>B -> <>(A -> B))"),
      s("M4''", "circ B -> (<>~A -> <>(A -> B))"),
      s("I1'", "bullet A -> bullet(A -> B)"),
      s("I2'", "bullet B -> bullet(A -> B)"),
      s("I1''", "circ(A -> B) -> circ A"),
      s("I2''", "circ(A -> B) -> circ B"),
      // deterministic implication
      s("Kdet", "[](A -> B) -> (<>A -> []B)"),
      // Delta-operator axioms (read with box as Delta)
      s("Delta1", "[]A | ~[]A"),
      s("Delta2", "[](A | B) -> ([]A | []B)"),
      s("Delta3", "[]A -> A"),
      s("Delta4", "[]A -> [][]A"),
      s("Delta5", "[](A -> B) -> ([]A -> []B)"),
  };
}

}  // namespace

const std::vector<AxiomSchema>& schema_catalogue() {
  static const std::vector<AxiomSchema>* cat =
      new std::vector<AxiomSchema>(build_catalogue());
  return *cat;
}

const AxiomSchema* find_schema(std::string_view name) {
  for (const AxiomSchema& ax : schema_catalogue())
    if (ax.name == name) return &ax;
  return nullptr;
}

namespace {

std::vector<AxiomSchema> pick(std::initializer_list<const char*> names) {
  std::vector<AxiomSchema> out;
  for (const char* n : names) {
    const AxiomSchema* ax = find_schema(n);
    if (!ax) throw Error(std::string("catalogue is missing ") + n);
    out.push_back(*ax);
  }
  return out;
}

std::vector<AxiomSchema> build_axioms(SystemId id) {
  switch (id) {
    case SystemId::Tm:
      return pick({"A1", "A2", "A3", "K", "K1", "K2", "M1", "M2", "M3", "M4",
                   "T", "DN1", "DN2"});
    case SystemId::T4m:
      return pick({"A1", "A2", "A3", "K", "K1", "K2", "M1", "M2", "M3", "M4",
                   "T", "DN1", "DN2", "4"});
    case SystemId::T45m:
      return pick({"A1", "A2", "A3", "K", "K1", "K2", "M1", "M2", "M3", "M4",
                   "T", "DN1", "DN2", "4", "5"});
    case SystemId::Dm:
      return pick({"A1", "A2", "A3", "K", "K1", "K2", "M1", "M2", "M3", "M4",
                   "D", "DN1", "DN2"});
    case SystemId::D4m:
      return pick({"A1", "A2", "A3", "K", "K1", "K2", "M1", "M2", "M3", "M4",
                   "D", "DN1", "DN2", "4"});
    case SystemId::D45m:
      return pick({"A1", "A2", "A3", "K", "K1", "K2", "M1", "M2", "M3", "M4",
                   "D", "DN1", "DN2", "4", "5"});
    case SystemId::Km:
      return pick({"A1", "A2", "A3", "K'", "K1'", "K2'", "M3'", "M4'", "I1",
                   "I2", "M1", "M2", "DN1", "DN2"});
    case SystemId::K4m:
      return pick({"A1", "A2", "A3", "K'", "K1'", "K2'", "M3'", "M4'", "I1",
                   "I2", "M1", "M2", "DN1", "DN2", "4"});
    case SystemId::K45m:
      return pick({"A1", "A2", "A3", "K'", "K1'", "K2'", "M3'", "M4'", "I1",
                   "I2", "M1", "M2", "DN1", "DN2", "4", "5"});
    case SystemId::Tmd:
      return pick({"A1", "A2", "A3", "K", "Kdet", "K2", "M1", "M2", "M3", "M4",
                   "T", "DN1", "DN2"});
    case SystemId::T4md:
      return pick({"A1", "A2", "A3", "K", "Kdet", "K2", "M1", "M2", "M3", "M4",
                   "T", "DN1", "DN2", "4"});
    default:  // T45md
      return pick({"A1", "A2", "A3", "K", "Kdet", "K2", "M1", "M2", "M3", "M4",
                   "T", "DN1", "DN2", "4", "5"});
  }
}

}  // namespace

const std::vector<AxiomSchema>& axioms_of(SystemId id) {
  static std::map<int, std::vector<AxiomSchema>>* cache =
      new std::map<int, std::vector<AxiomSchema>>();
  auto it = cache->find(static_cast<int>(id));
  if (it == cache->end())
    it = cache->emplace(static_cast<int>(id), build_axioms(id)).first;
  return it->second;
}

const std::vector<AxiomSchema>& km_circ_axioms() {
  static const std::vector<AxiomSchema>* axs = new std::vector<AxiomSchema>(
      pick({"A1", "A2", "A3", "K''", "K1''", "K2''", "M3''", "M4''", "I1'",
            "I2'", "M1", "M2", "DN1", "DN2"}));
  return *axs;
}

// ---------------------------------------------------------------------------
// derivation checking

Formula Derivation::conclusion() const {
  if (steps.empty()) throw Error("empty derivation");
  return steps.back().formula;
}

std::string_view step_error_reason_name(StepError::Reason r) {
  switch (r) {
    case StepError::Reason::NotAnInstance:
      return "NotAnInstance";
    case StepError::Reason::BadMP:
      return "BadMP";
    case StepError::Reason::IndexOutOfRange:
      return "IndexOutOfRange";
    default:
      return "NotAHypothesis";
  }
}

std::optional<StepError> check_derivation(const Derivation& d) {
  const std::vector<AxiomSchema>& axioms = axioms_of(d.system);
  for (size_t k = 0; k < d.steps.size(); ++k) {
    const Step& st = d.steps[k];
    int idx = int(k) + 1;
    switch (st.just.kind) {
      case Justification::Kind::Hyp: {
        bool found = std::find(d.hypotheses.begin(), d.hypotheses.end(),
                               st.formula) != d.hypotheses.end();
        if (!found)
          return StepError{idx, StepError::Reason::NotAHypothesis,
                           render(st.formula) + " is not a hypothesis"};
        break;
      }
      case Justification::Kind::Ax: {
        const AxiomSchema* ax = nullptr;
        for (const AxiomSchema& a : axioms)
          if (a.name == st.just.axiom) ax = &a;
        if (!ax)
          return StepError{idx, StepError::Reason::NotAnInstance,
                           "'" + st.just.axiom + "' is not an axiom of " +
                               std::string(system_name(d.system))};
        if (st.just.binding) {
          try {
            Formula inst = instantiate(ax->schema, *st.just.binding);
            if (!(inst == st.formula))
              return StepError{idx, StepError::Reason::NotAnInstance,
                               "binding instantiates to " + render(inst)};
          } catch (const MissingBinding& e) {
            return StepError{idx, StepError::Reason::NotAnInstance, e.what()};
          }
        } else if (!match_schema(ax->schema, st.formula)) {
          return StepError{idx, StepError::Reason::NotAnInstance,
                           render(st.formula) + " does not match " + ax->name};
        }
        break;
      }
      case Justification::Kind::MP: {
        int i = st.just.from, j = st.just.impl;
        if (i < 1 || i >= idx || j < 1 || j >= idx)
          return StepError{idx, StepError::Reason::IndexOutOfRange,
                           "mp references steps " + std::to_string(i) + ", " +
                               std::to_string(j)};
        Formula minor = d.steps[i - 1].formula;
        Formula impl = d.steps[j - 1].formula;
        if (impl.kind() != Formula::Kind::Imp || !(impl.lhs() == minor) ||
            !(impl.rhs() == st.formula))
          return StepError{idx, StepError::Reason::BadMP,
                           "step " + std::to_string(j) + " is not (step " +
                               std::to_string(i) + ") -> (step " +
                               std::to_string(idx) + ")"};
        break;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// deduction metatheorem

namespace {

// appends the five-step proof of f -> f, returns its index (1-based)
int append_identity(Derivation& out, Formula f) {
  Formula ff = Formula::imp(f, f);
  Binding b1{{"A", f}, {"B", ff}};
  out.steps.push_back(
      {instantiate(find_schema("A1")->schema, b1), Justification::ax("A1", b1)});
  int s1 = int(out.steps.size());
  Binding b2{{"A", f}, {"B", ff}, {"C", f}};
  out.steps.push_back(
      {instantiate(find_schema("A2")->schema, b2), Justification::ax("A2", b2)});
  int s2 = int(out.steps.size());
  out.steps.push_back({out.steps[s2 - 1].formula.rhs(),
                       Justification::mp(s1, s2)});
  int s3 = int(out.steps.size());
  Binding b4{{"A", f}, {"B", f}};
  out.steps.push_back(
      {instantiate(find_schema("A1")->schema, b4), Justification::ax("A1", b4)});
  int s4 = int(out.steps.size());
  out.steps.push_back({ff, Justification::mp(s4, s3)});
  return int(out.steps.size());
}

}  // namespace

Derivation deduction_transform(const Derivation& d, Formula discharged) {
  if (auto err = check_derivation(d))
    throw InvalidDerivation("cannot transform: step " +
                            std::to_string(err->index) + " fails (" +
                            std::string(step_error_reason_name(err->reason)) +
                            ": " + err->detail + ")");
  if (d.steps.empty()) throw InvalidDerivation("empty derivation");

  Derivation out;
  out.system = d.system;
  for (Formula h : d.hypotheses)
    if (!(h == discharged)) out.hypotheses.push_back(h);

  const AxiomSchema& a1 = *find_schema("A1");
  const AxiomSchema& a2 = *find_schema("A2");

  std::vector<int> mapped(d.steps.size(), 0);  // index of discharged -> phi_k

  for (size_t k = 0; k < d.steps.size(); ++k) {
    const Step& st = d.steps[k];
    Formula phi = st.formula;
    if (phi == discharged) {
      mapped[k] = append_identity(out, phi);
      continue;
    }
    switch (st.just.kind) {
      case Justification::Kind::Hyp:
      case Justification::Kind::Ax: {
        out.steps.push_back(st);
        int s1 = int(out.steps.size());
        Binding b{{"A", phi}, {"B", discharged}};
        out.steps.push_back(
            {instantiate(a1.schema, b), Justification::ax("A1", b)});
        int s2 = int(out.steps.size());
        out.steps.push_back({Formula::imp(discharged, phi),
                             Justification::mp(s1, s2)});
        mapped[k] = int(out.steps.size());
        break;
      }
      case Justification::Kind::MP: {
        Formula minor = d.steps[st.just.from - 1].formula;
        Binding b{{"A", discharged}, {"B", minor}, {"C", phi}};
        out.steps.push_back(
            {instantiate(a2.schema, b), Justification::ax("A2", b)});
        int s1 = int(out.steps.size());
        // (a -> (minor -> phi)) -> ((a -> minor) -> (a -> phi))
        out.steps.push_back({out.steps[s1 - 1].formula.rhs(),
                             Justification::mp(mapped[st.just.impl - 1], s1)});
        int s2 = int(out.steps.size());
        out.steps.push_back({Formula::imp(discharged, phi),
                             Justification::mp(mapped[st.just.from - 1], s2)});
        mapped[k] = int(out.steps.size());
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// file format

DerivationFileError::DerivationFileError(std::string msg, int line_)
    : Error(msg + " (line " + std::to_string(line_) + ")"), line(line_) {}

namespace {

std::string strip(std::string s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

Justification parse_justification(const std::string& text, int lineno) {
  std::string j = strip(text);
  if (j == "hyp") return Justification::hyp();
  if (j.rfind("mp", 0) == 0) {
    std::istringstream in(j.substr(2));
    int a = 0, b = 0;
    if (!(in >> a >> b))
      throw DerivationFileError("mp wants two step numbers", lineno);
    return Justification::mp(a, b);
  }
  if (j.rfind("ax", 0) == 0) {
    std::istringstream in(j.substr(2));
    std::string name;
    if (!(in >> name)) throw DerivationFileError("ax wants a name", lineno);
    std::string rest;
    std::getline(in, rest);
    rest = strip(rest);
    if (rest.empty()) return Justification::ax(name);
    Binding b;
    std::istringstream parts(rest);
    std::string part;
    while (std::getline(parts, part, ';')) {
      part = strip(part);
      if (part.empty()) continue;
      auto eq = part.find('=');
      if (eq == std::string::npos || eq == 0)
        throw DerivationFileError("binding wants X=<formula>", lineno);
      std::string var = strip(part.substr(0, eq));
      b.insert_or_assign(var, parse(part.substr(eq + 1)));
    }
    return Justification::ax(name, b);
  }
  throw DerivationFileError("unknown justification '" + j + "'", lineno);
}

}  // namespace

Derivation parse_derivation(std::string_view text) {
  Derivation d;
  bool saw_system = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  int expected_step = 1;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = strip(raw);
    if (line.empty()) continue;

    if (line.rfind("system", 0) == 0) {
      auto name = strip(line.substr(6));
      auto id = parse_system(name);
      if (!id) throw DerivationFileError("unknown system '" + name + "'", lineno);
      d.system = *id;
      saw_system = true;
      continue;
    }
    if (line.rfind("hyp", 0) == 0 && !line.empty() &&
        (line.size() == 3 || line[3] == ' ' || line[3] == '\t')) {
      try {
        d.hypotheses.push_back(parse(strip(line.substr(3))));
      } catch (const SyntaxError& e) {
        throw DerivationFileError(e.what(), lineno);
      }
      continue;
    }

    // <n>. <formula> ; <justification>
    auto dot = line.find('.');
    if (dot == std::string::npos)
      throw DerivationFileError("expected 'system', 'hyp' or a numbered step",
                                lineno);
    int n = 0;
    try {
      n = std::stoi(line.substr(0, dot));
    } catch (...) {
      throw DerivationFileError("bad step number", lineno);
    }
    if (n != expected_step)
      throw DerivationFileError("steps must be numbered consecutively from 1",
                                lineno);
    ++expected_step;
    auto semi = line.find(';', dot);
    if (semi == std::string::npos)
      throw DerivationFileError("missing ';' before the justification", lineno);
    try {
      d.steps.push_back({parse(line.substr(dot + 1, semi - dot - 1)),
                         parse_justification(line.substr(semi + 1), lineno)});
    } catch (const SyntaxError& e) {
      throw DerivationFileError(e.what(), lineno);
    }
  }
  if (!saw_system) throw DerivationFileError("missing system line", 0);
  if (d.steps.empty()) throw DerivationFileError("no steps", 0);
  return d;
}

std::string render_derivation(const Derivation& d) {
  std::ostringstream out;
  out << "system " << system_name(d.system) << "\n";
  for (Formula h : d.hypotheses) out << "hyp " << render(h) << "\n";
  for (size_t k = 0; k < d.steps.size(); ++k) {
    const Step& st = d.steps[k];
    out << (k + 1) << ". " << render(st.formula) << " ; ";
    switch (st.just.kind) {
      case Justification::Kind::Hyp:
        out << "hyp";
        break;
      case Justification::Kind::Ax:
        out << "ax " << st.just.axiom;
        if (st.just.binding) {
          bool first = true;
          for (const auto& [var, f] : *st.just.binding) {
            out << (first ? " " : "; ") << var << "=" << render(f);
            first = false;
          }
        }
        break;
      case Justification::Kind::MP:
        out << "mp " << st.just.from << ' ' << st.just.impl;
        break;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace mnm
