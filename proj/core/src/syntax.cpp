#include "mnm/syntax.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace mnm {

// ---------------------------------------------------------------------------
// interning

namespace {

struct NodeKey {
  Formula::Kind kind;
  std::string_view atom;
  const Formula::Node* a;
  const Formula::Node* b;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  size_t operator()(const NodeKey& k) const {
    size_t h = std::hash<int>()(static_cast<int>(k.kind));
    h = h * 0x9e3779b97f4a7c15ull + std::hash<std::string_view>()(k.atom);
    h = h * 0x9e3779b97f4a7c15ull + std::hash<const void*>()(k.a);
    h = h * 0x9e3779b97f4a7c15ull + std::hash<const void*>()(k.b);
    return h;
  }
};

struct Interner {
  std::mutex mu;
  std::unordered_map<NodeKey, const Formula::Node*, NodeKeyHash> pool;
  std::vector<std::unique_ptr<Formula::Node>> storage;

  const Formula::Node* get(Formula::Kind kind, std::string_view atom,
                           const Formula::Node* a, const Formula::Node* b) {
    std::lock_guard<std::mutex> lock(mu);
    NodeKey key{kind, atom, a, b};
    auto it = pool.find(key);
    if (it != pool.end()) return it->second;
    auto node = std::make_unique<Formula::Node>();
    node->kind = kind;
    node->atom = std::string(atom);
    node->a = a;
    node->b = b;
    node->hash = NodeKeyHash()(key);
    node->tree_size = 1 + (a ? a->tree_size : 0) + (b ? b->tree_size : 0);
    const Formula::Node* raw = node.get();
    pool.emplace(NodeKey{kind, raw->atom, a, b}, raw);
    storage.push_back(std::move(node));
    return raw;
  }
};

Interner& interner() {
  static Interner* in = new Interner();  // never destroyed, nodes live forever
  return *in;
}

}  // namespace

Formula Formula::atom(std::string_view name) {
  if (name.empty()) throw Error("atom with empty identifier");
  return Formula(interner().get(Kind::Atom, name, nullptr, nullptr));
}
Formula Formula::neg(Formula f) {
  return Formula(interner().get(Kind::Neg, {}, f.node_, nullptr));
}
Formula Formula::imp(Formula lhs, Formula rhs) {
  return Formula(interner().get(Kind::Imp, {}, lhs.node_, rhs.node_));
}
Formula Formula::box(Formula f) {
  return Formula(interner().get(Kind::Box, {}, f.node_, nullptr));
}
Formula Formula::dia(Formula f) {
  return Formula(interner().get(Kind::Dia, {}, f.node_, nullptr));
}
Formula Formula::conj(Formula a, Formula b) { return neg(imp(a, neg(b))); }
Formula Formula::disj(Formula a, Formula b) { return imp(neg(a), b); }

bool Formula::is_metavar() const {
  return is_atom() && node_->atom.size() == 1 && node_->atom[0] >= 'A' &&
         node_->atom[0] <= 'Z';
}

bool Formula::has_metavars() const {
  if (is_atom()) return is_metavar();
  if (kind() == Kind::Imp) return lhs().has_metavars() || rhs().has_metavars();
  return child().has_metavars();
}

// ---------------------------------------------------------------------------
// lexer / parser

namespace {

enum class Tok {
  Arrow,
  Pipe,
  Amp,
  Tilde,
  Box,
  Dia,
  Circ,
  Bullet,
  Circt,
  LParen,
  RParen,
  Ident,
  Metavar,
  End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Arrow: return "'->'";
    case Tok::Pipe: return "'|'";
    case Tok::Amp: return "'&'";
    case Tok::Tilde: return "'~'";
    case Tok::Box: return "'[]'";
    case Tok::Dia: return "'<>'";
    case Tok::Circ: return "'circ'";
    case Tok::Bullet: return "'bullet'";
    case Tok::Circt: return "'circt'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Ident: return "atom";
    case Tok::Metavar: return "metavariable";
    default: return "end of input";
  }
}

struct Token {
  Tok kind;
  std::string text;
  size_t offset;
};

struct Lexer {
  std::string_view src;
  size_t pos = 0;

  bool starts_with(std::string_view s) const {
    return src.substr(pos, s.size()) == s;
  }

  Token next() {
    while (pos < src.size() &&
           (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\n' ||
            src[pos] == '\r'))
      ++pos;
    size_t at = pos;
    if (pos >= src.size()) return {Tok::End, "", at};

    struct Alias {
      std::string_view text;
      Tok tok;
    };
    // unicode aliases first (longest match); "∘'" and "∘′"
    // both mean circt
    static const Alias aliases[] = {
        {"∘′", Tok::Circt}, {"∘'", Tok::Circt},
        {"->", Tok::Arrow},           {"→", Tok::Arrow},
        {"[]", Tok::Box},             {"□", Tok::Box},
        {"<>", Tok::Dia},             {"◇", Tok::Dia},
        {"~", Tok::Tilde},            {"¬", Tok::Tilde},
        {"|", Tok::Pipe},             {"∨", Tok::Pipe},
        {"&", Tok::Amp},              {"∧", Tok::Amp},
        {"∘", Tok::Circ},        {"•", Tok::Bullet},
        {"(", Tok::LParen},           {")", Tok::RParen},
    };
    for (const auto& al : aliases) {
      if (starts_with(al.text)) {
        pos += al.text.size();
        return {al.tok, std::string(al.text), at};
      }
    }

    char c = src[pos];
    if (c >= 'a' && c <= 'z') {
      size_t end = pos;
      while (end < src.size() &&
             ((src[end] >= 'a' && src[end] <= 'z') ||
              (src[end] >= 'A' && src[end] <= 'Z') ||
              (src[end] >= '0' && src[end] <= '9') || src[end] == '_'))
        ++end;
      std::string word(src.substr(pos, end - pos));
      pos = end;
      if (word == "circ") return {Tok::Circ, word, at};
      if (word == "bullet") return {Tok::Bullet, word, at};
      if (word == "circt") return {Tok::Circt, word, at};
      return {Tok::Ident, word, at};
    }
    if (c >= 'A' && c <= 'Z') {
      size_t end = pos + 1;
      if (end < src.size() &&
          ((src[end] >= 'a' && src[end] <= 'z') ||
           (src[end] >= 'A' && src[end] <= 'Z') ||
           (src[end] >= '0' && src[end] <= '9') || src[end] == '_'))
        throw SyntaxError("identifiers must start lowercase", at,
                          {"atom", "metavariable"});
      pos = end;
      return {Tok::Metavar, std::string(1, c), at};
    }
    throw SyntaxError("unexpected character", at, {"formula"});
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t i = 0;
  bool allow_metavars;

  const Token& peek() const { return toks[i]; }
  Token take() { return toks[i++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    throw SyntaxError("unexpected " + std::string(tok_name(peek().kind)),
                      peek().offset, std::move(expected));
  }

  void expect(Tok t) {
    if (peek().kind != t) fail({tok_name(t)});
    ++i;
  }

  Formula formula() { return imp(); }

  Formula imp() {
    Formula lhs = disj();
    if (peek().kind == Tok::Arrow) {
      take();
      return Formula::imp(lhs, imp());  // right-associative
    }
    return lhs;
  }

  Formula disj() {
    Formula f = conj();
    while (peek().kind == Tok::Pipe) {
      take();
      f = Formula::disj(f, conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (peek().kind == Tok::Amp) {
      take();
      f = Formula::conj(f, unary());
    }
    return f;
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Tilde:
        take();
        return Formula::neg(unary());
      case Tok::Box:
        take();
        return Formula::box(unary());
      case Tok::Dia:
        take();
        return Formula::dia(unary());
      case Tok::Circ: {
        take();
        Formula a = unary();
        return Formula::imp(Formula::box(a), Formula::dia(a));
      }
      case Tok::Bullet: {
        take();
        Formula a = unary();
        return Formula::neg(Formula::imp(Formula::box(a), Formula::dia(a)));
      }
      case Tok::Circt: {
        take();
        Formula a = unary();
        Formula na = Formula::neg(a);
        return Formula::conj(Formula::imp(Formula::box(a), a),
                             Formula::imp(Formula::box(na), na));
      }
      case Tok::LParen: {
        take();
        Formula f = formula();
        expect(Tok::RParen);
        return f;
      }
      case Tok::Ident:
        return Formula::atom(take().text);
      case Tok::Metavar: {
        if (!allow_metavars)
          throw SyntaxError("metavariable not allowed in a concrete formula",
                            peek().offset, {"atom"});
        return Formula::atom(take().text);
      }
      default:
        fail({"'~'", "'[]'", "'<>'", "'circ'", "'bullet'", "'circt'", "'('",
              "atom"});
    }
  }
};

Formula parse_impl(std::string_view text, bool allow_metavars) {
  Lexer lx{text};
  Parser p;
  p.allow_metavars = allow_metavars;
  for (;;) {
    Token t = lx.next();
    bool end = t.kind == Tok::End;
    p.toks.push_back(std::move(t));
    if (end) break;
  }
  Formula f = p.formula();
  if (p.peek().kind != Tok::End) p.fail({"end of input"});
  return f;
}

}  // namespace

SyntaxError::SyntaxError(std::string msg, size_t offset_,
                         std::vector<std::string> expected_)
    : Error(msg + " at offset " + std::to_string(offset_)),
      offset(offset_),
      expected(std::move(expected_)) {}

Formula parse(std::string_view text) { return parse_impl(text, false); }
Schema parse_schema(std::string_view text) { return parse_impl(text, true); }

// ---------------------------------------------------------------------------
// rendering

namespace {
void render_into(Formula f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.atom_name();
      return;
    case Formula::Kind::Neg:
    case Formula::Kind::Box:
    case Formula::Kind::Dia: {
      out += f.kind() == Formula::Kind::Neg   ? "~"
             : f.kind() == Formula::Kind::Box ? "[]"
                                              : "<>";
      Formula c = f.child();
      if (c.kind() == Formula::Kind::Imp) {
        out += '(';
        render_into(c, out);
        out += ')';
      } else {
        render_into(c, out);
      }
      return;
    }
    case Formula::Kind::Imp: {
      Formula l = f.lhs();
      if (l.kind() == Formula::Kind::Imp) {
        out += '(';
        render_into(l, out);
        out += ')';
      } else {
        render_into(l, out);
      }
      out += " -> ";
      render_into(f.rhs(), out);
      return;
    }
  }
}
}  // namespace

std::string render(Formula f) {
  std::string out;
  render_into(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// subformulas and substitution

namespace {
void collect(Formula f, std::unordered_set<Formula>& seen,
             std::vector<Formula>& out) {
  if (seen.count(f)) return;
  switch (f.kind()) {
    case Formula::Kind::Atom:
      break;
    case Formula::Kind::Imp:
      collect(f.lhs(), seen, out);
      collect(f.rhs(), seen, out);
      break;
    default:
      collect(f.child(), seen, out);
  }
  if (seen.insert(f).second) out.push_back(f);
}
}  // namespace

std::vector<Formula> subformulas(Formula f) {
  std::unordered_set<Formula> seen;
  std::vector<Formula> out;
  collect(f, seen, out);
  return out;
}

std::vector<Formula> subformulas(const std::vector<Formula>& roots) {
  std::unordered_set<Formula> seen;
  std::vector<Formula> out;
  for (Formula f : roots) collect(f, seen, out);
  return out;
}

std::vector<std::string> metavars_of(Schema s) {
  std::vector<std::string> out;
  for (Formula f : subformulas(s))
    if (f.is_metavar()) out.push_back(f.atom_name());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> atoms_of(Formula f) {
  std::vector<std::string> out;
  for (Formula g : subformulas(f))
    if (g.is_atom()) out.push_back(g.atom_name());
  return out;
}

Formula instantiate(Schema s, const Binding& binding) {
  switch (s.kind()) {
    case Formula::Kind::Atom:
      if (s.is_metavar()) {
        auto it = binding.find(s.atom_name());
        if (it == binding.end())
          throw MissingBinding("no binding for metavariable " + s.atom_name());
        return it->second;
      }
      return s;
    case Formula::Kind::Neg:
      return Formula::neg(instantiate(s.child(), binding));
    case Formula::Kind::Box:
      return Formula::box(instantiate(s.child(), binding));
    case Formula::Kind::Dia:
      return Formula::dia(instantiate(s.child(), binding));
    default:
      return Formula::imp(instantiate(s.lhs(), binding),
                          instantiate(s.rhs(), binding));
  }
}

namespace {
bool match_into(Schema s, Formula f, Binding& b) {
  if (s.is_metavar()) {
    auto [it, inserted] = b.emplace(s.atom_name(), f);
    return inserted || it->second == f;
  }
  if (s.kind() != f.kind()) return false;
  switch (s.kind()) {
    case Formula::Kind::Atom:
      return s == f;
    case Formula::Kind::Imp:
      return match_into(s.lhs(), f.lhs(), b) && match_into(s.rhs(), f.rhs(), b);
    default:
      return match_into(s.child(), f.child(), b);
  }
}
}  // namespace

std::optional<Binding> match_schema(Schema s, Formula f) {
  Binding b;
  if (match_into(s, f, b)) return b;
  return std::nullopt;
}

int modal_depth(Formula f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return 0;
    case Formula::Kind::Neg:
      return modal_depth(f.child());
    case Formula::Kind::Box:
    case Formula::Kind::Dia:
      return 1 + modal_depth(f.child());
    default:
      return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
  }
}

}  // namespace mnm
