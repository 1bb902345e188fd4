#include "spectra/dsl.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace spectra {

namespace {

enum class Tok { Ident, Number, String, LParen, RParen, LBracket, RBracket, Comma, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string \"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      const std::size_t line = line_, col = col_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '\'')) {
          id += advance();
        }
        out.push_back({Tok::Ident, id, line, col});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          num += advance();
        }
        out.push_back({Tok::Number, num, line, col});
      } else if (c == '"') {
        advance();
        std::string s;
        while (true) {
          if (pos_ >= text_.size() || text_[pos_] == '\n') {
            throw ParseError(line, col, "closing '\"'",
                             at(line, col) + "unterminated string literal");
          }
          char ch = advance();
          if (ch == '"') break;
          if (ch == '\\' && pos_ < text_.size()) ch = advance();
          s += ch;
        }
        out.push_back({Tok::String, s, line, col});
      } else {
        Tok kind;
        switch (c) {
          case '(': kind = Tok::LParen; break;
          case ')': kind = Tok::RParen; break;
          case '[': kind = Tok::LBracket; break;
          case ']': kind = Tok::RBracket; break;
          case ',': kind = Tok::Comma; break;
          case '=': kind = Tok::Equals; break;
          default:
            throw ParseError(line, col, "a token",
                             at(line, col) + "unexpected character '" + std::string(1, c) + "'");
        }
        out.push_back({kind, std::string(1, advance()), line, col});
      }
    }
  }

  static std::string at(std::size_t line, std::size_t col) {
    return std::to_string(line) + ":" + std::to_string(col) + ": ";
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options)
      : tokens_(Lexer(text).run()), options_(options) {}

  ParsedInput input() {
    ParsedInput in{expr(), {}};
    while (peek().kind == Tok::Ident && peek().text == "assume") in.assumptions.push_back(assume());
    expect(Tok::End, "'assume' or end of input");
    return in;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& expected) const {
    throw ParseError(t.line, t.column, expected,
                     Lexer::at(t.line, t.column) + "expected " + expected + ", found " + describe(t));
  }

  Token expect(Tok kind, const std::string& expected) {
    if (peek().kind != kind) fail(peek(), expected);
    return take();
  }

  void keyword(const std::string& word) {
    if (peek().kind != Tok::Ident || peek().text != word) fail(peek(), "'" + word + "'");
    take();
  }

  AlgebraExpr expr() {
    static const std::string kExprStart = "one of atom, field, poly, loc, tensor";
    const Token head = peek();
    if (head.kind != Tok::Ident) fail(head, kExprStart);
    if (head.text == "atom") return atom();
    if (head.text == "field") return field();
    if (head.text == "poly") {
      take();
      expect(Tok::LParen, "'('");
      AlgebraExpr inner = expr();
      expect(Tok::Comma, "','");
      const Token n = expect(Tok::Number, "a positive integer");
      const unsigned count = to_unsigned(n);
      if (count == 0) fail(n, "a positive integer");
      expect(Tok::RParen, "')'");
      return AlgebraExpr::poly(std::move(inner), count);
    }
    if (head.text == "loc") {
      take();
      expect(Tok::LParen, "'('");
      AlgebraExpr inner = expr();
      expect(Tok::RParen, "')'");
      return AlgebraExpr::loc(std::move(inner));
    }
    if (head.text == "tensor") {
      take();
      expect(Tok::LParen, "'('");
      AlgebraExpr left = expr();
      expect(Tok::Comma, "','");
      AlgebraExpr right = expr();
      expect(Tok::RParen, "')'");
      return AlgebraExpr::tensor(std::move(left), std::move(right));
    }
    fail(head, kExprStart);
  }

  AlgebraExpr atom() {
    take();
    expect(Tok::LParen, "'('");
    AlgebraExpr::Atom a;
    const Token name = peek();
    if (name.kind != Tok::Ident && name.kind != Tok::String) fail(name, "an atom name");
    a.name = take().text;
    if (a.name.empty()) fail(name, "a nonempty atom name");
    while (peek().kind == Tok::Comma) {
      take();
      setting(a.flags, a.quantities, &a);
    }
    expect(Tok::RParen, "',' or ')'");
    return AlgebraExpr::atom(std::move(a));
  }

  // One `key=value` pair. `atom` is null inside assume(...), where posets are not allowed.
  void setting(std::vector<AlgebraExpr::AtomFlag>& flags,
               std::vector<AlgebraExpr::AtomQuantity>& quantities, AlgebraExpr::Atom* atom) {
    static const std::string kKey = "a property name, td, dim, min_rtd or poset";
    const Token key = peek();
    if (key.kind != Tok::Ident) fail(key, kKey);
    take();
    expect(Tok::Equals, "'='");
    if (auto q = parse_quantity(key.text)) {
      quantities.push_back({*q, interval()});
      return;
    }
    if (key.text == "poset" && atom) {
      const Token ref = expect(Tok::String, "a quoted poset path");
      if (!atom->poset_ref.empty()) fail(key, "at most one poset per atom");
      atom->poset_ref = ref.text;
      atom->poset = load(ref);
      return;
    }
    if (auto p = parse_property(key.text)) {
      flags.push_back({*p, tristate()});
      return;
    }
    fail(key, kKey);
  }

  std::shared_ptr<const SpectralPoset> load(const Token& ref) {
    try {
      if (options_.poset_loader) return options_.poset_loader(ref.text);
      return std::make_shared<const SpectralPoset>(
          load_poset(options_.base_dir / ref.text, options_.limits));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(ref.line, ref.column, "a readable poset file",
                       Lexer::at(ref.line, ref.column) + "cannot load poset \"" + ref.text +
                           "\": " + e.what());
    }
  }

  AlgebraExpr field() {
    const Token head = take();
    expect(Tok::LParen, "'('");
    keyword("td");
    expect(Tok::Equals, "'='");
    const ExtNat td = extnat();
    FieldKind kind = FieldKind::General;
    TriState fsc = TriState::Unknown;
    bool seen_kind = false, seen_fsc = false;
    while (peek().kind == Tok::Comma) {
      take();
      const Token key = expect(Tok::Ident, "kind or finite_sep");
      expect(Tok::Equals, "'='");
      if (key.text == "kind" && !seen_kind) {
        const Token k = expect(Tok::Ident, "one of pure_trans, sep_alg_finite, alg, insep, general");
        try {
          kind = parse_field_kind(k.text);
        } catch (const InvalidArgument&) {
          fail(k, "one of pure_trans, sep_alg_finite, alg, insep, general");
        }
        seen_kind = true;
      } else if (key.text == "finite_sep" && !seen_fsc) {
        fsc = tristate();
        seen_fsc = true;
      } else {
        fail(key, seen_kind ? "finite_sep" : "kind or finite_sep");
      }
    }
    expect(Tok::RParen, "',' or ')'");
    try {
      return AlgebraExpr::field(td, kind, fsc);
    } catch (const InvalidExpr& e) {
      throw ParseError(head.line, head.column, "a consistent field",
                       Lexer::at(head.line, head.column) + e.what());
    }
  }

  ParsedInput::Assumption assume() {
    take();
    expect(Tok::LParen, "'('");
    ParsedInput::Assumption a;
    a.subject = expect(Tok::Ident, "a node label such as n0").text;
    while (peek().kind == Tok::Comma) {
      take();
      setting(a.flags, a.quantities, nullptr);
    }
    expect(Tok::RParen, "',' or ')'");
    return a;
  }

  unsigned to_unsigned(const Token& t) const {
    unsigned v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size()) fail(t, "a small integer");
    return v;
  }

  ExtNat extnat() {
    const Token t = peek();
    if (t.kind == Tok::Ident && t.text == "inf") {
      take();
      return ExtNat::inf();
    }
    if (t.kind != Tok::Number) fail(t, "an integer or inf");
    take();
    auto v = parse_ext_nat(t.text);
    if (!v) fail(t, "an integer or inf");
    return *v;
  }

  NatInterval interval() {
    if (peek().kind != Tok::LBracket) return NatInterval::exactly(extnat());
    const Token open = take();
    const ExtNat lo = extnat();
    expect(Tok::Comma, "','");
    const ExtNat hi = extnat();
    expect(Tok::RBracket, "']'");
    if (hi < lo) fail(open, "an interval with lo <= hi");
    return {lo, hi};
  }

  TriState tristate() {
    const Token t = peek();
    if (t.kind == Tok::Ident) {
      try {
        const TriState v = parse_tristate(t.text);
        take();
        return v;
      } catch (const InvalidArgument&) {
      }
    }
    fail(t, "true, false or unknown");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const ParseOptions& options_;
};

bool is_ident(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
  }
  // Keywords would still lex as identifiers, but quoting them reads better.
  return s != "inf";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string interval_text(const NatInterval& i) {
  if (i.is_exact()) return i.lo().to_string();
  return "[" + i.lo().to_string() + ", " + i.hi().to_string() + "]";
}

void print_settings(std::ostringstream& os, const std::vector<AlgebraExpr::AtomFlag>& flags,
                    const std::vector<AlgebraExpr::AtomQuantity>& quantities) {
  for (const auto& f : flags) os << ", " << flag_name(f.property) << '=' << to_string(f.value);
  for (const auto& q : quantities) {
    os << ", " << to_string(q.quantity) << '=' << interval_text(q.value);
  }
}

void print_into(const AlgebraExpr& e, std::ostringstream& os) {
  if (const auto* a = e.as_atom()) {
    os << "atom(" << (is_ident(a->name) ? a->name : quote(a->name));
    print_settings(os, a->flags, a->quantities);
    if (!a->poset_ref.empty()) os << ", poset=" << quote(a->poset_ref);
    os << ')';
  } else if (const auto* f = e.as_field()) {
    os << "field(td=" << f->td.to_string();
    if (f->kind != FieldKind::General) os << ", kind=" << to_string(f->kind);
    if (f->finite_over_sep_closure != TriState::Unknown) {
      os << ", finite_sep=" << to_string(f->finite_over_sep_closure);
    }
    os << ')';
  } else if (const auto* p = e.as_poly()) {
    os << "poly(";
    print_into(p->inner, os);
    os << ", " << p->n << ')';
  } else if (const auto* l = e.as_loc()) {
    os << "loc(";
    print_into(l->inner, os);
    os << ')';
  } else if (const auto* t = e.as_tensor()) {
    os << "tensor(";
    print_into(t->left, os);
    os << ", ";
    print_into(t->right, os);
    os << ')';
  }
}

}  // namespace

ParsedInput parse_input(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).input();
}

AlgebraExpr parse_expr(std::string_view text, const ParseOptions& options) {
  ParsedInput in = parse_input(text, options);
  if (!in.assumptions.empty()) {
    throw ParseError(1, 1, "a bare expression", "assume(...) is not allowed in a bare expression");
  }
  return in.expr;
}

std::string print_expr(const AlgebraExpr& e) {
  std::ostringstream os;
  print_into(e, os);
  return os.str();
}

std::string print_input(const ParsedInput& input) {
  std::ostringstream os;
  print_into(input.expr, os);
  for (const auto& a : input.assumptions) {
    os << "\nassume(" << a.subject;
    print_settings(os, a.flags, a.quantities);
    os << ')';
  }
  return os.str();
}

std::vector<Axiom> assumptions_to_axioms(const ParsedInput& input) {
  std::vector<Axiom> out;
  for (const auto& a : input.assumptions) {
    const std::string& s = a.subject;
    std::size_t index = 0;
    bool ok = s.size() > 1 && s[0] == 'n';
    if (ok) {
      auto [p, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), index);
      ok = ec == std::errc() && p == s.data() + s.size();
    }
    if (!ok) throw UnknownSubject("'" + s + "' is not a node label (expected n<index>)");
    const std::string citation = "assumed on " + s;
    for (const auto& f : a.flags) out.push_back({NodeId{index}, f.property, f.value, citation});
    for (const auto& q : a.quantities) out.push_back({NodeId{index}, q.quantity, q.value, citation});
  }
  return out;
}

}  // namespace spectra
