#include <array>
#include <cctype>
#include <optional>
#include <sstream>

#include "pie/syntax.hpp"

namespace pie {

Syntax Syntax::atom(std::string name) {
  Syntax s;
  s.kind = Kind::Atom;
  s.name = std::move(name);
  return s;
}

Syntax Syntax::variable(std::string name) {
  Syntax s;
  s.kind = Kind::Variable;
  s.name = std::move(name);
  return s;
}

Syntax Syntax::compound(std::string functor, std::vector<Syntax> args) {
  Syntax s;
  s.kind = Kind::Compound;
  s.name = std::move(functor);
  s.args = std::move(args);
  return s;
}

Syntax Syntax::list(std::vector<Syntax> items) {
  Syntax s;
  s.kind = Kind::List;
  s.args = std::move(items);
  return s;
}

Syntax Syntax::embed(Formula f) {
  Syntax s;
  s.kind = Kind::Embedded;
  s.embedded = std::make_shared<const Formula>(std::move(f));
  return s;
}

bool operator==(const Syntax& a, const Syntax& b) {
  if (a.kind != b.kind || a.name != b.name || a.functor_is_variable != b.functor_is_variable) return false;
  if (a.args != b.args || a.tail != b.tail) return false;
  if (a.kind == Syntax::Kind::Embedded) return *a.embedded == *b.embedded;
  return true;
}

namespace {

enum class OpType { XFX, XFY, YFX, FY, FX };

struct OpDef {
  std::string_view name;
  OpType type;
  int priority;
};

// Loosest to tightest: `:-`, `::`, `::-`, `<->`, `->`, `;`, `,`, `~`, `=`.
constexpr std::array<OpDef, 11> kInfix{{
    {"::", OpType::XFX, 1180},
    {"::-", OpType::XFX, 1150},
    {"<->", OpType::XFY, 1100},
    {"->", OpType::XFY, 1050},
    {";", OpType::XFY, 1030},
    {",", OpType::XFY, 1000},
    {"=", OpType::XFX, 700},
    {"\\=", OpType::XFX, 700},
    {"-", OpType::YFX, 500},
    {"/", OpType::YFX, 400},
    {":-", OpType::XFX, 1200},
}};

constexpr std::array<OpDef, 2> kPrefix{{
    {"~", OpType::FY, 900},
    {":-", OpType::FX, 1200},
}};

// Symbolic operator spellings, longest first.
constexpr std::array<std::string_view, 11> kSymbols{"::-", "::", ":-", "<->", "->", "\\=", "=", "~", ";", "/", "-"};

const OpDef* infix_op(std::string_view n) {
  for (const auto& o : kInfix)
    if (o.name == n) return &o;
  return nullptr;
}

const OpDef* prefix_op(std::string_view n) {
  for (const auto& o : kPrefix)
    if (o.name == n) return &o;
  return nullptr;
}

enum class Tok { Name, Var, Quoted, Symbol, Punct, End, Comment, Eof };

struct Token {
  Tok kind;
  std::string text;
  SourcePosition pos;
  // '(' directly follows a name without whitespace.
  bool functional = false;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    SourcePosition pos{line_, col_};
    if (at_end()) return {Tok::Eof, "", pos};
    char c = peek();
    if (c == '/' && peek(1) == '*') {
      advance(2);
      std::string body;
      while (!at_end() && !(peek() == '*' && peek(1) == '/')) body += advance();
      if (at_end()) throw SyntaxError(pos, "unterminated block comment");
      advance(2);
      return {Tok::Comment, body, pos};
    }
    if (std::islower(static_cast<unsigned char>(c)) || c == '$') {
      std::string s;
      s += advance();
      while (!at_end() && is_ident(peek())) s += advance();
      return finish_name(Tok::Name, std::move(s), pos);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
      return finish_name(Tok::Name, std::move(s), pos);
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (!at_end() && is_ident(peek())) s += advance();
      return finish_name(Tok::Var, std::move(s), pos);
    }
    if (c == '\'') {
      advance();
      std::string s;
      for (;;) {
        if (at_end()) throw SyntaxError(pos, "unterminated quoted atom");
        char d = advance();
        if (d == '\'') {
          if (peek() != '\'') break;
          advance();
        }
        s += d;
      }
      return {Tok::Quoted, std::move(s), pos};
    }
    if (c == '.') {
      char n = peek(1);
      if (n == '\0' || std::isspace(static_cast<unsigned char>(n)) || n == '%') {
        advance();
        return {Tok::End, ".", pos};
      }
      throw SyntaxError(pos, "unexpected '.'");
    }
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == '|') {
      advance();
      return {Tok::Punct, std::string(1, c), pos};
    }
    for (auto sym : kSymbols) {
      if (src_.substr(i_, sym.size()) == sym) {
        advance(sym.size());
        return {Tok::Symbol, std::string(sym), pos};
      }
    }
    throw SyntaxError(pos, std::string("unexpected character '") + c + "'");
  }

 private:
  static bool is_ident(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Token finish_name(Tok kind, std::string s, SourcePosition pos) {
    Token t{kind, std::move(s), pos};
    t.functional = !at_end() && peek() == '(';
    return t;
  }

  void skip_space() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (!at_end() && peek() == '%') {
        while (!at_end() && peek() != '\n') advance();
        continue;
      }
      return;
    }
  }

  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t k = 0) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }
  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) advance();
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { shift(); }

  // Top-level clause or comment; nullopt at end of input.
  std::optional<SourceItem> item() {
    if (tok_.kind == Tok::Eof) return std::nullopt;
    if (tok_.kind == Tok::Comment) {
      SourceItem it{SourceItem::Kind::BlockComment, {}, tok_.text, tok_.pos};
      shift();
      return it;
    }
    SourcePosition pos = tok_.pos;
    Syntax s = expr(1200);
    expect_end();
    return SourceItem{SourceItem::Kind::Clause, std::move(s), {}, pos};
  }

  Syntax single() {
    Syntax s = expr(1200);
    if (tok_.kind == Tok::End) shift();
    if (tok_.kind != Tok::Eof) fail("unexpected trailing input '" + tok_.text + "'");
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(tok_.pos, msg); }

  void shift() {
    do {
      tok_ = lex_.next();
    } while (tok_.kind == Tok::Comment && depth_ > 0);
  }

  void expect_end() {
    if (tok_.kind != Tok::End) fail("expected '.' at end of clause");
    shift();
  }

  void expect_punct(char c) {
    if (tok_.kind == Tok::Eof) fail(std::string("unexpected end of input, expected '") + c + "'");
    if (tok_.kind != Tok::Punct || tok_.text[0] != c) fail(std::string("expected '") + c + "'");
    shift();
  }

  bool starts_term() const {
    switch (tok_.kind) {
      case Tok::Name:
      case Tok::Var:
      case Tok::Quoted:
        return true;
      case Tok::Symbol:
        return prefix_op(tok_.text) != nullptr;
      case Tok::Punct:
        return tok_.text == "(" || tok_.text == "[";
      default:
        return false;
    }
  }

  // Returns the parsed term and its priority.
  std::pair<Syntax, int> primary(int max) {
    Token t = tok_;
    switch (t.kind) {
      case Tok::Eof:
        fail("unexpected end of input");
      case Tok::End:
        fail("unexpected '.'");
      case Tok::Punct:
        if (t.text == "(") {
          shift();
          ++depth_;
          Syntax s = expr(1200);
          --depth_;
          expect_punct(')');
          return {std::move(s), 0};
        }
        if (t.text == "[") return {list(), 0};
        fail("unexpected '" + t.text + "'");
      case Tok::Symbol: {
        const OpDef* op = prefix_op(t.text);
        if (!op) fail("unexpected operator '" + t.text + "'");
        shift();
        if (!starts_term()) {
          Syntax s = Syntax::atom(t.text);
          s.pos = t.pos;
          return {std::move(s), 0};
        }
        int pr = op->priority;
        if (pr > max) fail("operator priority clash at '" + t.text + "'");
        int arg_max = op->type == OpType::FY ? pr : pr - 1;
        Syntax arg = expr(arg_max);
        Syntax s = Syntax::compound(t.text, {std::move(arg)});
        s.pos = t.pos;
        return {std::move(s), pr};
      }
      case Tok::Name:
      case Tok::Var: {
        shift();
        if (t.functional) {
          expect_punct('(');
          ++depth_;
          std::vector<Syntax> args;
          args.push_back(expr(999));
          while (tok_.kind == Tok::Punct && tok_.text == ",") {
            shift();
            args.push_back(expr(999));
          }
          --depth_;
          expect_punct(')');
          Syntax s = Syntax::compound(t.text, std::move(args));
          s.functor_is_variable = t.kind == Tok::Var;
          s.pos = t.pos;
          return {std::move(s), 0};
        }
        Syntax s = t.kind == Tok::Var ? Syntax::variable(t.text) : Syntax::atom(t.text);
        s.pos = t.pos;
        return {std::move(s), 0};
      }
      case Tok::Quoted: {
        shift();
        // Only option values (file names) use quoted atoms; formulas reject them.
        Syntax s = Syntax::compound("$quoted", {Syntax::atom(t.text)});
        s.pos = t.pos;
        return {std::move(s), 0};
      }
      case Tok::Comment:
        break;
    }
    fail("unexpected token");
  }

  Syntax list() {
    SourcePosition pos = tok_.pos;
    shift();
    ++depth_;
    std::vector<Syntax> items;
    std::vector<Syntax> tail;
    if (!(tok_.kind == Tok::Punct && tok_.text == "]")) {
      items.push_back(expr(999));
      while (tok_.kind == Tok::Punct && tok_.text == ",") {
        shift();
        items.push_back(expr(999));
      }
      if (tok_.kind == Tok::Punct && tok_.text == "|") {
        shift();
        tail.push_back(expr(999));
      }
    }
    --depth_;
    expect_punct(']');
    Syntax s = Syntax::list(std::move(items));
    s.tail = std::move(tail);
    s.pos = pos;
    return s;
  }

  Syntax expr(int max) {
    auto [left, left_pr] = primary(max);
    for (;;) {
      std::string name;
      if (tok_.kind == Tok::Symbol) {
        name = tok_.text;
      } else if (tok_.kind == Tok::Punct && tok_.text == ",") {
        name = ",";
      } else {
        break;
      }
      const OpDef* op = infix_op(name);
      if (!op) break;
      int pr = op->priority;
      if (pr > max) break;
      int left_max = op->type == OpType::YFX ? pr : pr - 1;
      int right_max = op->type == OpType::XFY ? pr : pr - 1;
      if (left_pr > left_max) fail("operator priority clash at '" + name + "'");
      SourcePosition pos = tok_.pos;
      shift();
      Syntax right = expr(right_max);
      Syntax s = Syntax::compound(name, {std::move(left), std::move(right)});
      s.pos = pos;
      left = std::move(s);
      left_pr = pr;
    }
    return left;
  }

  Lexer lex_;
  Token tok_{Tok::Eof, "", {}};
  int depth_ = 0;
};

int infix_priority(const Syntax& s) {
  if (s.kind != Syntax::Kind::Compound || s.functor_is_variable) return 0;
  if (s.args.size() == 2)
    if (const OpDef* op = infix_op(s.name)) return op->priority;
  if (s.args.size() == 1)
    if (const OpDef* op = prefix_op(s.name)) return op->priority;
  return 0;
}

std::string_view spaced(std::string_view op) {
  if (op == ",") return ", ";
  if (op == ";") return "; ";
  if (op == "::") return " :: ";
  if (op == "::-") return " ::- ";
  if (op == ":-") return " :- ";
  return op;
}

void print_rec(const Syntax& s, int max, std::ostringstream& out, bool compact);

void print_args(const std::vector<Syntax>& args, std::ostringstream& out, bool compact) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out << ", ";
    print_rec(args[i], 999, out, compact);
  }
}

void print_rec(const Syntax& s, int max, std::ostringstream& out, bool compact) {
  switch (s.kind) {
    case Syntax::Kind::Atom:
    case Syntax::Kind::Variable:
      out << s.name;
      return;
    case Syntax::Kind::Embedded:
      print_rec(formula_to_syntax(*s.embedded), max, out, compact);
      return;
    case Syntax::Kind::List:
      out << '[';
      print_args(s.args, out, compact);
      if (!s.tail.empty()) {
        out << '|';
        print_rec(s.tail.front(), 999, out, compact);
      }
      out << ']';
      return;
    case Syntax::Kind::Compound:
      break;
  }
  if (s.is_compound("$quoted", 1) && s.args[0].kind == Syntax::Kind::Atom) {
    out << '\'';
    for (char c : s.args[0].name) out << (c == '\'' ? "''" : std::string(1, c));
    out << '\'';
    return;
  }
  int pr = infix_priority(s);
  if (pr == 0) {
    if (compact) {
      out << s.name;
      for (const auto& a : s.args) print_rec(a, 0, out, compact);
      return;
    }
    out << s.name << '(';
    print_args(s.args, out, compact);
    out << ')';
    return;
  }
  bool paren = pr > max;
  if (paren) out << '(';
  if (s.args.size() == 1) {
    const OpDef* op = prefix_op(s.name);
    out << s.name;
    if (s.name == ":-") out << ' ';
    print_rec(s.args[0], op->type == OpType::FY ? pr : pr - 1, out, compact);
  } else {
    const OpDef* op = infix_op(s.name);
    print_rec(s.args[0], op->type == OpType::YFX ? pr : pr - 1, out, compact);
    out << spaced(s.name);
    print_rec(s.args[1], op->type == OpType::XFY ? pr : pr - 1, out, compact);
  }
  if (paren) out << ')';
}

}  // namespace

Syntax parse_syntax(std::string_view src) {
  Parser p(src);
  return p.single();
}

std::vector<SourceItem> parse_source(std::string_view src) {
  Parser p(src);
  std::vector<SourceItem> out;
  while (auto it = p.item()) out.push_back(std::move(*it));
  return out;
}

std::string print_syntax(const Syntax& s, bool compact) {
  std::ostringstream out;
  print_rec(s, 1200, out, compact);
  return out.str();
}

}  // namespace pie
