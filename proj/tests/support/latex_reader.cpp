#include "latex_reader.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

namespace latex {

using pie::Formula;
using pie::Term;

namespace {

struct Tok {
  enum Kind { Cmd, Sym, Punct, End } kind;
  std::string text;
  // For \mathit / \mathsf: which font.
  std::string font;
};

std::string decode_symbol(const std::string& s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "\\_") == 0) {
      out += '_';
      i += 2;
    } else if (s.compare(i, 2, "_{") == 0) {
      auto e = s.find('}', i);
      out += s.substr(i + 2, e - i - 2);
      i = e + 1;
    } else if (s.compare(i, 2, "^{") == 0) {
      auto e = s.find('}', i);
      std::string inner = s.substr(i + 2, e - i - 2);
      for (std::size_t k = inner.find("\\prime"); k != std::string::npos; k = inner.find("\\prime", k + 6)) out += "_p";
      i = e + 1;
    } else {
      out += s[i++];
    }
  }
  return out;
}

std::vector<Tok> lex(const std::string& s) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '&') {
      ++i;
      continue;
    }
    if (c == '\\') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i + 1) {
        // \, \; \\ and similar spacing.
        i += 2;
        continue;
      }
      std::string name = s.substr(i + 1, j - i - 1);
      i = j;
      if (name == "mathit" || name == "mathsf" || name == "pplparam") {
        if (i >= s.size() || s[i] != '{') throw std::runtime_error("expected { after \\" + name);
        int depth = 0;
        std::size_t start = i + 1;
        do {
          if (s[i] == '{') ++depth;
          if (s[i] == '}') --depth;
          ++i;
        } while (depth > 0 && i < s.size());
        out.push_back({Tok::Sym, decode_symbol(s.substr(start, i - start - 1)), name});
        continue;
      }
      out.push_back({Tok::Cmd, name, ""});
      continue;
    }
    if (std::string_view("(),=").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), ""});
      ++i;
      continue;
    }
    throw std::runtime_error(std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", ""});
  return out;
}

class Reader {
 public:
  explicit Reader(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  Formula all() {
    Formula f = iff();
    if (peek().kind != Tok::End) throw std::runtime_error("trailing input near " + peek().text);
    return f;
  }

 private:
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;

  const Tok& peek() const { return toks_[pos_]; }
  Tok take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool cmd(const char* n) const { return peek().kind == Tok::Cmd && peek().text == n; }
  bool punct(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
  void expect(const char* p) {
    if (!punct(p)) throw std::runtime_error(std::string("expected ") + p + " near " + peek().text);
    take();
  }
  bool is_bound(const std::string& x) const {
    for (const auto& b : bound_)
      if (b == x) return true;
    return false;
  }

  Formula iff() {
    Formula l = implies();
    if (cmd("leftrightarrow")) {
      take();
      return Formula::iff(l, implies());
    }
    return l;
  }

  Formula implies() {
    Formula l = disjunction();
    if (cmd("rightarrow")) {
      take();
      return Formula::implies(l, implies());
    }
    return l;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (cmd("lor")) {
      take();
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? parts.front() : Formula::disjunction(parts);
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (cmd("land")) {
      take();
      parts.push_back(unary());
    }
    return parts.size() == 1 ? parts.front() : Formula::conjunction(parts);
  }

  Formula unary() {
    if (cmd("lnot")) {
      take();
      return Formula::negation(unary());
    }
    if (cmd("forall") || cmd("exists")) return quantified();
    if (cmd("top")) {
      take();
      return Formula::truth();
    }
    if (cmd("bot")) {
      take();
      return Formula::falsity();
    }
    if (punct("(")) {
      take();
      Formula f = iff();
      expect(")");
      return f;
    }
    return atomic();
  }

  Formula quantified() {
    bool forall = cmd("forall");
    std::vector<std::string> vars;
    while ((forall && cmd("forall")) || (!forall && cmd("exists"))) {
      take();
      if (peek().kind != Tok::Sym) throw std::runtime_error("expected a bound variable");
      vars.push_back(take().text);
    }
    for (const auto& v : vars) bound_.push_back(v);
    Formula body = unary();
    bound_.resize(bound_.size() - vars.size());
    return forall ? Formula::forall(vars, body) : Formula::exists(vars, body);
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    if (!punct("(")) return args;
    take();
    args.push_back(term());
    while (punct(",")) {
      take();
      args.push_back(term());
    }
    expect(")");
    return args;
  }

  Term term() {
    if (peek().kind != Tok::Sym) throw std::runtime_error("expected a term near " + peek().text);
    Tok t = take();
    if (t.font == "mathit" && is_bound(t.text)) return Term::variable(t.text);
    return Term::compound(t.text, arguments());
  }

  Formula atomic() {
    if (peek().kind != Tok::Sym) throw std::runtime_error("expected an atom near " + peek().text);
    std::size_t mark = pos_;
    Tok t = take();
    std::vector<Term> args = arguments();
    if (punct("=") || cmd("neq")) {
      pos_ = mark;
      Term lhs = term();
      bool eq = punct("=");
      take();
      Term rhs = term();
      Formula e = Formula::equal(lhs, rhs);
      return eq ? e : Formula::negation(e);
    }
    return Formula::atom(t.text, args);
  }
};

std::string strip_terminator(std::string row) {
  while (!row.empty() && std::isspace(static_cast<unsigned char>(row.back()))) row.pop_back();
  if (!row.empty() && (row.back() == '.' || row.back() == ',')) row.pop_back();
  return row;
}

}  // namespace

Formula read(const std::string& math) { return Reader(lex(strip_terminator(math))).all(); }

Formula read_display(const std::string& rows) {
  static const std::string sep = "&&&&\\; \\land \\\\";
  std::vector<Formula> parts;
  std::size_t start = 0;
  while (true) {
    auto e = rows.find(sep, start);
    parts.push_back(read(rows.substr(start, e == std::string::npos ? std::string::npos : e - start)));
    if (e == std::string::npos) break;
    start = e + sep.size();
  }
  return parts.size() == 1 ? parts.front() : Formula::conjunction(parts);
}

std::vector<std::string> displays_after(const std::string& doc, const std::string& heading) {
  static const std::string open = "\\begin{array}{lllll}\n";
  static const std::string close = "\n\\end{array}";
  std::vector<std::string> out;
  for (auto h = doc.find(heading); h != std::string::npos; h = doc.find(heading, h + 1)) {
    auto b = doc.find(open, h);
    if (b == std::string::npos) break;
    b += open.size();
    auto e = doc.find(close, b);
    if (e == std::string::npos) break;
    out.push_back(doc.substr(b, e - b));
  }
  return out;
}

}  // namespace latex
