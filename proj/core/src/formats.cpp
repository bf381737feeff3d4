#include <algorithm>
#include <cctype>
#include <sstream>

#include "pie/syntax.hpp"

namespace pie {

namespace {

bool plain_word(std::string_view n) {
  if (n.empty()) return false;
  if (std::all_of(n.begin(), n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) return true;
  if (!std::islower(static_cast<unsigned char>(n[0]))) return false;
  return std::all_of(n.begin(), n.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string quoted(std::string_view n) {
  if (plain_word(n)) return std::string(n);
  std::string out = "'";
  for (char c : n) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

class TptpWriter {
 public:
  std::string var(const std::string& v) {
    auto it = vars_.find(v);
    if (it != vars_.end()) return it->second;
    std::string base;
    for (char c : v) base += std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_';
    base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
    if (!std::isupper(static_cast<unsigned char>(base[0]))) base = "X" + base;
    std::string name = base;
    for (int i = 1; taken_.contains(name); ++i) name = base + std::to_string(i);
    taken_.insert(name);
    vars_.emplace(v, name);
    return name;
  }

  void term(const Term& t, std::ostringstream& out) {
    if (t.is_variable()) {
      out << var(t.name());
      return;
    }
    out << quoted(t.name());
    if (t.arity() == 0) return;
    out << '(';
    for (std::size_t i = 0; i < t.arity(); ++i) {
      if (i) out << ',';
      term(t.args()[i], out);
    }
    out << ')';
  }

  // `nested` is set inside binary connectives, where quantified and negated
  // subformulas get parentheses.
  void formula(const Formula& f, bool nested, std::ostringstream& out) {
    using C = Connective;
    switch (f.op()) {
      case C::Atom:
        out << quoted(f.name());
        if (!f.terms().empty()) {
          out << '(';
          for (std::size_t i = 0; i < f.terms().size(); ++i) {
            if (i) out << ',';
            term(f.terms()[i], out);
          }
          out << ')';
        }
        return;
      case C::Equal:
        out << '(';
        term(f.terms()[0], out);
        out << " = ";
        term(f.terms()[1], out);
        out << ')';
        return;
      case C::True:
        out << "$true";
        return;
      case C::False:
        out << "$false";
        return;
      case C::Not:
        out << "~ (";
        formula(f.body(), false, out);
        out << ')';
        return;
      case C::And:
      case C::Or: {
        const char* op = f.is(C::And) ? " & " : " | ";
        out << '(';
        for (std::size_t i = 0; i < f.children().size(); ++i) {
          if (i) out << op;
          formula(f.children()[i], true, out);
        }
        out << ')';
        return;
      }
      case C::Implies:
      case C::Iff:
        out << '(';
        formula(f.lhs(), true, out);
        out << (f.is(C::Implies) ? " => " : " <=> ");
        formula(f.rhs(), true, out);
        out << ')';
        return;
      case C::Forall:
      case C::Exists: {
        if (nested) out << '(';
        out << (f.is(C::Forall) ? "! [" : "? [");
        std::vector<std::string> saved;
        for (std::size_t i = 0; i < f.vars().size(); ++i) {
          if (i) out << ',';
          // Re-binding a name gets a fresh TPTP variable.
          vars_.erase(f.vars()[i]);
          out << var(f.vars()[i]);
        }
        out << "] : ";
        formula(f.body(), false, out);
        if (nested) out << ')';
        return;
      }
      default:
        throw FragmentError("TPTP output needs a first-order formula");
    }
  }

 private:
  std::map<std::string, std::string> vars_;
  std::set<std::string> taken_;
};

std::map<std::string, int> number_atoms(const ClausalForm& cf, std::vector<std::string> first) {
  std::map<std::string, int> ids;
  int next = 1;
  for (auto& a : first)
    if (ids.emplace(a, next).second) ++next;
  for (const auto& c : cf.clauses)
    for (const auto& l : c.literals) {
      if (!l.args.empty() || l.is_equality()) throw FragmentError("DIMACS output needs propositional clauses");
      if (ids.emplace(l.predicate, next).second) ++next;
    }
  return ids;
}

std::string clause_lines(const ClausalForm& cf, const std::map<std::string, int>& ids) {
  std::ostringstream out;
  for (const auto& c : cf.clauses) {
    for (const auto& l : c.literals) out << (l.positive ? "" : "-") << ids.at(l.predicate) << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace

std::string emit_tptp(std::string_view name, TptpRole role, const Formula& f) {
  if (!is_first_order(f)) throw FragmentError("TPTP output needs a first-order formula");
  TptpWriter w;
  std::ostringstream out;
  out << "fof(" << quoted(name) << ", " << (role == TptpRole::Axiom ? "axiom" : "conjecture") << ", ";
  w.formula(universal_closure(f), false, out);
  out << ").";
  return out.str();
}

DimacsOutput emit_dimacs(const ClausalForm& cf) {
  auto ids = number_atoms(cf, {});
  std::ostringstream out;
  out << "p cnf " << ids.size() << ' ' << cf.clauses.size() << '\n' << clause_lines(cf, ids);
  return {out.str(), ids};
}

DimacsOutput emit_qdimacs(const std::vector<std::pair<QuantifierKind, std::vector<std::string>>>& prefix,
                          const ClausalForm& cf) {
  std::vector<std::string> first;
  for (const auto& [q, atoms] : prefix) first.insert(first.end(), atoms.begin(), atoms.end());
  auto ids = number_atoms(cf, first);
  std::ostringstream out;
  out << "p cnf " << ids.size() << ' ' << cf.clauses.size() << '\n';
  for (const auto& [q, atoms] : prefix) {
    if (atoms.empty()) continue;
    out << (q == QuantifierKind::Exists ? 'e' : 'a');
    for (const auto& a : atoms) out << ' ' << ids.at(a);
    out << " 0\n";
  }
  out << clause_lines(cf, ids);
  return {out.str(), ids};
}

}  // namespace pie
