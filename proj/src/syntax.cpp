#include "pow2qe/syntax.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace pow2qe {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Formula whole_formula() {
    Formula f = formula();
    expect_end();
    return f;
  }

  Term whole_term() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip();
    return pos_ >= s_.size();
  }

  void expect_end() {
    if (!at_end()) fail("unexpected trailing input");
  }

  // Symbolic token match.
  bool peek_sym(std::string_view sym) {
    skip();
    return s_.substr(pos_, sym.size()) == sym;
  }

  bool eat_sym(std::string_view sym) {
    if (!peek_sym(sym)) return false;
    pos_ += sym.size();
    return true;
  }

  void expect_sym(std::string_view sym) {
    if (!eat_sym(sym)) fail("expected '" + std::string(sym) + "'");
  }

  std::optional<std::string> peek_word() {
    skip();
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) return std::nullopt;
    std::size_t e = pos_;
    while (e < s_.size() && ident_char(s_[e])) ++e;
    return std::string(s_.substr(pos_, e - pos_));
  }

  bool eat_keyword(std::string_view kw) {
    auto w = peek_word();
    if (!w || *w != kw) return false;
    pos_ += kw.size();
    return true;
  }

  std::string identifier() {
    auto w = peek_word();
    if (!w) fail("expected identifier");
    if ((*w)[0] == '_') fail("identifiers starting with '_' are reserved");
    static const char* reserved[] = {"exists", "forall", "and", "or", "not", "true", "false"};
    for (const char* r : reserved)
      if (*w == r) fail("unexpected keyword '" + *w + "'");
    pos_ += w->size();
    return *w;
  }

  Integer integer_literal() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (b == pos_) fail("expected integer");
    return Integer(std::string(s_.substr(b, pos_ - b)));
  }

  bool peek_digit() {
    skip();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  // ---- formulas

  Formula formula() {
    if (auto w = peek_word(); w && (*w == "exists" || *w == "forall")) {
      bool ex = *w == "exists";
      pos_ += w->size();
      std::vector<std::string> vars;
      do {
        vars.push_back(identifier());
        eat_sym(",");
      } while (!peek_sym("."));
      expect_sym(".");
      Formula body = formula();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = ex ? Formula::exists(*it, body) : Formula::forall(*it, body);
      return body;
    }
    return iff();
  }

  Formula iff() {
    Formula f = imp();
    while (eat_sym("<->")) f = Formula::iff(f, imp());
    return f;
  }

  Formula imp() {
    Formula f = disjunction();
    if (eat_sym("->")) return Formula::implies(f, imp());
    return f;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (eat_keyword("or")) f = Formula::disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = negation();
    while (eat_keyword("and")) f = Formula::conj(f, negation());
    return f;
  }

  Formula negation() {
    if (eat_keyword("not")) return Formula::negation(negation());
    if (auto w = peek_word(); w && (*w == "exists" || *w == "forall")) return formula();
    return primary();
  }

  Formula primary() {
    if (eat_keyword("true")) return Formula::truth();
    if (eat_keyword("false")) return Formula::falsity();
    if (auto w = peek_word()) {
      if (*w == "A" && s_.substr(pos_ + 1, 1) == "(") {
        pos_ += 2;
        Term t = term();
        expect_sym(")");
        return Formula::pow2_pred(t);
      }
      if (*w == "D" && s_.substr(pos_ + 1, 1) == "[") {
        pos_ += 2;
        std::size_t at = pos_;
        Integer n = integer_literal();
        if (n < 1 || !n.fits_slong_p()) throw ParseError(at, "D index must be a positive integer");
        expect_sym("]");
        expect_sym("(");
        Term t = term();
        expect_sym(")");
        return Formula::dvd(n.get_si(), t);
      }
    }
    if (peek_sym("(")) {
      // either a parenthesized formula or a comparison starting with a
      // parenthesized term; try the comparison first
      std::size_t save = pos_;
      std::optional<ParseError> first;
      try {
        return comparison();
      } catch (const ParseError& e) {
        first = e;
      }
      pos_ = save;
      try {
        expect_sym("(");
        Formula f = formula();
        expect_sym(")");
        return f;
      } catch (const ParseError& e) {
        // report whichever reading got further
        if (first->position() > e.position()) throw *first;
        throw;
      }
    }
    return comparison();
  }

  Formula comparison() {
    Term a = term();
    std::vector<Formula> parts;
    for (;;) {
      int rel = relation();
      if (rel < 0) break;
      Term b = term();
      switch (rel) {
        case 0: parts.push_back(Formula::le(a, b)); break;
        case 1: parts.push_back(Formula::ge(a, b)); break;
        case 2: parts.push_back(Formula::ne(a, b)); break;
        case 3: parts.push_back(Formula::lt(a, b)); break;
        case 4: parts.push_back(Formula::gt(a, b)); break;
        default: parts.push_back(Formula::eq(a, b)); break;
      }
      a = b;
    }
    if (parts.empty()) fail("expected a comparison");
    return conj_all(parts);
  }

  int relation() {
    if (peek_sym("<->") || peek_sym("->")) return -1;
    if (eat_sym("<=")) return 0;
    if (eat_sym(">=")) return 1;
    if (eat_sym("!=")) return 2;
    if (eat_sym("<")) return 3;
    if (eat_sym(">")) return 4;
    if (eat_sym("=")) return 5;
    return -1;
  }

  // ---- terms

  Term term() {
    Term t = product();
    for (;;) {
      if (peek_sym("->")) break;
      if (eat_sym("+"))
        t = t + product();
      else if (eat_sym("-"))
        t = t - product();
      else
        break;
    }
    return t;
  }

  Term product() {
    Term t = unary();
    for (;;) {
      if (eat_sym("*"))
        t = t * unary();
      else if (eat_sym("/"))
        t = t / unary();
      else
        break;
    }
    return t;
  }

  Term unary() {
    if (peek_sym("->")) fail("unexpected '->'");
    if (eat_sym("-")) {
      Term u = unary();
      if (u.kind() == TermKind::Const) return Term::constant(Rational(-u.value()));
      return Term::constant(0) - u;
    }
    return factor();
  }

  Term factor() {
    bool two = false;
    if (peek_digit()) {
      std::size_t save = pos_;
      Integer n = integer_literal();
      two = n == 2;
      pos_ = save;
    }
    Term base = atom();
    if (!eat_sym("^")) return base;
    bool neg = eat_sym("-");
    std::size_t at = pos_;
    Integer k = integer_literal();
    if (!k.fits_slong_p()) throw ParseError(at, "exponent out of range");
    long e = neg ? -k.get_si() : k.get_si();
    if (two && base.kind() == TermKind::Const && base.value() == 2) return Term::pow2(e);
    if (neg) throw ParseError(at, "negative exponent on a non-literal base");
    if (e > 64) throw ParseError(at, "exponent too large");
    return power(base, static_cast<unsigned>(e));
  }

  Term atom() {
    if (peek_digit()) {
      Integer n = integer_literal();
      std::size_t save = pos_;
      if (eat_sym("/") && peek_digit()) {
        std::size_t at = pos_;
        Integer d = integer_literal();
        if (d == 0) throw ParseError(at, "zero denominator in rational literal");
        Rational q(n, d);
        q.canonicalize();
        return Term::constant(q);
      }
      pos_ = save;
      return Term::constant(Rational(n));
    }
    if (eat_sym("(")) {
      Term t = term();
      expect_sym(")");
      return t;
    }
    if (auto w = peek_word(); w && *w == "L" && s_.substr(pos_ + 1, 1) == "(") {
      pos_ += 2;
      Term t = term();
      expect_sym(")");
      return Term::lambda(t);
    }
    return Term::var(identifier());
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// ---- printing

std::string print_term(const Term& t, int level);

std::string wrap(const std::string& s, bool paren) { return paren ? "(" + s + ")" : s; }

int term_level(const Term& t) {
  switch (t.kind()) {
    case TermKind::Add:
      return 1;
    case TermKind::Sub:
      return (t.lhs().is_zero() && !t.rhs().is_numeral()) ? 3 : 1;
    case TermKind::Mul:
    case TermKind::Div:
      return 2;
    case TermKind::Const:
      return sgn(t.value()) < 0 ? 3 : 4;
    default:
      return 4;
  }
}

std::string print_term(const Term& t, int level) {
  std::string s;
  switch (t.kind()) {
    case TermKind::Var:
      return t.name();
    case TermKind::Const:
      s = to_string(t.value());
      break;
    case TermKind::Pow2:
      return "2^" + std::to_string(t.exponent());
    case TermKind::Lambda:
      return "L(" + print_term(t.arg(), 0) + ")";
    case TermKind::Add:
      s = print_term(t.lhs(), 1) + " + " + print_term(t.rhs(), 2);
      break;
    case TermKind::Sub:
      if (term_level(t) == 3)
        s = "-" + print_term(t.rhs(), 3);
      else
        s = print_term(t.lhs(), 1) + " - " + print_term(t.rhs(), 2);
      break;
    case TermKind::Mul:
      s = print_term(t.lhs(), 2) + "*" + print_term(t.rhs(), 3);
      break;
    case TermKind::Div: {
      // a numeral right operand would merge into a rational literal
      std::string r = t.rhs().is_numeral() ? "(" + print_term(t.rhs(), 0) + ")"
                                           : print_term(t.rhs(), 3);
      s = print_term(t.lhs(), 2) + "/" + r;
      break;
    }
  }
  return wrap(s, term_level(t) < level);
}

// Formula levels: 0 quantifier, 1 or, 2 and, 3 not, 4 atom.
int formula_level(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return 0;
    case FormulaKind::Or:
      return 1;
    case FormulaKind::And:
      return 2;
    case FormulaKind::Not:
      return 3;
    default:
      return 4;
  }
}

std::string print_formula(const Formula& f, int level) {
  std::string s;
  switch (f.kind()) {
    case FormulaKind::True:
      return "true";
    case FormulaKind::False:
      return "false";
    case FormulaKind::Eq:
      s = print_term(f.lhs(), 0) + " = " + print_term(f.rhs(), 0);
      break;
    case FormulaKind::Lt:
      s = print_term(f.lhs(), 0) + " < " + print_term(f.rhs(), 0);
      break;
    case FormulaKind::Dvd:
      if (f.modulus() == 1) return "A(" + print_term(f.term(), 0) + ")";
      return "D[" + std::to_string(f.modulus()) + "](" + print_term(f.term(), 0) + ")";
    case FormulaKind::Not: {
      const Formula& g = f.sub();
      bool comparison = g.kind() == FormulaKind::Eq || g.kind() == FormulaKind::Lt;
      s = "not " + (comparison ? "(" + print_formula(g, 0) + ")" : print_formula(g, 3));
      break;
    }
    case FormulaKind::And:
      s = print_formula(f.left(), 2) + " and " + print_formula(f.right(), 3);
      break;
    case FormulaKind::Or:
      s = print_formula(f.left(), 1) + " or " + print_formula(f.right(), 2);
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      s = std::string(f.kind() == FormulaKind::Exists ? "exists " : "forall ") + f.var() + ". " +
          print_formula(f.sub(), 0);
      break;
  }
  return wrap(s, formula_level(f) < level);
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).whole_formula(); }
Term parse_term(std::string_view text) { return Parser(text).whole_term(); }

std::string print(const Formula& f) { return print_formula(f, 0); }
std::string print(const Term& t) { return print_term(t, 0); }

}  // namespace pow2qe
