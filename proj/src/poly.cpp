#include "pow2qe/poly.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "pow2qe/errors.hpp"

namespace pow2qe {

unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (const auto& [t, e] : m) d += e;
  return d;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i].first, b[i].first);
    // a smaller indeterminate sorts later so that x*x > x*y when x < y
    if (c != 0) return c > 0;
    if (a[i].second != b[i].second) return a[i].second < b[i].second;
  }
  return a.size() < b.size();
}

namespace {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = compare(a[i].first, b[j].first);
    if (c < 0) {
      out.push_back(a[i++]);
    } else if (c > 0) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

// Exponent of variable x in m, and m with x removed.
std::pair<unsigned, Monomial> split_var(const Monomial& m, const std::string& x) {
  Monomial rest;
  unsigned e = 0;
  for (const auto& [t, k] : m) {
    if (t.is_var(x))
      e = k;
    else
      rest.emplace_back(t, k);
  }
  return {e, rest};
}

}  // namespace

Poly::Poly(const Rational& c) {
  if (sgn(c) != 0) terms_.emplace(Monomial{}, c);
}

Poly Poly::indeterminate(const Term& t) {
  Poly p;
  p.terms_.emplace(Monomial{{t, 1}}, Rational(1));
  return p;
}

Poly Poly::monomial(const Monomial& m, const Rational& c) {
  Poly p;
  if (sgn(c) != 0) p.terms_.emplace(m, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Poly::constant_value() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Poly::leading_coefficient() const {
  return terms_.empty() ? Rational(0) : terms_.rbegin()->second;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  Poly out;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) out.add_term(mono_mul(ma, mb), ca * cb);
  *this = std::move(out);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Poly Poly::pow(unsigned k) const {
  Poly out(Rational(1)), base = *this;
  while (k > 0) {
    if (k & 1U) out *= base;
    k >>= 1U;
    if (k > 0) base *= base;
  }
  return out;
}

unsigned Poly::degree(const std::string& x) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_)
    for (const auto& [t, e] : m)
      if (t.is_var(x)) d = std::max(d, e);
  return d;
}

Poly Poly::coeff(const std::string& x, unsigned k) const {
  Poly out;
  for (const auto& [m, c] : terms_) {
    auto [e, rest] = split_var(m, x);
    if (e == k) out.add_term(rest, c);
  }
  return out;
}

std::vector<Poly> Poly::coeffs(const std::string& x) const {
  std::vector<Poly> cs(is_zero() ? 0 : degree(x) + 1);
  for (const auto& [m, c] : terms_) {
    auto [e, rest] = split_var(m, x);
    cs[e].add_term(rest, c);
  }
  return cs;
}

Poly Poly::from_coeffs(const std::string& x, const std::vector<Poly>& cs) {
  Poly out;
  Term xv = Term::var(x);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (const auto& [m, c] : cs[i].terms_) {
      if (i == 0)
        out.add_term(m, c);
      else
        out.add_term(mono_mul(m, Monomial{{xv, static_cast<unsigned>(i)}}), c);
    }
  }
  return out;
}

Poly Poly::derivative(const std::string& x) const {
  Poly out;
  for (const auto& [m, c] : terms_) {
    Monomial d;
    unsigned e = 0;
    for (const auto& [t, k] : m) {
      if (t.is_var(x)) {
        e = k;
        if (k > 1) d.emplace_back(t, k - 1);
      } else {
        d.emplace_back(t, k);
      }
    }
    if (e > 0) out.add_term(d, c * e);
  }
  return out;
}

bool Poly::mentions(const std::string& x) const {
  for (const auto& [m, c] : terms_)
    for (const auto& [t, e] : m)
      if (t.mentions(x)) return true;
  return false;
}

bool Poly::mentions_opaquely(const std::string& x) const {
  for (const auto& [m, c] : terms_)
    for (const auto& [t, e] : m)
      if (!t.is_var() && t.mentions(x)) return true;
  return false;
}

Poly Poly::substitute(const std::string& x, const Poly& by) const {
  Poly out;
  for (const auto& [m, c] : terms_) {
    auto [e, rest] = split_var(m, x);
    if (e == 0)
      out.add_term(m, c);
    else
      out += Poly::monomial(rest, c) * by.pow(e);
  }
  return out;
}

std::pair<Poly, int> Poly::monic() const {
  if (is_zero()) return {*this, 0};
  Rational lc = leading_coefficient();
  Poly out = *this;
  Rational inv = 1 / lc;
  out *= inv;
  return {out, sgn(lc)};
}

Poly Poly::primitive() const {
  if (is_zero()) return *this;
  Integer l = 1, g = 0;
  for (const auto& [m, c] : terms_) l = lcm(l, Integer(c.get_den()));
  for (const auto& [m, c] : terms_) g = gcd(g, Integer(c.get_num() * (l / c.get_den())));
  Poly out = *this;
  out *= Rational(l) / Rational(g);
  return out;
}

bool operator<(const Poly& a, const Poly& b) {
  MonomialLess less;
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
    if (less(ia->first, ib->first)) return true;
    if (less(ib->first, ia->first)) return false;
    int c = cmp(ia->second, ib->second);
    if (c != 0) return c < 0;
  }
  return ia == a.terms_.end() && ib != b.terms_.end();
}

namespace {

Poly canon_lambda(const Poly& p) {
  if (p.is_constant()) return Poly(lambda_of(p.constant_value()));
  if (p.is_single_monomial()) {
    const auto& [m, c] = *p.terms().begin();
    bool all_lambda = std::all_of(m.begin(), m.end(), [](const auto& f) {
      return f.first.kind() == TermKind::Lambda;
    });
    if (all_lambda) {
      // a product of rounding values is 0 or a power of two
      if (sgn(c) <= 0) return Poly();
      return Poly::monomial(m, lambda_of(c));
    }
  }
  long v = two_adic_valuation(p.leading_coefficient());
  Poly inner = p * pow2(-v);
  return Poly::indeterminate(Term::lambda(to_term(inner))) * pow2(v);
}

}  // namespace

namespace {

Poly canon_poly_uncached(const Term& t);

// Substituted terms share large subterms, so compound nodes are memoized.
Poly canon_poly_cached(const Term& t) {
  if (t.kind() != TermKind::Lambda && t.kind() != TermKind::Div && t.kind() != TermKind::Mul)
    return canon_poly_uncached(t);
  thread_local std::unordered_map<Term, Poly, TermHash> memo;
  if (auto it = memo.find(t); it != memo.end()) return it->second;
  Poly p = canon_poly_uncached(t);
  if (memo.size() > (1u << 16)) memo.clear();
  memo.emplace(t, p);
  return p;
}

}  // namespace

Poly canon_poly(const Term& t) { return canon_poly_cached(t); }

namespace {

Poly canon_poly_uncached(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
      return Poly::indeterminate(t);
    case TermKind::Const:
    case TermKind::Pow2:
      return Poly(t.numeral_value());
    case TermKind::Add:
      return canon_poly(t.lhs()) + canon_poly(t.rhs());
    case TermKind::Sub:
      return canon_poly(t.lhs()) - canon_poly(t.rhs());
    case TermKind::Mul:
      return canon_poly(t.lhs()) * canon_poly(t.rhs());
    case TermKind::Div: {
      Poly b = canon_poly(t.rhs());
      if (b.is_zero()) return Poly();
      Poly a = canon_poly(t.lhs());
      if (b.is_constant()) return a * (1 / b.constant_value());
      if (a.is_zero()) return Poly();
      // a/b = a * (1/b); only the monic reciprocal stays opaque
      Rational cb = b.leading_coefficient();
      b *= 1 / cb;
      return a * Poly::indeterminate(Term::quotient(Term::constant(1), to_term(b))) * (1 / cb);
    }
    case TermKind::Lambda:
      return canon_lambda(canon_poly(t.arg()));
  }
  throw ContractError("canon_poly: unknown term kind");
}

}  // namespace

namespace {

Term coefficient_term(const Rational& c) {
  if (sgn(c) > 0) {
    if (auto k = exact_log2(c); k && (*k >= 10 || *k <= -10)) return Term::pow2(*k);
  }
  return Term::constant(c);
}

Term scaled(const Rational& c, const Monomial& m) {
  if (m.empty()) return coefficient_term(c);
  Term out;
  bool first = true;
  if (c != 1) {
    out = coefficient_term(c);
    first = false;
  }
  for (const auto& [t, e] : m) {
    for (unsigned i = 0; i < e; ++i) {
      out = first ? t : out * t;
      first = false;
    }
  }
  return out;
}

}  // namespace

Term to_term(const Poly& p) {
  if (p.is_zero()) return Term::constant(0);
  Term out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    if (first) {
      out = (sgn(c) < 0 && !m.empty()) ? Term::constant(0) - scaled(-c, m) : scaled(c, m);
      first = false;
    } else if (sgn(c) > 0) {
      out = out + scaled(c, m);
    } else {
      out = out - scaled(-c, m);
    }
  }
  return out;
}

Term canon_term(const Term& t) { return to_term(canon_poly(t)); }

const Poly& PolyInX::coeff(unsigned i) const {
  static const Poly zero;
  return i < coeffs.size() ? coeffs[i] : zero;
}

std::optional<PolyInX> as_poly_in(const Poly& p, const std::string& x) {
  if (p.mentions_opaquely(x)) return std::nullopt;
  return PolyInX{x, p.coeffs(x)};
}

}  // namespace pow2qe
