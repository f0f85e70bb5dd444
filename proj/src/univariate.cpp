#include "pow2qe/univariate.hpp"

#include <algorithm>

#include "pow2qe/errors.hpp"

namespace pow2qe {

void trim(UPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

int udegree(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

Rational ueval(const UPoly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UPoly uadd(const UPoly& a, const UPoly& b) {
  UPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  trim(out);
  return out;
}

UPoly usub(const UPoly& a, const UPoly& b) {
  UPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

UPoly umul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

UPoly uderiv(const UPoly& p) {
  if (p.size() <= 1) return {};
  UPoly out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * static_cast<long>(i);
  trim(out);
  return out;
}

std::pair<UPoly, UPoly> udivmod(const UPoly& a, const UPoly& b) {
  if (b.empty()) throw ContractError("udivmod by zero polynomial");
  UPoly r = a, q;
  trim(r);
  if (r.size() < b.size()) return {q, r};
  q.assign(r.size() - b.size() + 1, Rational(0));
  while (!r.empty() && r.size() >= b.size()) {
    std::size_t shift = r.size() - b.size();
    Rational f = r.back() / b.back();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= f * b[i];
    r.pop_back();
    trim(r);
  }
  trim(q);
  return {q, r};
}

UPoly ugcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = udivmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lc = a.back();
    for (auto& c : a) c /= lc;
  }
  return a;
}

UPoly squarefree(const UPoly& p) {
  if (p.size() <= 1) return p;
  UPoly g = ugcd(p, uderiv(p));
  return udivmod(p, g).first;
}

std::optional<UPoly> to_upoly(const Poly& p, const std::string& x) {
  UPoly out(p.is_zero() ? 0 : p.degree(x) + 1);
  for (const auto& [m, c] : p.terms()) {
    if (m.empty()) {
      out[0] += c;
    } else if (m.size() == 1 && m.front().first.is_var(x)) {
      out[m.front().second] += c;
    } else {
      return std::nullopt;
    }
  }
  trim(out);
  return out;
}

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> seq;
  if (p.empty()) return seq;
  seq.push_back(p);
  UPoly d = uderiv(p);
  if (d.empty()) return seq;
  seq.push_back(d);
  for (;;) {
    auto r = udivmod(seq[seq.size() - 2], seq.back()).second;
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(std::move(r));
  }
  return seq;
}

namespace {

int variations(const std::vector<UPoly>& seq, const Rational& x) {
  int count = 0, last = 0;
  for (const auto& p : seq) {
    int s = sgn(ueval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace

int count_roots(const std::vector<UPoly>& sturm, const Rational& a, const Rational& b) {
  if (sturm.empty()) return 0;
  return variations(sturm, a) - variations(sturm, b);
}

Rational root_bound(const UPoly& p) {
  Rational m = 0;
  if (p.size() <= 1) return Rational(1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    Rational r = abs(p[i] / p.back());
    if (r > m) m = r;
  }
  Rational b = 1;
  while (b <= m + 1) b *= 2;
  return b;
}

int count_real_roots(const UPoly& p) {
  if (p.size() <= 1) return 0;
  Rational b = root_bound(p);
  return count_roots(sturm_sequence(squarefree(p)), -b, b);
}

std::vector<RootInterval> isolate_roots(const UPoly& p) {
  std::vector<RootInterval> out;
  if (p.size() <= 1) return out;
  UPoly sf = squarefree(p);
  auto seq = sturm_sequence(sf);
  Rational b = root_bound(sf);
  // depth-first over (lo, hi], left halves first so output is sorted
  std::vector<std::pair<Rational, Rational>> stack{{-b, b}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    int n = count_roots(seq, lo, hi);
    if (n == 0) continue;
    if (n == 1) {
      if (sgn(ueval(sf, hi)) == 0)
        out.push_back({hi, hi});
      else
        out.push_back({lo, hi});
      continue;
    }
    Rational mid = (lo + hi) / 2;
    stack.push_back({mid, hi});
    stack.push_back({lo, mid});
  }
  return out;
}

void refine(const UPoly& sf, RootInterval& r) {
  if (r.exact()) return;
  Rational mid = (r.lo + r.hi) / 2;
  int sm = sgn(ueval(sf, mid));
  if (sm == 0) {
    r.lo = r.hi = mid;
    return;
  }
  int shi = sgn(ueval(sf, r.hi));
  if (sm == shi)
    r.hi = mid;
  else
    r.lo = mid;
}

int sign_at_root(const UPoly& sf, RootInterval r, const UPoly& q) {
  if (r.exact()) return sgn(ueval(q, r.lo));
  if (q.empty()) return 0;
  UPoly g = ugcd(sf, q);
  if (g.size() > 1) {
    // q vanishes at the root iff the common factor does
    auto gs = sturm_sequence(g);
    if (count_roots(gs, r.lo, r.hi) > 0) return 0;
  }
  auto qs = sturm_sequence(squarefree(q));
  while (count_roots(qs, r.lo, r.hi) > 0 || sgn(ueval(q, r.hi)) == 0) {
    refine(sf, r);
    if (r.exact()) return sgn(ueval(q, r.lo));
  }
  return sgn(ueval(q, r.hi));
}

std::vector<Rational> rational_roots(const UPoly& p) {
  std::vector<Rational> out;
  if (p.size() <= 1) return out;
  UPoly sf = squarefree(p);
  for (auto r : isolate_roots(sf)) {
    // a rational root has a bounded denominator; refine until the interval
    // is too narrow to hold two candidates, then test the best one
    Integer den = 1;
    for (const auto& c : sf) den = lcm(den, Integer(c.get_den()));
    UPoly ip = sf;
    for (auto& c : ip) c *= den;
    Integer lead = abs(Integer(ip.back()));
    int guard = 0;
    while (!r.exact() && (r.hi - r.lo) * lead * lead * 2 >= 1 && guard++ < 4096) refine(sf, r);
    if (r.exact()) {
      out.push_back(r.lo);
      continue;
    }
    // candidates with denominator dividing lead: q | lead
    Rational mid = (r.lo + r.hi) / 2;
    for (Integer q = 1; q <= lead; ++q) {
      if (lead % q != 0) continue;
      Integer num = mid.get_num() * q;
      mpz_fdiv_q(num.get_mpz_t(), num.get_mpz_t(), mid.get_den().get_mpz_t());
      for (int d = -1; d <= 2; ++d) {
        Rational cand(Integer(num + d), q);
        cand.canonicalize();
        if (cand > r.lo && cand < r.hi && sgn(ueval(sf, cand)) == 0) {
          out.push_back(cand);
          goto next;
        }
      }
      if (q > 100000) break;
    }
  next:;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace pow2qe
