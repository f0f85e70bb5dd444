#include "pow2qe/rational.hpp"

#include <stdexcept>

namespace pow2qe {

Rational pow2(long k) {
  Integer p = 1;
  if (k >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
  return Rational(Integer(1), p);
}

namespace {

std::optional<long> integer_log2(const Integer& z) {
  if (sgn(z) <= 0) return std::nullopt;
  mp_bitcnt_t low = mpz_scan1(z.get_mpz_t(), 0);
  std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
  if (low + 1 != bits) return std::nullopt;
  return static_cast<long>(low);
}

}  // namespace

std::optional<long> exact_log2(const Rational& q) {
  if (sgn(q) <= 0) return std::nullopt;
  auto n = integer_log2(q.get_num());
  auto d = integer_log2(q.get_den());
  if (!n || !d) return std::nullopt;
  if (*n != 0 && *d != 0) return std::nullopt;
  return *n - *d;
}

long floor_log2(const Rational& q) {
  if (sgn(q) <= 0) throw std::invalid_argument("floor_log2 of a non-positive rational");
  long k = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  // q lies in (2^(k-1), 2^(k+1)); settle the boundary with one comparison.
  if (q >= pow2(k)) return k;
  return k - 1;
}

Rational lambda_of(const Rational& q) {
  if (sgn(q) <= 0) return Rational(0);
  return pow2(floor_log2(q));
}

long two_adic_valuation(const Rational& q) {
  if (sgn(q) == 0) throw std::invalid_argument("2-adic valuation of zero");
  long vn = static_cast<long>(mpz_scan1(q.get_num_mpz_t(), 0));
  long vd = static_cast<long>(mpz_scan1(q.get_den_mpz_t(), 0));
  return vn - vd;
}

int sign(const Rational& q) { return sgn(q); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0) {
    throw std::invalid_argument("malformed rational: " + s);
  }
  if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

std::size_t hash_value(const Rational& q) {
  std::size_t h = mpz_fdiv_ui(q.get_num_mpz_t(), 1000000007UL);
  h = h * 1315423911U + mpz_fdiv_ui(q.get_den_mpz_t(), 998244353UL);
  return h ^ (static_cast<std::size_t>(sgn(q)) << 7);
}

}  // namespace pow2qe
