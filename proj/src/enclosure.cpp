#include "ced/enclosure.hpp"

#include "ced/errors.hpp"

namespace ced {

Rational default_enclosure_width() {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, 30);
  return Rational(mpz_class(1), den);
}

Enclosure sqrt_enclosure(const Rational& x, const Rational& width) {
  if (x.sign() < 0) throw DomainError("sqrt of negative rational " + x.to_string());
  if (width.sign() <= 0) throw InvalidParameter("enclosure width must be positive");

  // sqrt(p/q) = sqrt(p*q)/q. With S = isqrt(p*q*4^n):
  //   S/(q*2^n) <= sqrt(p/q) < (S+1)/(q*2^n).
  const mpz_class& p = x.numerator();
  const mpz_class& q = x.denominator();
  const mpz_class pq = p * q;

  mpz_class root;
  if (mpz_perfect_square_p(pq.get_mpz_t())) {
    mpz_sqrt(root.get_mpz_t(), pq.get_mpz_t());
    const Rational r(root, q);
    return {r, r};
  }

  // Smallest n with 1/(q*2^n) <= width.
  unsigned n = 0;
  Rational step(mpz_class(1), q);
  while (step > width) {
    step /= Rational(2);
    ++n;
  }
  mpz_class scaled = pq;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * n);
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());

  mpz_class den = q;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), n);
  return {Rational(root, den), Rational(mpz_class(root + 1), den)};
}

Enclosure operator+(const Enclosure& a, const Rational& b) { return {a.lo + b, a.hi + b}; }

Enclosure operator-(const Enclosure& a, const Rational& b) { return {a.lo - b, a.hi - b}; }

Enclosure operator-(const Rational& a, const Enclosure& b) { return {a - b.hi, a - b.lo}; }

Enclosure operator*(const Rational& s, const Enclosure& a) {
  if (s.sign() >= 0) return {s * a.lo, s * a.hi};
  return {s * a.hi, s * a.lo};
}

}  // namespace ced
