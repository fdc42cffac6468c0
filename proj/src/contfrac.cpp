#include "ced/contfrac.hpp"

#include <string>

#include "ced/enclosure.hpp"
#include "ced/errors.hpp"

namespace ced {

namespace {

const Rational kOne(1);
const Rational kQuarter(1, 4);

std::vector<Rational> b_weights(const ModelParams& p, int m) {
  if (m < 1) throw InvalidParameter("truncation level m must be >= 1");
  std::vector<Rational> b;
  b.reserve(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) b.push_back(weight_b(p, j));
  return b;
}

}  // namespace

CFEval eval_finite(std::span<const Rational> coeffs) {
  if (coeffs.empty()) throw InvalidParameter("continued fraction needs at least one entry");
  const int n = static_cast<int>(coeffs.size()) - 1;
  CFEval out;
  out.partials.resize(coeffs.size());
  Rational t = coeffs[static_cast<std::size_t>(n)];
  out.partials[static_cast<std::size_t>(n)] = t;
  for (int i = n - 1; i >= 0; --i) {
    const Rational denom = kOne - t;
    if (denom.sign() <= 0) {
      out.pole_at = i;
      return out;
    }
    t = coeffs[static_cast<std::size_t>(i)] / denom;
    out.partials[static_cast<std::size_t>(i)] = t;
  }
  out.value = std::move(t);
  return out;
}

GoodTest is_good(std::span<const Rational> coeffs) {
  if (coeffs.empty()) return {};
  const int n = static_cast<int>(coeffs.size()) - 1;
  Rational t = coeffs[static_cast<std::size_t>(n)];
  if (t >= kOne) return {false, n};
  for (int i = n - 1; i >= 0; --i) {
    t = coeffs[static_cast<std::size_t>(i)] / (kOne - t);
    if (t >= kOne) return {false, i};
  }
  return {};
}

Rational default_psi_width() {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, 20);
  return Rational(mpz_class(1), den);
}

PsiBound psi_bounds(const Rational& x, const Rational& width) {
  if (x.sign() < 0 || x > kQuarter) {
    throw DomainError("psi(x) requires 0 <= x <= 1/4 (got " + x.to_string() + ")");
  }
  if (width.sign() <= 0) throw InvalidParameter("psi bound width must be positive");
  if (x.is_zero()) return {x, kOne, kOne};

  // psi = 2 / (1 + s) with s = sqrt(1 - 4x) in [0, 1]; |dpsi/ds| <= 2, so an
  // s-enclosure of width w/2 gives a psi-enclosure of width <= w.
  const Enclosure s = sqrt_enclosure(kOne - Rational(4) * x, width / Rational(2));
  const Rational two(2);
  Rational s_lo = s.lo.sign() < 0 ? Rational(0) : s.lo;
  return {x, two / (kOne + s.hi), two / (kOne + s_lo)};
}

bool psi_upper_holds(const Rational& x, const Rational& bound) {
  if (x.sign() < 0 || x > kQuarter || bound.sign() <= 0) return false;
  // bound >= 2/(1+s)  <=>  2/bound - 1 <= s  <=>  (if lhs > 0) lhs^2 <= 1 - 4x.
  const Rational lhs = Rational(2) / bound - kOne;
  if (lhs.sign() <= 0) return true;
  return lhs * lhs <= kOne - Rational(4) * x;
}

std::optional<BelowWitness> below_witness(std::span<const Rational> b) {
  if (b.size() < 2) throw InvalidParameter("truncation level m must be >= 1");
  const int m = static_cast<int>(b.size()) - 1;
  Rational t = b[static_cast<std::size_t>(m)];
  if (t > kOne) return BelowWitness{m, m, false};
  for (int i = m - 1; i >= 0; --i) {
    const Rational denom = kOne - t;
    if (denom.is_zero()) return BelowWitness{m, i, true};
    t = b[static_cast<std::size_t>(i)] / denom;
    if (t > kOne) return BelowWitness{m, i, false};
  }
  return std::nullopt;
}

std::optional<BelowWitness> below_witness(const ModelParams& p, int m) {
  const auto b = b_weights(p, m);
  return below_witness(b);
}

KmResult km_good(std::span<const Rational> b, const Rational& psi_width) {
  if (b.size() < 2) throw InvalidParameter("truncation level m must be >= 1");
  const std::size_t m = b.size() - 1;
  KmResult out;
  if (b[m] >= kQuarter) return out;
  out.tail_admissible = true;

  const PsiBound psi = psi_bounds(b[m], psi_width);
  out.entries.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(m));
  out.entries.back() *= psi.upper;
  out.psi_upper = psi.upper;
  out.good = is_good(out.entries).good;
  return out;
}

KmResult km_good(const ModelParams& p, int m, const Rational& psi_width) {
  const auto b = b_weights(p, m);
  return km_good(b, psi_width);
}

}  // namespace ced
