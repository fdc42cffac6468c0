#include "ced/params.hpp"

#include <string>

#include "ced/errors.hpp"

namespace ced {

namespace {

void require_d(int d) {
  if (d < 2) throw InvalidParameter("branching factor d must be >= 2 (got " + std::to_string(d) + ")");
}

void require_lambda(const Rational& lambda) {
  if (lambda.sign() <= 0) throw InvalidParameter("lambda must be > 0 (got " + lambda.to_string() + ")");
}

}  // namespace

ModelParams::ModelParams(int d, Rational lambda, Rational rho)
    : d_(d), lambda_(std::move(lambda)), rho_(std::move(rho)) {
  require_d(d_);
  require_lambda(lambda_);
  if (rho_.sign() < 0) throw InvalidParameter("rho must be >= 0 (got " + rho_.to_string() + ")");
}

LambdaInterval lambda_interval(int d, const Rational& width) {
  require_d(d);
  // 2d - 1 -/+ 2 sqrt(d^2 - d); the sqrt enclosure is requested at width/2.
  const Rational dd(d);
  const Enclosure root = sqrt_enclosure(dd * dd - dd, width / Rational(2));
  const Rational center = Rational(2) * dd - Rational(1);
  return {center - Rational(2) * root, Rational(2) * root + center};
}

LambdaPosition lambda_position(int d, const Rational& lambda) {
  require_d(d);
  require_lambda(lambda);
  const Rational q = lambda * lambda - Rational(4 * d - 2) * lambda + Rational(1);
  if (q.sign() < 0) return LambdaPosition::Inside;
  // q == 0 is impossible for rational lambda; treat it as outside anyway.
  return lambda < Rational(2 * d - 1) ? LambdaPosition::Below : LambdaPosition::Above;
}

Rational rho_extinction(int d, const Rational& lambda) {
  require_d(d);
  require_lambda(lambda);
  return lambda * Rational(d - 1);
}

GrowthBounds growth_bounds(int d, const Rational& lambda, const Rational& width) {
  require_d(d);
  require_lambda(lambda);
  const Rational base = lambda * lambda + Rational(1);
  const Rational shift = Rational(3) * lambda + Rational(3);
  const Rational quarter(1, 4);
  // Each bound is (sqrt(X) - 3 lambda - 3) / 4, so the sqrt width may be 4x.
  const Rational sqrt_width = Rational(4) * width;

  const Enclosure s1 = sqrt_enclosure(Rational(8 * d + 2) * lambda + base, sqrt_width);
  const Enclosure s2 = sqrt_enclosure(Rational(32 * d + 2) * lambda + base, sqrt_width);
  Enclosure f1 = quarter * (s1 - shift);
  const Enclosure f2 = quarter * (s2 - shift);

  const Rational zero(0);
  if (f1.lo.sign() < 0) f1.lo = zero;
  if (f1.hi.sign() < 0) f1.hi = zero;
  return {f1, f2};
}

Rational m_at_zero(const Rational& lambda) {
  require_lambda(lambda);
  const Rational s = Rational(1) + lambda;
  return s * s / (Rational(4) * lambda);
}

Rational weight_a(const ModelParams& p, int j) {
  if (j < 0) throw InvalidParameter("weight index must be >= 0");
  const Rational base = Rational(1) + p.lambda();
  return p.lambda() / ((base + Rational(j + 1) * p.rho()) * (base + Rational(j + 2) * p.rho()));
}

Rational weight_b(const ModelParams& p, int j) { return Rational(p.d()) * weight_a(p, j); }

}  // namespace ced
