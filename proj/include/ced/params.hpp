#pragma once

#include <utility>

#include "ced/enclosure.hpp"
#include "ced/rational.hpp"

namespace ced {

/// Chase-escape-with-death parameters on the d-ary tree: branching factor d,
/// red spread rate lambda and red death rate rho. Validated on construction
/// (d >= 2, lambda > 0, rho >= 0); rho = 0 is the classic chase-escape limit.
class ModelParams {
 public:
  ModelParams(int d, Rational lambda, Rational rho);

  int d() const { return d_; }
  const Rational& lambda() const { return lambda_; }
  const Rational& rho() const { return rho_; }

  ModelParams with_rho(Rational rho) const { return ModelParams(d_, lambda_, std::move(rho)); }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  int d_;
  Rational lambda_;
  Rational rho_;
};

/// The endpoints lambda_c^- < lambda_c^+ of the coexistence window, i.e. the
/// roots of x^2 - (4d-2)x + 1 = 0.
struct LambdaInterval {
  Enclosure lo;
  Enclosure hi;
};

enum class LambdaPosition { Below, Inside, Above };

LambdaInterval lambda_interval(int d, const Rational& width = default_enclosure_width());

/// Exact position of a rational spread rate relative to (lambda_c^-, lambda_c^+).
/// The endpoints are irrational (d^2 - d is never a square), so a rational
/// lambda is never on the boundary and the sign of the quadratic decides.
LambdaPosition lambda_position(int d, const Rational& lambda);
inline bool in_lambda_interval(int d, const Rational& lambda) {
  return lambda_position(d, lambda) == LambdaPosition::Inside;
}

/// Death rate above which red dies out: lambda (d - 1).
Rational rho_extinction(int d, const Rational& lambda);

/// Closed-form bracket for the critical death rate:
/// lower encloses max(0, f_1(lambda)), upper encloses f_2(lambda) (not clamped;
/// negative exactly when lambda lies outside the closed window).
struct GrowthBounds {
  Enclosure lower;
  Enclosure upper;
};

GrowthBounds growth_bounds(int d, const Rational& lambda,
                           const Rational& width = default_enclosure_width());

/// Radius of convergence of the renewal generating function at rho = 0:
/// (1 + lambda)^2 / (4 lambda).
Rational m_at_zero(const Rational& lambda);

/// a_j = lambda / ((1 + lambda + (j+1) rho)(1 + lambda + (j+2) rho)).
Rational weight_a(const ModelParams& p, int j);
/// b_j = d * a_j.
Rational weight_b(const ModelParams& p, int j);

}  // namespace ced
