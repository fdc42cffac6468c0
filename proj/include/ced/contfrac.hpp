#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ced/params.hpp"
#include "ced/rational.hpp"

namespace ced {

/// Finite continued fraction K[c_0, ..., c_n] = c_0 / (1 - c_1 / (1 - ... c_n)),
/// evaluated bottom up: t_n = c_n, t_i = c_i / (1 - t_{i+1}).
struct CFEval {
  /// Set when some denominator 1 - t_{i+1} was <= 0; holds that level i.
  std::optional<int> pole_at;
  /// t_0 when there is no pole.
  std::optional<Rational> value;
  /// partials[i] = t_i for every level computed (levels > pole_at only on a pole).
  std::vector<std::optional<Rational>> partials;

  bool has_pole() const { return pole_at.has_value(); }
};

CFEval eval_finite(std::span<const Rational> coeffs);

/// Outcome of the strict "every partial < 1" test.
struct GoodTest {
  bool good = true;
  /// First offending level met on the way up (deepest first).
  std::optional<int> bad_level;
};

/// Applies the test to the entries that follow the leading 1 of K[1, c_0, ..., c_k].
/// Equality with 1 counts as bad.
GoodTest is_good(std::span<const Rational> coeffs);

/// Rational bounds on the Catalan generating function
/// psi(x) = (1 - sqrt(1 - 4x)) / (2x) = 2 / (1 + sqrt(1 - 4x)), psi(0) = 1.
struct PsiBound {
  Rational x;
  Rational lower;
  Rational upper;
};

Rational default_psi_width();  // 10^-20

/// Requires 0 <= x <= 1/4 (DomainError otherwise) and width > 0.
PsiBound psi_bounds(const Rational& x, const Rational& width = default_psi_width());

/// Exact check that `bound` >= psi(x). Independent of psi_bounds: compares
/// (2/bound - 1)^2 with 1 - 4x.
bool psi_upper_holds(const Rational& x, const Rational& bound);

/// Witness that K[b_i, ..., b_m] exceeds 1 (or is infinite because a deeper
/// partial equals 1 exactly) for some level i.
struct BelowWitness {
  int m = 0;
  int level = 0;
  bool pole = false;
};

/// One bottom-up sweep over b_m, ..., b_0 returning the largest such i.
std::optional<BelowWitness> below_witness(const ModelParams& p, int m);

struct KmResult {
  bool good = false;
  /// b_m < 1/4 (otherwise the test was not attempted).
  bool tail_admissible = false;
  /// Upper bound on psi(b_m) folded into the last entry.
  std::optional<Rational> psi_upper;
  /// The tested entries (b_0, ..., b_{m-2}, b_{m-1} * psi_upper).
  std::vector<Rational> entries;
};

/// Good test on K_m(d) = K[1, b_0, ..., b_{m-2}, b_{m-1} psi(b_m)] with psi
/// replaced by a rational upper bound. Good with the inflated entry implies
/// good with the true one, since partials increase with every entry.
KmResult km_good(const ModelParams& p, int m, const Rational& psi_width = default_psi_width());

/// Same as below_witness / km_good, reusing precomputed b_0..b_m.
std::optional<BelowWitness> below_witness(std::span<const Rational> b);
KmResult km_good(std::span<const Rational> b, const Rational& psi_width = default_psi_width());

}  // namespace ced
