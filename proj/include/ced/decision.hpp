#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ced/contfrac.hpp"
#include "ced/params.hpp"
#include "ced/rational.hpp"

namespace ced {

enum class Verdict { Below, Above, Undecided };

/// Why decide() answered without running the continued-fraction kernels.
enum class ShortCircuit {
  None,
  /// rho = 0 and lambda inside the window: rho_c > 0 = rho.
  ZeroDeathInsideWindow,
  /// rho > 0 and lambda outside the window: rho_c = 0 < rho.
  OutsideWindow,
};

/// K[b_i, ..., b_m] > 1, or a pole at level i.
struct BelowCertificate {
  int m = 0;
  int level = 0;
  bool pole = false;
};

/// b_m < 1/4 and K[1, b_0, ..., b_{m-1} * psi_upper] is good, with psi_upper >= psi(b_m).
struct AboveCertificate {
  int m = 0;
  Rational psi_upper;
};

struct DecisionOutcome {
  Verdict verdict = Verdict::Undecided;
  ShortCircuit short_circuit = ShortCircuit::None;
  std::variant<std::monostate, BelowCertificate, AboveCertificate> certificate;
  /// Largest truncation level examined (0 for short-circuits).
  int m_reached = 0;

  const BelowCertificate* below() const { return std::get_if<BelowCertificate>(&certificate); }
  const AboveCertificate* above() const { return std::get_if<AboveCertificate>(&certificate); }
};

inline constexpr int kDefaultMaxM = 4096;

/// Truncation levels tried by decide(): 1, 2, 4, ... doubling below m_max,
/// then m_max itself.
std::vector<int> m_schedule(int m_max);

/// Decides rho < rho_c (Below) or rho > rho_c (Above) for the given
/// parameters by growing the truncation level m until either the below
/// witness or the good test on K_m(d) fires. Undecided after m_max.
DecisionOutcome decide(const ModelParams& p, int m_max = kDefaultMaxM);

/// Re-checks a certificate from scratch (fresh b_j, full continued-fraction
/// evaluation, exact psi inequality). Undecided outcomes never verify.
bool verify_certificate(const ModelParams& p, const DecisionOutcome& outcome);

/// [lo, hi] containing rho_c with decide(lo) = Below and decide(hi) = Above.
struct CriticalBracket {
  Rational lo;
  Rational hi;
  DecisionOutcome lo_outcome;
  DecisionOutcome hi_outcome;
  /// Midpoint at which decide() returned Undecided; the bracket stops there.
  std::optional<Rational> unresolved;
  int bisection_steps = 0;

  Rational width() const { return hi - lo; }
  bool complete() const { return !unresolved.has_value(); }
};

/// Bisection for rho_c starting from [max(0, f_1), upper end of the f_2
/// enclosure] with exact midpoints. Throws OutsideLambdaInterval when lambda
/// is not inside the window (there rho_c = 0) and InvalidParameter for tol <= 0.
CriticalBracket critical_rho(int d, const Rational& lambda, const Rational& tol, int m_max = kDefaultMaxM);

enum class PhaseLabel { Coexistence, Escape, Extinction, BoundaryUnresolved };

std::string to_string(Verdict v);
std::string to_string(PhaseLabel label);
std::string to_string(ShortCircuit s);

/// Coexistence / Escape / Extinction from (lambda in window?, rho vs rho_c,
/// rho vs rho_e). Undecided comparisons with rho_c give BoundaryUnresolved.
PhaseLabel classify_phase(const ModelParams& p, int m_max = kDefaultMaxM);

struct CurveRow {
  Rational lambda;
  bool inside = false;
  Rational lo;
  Rational hi;
  /// Present for grid points inside the window.
  std::optional<CriticalBracket> bracket;
};

/// One CriticalBracket per grid point inside the window; rows outside the
/// window are emitted with lo = hi = 0. Grid points are processed on up to
/// `threads` worker threads; output order follows the input.
std::vector<CurveRow> rho_c_curve(int d, const std::vector<Rational>& lambdas, const Rational& tol,
                                  int m_max = kDefaultMaxM, unsigned threads = 1);

}  // namespace ced
