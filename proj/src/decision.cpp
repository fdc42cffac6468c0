#include "ced/decision.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "ced/errors.hpp"

namespace ced {

namespace {

const Rational kOne(1);
const Rational kQuarter(1, 4);

// b_0, b_1, ... extended on demand.
class BWeights {
 public:
  explicit BWeights(const ModelParams& p) : p_(p) {}

  std::span<const Rational> upto(int m) {
    while (static_cast<int>(b_.size()) <= m) b_.push_back(weight_b(p_, static_cast<int>(b_.size())));
    return std::span<const Rational>(b_.data(), static_cast<std::size_t>(m) + 1);
  }

 private:
  const ModelParams& p_;
  std::vector<Rational> b_;
};

bool verify_below(const ModelParams& p, const BelowCertificate& c) {
  if (c.m < 1 || c.level < 0 || c.level > c.m) return false;
  std::vector<Rational> tail;
  for (int j = c.level; j <= c.m; ++j) tail.push_back(weight_b(p, j));
  const CFEval ev = eval_finite(tail);
  if (c.pole) {
    // Pole right below the top: K[b_{level+1}, ..., b_m] == 1 exactly.
    return ev.pole_at == 0 && ev.partials.size() > 1 && ev.partials[1] == kOne;
  }
  return !ev.has_pole() && *ev.value > kOne;
}

bool verify_above(const ModelParams& p, const AboveCertificate& c) {
  if (c.m < 1) return false;
  const Rational bm = weight_b(p, c.m);
  if (bm >= kQuarter || !psi_upper_holds(bm, c.psi_upper)) return false;
  std::vector<Rational> entries;
  for (int j = 0; j < c.m; ++j) entries.push_back(weight_b(p, j));
  entries.back() *= c.psi_upper;
  const CFEval ev = eval_finite(entries);
  if (ev.has_pole()) return false;
  return std::all_of(ev.partials.begin(), ev.partials.end(),
                     [](const std::optional<Rational>& t) { return t && *t < kOne; });
}

}  // namespace

std::vector<int> m_schedule(int m_max) {
  if (m_max < 1) throw InvalidParameter("m_max must be >= 1");
  std::vector<int> out;
  for (int m = 1; m < m_max; m *= 2) out.push_back(m);
  out.push_back(m_max);
  return out;
}

DecisionOutcome decide(const ModelParams& p, int m_max) {
  const auto schedule = m_schedule(m_max);
  const bool inside = in_lambda_interval(p.d(), p.lambda());

  DecisionOutcome out;
  if (p.rho().is_zero() && inside) {
    out.verdict = Verdict::Below;
    out.short_circuit = ShortCircuit::ZeroDeathInsideWindow;
    return out;
  }
  if (p.rho().sign() > 0 && !inside) {
    out.verdict = Verdict::Above;
    out.short_circuit = ShortCircuit::OutsideWindow;
    return out;
  }

  BWeights weights(p);
  for (int m : schedule) {
    const auto b = weights.upto(m);
    out.m_reached = m;
    if (const auto w = below_witness(b)) {
      out.verdict = Verdict::Below;
      out.certificate = BelowCertificate{w->m, w->level, w->pole};
      return out;
    }
    KmResult km = km_good(b);
    if (km.good) {
      out.verdict = Verdict::Above;
      out.certificate = AboveCertificate{m, std::move(*km.psi_upper)};
      return out;
    }
  }
  out.verdict = Verdict::Undecided;
  return out;
}

bool verify_certificate(const ModelParams& p, const DecisionOutcome& outcome) {
  switch (outcome.short_circuit) {
    case ShortCircuit::ZeroDeathInsideWindow:
      return outcome.verdict == Verdict::Below && p.rho().is_zero() && in_lambda_interval(p.d(), p.lambda());
    case ShortCircuit::OutsideWindow:
      return outcome.verdict == Verdict::Above && p.rho().sign() > 0 && !in_lambda_interval(p.d(), p.lambda());
    case ShortCircuit::None:
      break;
  }
  if (outcome.verdict == Verdict::Below) {
    const auto* c = outcome.below();
    return c != nullptr && verify_below(p, *c);
  }
  if (outcome.verdict == Verdict::Above) {
    const auto* c = outcome.above();
    return c != nullptr && verify_above(p, *c);
  }
  return false;
}

CriticalBracket critical_rho(int d, const Rational& lambda, const Rational& tol, int m_max) {
  if (tol.sign() <= 0) throw InvalidParameter("bisection tolerance must be > 0");
  if (!in_lambda_interval(d, lambda)) {
    throw OutsideLambdaInterval("lambda = " + lambda.to_string() + " is outside (lambda_c^-, lambda_c^+) for d = " +
                                std::to_string(d) + "; there rho_c = 0");
  }
  const GrowthBounds gb = growth_bounds(d, lambda);
  const ModelParams base(d, lambda, Rational(0));

  CriticalBracket br;
  br.lo = gb.lower.lo;
  br.hi = gb.upper.hi;
  br.lo_outcome = decide(base.with_rho(br.lo), m_max);
  br.hi_outcome = decide(base.with_rho(br.hi), m_max);
  if (br.lo_outcome.verdict != Verdict::Below) {
    br.unresolved = br.lo;
    return br;
  }
  if (br.hi_outcome.verdict != Verdict::Above) {
    br.unresolved = br.hi;
    return br;
  }

  while (br.width() > tol) {
    Rational mid = midpoint(br.lo, br.hi);
    DecisionOutcome o = decide(base.with_rho(mid), m_max);
    ++br.bisection_steps;
    if (o.verdict == Verdict::Below) {
      br.lo = std::move(mid);
      br.lo_outcome = std::move(o);
    } else if (o.verdict == Verdict::Above) {
      br.hi = std::move(mid);
      br.hi_outcome = std::move(o);
    } else {
      br.unresolved = std::move(mid);
      break;
    }
  }
  return br;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Below:
      return "Below";
    case Verdict::Above:
      return "Above";
    case Verdict::Undecided:
      return "Undecided";
  }
  return "Undecided";
}

std::string to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::Coexistence:
      return "Coexistence";
    case PhaseLabel::Escape:
      return "Escape";
    case PhaseLabel::Extinction:
      return "Extinction";
    case PhaseLabel::BoundaryUnresolved:
      return "BoundaryUnresolved";
  }
  return "BoundaryUnresolved";
}

std::string to_string(ShortCircuit s) {
  switch (s) {
    case ShortCircuit::None:
      return "none";
    case ShortCircuit::ZeroDeathInsideWindow:
      return "zero-death-inside-window";
    case ShortCircuit::OutsideWindow:
      return "outside-window";
  }
  return "none";
}

PhaseLabel classify_phase(const ModelParams& p, int m_max) {
  if (p.rho() >= rho_extinction(p.d(), p.lambda())) return PhaseLabel::Extinction;
  if (!in_lambda_interval(p.d(), p.lambda())) return PhaseLabel::Escape;
  switch (decide(p, m_max).verdict) {
    case Verdict::Below:
      return PhaseLabel::Coexistence;
    case Verdict::Above:
      return PhaseLabel::Escape;
    case Verdict::Undecided:
      break;
  }
  return PhaseLabel::BoundaryUnresolved;
}

std::vector<CurveRow> rho_c_curve(int d, const std::vector<Rational>& lambdas, const Rational& tol, int m_max,
                                  unsigned threads) {
  std::vector<CurveRow> rows(lambdas.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < lambdas.size(); i = next++) {
      try {
        CurveRow& row = rows[i];
        row.lambda = lambdas[i];
        row.inside = in_lambda_interval(d, lambdas[i]);
        if (!row.inside) continue;
        row.bracket = critical_rho(d, lambdas[i], tol, m_max);
        row.lo = row.bracket->lo;
        row.hi = row.bracket->hi;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(lambdas.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace ced
