// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ced/catalan.hpp"
#include "ced/decision.hpp"
#include "ced/params.hpp"
#include "ced/simulate.hpp"

using namespace ced;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "failed: " + what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Rational random_rational(std::mt19937_64& rng, int max_num, int max_den, bool allow_zero) {
  std::uniform_int_distribution<int> num(allow_zero ? 0 : 1, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  return Rational(num(rng), den(rng));
}

// Shared by criteria 4 and 10.
const CriticalBracket& bracket_d2_lambda1() {
  static const CriticalBracket br = critical_rho(2, Rational(1), Rational(1, 1024));
  return br;
}

Outcome criterion1() {
  Outcome o;
  int checked = 0;
  for (const Rational& lambda : {Rational(1, 2), Rational(1), Rational(3)}) {
    const ModelParams p(2, lambda, Rational(0));
    const Rational x = lambda / ((Rational(1) + lambda) * (Rational(1) + lambda));
    const auto seq = weighted_catalan_sequence(p, 12);
    for (int k = 0; k <= 12; ++k) {
      const Rational expected = Rational(catalan_number(k), mpz_class(1)) * pow(x, static_cast<unsigned>(k));
      const Rational single = weighted_catalan(p, k).value;
      o.require(seq[static_cast<std::size_t>(k)] == expected && single == expected,
                "lambda=" + lambda.to_string() + " k=" + std::to_string(k));
      ++checked;
    }
  }
  o.note(std::to_string(checked) + " exact equalities");
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(0xC2C2C2);
  std::uniform_int_distribution<int> level(1, 6);
  const int draws = 50;
  int comparisons = 0;
  for (int i = 0; i < draws; ++i) {
    const ModelParams p(2, random_rational(rng, 12, 9, false), random_rational(rng, 9, 12, true));
    const int m = level(rng);
    for (const WeightMode mode : {WeightMode::exact(), WeightMode::height_capped(m), WeightMode::flattened(m)}) {
      const auto seq = weighted_catalan_sequence(p, 10, mode);
      for (int k = 0; k <= 10; ++k) {
        const Rational brute = weighted_catalan_bruteforce(p, k, mode).value;
        o.require(seq[static_cast<std::size_t>(k)] == brute, "lambda=" + p.lambda().to_string() + " rho=" +
                                                                 p.rho().to_string() + " " + mode.to_string() +
                                                                 " k=" + std::to_string(k));
        ++comparisons;
      }
    }
  }
  o.note(std::to_string(draws) + " draws, " + std::to_string(comparisons) + " exact comparisons");
  return o;
}

Outcome criterion3() {
  Outcome o;
  struct Case {
    ModelParams p;
    Verdict expected;
  };
  const std::vector<Case> cases{{ModelParams(2, Rational(1), Rational(1)), Verdict::Above},
                                {ModelParams(2, Rational(1), Rational(0)), Verdict::Below},
                                {ModelParams(2, Rational(1, 10), Rational(1, 100)), Verdict::Above}};
  for (const auto& c : cases) {
    const DecisionOutcome d = decide(c.p);
    const std::string label = "(" + c.p.lambda().to_string() + ", " + c.p.rho().to_string() + ")";
    o.require(d.verdict == c.expected, label + " verdict " + to_string(d.verdict));
    o.require(verify_certificate(c.p, d), label + " certificate");
  }
  o.note("3 verdicts, certificates re-verified");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const CriticalBracket& br = bracket_d2_lambda1();
  const Rational f2_hi = growth_bounds(2, Rational(1)).upper.hi;
  const ModelParams base(2, Rational(1), Rational(0));
  o.require(br.complete(), "bisection stopped at an undecided midpoint");
  o.require(br.lo < br.hi, "lo < hi");
  o.require(br.width() <= Rational(1, 1024), "width <= 2^-10");
  o.require(decide(base.with_rho(br.lo)).verdict == Verdict::Below, "decide(lo) = Below");
  o.require(decide(base.with_rho(br.hi)).verdict == Verdict::Above, "decide(hi) = Above");
  o.require(verify_certificate(base.with_rho(br.lo), br.lo_outcome), "lo certificate");
  o.require(verify_certificate(base.with_rho(br.hi), br.hi_outcome), "hi certificate");
  o.require(br.lo.sign() >= 0 && br.hi <= f2_hi, "[lo, hi] inside [0, f2(1)]");
  o.note("[" + fmt(br.lo.to_double()) + ", " + fmt(br.hi.to_double()) + "], f2(1) <= " + fmt(f2_hi.to_double()) +
         ", " + std::to_string(br.bisection_steps) + " bisections");
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(0x5A5A5A);
  // Sample near the bracket as well as across [0, f2], where mistakes would show.
  const CriticalBracket& br = bracket_d2_lambda1();
  const double center = midpoint(br.lo, br.hi).to_double();
  std::uniform_int_distribution<long long> wide(0, 600000);
  std::normal_distribution<double> narrow(center, 0.01);
  auto sample = [&](int i) {
    if (i % 2 == 0) return Rational(wide(rng), 1000000);
    const double x = std::max(0.0, narrow(rng));
    return Rational(static_cast<long long>(std::llround(x * 1e9)), 1000000000LL);
  };
  int undecided = 0;
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Rational r1 = sample(i);
    Rational r2 = sample(i + 1);
    if (r1 == r2) r2 = r2 + Rational(1, 1000000000LL);
    if (r2 < r1) std::swap(r1, r2);
    const Verdict v1 = decide(ModelParams(2, Rational(1), r1)).verdict;
    const Verdict v2 = decide(ModelParams(2, Rational(1), r2)).verdict;
    if (v1 == Verdict::Undecided || v2 == Verdict::Undecided) {
      ++undecided;
      continue;
    }
    ++checked;
    o.require(!(v1 == Verdict::Above && v2 == Verdict::Below), "Above at " + r1.to_string() + " but Below at " +
                                                                   r2.to_string());
  }
  o.note(std::to_string(checked) + " pairs checked, " + std::to_string(undecided) + " with an undecided side");
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (int d : {64, 256}) {
    const CriticalBracket br = critical_rho(d, Rational(1), Rational(1, 64));
    o.require(br.complete(), "d=" + std::to_string(d) + " bracket incomplete");
    const double ratio = midpoint(br.lo, br.hi).to_double() / std::sqrt(static_cast<double>(d));
    o.require(ratio >= 0.4 && ratio <= 1.6, "d=" + std::to_string(d) + " ratio " + fmt(ratio));
    const bool confirming = ratio > 0.707 && ratio < 1.414;
    o.note("d=" + std::to_string(d) + " mid/sqrt(d)=" + fmt(ratio) +
           (confirming ? " (inside asymptotic band)" : " (outside asymptotic band)"));
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const ModelParams p(2, Rational(1), Rational(1));
  const std::uint64_t seed = 20240607;
  const auto sim = simulate_line(p, 1000000, 6, seed);
  const auto cmp = compare_renewals(p, sim, 6);
  o.require(cmp.rows[0].exact_match, "k=0 exact match");
  for (std::size_t k = 1; k < cmp.rows.size(); ++k) {
    o.require(std::abs(cmp.rows[k].z) <= 4.0, "k=" + std::to_string(k) + " z=" + fmt(cmp.rows[k].z));
  }
  o.note("seed " + std::to_string(seed) + ", max |z| = " + fmt(cmp.max_abs_z));
  return o;
}

Outcome criterion8() {
  Outcome o;
  const ModelParams p(2, Rational(1), Rational(1));
  const std::uint64_t seed = 20240608;
  const auto sim = simulate_tree(p, 8, 100000, seed);
  const auto catalan = weighted_catalan_sequence(p, 3);
  std::string zs;
  for (int k = 1; k <= 3; ++k) {
    const double expected = (pow(Rational(2), static_cast<unsigned>(k)) * catalan[static_cast<std::size_t>(k)]).to_double();
    const double z = (sim.renewal_mean(k) - expected) / sim.renewal_se(k);
    o.require(std::abs(z) <= 3.0, "level " + std::to_string(k) + " z=" + fmt(z));
    zs += (k > 1 ? ", " : "") + fmt(z);
  }
  o.note("seed " + std::to_string(seed) + ", z = (" + zs + ")");
  return o;
}

Outcome criterion9() {
  Outcome o;
  const Rational tol(1, 256);
  const auto window = lambda_interval(2);
  // Rational points just inside each window edge.
  const Rational near_lo = window.lo.hi + Rational(1, 10000);
  const Rational near_hi = window.hi.lo - Rational(1, 1000);
  std::vector<Rational> grid{Rational(1, 10), near_lo};
  const Rational a(1, 5);
  const Rational b(28, 5);
  for (int i = 0; i < 29; ++i) grid.push_back(a + (b - a) * Rational(i, 28));
  grid.push_back(near_hi);
  grid.push_back(Rational(6));

  const auto rows = rho_c_curve(2, grid, tol);
  o.require(rows.size() == 33, "33 rows");
  o.require(!rows.front().inside && rows.front().lo.is_zero() && rows.front().hi.is_zero(), "zero below window");
  o.require(!rows.back().inside && rows.back().lo.is_zero() && rows.back().hi.is_zero(), "zero above window");
  int unresolved = 0;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string at = "lambda=" + fmt(r.lambda.to_double());
    o.require(r.inside, at + " inside");
    o.require(r.hi.sign() > 0, at + " positive");
    o.require(r.hi - r.lo <= tol, at + " width");
    if (r.bracket && !r.bracket->complete()) ++unresolved;
  }
  o.require(unresolved == 0, std::to_string(unresolved) + " unresolved rows");
  o.require(rows[1].hi <= tol, "pinch at lower edge (hi=" + fmt(rows[1].hi.to_double()) + ")");
  o.require(rows[31].hi <= tol, "pinch at upper edge (hi=" + fmt(rows[31].hi.to_double()) + ")");

  // Shape, logged only: count direction changes of the midpoint curve.
  int turns = 0;
  double peak = 0;
  double peak_lambda = 0;
  int last_dir = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double prev = midpoint(rows[i - 1].lo, rows[i - 1].hi).to_double();
    const double cur = midpoint(rows[i].lo, rows[i].hi).to_double();
    if (cur > peak) {
      peak = cur;
      peak_lambda = rows[i].lambda.to_double();
    }
    const int dir = cur > prev + tol.to_double() ? 1 : (cur < prev - tol.to_double() ? -1 : 0);
    if (dir != 0 && last_dir != 0 && dir != last_dir) ++turns;
    if (dir != 0) last_dir = dir;
  }
  o.note("peak rho_c ~ " + fmt(peak) + " at lambda ~ " + fmt(peak_lambda) + ", " + std::to_string(turns) +
         " direction change(s) beyond tol" + (turns == 1 ? " (unimodal)" : ""));
  return o;
}

Outcome criterion10() {
  Outcome o;
  const CriticalBracket& br = bracket_d2_lambda1();
  const int terms = 400;
  const Rational z(2);
  const ModelParams at_lo(2, Rational(1), br.lo);
  const ModelParams at_hi(2, Rational(1), br.hi);

  const auto lo_series = partial_series_enclosure(at_lo, z, terms);
  const auto& last = lo_series.terms[terms];
  const auto& before = lo_series.terms[terms - 1];
  const double ratio_lo_bound = (last.lo / before.hi).to_double();
  o.require(lo_series.sum.lo >= Rational(1000000), "partial sum at lo >= 1e6 (certified sum in [" +
                                                        fmt(lo_series.sum.lo.to_double()) + ", " +
                                                        fmt(lo_series.sum.hi.to_double()) + "])");
  o.require(last.lo >= before.hi, "last-term ratio at lo >= 1 (lower bound " + fmt(ratio_lo_bound) + ")");

  const auto hi_series = partial_series_enclosure(at_hi, z, terms);
  const double ratio_hi =
      (hi_series.terms[terms].mid() / hi_series.terms[terms - 1].mid()).to_double();

  // Flattened bound at hi: finite exactly when the K_m test passes.
  const auto* cert = br.hi_outcome.above();
  bool finite = false;
  if (cert != nullptr) {
    const KmResult km = km_good(at_hi, cert->m);
    finite = km.good;
  }
  o.require(finite, "flattened bound finite at hi");
  o.note("sum at lo ~ " + fmt(lo_series.sum.mid().to_double()) + ", ratio at lo ~ " +
         fmt((last.mid() / before.mid()).to_double()) + ", sum at hi ~ " + fmt(hi_series.sum.mid().to_double()) +
         ", ratio at hi ~ " + fmt(ratio_hi));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "zero death closed form", 1, criterion1},
      {2, "dynamic program vs enumeration", 30, criterion2},
      {3, "decision battery", 1, criterion3},
      {4, "bracket consistency", 60, criterion4},
      {5, "monotone verdicts", 120, criterion5},
      {6, "sqrt(d) scaling", 600, criterion6},
      {7, "line simulation vs exact renewals", 120, criterion7},
      {8, "tree renewal means", 300, criterion8},
      {9, "phase curve shape", 900, criterion9},
      {10, "series dichotomy at the bracket", 600, criterion10},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only.count(c.id) == 0) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(seconds <= c.budget_seconds, "runtime " + fmt(seconds) + " s over " + fmt(c.budget_seconds) + " s");
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s: %s (%.2f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, seconds,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
