#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ced/params.hpp"
#include "ced/rational.hpp"

namespace ced {

// ---------------------------------------------------------------------------
// Random streams

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent generator for trial `trial` of a run seeded with `seed`:
/// mt19937_64 seeded from mix64(seed, trial), so a trial's draws do not
/// depend on scheduling or on how many threads ran the batch.
std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial);

/// Uniform in the open interval (0, 1).
double open_uniform(std::mt19937_64& rng);

/// Exponential with the given rate by inverse CDF on an open uniform.
double exponential(std::mt19937_64& rng, double rate);

// ---------------------------------------------------------------------------
// CED+ on the nonnegative integers (embedded jump chain of the gap)

enum class Absorption {
  /// A red site died while blue was behind it.
  Death,
  /// Blue consumed the last red site.
  Caught,
  /// Blue reached k_max.
  Truncated,
};

enum class FirstJump { Advance, Fall, Death };

struct LineTrialRecord {
  /// renewal_hit[k] for k = 0..k_max; renewal_hit[0] is always true.
  std::vector<bool> renewal_hit;
  /// Furthest blue position, capped at k_max.
  int y_value = 0;
  Absorption absorption = Absorption::Truncated;
  FirstJump first_jump = FirstJump::Advance;
};

/// One run of the jump chain from gap 1 with blue at 0. From gap j it moves
/// to j+1, j-1 (blue advances) or is absorbed by a death with probabilities
/// proportional to lambda, 1 and j*rho.
LineTrialRecord simulate_line_trial(double lambda, double rho, int k_max, std::mt19937_64& rng);

struct LineSummary {
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  Rational lambda;
  Rational rho;
  int k_max = 0;

  std::vector<std::uint64_t> renewal_counts;  // k = 0..k_max
  std::vector<std::uint64_t> y_histogram;     // Y = 0..k_max (k_max means >= k_max)
  std::uint64_t absorbed_death = 0;
  std::uint64_t absorbed_caught = 0;
  std::uint64_t truncated = 0;
  std::uint64_t first_advance = 0;
  std::uint64_t first_fall = 0;
  std::uint64_t first_death = 0;

  double renewal_frequency(int k) const;
  /// sqrt(p (1 - p) / n) at the empirical frequency.
  double renewal_se(int k) const;
  /// Empirical P(Y >= k).
  double y_tail_frequency(int k) const;

  friend bool operator==(const LineSummary&, const LineSummary&) = default;
};

/// d is ignored. Deterministic for a given seed regardless of `threads`.
LineSummary simulate_line(const ModelParams& p, std::uint64_t n_trials, int k_max, std::uint64_t seed,
                          unsigned threads = 1);

struct RenewalZ {
  int k = 0;
  double frequency = 0;
  double exact = 0;
  double se = 0;
  double z = 0;
  /// k = 0: both sides are 1 and z is not defined.
  bool exact_match = false;
};

struct RenewalComparison {
  std::vector<RenewalZ> rows;
  double max_abs_z = 0;
};

/// z_k = (p_hat_k - C_k) / SE_k against the exact weighted Catalan numbers.
/// When p_hat is 0 or 1 the empirical SE vanishes and the model SE
/// sqrt(C_k (1 - C_k) / n) is used. Throws InvalidParameter when the summary
/// was produced with different (lambda, rho) or a smaller k_max.
RenewalComparison compare_renewals(const ModelParams& p, const LineSummary& sim, int k_max);

// ---------------------------------------------------------------------------
// CED on the depth-capped d-ary tree (continuous time)

struct TreeTrialRecord {
  /// Deepest level that turned blue (-1 if blue never left the extra vertex).
  int blue_reached_depth = -1;
  /// Deepest level that turned red.
  int red_reached_depth = 0;
  /// Per level 0..depth_cap-1: vertices v that were red with a blue parent
  /// while v's first child was still white. Along the path through first
  /// children this is exactly the line renewal event.
  std::vector<std::uint32_t> renewals_per_level;
  /// Per level: vertices that were red with a blue parent while every
  /// descendant was white (the self-similar renewal of the tree).
  std::vector<std::uint32_t> strict_renewals_per_level;
  /// Tree vertices ever blue (the extra vertex attached to the root excluded).
  std::uint64_t blue_count = 0;
};

struct TreeSimOptions {
  /// Upper bound on materialized vertices per trial.
  std::size_t max_vertices = std::size_t{1} << 22;
};

TreeTrialRecord simulate_tree_trial(int d, double lambda, double rho, int depth_cap, std::mt19937_64& rng,
                                    const TreeSimOptions& options = {});

struct TreeSummary {
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  int d = 2;
  Rational lambda;
  Rational rho;
  int depth_cap = 0;

  std::vector<std::uint64_t> renewal_sum;  // levels 0..depth_cap-1
  std::vector<std::uint64_t> renewal_sumsq;
  std::vector<std::uint64_t> strict_renewal_sum;
  std::vector<std::uint64_t> strict_renewal_sumsq;
  std::uint64_t blue_reached_cap = 0;
  std::uint64_t red_reached_cap = 0;
  std::uint64_t blue_count_sum = 0;

  double renewal_mean(int level) const;
  double renewal_se(int level) const;
  double strict_renewal_mean(int level) const;
  double strict_renewal_se(int level) const;
  /// Fraction of trials in which blue reached the depth cap (a truncated
  /// proxy, not the infinite-tree coexistence probability).
  double blue_reach_frequency() const;
  double red_reach_frequency() const;
  double mean_blue_count() const;

  friend bool operator==(const TreeSummary&, const TreeSummary&) = default;
};

TreeSummary simulate_tree(const ModelParams& p, int depth_cap, std::uint64_t n_trials, std::uint64_t seed,
                          unsigned threads = 1, const TreeSimOptions& options = {});

}  // namespace ced
