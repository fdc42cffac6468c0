#include "ced/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ced/catalan.hpp"
#include "ced/errors.hpp"

namespace ced {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(mix64(mix64(seed) ^ trial));
}

double open_uniform(std::mt19937_64& rng) {
  // 53 random bits, shifted to the cell midpoint: never 0, never 1.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double exponential(std::mt19937_64& rng, double rate) { return -std::log(open_uniform(rng)) / rate; }

LineTrialRecord simulate_line_trial(double lambda, double rho, int k_max, std::mt19937_64& rng) {
  LineTrialRecord rec;
  rec.renewal_hit.assign(static_cast<std::size_t>(k_max) + 1, false);
  rec.renewal_hit[0] = true;

  int gap = 1;
  int blue = 0;
  bool first = true;
  for (;;) {
    const double total = lambda + 1.0 + gap * rho;
    const double u = open_uniform(rng) * total;
    if (u < lambda) {
      if (first) rec.first_jump = FirstJump::Advance;
      ++gap;
    } else if (u < lambda + 1.0) {
      if (first) rec.first_jump = FirstJump::Fall;
      --gap;
      ++blue;
      if (gap == 0) {
        rec.absorption = Absorption::Caught;
        break;
      }
      if (gap == 1) rec.renewal_hit[static_cast<std::size_t>(blue)] = true;
      if (blue == k_max) {
        rec.absorption = Absorption::Truncated;
        break;
      }
    } else {
      if (first) rec.first_jump = FirstJump::Death;
      rec.absorption = Absorption::Death;
      break;
    }
    first = false;
  }
  rec.y_value = std::min(blue, k_max);
  return rec;
}

double LineSummary::renewal_frequency(int k) const {
  return static_cast<double>(renewal_counts.at(static_cast<std::size_t>(k))) / static_cast<double>(n_trials);
}

double LineSummary::renewal_se(int k) const {
  const double f = renewal_frequency(k);
  return std::sqrt(f * (1.0 - f) / static_cast<double>(n_trials));
}

double LineSummary::y_tail_frequency(int k) const {
  std::uint64_t count = 0;
  for (std::size_t y = static_cast<std::size_t>(k); y < y_histogram.size(); ++y) count += y_histogram[y];
  return static_cast<double>(count) / static_cast<double>(n_trials);
}

namespace {

void tally(LineSummary& s, const LineTrialRecord& r) {
  for (std::size_t k = 0; k < r.renewal_hit.size(); ++k) s.renewal_counts[k] += r.renewal_hit[k] ? 1 : 0;
  ++s.y_histogram[static_cast<std::size_t>(r.y_value)];
  switch (r.absorption) {
    case Absorption::Death:
      ++s.absorbed_death;
      break;
    case Absorption::Caught:
      ++s.absorbed_caught;
      break;
    case Absorption::Truncated:
      ++s.truncated;
      break;
  }
  switch (r.first_jump) {
    case FirstJump::Advance:
      ++s.first_advance;
      break;
    case FirstJump::Fall:
      ++s.first_fall;
      break;
    case FirstJump::Death:
      ++s.first_death;
      break;
  }
}

void merge(LineSummary& into, const LineSummary& part) {
  for (std::size_t k = 0; k < into.renewal_counts.size(); ++k) into.renewal_counts[k] += part.renewal_counts[k];
  for (std::size_t y = 0; y < into.y_histogram.size(); ++y) into.y_histogram[y] += part.y_histogram[y];
  into.absorbed_death += part.absorbed_death;
  into.absorbed_caught += part.absorbed_caught;
  into.truncated += part.truncated;
  into.first_advance += part.first_advance;
  into.first_fall += part.first_fall;
  into.first_death += part.first_death;
}

}  // namespace

LineSummary simulate_line(const ModelParams& p, std::uint64_t n_trials, int k_max, std::uint64_t seed,
                          unsigned threads) {
  if (n_trials < 1) throw InvalidParameter("n_trials must be >= 1");
  if (k_max < 1) throw InvalidParameter("k_max must be >= 1");

  LineSummary base;
  base.seed = seed;
  base.lambda = p.lambda();
  base.rho = p.rho();
  base.k_max = k_max;
  base.renewal_counts.assign(static_cast<std::size_t>(k_max) + 1, 0);
  base.y_histogram.assign(static_cast<std::size_t>(k_max) + 1, 0);

  const double lambda = p.lambda().to_double();
  const double rho = p.rho().to_double();
  const unsigned n_workers =
      static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, n_trials)));

  // Contiguous trial ranges; integer tallies make the merge order-free.
  std::vector<LineSummary> parts(n_workers, base);
  auto run = [&](unsigned w) {
    const std::uint64_t begin = n_trials * w / n_workers;
    const std::uint64_t end = n_trials * (w + 1) / n_workers;
    for (std::uint64_t t = begin; t < end; ++t) {
      auto rng = trial_stream(seed, t);
      tally(parts[w], simulate_line_trial(lambda, rho, k_max, rng));
    }
  };
  if (n_workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(run, w);
  }

  LineSummary out = base;
  out.n_trials = n_trials;
  for (const auto& part : parts) merge(out, part);
  return out;
}

RenewalComparison compare_renewals(const ModelParams& p, const LineSummary& sim, int k_max) {
  if (sim.lambda != p.lambda() || sim.rho != p.rho()) {
    throw InvalidParameter("simulation was run with lambda=" + sim.lambda.to_string() + ", rho=" +
                           sim.rho.to_string() + " but compared against lambda=" + p.lambda().to_string() +
                           ", rho=" + p.rho().to_string());
  }
  if (k_max < 0 || k_max > sim.k_max) {
    throw InvalidParameter("k_max " + std::to_string(k_max) + " exceeds simulated range " +
                           std::to_string(sim.k_max));
  }
  const auto exact = weighted_catalan_sequence(p, k_max);
  const double n = static_cast<double>(sim.n_trials);

  RenewalComparison out;
  for (int k = 0; k <= k_max; ++k) {
    RenewalZ row;
    row.k = k;
    row.frequency = sim.renewal_frequency(k);
    row.exact = exact[static_cast<std::size_t>(k)].to_double();
    if (k == 0) {
      row.exact_match = row.frequency == 1.0;
      out.rows.push_back(row);
      continue;
    }
    row.se = sim.renewal_se(k);
    if (row.se == 0.0) row.se = std::sqrt(row.exact * (1.0 - row.exact) / n);
    row.z = row.se > 0.0 ? (row.frequency - row.exact) / row.se : 0.0;
    out.max_abs_z = std::max(out.max_abs_z, std::abs(row.z));
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace ced
