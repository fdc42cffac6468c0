#include "ced/catalan.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "ced/errors.hpp"

namespace ced {

namespace {

int parse_level(std::string_view text, std::string_view whole) {
  int m = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, m);
  if (ec != std::errc() || ptr != end || m < 1) {
    throw InvalidParameter("bad weight mode '" + std::string(whole) + "' (expected exact, capped:<m>, flat:<m>)");
  }
  return m;
}

// Highest height a path of half-length k can reach under `mode`.
int height_limit(int k, WeightMode mode) {
  if (mode.kind == WeightMode::Kind::HeightCapped) return std::min(k, mode.m + 1);
  return k;
}

// Per-level pair weights a(j) = u(j) v(j), each multiplied by z.
std::vector<Rational> level_weights(const ModelParams& p, WeightMode mode, int levels, const Rational& z) {
  const WeightTable table(p, mode, levels);
  std::vector<Rational> w;
  w.reserve(static_cast<std::size_t>(levels));
  for (int j = 0; j < levels; ++j) w.push_back(table.u(j) * table.v(j) * z);
  return w;
}

// Every Dyck path pairs each rise from height j with a later fall back to j,
// so the path weight is the product of a(j) over its rises. The sweep below
// carries that product on the rises and leaves the falls unweighted; cells
// of the wrong parity for the current step are left untouched and read as
// the previous step's values.
std::vector<Rational> dyck_sweep(const std::vector<Rational>& w, int kmax, int height_cap) {
  std::vector<Rational> out(static_cast<std::size_t>(kmax) + 1);
  out[0] = Rational(1);
  if (kmax == 0) return out;

  std::vector<Rational> cell(static_cast<std::size_t>(height_cap) + 2);
  cell[0] = Rational(1);
  const int steps = 2 * kmax;
  for (int s = 1; s <= steps; ++s) {
    const int top = std::min({s, steps - s, height_cap});
    for (int h = s % 2; h <= top; h += 2) {
      Rational next = cell[static_cast<std::size_t>(h) + 1];
      if (h >= 1) {
        const Rational& from_below = cell[static_cast<std::size_t>(h) - 1];
        if (!from_below.is_zero()) next += from_below * w[static_cast<std::size_t>(h) - 1];
      }
      cell[static_cast<std::size_t>(h)] = std::move(next);
    }
    if (s % 2 == 0) out[static_cast<std::size_t>(s / 2)] = cell[0];
  }
  return out;
}

// The same sweep on fixed-point integers X / 2^bits. `round_up` selects
// floor or ceiling for the weights and every product.
std::vector<mpz_class> dyck_sweep_fixed(const std::vector<Rational>& w, int kmax, int height_cap, int bits,
                                        bool round_up) {
  std::vector<mpz_class> wf;
  wf.reserve(w.size());
  for (const auto& x : w) {
    mpz_class num = x.numerator();
    num <<= bits;
    mpz_class q;
    if (round_up) {
      mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.denominator().get_mpz_t());
    } else {
      mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.denominator().get_mpz_t());
    }
    wf.push_back(std::move(q));
  }

  const mpz_class one = mpz_class(1) << bits;
  std::vector<mpz_class> out(static_cast<std::size_t>(kmax) + 1);
  out[0] = one;
  if (kmax == 0) return out;

  std::vector<mpz_class> cell(static_cast<std::size_t>(height_cap) + 2);
  cell[0] = one;
  mpz_class prod;
  const int steps = 2 * kmax;
  for (int s = 1; s <= steps; ++s) {
    const int top = std::min({s, steps - s, height_cap});
    for (int h = s % 2; h <= top; h += 2) {
      mpz_class next = cell[static_cast<std::size_t>(h) + 1];
      if (h >= 1) {
        prod = cell[static_cast<std::size_t>(h) - 1] * wf[static_cast<std::size_t>(h) - 1];
        if (round_up) {
          mpz_cdiv_q_2exp(prod.get_mpz_t(), prod.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
        } else {
          mpz_fdiv_q_2exp(prod.get_mpz_t(), prod.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
        }
        next += prod;
      }
      cell[static_cast<std::size_t>(h)] = std::move(next);
    }
    if (s % 2 == 0) out[static_cast<std::size_t>(s / 2)] = cell[0];
  }
  return out;
}

void enumerate_paths(const WeightTable& t, int height, int rises_left, int falls_left, const Rational& prefix,
                     Rational& total) {
  if (prefix.is_zero()) return;
  if (rises_left == 0 && falls_left == 0) {
    total += prefix;
    return;
  }
  if (rises_left > 0) {
    enumerate_paths(t, height + 1, rises_left - 1, falls_left, prefix * t.u(height), total);
  }
  if (height > 0 && falls_left > 0) {
    enumerate_paths(t, height - 1, rises_left, falls_left - 1, prefix * t.v(height - 1), total);
  }
}

}  // namespace

WeightMode WeightMode::height_capped(int m) {
  if (m < 1) throw InvalidParameter("height cap m must be >= 1");
  return {Kind::HeightCapped, m};
}

WeightMode WeightMode::flattened(int m) {
  if (m < 1) throw InvalidParameter("flattening level m must be >= 1");
  return {Kind::Flattened, m};
}

WeightMode WeightMode::parse(std::string_view text) {
  if (text == "exact") return exact();
  if (text.starts_with("capped:")) return height_capped(parse_level(text.substr(7), text));
  if (text.starts_with("flat:")) return flattened(parse_level(text.substr(5), text));
  throw InvalidParameter("bad weight mode '" + std::string(text) + "' (expected exact, capped:<m>, flat:<m>)");
}

std::string WeightMode::to_string() const {
  switch (kind) {
    case Kind::Exact:
      return "exact";
    case Kind::HeightCapped:
      return "capped:" + std::to_string(m);
    case Kind::Flattened:
      return "flat:" + std::to_string(m);
  }
  return "exact";
}

WeightTable::WeightTable(const ModelParams& p, WeightMode mode, int levels) : mode_(mode) {
  if (levels < 0) throw InvalidParameter("weight table size must be >= 0");
  const Rational base = Rational(1) + p.lambda();
  auto rise = [&](int j) { return p.lambda() / (base + Rational(j + 1) * p.rho()); };
  auto fall = [&](int j) { return Rational(1) / (base + Rational(j + 2) * p.rho()); };

  u_.reserve(static_cast<std::size_t>(levels));
  v_.reserve(static_cast<std::size_t>(levels));
  for (int j = 0; j < levels; ++j) {
    switch (mode.kind) {
      case WeightMode::Kind::Exact:
        u_.push_back(rise(j));
        v_.push_back(fall(j));
        break;
      case WeightMode::Kind::HeightCapped:
        u_.push_back(j <= mode.m ? rise(j) : Rational(0));
        v_.push_back(j <= mode.m ? fall(j) : Rational(0));
        break;
      case WeightMode::Kind::Flattened:
        u_.push_back(rise(std::min(j, mode.m)));
        v_.push_back(fall(std::min(j, mode.m)));
        break;
    }
  }
}

std::vector<Rational> weighted_catalan_sequence(const ModelParams& p, int kmax, WeightMode mode) {
  if (kmax < 0) throw InvalidParameter("k must be >= 0");
  const int cap = height_limit(kmax, mode);
  return dyck_sweep(level_weights(p, mode, cap, Rational(1)), kmax, cap);
}

CatalanValue weighted_catalan(const ModelParams& p, int k, WeightMode mode) {
  auto seq = weighted_catalan_sequence(p, k, mode);
  return {k, std::move(seq.back())};
}

CatalanValue weighted_catalan_bruteforce(const ModelParams& p, int k, WeightMode mode) {
  if (k < 0) throw InvalidParameter("k must be >= 0");
  if (k > kBruteforceMaxK) {
    throw InvalidParameter("brute-force enumeration refused for k = " + std::to_string(k) + " > " +
                           std::to_string(kBruteforceMaxK));
  }
  const WeightTable table(p, mode, std::max(k, 1));
  Rational total(0);
  enumerate_paths(table, 0, k, k, Rational(1), total);
  return {k, total};
}

Rational dyck_path_weight(const WeightTable& weights, std::string_view path) {
  Rational w(1);
  int height = 0;
  for (char step : path) {
    if (step == 'U') {
      w *= weights.u(height);
      ++height;
    } else if (step == 'D') {
      if (height == 0) throw InvalidParameter("path goes below zero: " + std::string(path));
      --height;
      w *= weights.v(height);
    } else {
      throw InvalidParameter("path steps must be 'U' or 'D': " + std::string(path));
    }
  }
  if (height != 0) throw InvalidParameter("path does not return to zero: " + std::string(path));
  return w;
}

Rational partial_series(const ModelParams& p, const Rational& z, int terms, WeightMode mode) {
  if (terms < 0) throw InvalidParameter("number of terms must be >= 0");
  if (z.sign() < 0) throw InvalidParameter("series argument z must be >= 0");
  const int cap = height_limit(terms, mode);
  // With z folded into the level weights the sweep yields C_k z^k directly.
  const auto scaled = dyck_sweep(level_weights(p, mode, cap, z), terms, cap);
  Rational sum(0);
  for (const auto& term : scaled) sum += term;
  return sum;
}

SeriesEnclosure partial_series_enclosure(const ModelParams& p, const Rational& z, int terms, WeightMode mode,
                                         int fraction_bits) {
  if (terms < 0) throw InvalidParameter("number of terms must be >= 0");
  if (z.sign() < 0) throw InvalidParameter("series argument z must be >= 0");
  if (fraction_bits < 1) throw InvalidParameter("fraction_bits must be >= 1");
  const int cap = height_limit(terms, mode);
  const auto w = level_weights(p, mode, cap, z);
  const auto lo = dyck_sweep_fixed(w, terms, cap, fraction_bits, false);
  const auto hi = dyck_sweep_fixed(w, terms, cap, fraction_bits, true);

  const mpz_class scale = mpz_class(1) << fraction_bits;
  SeriesEnclosure out;
  mpz_class sum_lo = 0;
  mpz_class sum_hi = 0;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    out.terms.push_back({Rational(lo[k], scale), Rational(hi[k], scale)});
    sum_lo += lo[k];
    sum_hi += hi[k];
  }
  out.sum = {Rational(sum_lo, scale), Rational(sum_hi, scale)};
  return out;
}

mpz_class catalan_number(int k) {
  if (k < 0) throw InvalidParameter("k must be >= 0");
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), 2 * static_cast<unsigned long>(k), static_cast<unsigned long>(k));
  return c / (k + 1);
}

}  // namespace ced
