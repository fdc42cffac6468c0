#pragma once

#include <string_view>
#include <vector>

#include "ced/params.hpp"
#include "ced/rational.hpp"

namespace ced {

/// Which step weights a Dyck path is scored with.
///
///  - Exact: u(j) = lambda/(1+lambda+(j+1)rho), v(j) = 1/(1+lambda+(j+2)rho).
///  - HeightCapped(m): u(j), v(j) for j <= m and 0 above (lower bound).
///  - Flattened(m): u(j), v(j) for j < m and u(m), v(m) from m on (upper bound).
///
/// A rise from height j carries u(j); a fall from j+1 to j carries v(j).
struct WeightMode {
  enum class Kind { Exact, HeightCapped, Flattened };

  Kind kind = Kind::Exact;
  int m = 0;

  static WeightMode exact() { return {}; }
  static WeightMode height_capped(int m);
  static WeightMode flattened(int m);

  /// "exact", "capped:<m>" or "flat:<m>".
  static WeightMode parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const WeightMode&, const WeightMode&) = default;
};

/// Rise/fall weights u(0..n-1), v(0..n-1) for one parameter point and mode.
class WeightTable {
 public:
  WeightTable(const ModelParams& p, WeightMode mode, int levels);

  const Rational& u(int j) const { return u_.at(static_cast<std::size_t>(j)); }
  const Rational& v(int j) const { return v_.at(static_cast<std::size_t>(j)); }
  int levels() const { return static_cast<int>(u_.size()); }
  WeightMode mode() const { return mode_; }

 private:
  WeightMode mode_;
  std::vector<Rational> u_;
  std::vector<Rational> v_;
};

struct CatalanValue {
  int k = 0;
  Rational value;
};

/// Sum of path weights over all Dyck paths of length 2k, by dynamic
/// programming over (step, height). Never enumerates paths.
CatalanValue weighted_catalan(const ModelParams& p, int k, WeightMode mode = WeightMode::exact());

/// C_0, ..., C_kmax in a single O(kmax^2) sweep.
std::vector<Rational> weighted_catalan_sequence(const ModelParams& p, int kmax,
                                                WeightMode mode = WeightMode::exact());

/// Largest k accepted by the enumeration oracle (C_12 = 208012 paths).
inline constexpr int kBruteforceMaxK = 12;

/// Enumerates every Dyck path of length 2k and sums their weights exactly.
/// Oracle for weighted_catalan; refuses k > kBruteforceMaxK.
CatalanValue weighted_catalan_bruteforce(const ModelParams& p, int k,
                                         WeightMode mode = WeightMode::exact());

/// Weight of one path written as a string of 'U' (rise) and 'D' (fall).
/// Throws InvalidParameter if the string is not a nonnegative lattice path.
Rational dyck_path_weight(const WeightTable& weights, std::string_view path);

/// sum_{k=0}^{terms} C_k z^k, exactly.
Rational partial_series(const ModelParams& p, const Rational& z, int terms,
                        WeightMode mode = WeightMode::exact());

struct SeriesEnclosure {
  /// Encloses sum_{k=0}^{terms} C_k z^k.
  Enclosure sum;
  /// terms[k] encloses C_k z^k.
  std::vector<Enclosure> terms;
};

/// Same sum as partial_series, enclosed by two fixed-point sweeps rounded
/// down and up. All weights are nonnegative, so directed rounding of every
/// product gives certified bounds. Use it where exact denominators get too
/// large (a few hundred terms). Width grows roughly like terms^2 * 2^-bits
/// times the size of the sum.
SeriesEnclosure partial_series_enclosure(const ModelParams& p, const Rational& z, int terms,
                                         WeightMode mode = WeightMode::exact(), int fraction_bits = 256);

/// Ordinary Catalan number binom(2k, k)/(k+1).
mpz_class catalan_number(int k);

}  // namespace ced
