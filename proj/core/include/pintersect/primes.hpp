#pragma once

// Sieving, ψ(X, a, q), and the prime weights ν_d / Ψ_d attached to an auxiliary polynomial.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "pintersect/arith.hpp"
#include "pintersect/intersective.hpp"

namespace pintersect {

/// Primes up to `limit`, stored as an odd-only bitmap plus the sorted list.
class PrimeTable {
 public:
  PrimeTable() = default;
  /// Segmented sieve of Eratosthenes; memory O(sqrt(limit) + segment) beyond the output.
  explicit PrimeTable(u64 limit);

  u64 limit() const noexcept { return limit_; }
  const std::vector<u64>& primes() const noexcept { return primes_; }
  /// Throws TableTooSmall when n > limit.
  bool is_prime(u64 n) const;

  /// Binary cache: "PSIV", u32 version, u64 limit (little-endian), then one bit
  /// per odd integer (bit i is 2i + 1), least significant bit first.
  void save(const std::filesystem::path& path) const;
  static PrimeTable load(const std::filesystem::path& path);

 private:
  void rebuild_list();

  u64 limit_ = 0;
  std::vector<std::uint8_t> odd_bits_;
  std::vector<u64> primes_;
};

PrimeTable sieve(u64 limit);

/// Process-wide table covering at least `limit`; grows on demand and honours
/// the PINTERSECT_CACHE directory when set.
std::shared_ptr<const PrimeTable> shared_primes(u64 limit);

/// Σ log p over primes p <= X with p ≡ a (mod q).
double psi(const PrimeTable& table, u64 X, i64 a, u64 q);
double psi(u64 X, i64 a, u64 q);

/// ψ(X, a, q) for every X in [0, x_max].
std::vector<double> psi_cumulative(const PrimeTable& table, u64 x_max, i64 a, u64 q);

struct WeightedPrimes {
  u64 d = 1;
  u64 L = 0;
  u64 s = 0;
  std::vector<u64> H;
  long double M = 0;
  u64 M_floor = 0;
  std::size_t symdiff = 0;
  u64 range = 0;               // ν is tabulated on [0, range]
  std::vector<double> nu;      // nu[x] = ν_d(x)
  BigRational weight;          // φ(d)/d
  double psi_total = 0;        // Σ_{x <= ⌊M⌋} ν_d(x), assembled from ψ
  double psi_real_argument = 0;  // (φ(d)/d) ψ(⌊d M⌋, r_d, d), the untruncated form
  double nu_sum_H = 0;         // Σ_{x ∈ H} ν_d(x)
  double max_nu = 0;

  bool in_lambda(u64 x) const { return x < nu.size() && nu[x] > 0; }
};

WeightedPrimes weighted_primes(const AuxData& aux, u64 L, u64 s, const PrimeTable& table);
WeightedPrimes weighted_primes(const AuxData& aux, u64 L, u64 s);

/// Ψ_d >= c M_d / q0, or Ψ_d >= c (1 − ρ) M_d when ρ is supplied.
bool psi_lower_check(const WeightedPrimes& wp, u64 q0, double c, std::optional<double> rho = std::nullopt);

}  // namespace pintersect
