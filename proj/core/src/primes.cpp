#include "pintersect/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "pintersect/errors.hpp"

namespace pintersect {

namespace {

constexpr char kMagic[4] = {'P', 'S', 'I', 'V'};
constexpr std::uint32_t kVersion = 1;
constexpr u64 kSegmentOdds = u64{1} << 18;

void put_le(std::ostream& os, u64 v, int bytes) {
  for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

u64 get_le(std::istream& is, int bytes) {
  u64 v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = is.get();
    if (c == EOF) throw std::runtime_error("prime cache: truncated header");
    v |= static_cast<u64>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

i64 residue_of(i64 a, u64 q) { return static_cast<i64>(reduce_signed(a, q)); }

}  // namespace

PrimeTable::PrimeTable(u64 limit) : limit_(limit) {
  const u64 n_odd = (limit + 1) / 2;  // odd integers 1, 3, ..., <= limit
  odd_bits_.assign((n_odd + 7) / 8, 0xFF);
  auto clear = [this](u64 i) { odd_bits_[i >> 3] &= static_cast<std::uint8_t>(~(1U << (i & 7))); };
  if (n_odd > 0) clear(0);  // 1 is not prime
  for (u64 i = n_odd; i < odd_bits_.size() * 8; ++i) clear(i);

  u64 root = static_cast<u64>(std::sqrt(static_cast<long double>(limit)));
  while (root * root > limit) --root;
  while ((root + 1) * (root + 1) <= limit) ++root;
  std::vector<bool> small(root + 1, true);
  std::vector<u64> base;
  for (u64 i = 3; i <= root; i += 2) {
    if (!small[i]) continue;
    base.push_back(i);
    for (u64 j = i * i; j <= root; j += 2 * i) small[j] = false;
  }

  for (u64 lo = 0; lo < n_odd; lo += kSegmentOdds) {
    const u64 hi = std::min(n_odd, lo + kSegmentOdds);  // odd indices [lo, hi)
    const u64 first_val = 2 * lo + 1;
    const u64 last_val = 2 * (hi - 1) + 1;
    for (u64 p : base) {
      if (p * p > last_val) break;
      u64 start = std::max(p * p, (first_val + p - 1) / p * p);
      if ((start & 1U) == 0) start += p;
      for (u64 v = start; v <= last_val; v += 2 * p) clear(v >> 1);
    }
  }
  rebuild_list();
}

void PrimeTable::rebuild_list() {
  primes_.clear();
  if (limit_ >= 2) primes_.push_back(2);
  const u64 n_odd = (limit_ + 1) / 2;
  for (u64 i = 1; i < n_odd; ++i)
    if (odd_bits_[i >> 3] >> (i & 7) & 1U) primes_.push_back(2 * i + 1);
}

bool PrimeTable::is_prime(u64 n) const {
  if (n > limit_) throw TableTooSmall(n, limit_);
  if (n < 2) return false;
  if (n == 2) return true;
  if ((n & 1U) == 0) return false;
  const u64 i = n >> 1;
  return (odd_bits_[i >> 3] >> (i & 7)) & 1U;
}

void PrimeTable::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("prime cache: cannot write " + path.string());
  os.write(kMagic, 4);
  put_le(os, kVersion, 4);
  put_le(os, limit_, 8);
  os.write(reinterpret_cast<const char*>(odd_bits_.data()), static_cast<std::streamsize>(odd_bits_.size()));
  if (!os) throw std::runtime_error("prime cache: write failed for " + path.string());
}

PrimeTable PrimeTable::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("prime cache: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("prime cache: bad magic");
  if (get_le(is, 4) != kVersion) throw std::runtime_error("prime cache: unsupported version");
  PrimeTable t;
  t.limit_ = get_le(is, 8);
  const u64 n_odd = (t.limit_ + 1) / 2;
  t.odd_bits_.resize((n_odd + 7) / 8);
  is.read(reinterpret_cast<char*>(t.odd_bits_.data()), static_cast<std::streamsize>(t.odd_bits_.size()));
  if (!is) throw std::runtime_error("prime cache: truncated bitmap");
  t.rebuild_list();
  return t;
}

PrimeTable sieve(u64 limit) {
  if (limit < 2) throw std::invalid_argument("sieve: limit must be >= 2");
  return PrimeTable(limit);
}

std::shared_ptr<const PrimeTable> shared_primes(u64 limit) {
  static std::mutex mu;
  static std::shared_ptr<const PrimeTable> current;
  std::lock_guard<std::mutex> lock(mu);
  if (current && current->limit() >= limit) return current;

  u64 target = std::max<u64>(limit, u64{1} << 20);
  if (current) target = std::max(target, 2 * current->limit());

  std::filesystem::path cache;
  if (const char* dir = std::getenv("PINTERSECT_CACHE"); dir != nullptr && *dir != '\0')
    cache = std::filesystem::path(dir) / "primes.psiv";
  if (!cache.empty() && std::filesystem::exists(cache)) {
    try {
      auto loaded = std::make_shared<const PrimeTable>(PrimeTable::load(cache));
      if (loaded->limit() >= limit) {
        current = std::move(loaded);
        return current;
      }
    } catch (const std::exception&) {
      // Unreadable cache: fall through and rebuild it.
    }
  }
  current = std::make_shared<const PrimeTable>(target);
  if (!cache.empty()) {
    try {
      std::filesystem::create_directories(cache.parent_path());
      const auto tmp = cache.string() + ".tmp";
      current->save(tmp);
      std::filesystem::rename(tmp, cache);
    } catch (const std::exception&) {
      // The cache is an optimisation only.
    }
  }
  return current;
}

double psi(const PrimeTable& table, u64 X, i64 a, u64 q) {
  if (q == 0) throw std::invalid_argument("psi: q must be positive");
  if (X > table.limit()) throw TableTooSmall(X, table.limit());
  const i64 r = residue_of(a, q);
  const auto& ps = table.primes();
  const auto end = std::upper_bound(ps.begin(), ps.end(), X);
  long double acc = 0;
  for (auto it = ps.begin(); it != end; ++it)
    if (static_cast<i64>(*it % q) == r) acc += std::log(static_cast<long double>(*it));
  return static_cast<double>(acc);
}

double psi(u64 X, i64 a, u64 q) { return psi(*shared_primes(X), X, a, q); }

std::vector<double> psi_cumulative(const PrimeTable& table, u64 x_max, i64 a, u64 q) {
  if (q == 0) throw std::invalid_argument("psi_cumulative: q must be positive");
  if (x_max > table.limit()) throw TableTooSmall(x_max, table.limit());
  const i64 r = residue_of(a, q);
  std::vector<double> out(x_max + 1, 0.0);
  long double acc = 0;
  const auto& ps = table.primes();
  std::size_t idx = 0;
  for (u64 x = 0; x <= x_max; ++x) {
    while (idx < ps.size() && ps[idx] == x) {
      if (static_cast<i64>(x % q) == r) acc += std::log(static_cast<long double>(x));
      ++idx;
    }
    out[x] = static_cast<double>(acc);
  }
  return out;
}

WeightedPrimes weighted_primes(const AuxData& aux, u64 L, u64 s, const PrimeTable& table) {
  WeightedPrimes wp;
  const HRange hr = h_range(aux, L, s);
  wp.d = aux.d;
  wp.L = L;
  wp.s = s;
  wp.H = hr.H;
  wp.M = hr.M;
  wp.M_floor = hr.M_floor;
  wp.symdiff = hr.symdiff;
  wp.range = std::max<u64>(hr.H.empty() ? 0 : hr.H.back(), hr.M_floor);

  const i64 r = aux.r_d.get_si();
  const u64 d = aux.d;
  const u64 top = static_cast<u64>(std::max<i64>(2, r + static_cast<i64>(d * wp.range)));
  const u64 real_arg = static_cast<u64>(std::floor(static_cast<long double>(d) * hr.M));
  const u64 need = std::max({top, real_arg, u64{2}});
  if (need > table.limit()) throw TableTooSmall(need, table.limit());

  wp.weight = BigRational(BigInt(static_cast<unsigned long>(euler_phi(d))), BigInt(static_cast<unsigned long>(d)));
  wp.weight.canonicalize();
  const double w = wp.weight.get_d();

  wp.nu.assign(wp.range + 1, 0.0);
  for (u64 x = 1; x <= wp.range; ++x) {
    const i64 n = r + static_cast<i64>(d * x);
    if (n >= 2 && table.is_prime(static_cast<u64>(n))) wp.nu[x] = w * std::log(static_cast<double>(n));
  }

  const i64 res = residue_of(r, d);
  const i64 arg = r + static_cast<i64>(d * wp.M_floor);
  wp.psi_total = arg >= 2 ? w * psi(table, static_cast<u64>(arg), res, d) : 0.0;
  wp.psi_real_argument = real_arg >= 2 ? w * psi(table, real_arg, res, d) : 0.0;

  long double direct = 0;
  for (u64 x = 1; x <= wp.M_floor; ++x) direct += wp.nu[x];
  if (std::fabs(static_cast<double>(direct) - wp.psi_total) > 1e-9 * std::max(1.0, wp.psi_total))
    throw InternalError("weighted_primes: ν sum disagrees with ψ");

  long double on_h = 0;
  for (u64 x : wp.H) on_h += wp.nu[x];
  wp.nu_sum_H = static_cast<double>(on_h);
  wp.max_nu = wp.nu.empty() ? 0.0 : *std::max_element(wp.nu.begin(), wp.nu.end());
  return wp;
}

WeightedPrimes weighted_primes(const AuxData& aux, u64 L, u64 s) {
  // The needed limit is only known after H is built; grow until it fits.
  u64 guess = 1u << 20;
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      return weighted_primes(aux, L, s, *shared_primes(guess));
    } catch (const TableTooSmall& e) {
      guess = std::max(guess * 2, e.needed());
    }
  }
  throw InternalError("weighted_primes: prime table kept growing");
}

bool psi_lower_check(const WeightedPrimes& wp, u64 q0, double c, std::optional<double> rho) {
  if (q0 == 0) throw std::invalid_argument("psi_lower_check: q0 must be positive");
  const double M = static_cast<double>(wp.M);
  const double threshold = rho ? c * (1.0 - *rho) * M : c * M / static_cast<double>(q0);
  return wp.psi_total >= threshold;
}

}  // namespace pintersect
