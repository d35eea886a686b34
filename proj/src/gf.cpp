#include "cachecalc/gf.hpp"

namespace cachecalc::gf {

namespace {

std::uint64_t g_prime = kDefaultPrime;

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t acc = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) acc = (acc * base) % mod;
    base = (base * base) % mod;
    exp >>= 1;
  }
  return acc;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  // Deterministic Miller-Rabin; the witness set covers all n < 3.2e18,
  // far beyond the accepted modulus range.
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = (x * x) % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t prime() { return g_prime; }

void set_prime(std::uint64_t p) {
  if (p < 2 || p > kMaxPrime)
    throw ConfigError("field modulus out of range [2, 2^31-1]: " + std::to_string(p));
  if (!is_prime(p)) throw ConfigError("field modulus is not prime: " + std::to_string(p));
  g_prime = p;
}

Fe::Fe(std::uint64_t v) : v_(v % g_prime) {}

Fe Fe::from_signed(long long v) {
  long long m = static_cast<long long>(g_prime);
  long long r = v % m;
  if (r < 0) r += m;
  return from_raw(static_cast<std::uint64_t>(r));
}

Fe operator+(Fe a, Fe b) { return Fe::from_raw(add_raw(a.v_, b.v_, g_prime)); }
Fe operator-(Fe a, Fe b) { return Fe::from_raw(sub_raw(a.v_, b.v_, g_prime)); }
Fe operator*(Fe a, Fe b) { return Fe::from_raw(mul_raw(a.v_, b.v_, g_prime)); }

Fe Fe::neg() const { return v_ == 0 ? *this : Fe::from_raw(g_prime - v_); }

Fe Fe::inverse() const { return Fe::from_raw(inv_raw(v_, g_prime)); }

std::uint64_t inv_raw(std::uint64_t a, std::uint64_t p) {
  if (a == 0) throw DivisionByZero("inverse of zero in F_p");
  // extended Euclid on signed 64-bit; fine since p < 2^31
  long long t = 0, new_t = 1;
  long long r = static_cast<long long>(p), new_r = static_cast<long long>(a);
  while (new_r != 0) {
    long long q = r / new_r;
    long long tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += static_cast<long long>(p);
  return static_cast<std::uint64_t>(t);
}

}  // namespace cachecalc::gf
