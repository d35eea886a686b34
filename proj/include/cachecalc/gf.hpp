#pragma once

#include <cstdint>
#include <stdexcept>

namespace cachecalc::gf {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};

/// Largest modulus we accept; keeps every product of two reduced values
/// inside 64 bits, so the element-wise kernels never need 128-bit math.
inline constexpr std::uint64_t kMaxPrime = 2147483647ULL;  // 2^31 - 1
inline constexpr std::uint64_t kDefaultPrime = kMaxPrime;

bool is_prime(std::uint64_t n);

/// The field modulus is one global per run, fixed before any arithmetic.
/// set_prime validates primality and range and throws ConfigError otherwise.
std::uint64_t prime();
void set_prime(std::uint64_t p);

/// Restores the previous modulus on scope exit (test convenience).
class PrimeScope {
 public:
  explicit PrimeScope(std::uint64_t p) : saved_(prime()) { set_prime(p); }
  ~PrimeScope() { set_prime(saved_); }
  PrimeScope(const PrimeScope&) = delete;
  PrimeScope& operator=(const PrimeScope&) = delete;

 private:
  std::uint64_t saved_;
};

/// An element of F_p. Immutable value semantics; the modulus is the
/// run-global prime.
class Fe {
 public:
  constexpr Fe() : v_(0) {}
  explicit Fe(std::uint64_t v);          // reduces mod p
  static Fe from_raw(std::uint64_t v) {  // v must already be < p
    Fe e;
    e.v_ = v;
    return e;
  }
  static Fe from_signed(long long v);  // reduces, handles negatives

  std::uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  friend Fe operator+(Fe a, Fe b);
  friend Fe operator-(Fe a, Fe b);
  friend Fe operator*(Fe a, Fe b);
  friend bool operator==(Fe a, Fe b) { return a.v_ == b.v_; }
  friend bool operator!=(Fe a, Fe b) { return a.v_ != b.v_; }

  Fe neg() const;
  Fe inverse() const;  // throws DivisionByZero on 0

 private:
  std::uint64_t v_;
};

// Raw-value kernels for hot loops; callers pass the current prime.
inline std::uint64_t add_raw(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}
inline std::uint64_t sub_raw(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}
inline std::uint64_t mul_raw(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return (a * b) % p;
}
std::uint64_t inv_raw(std::uint64_t a, std::uint64_t p);  // throws DivisionByZero

}  // namespace cachecalc::gf
