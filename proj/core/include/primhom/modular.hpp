#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace primhom {

using BigInt = boost::multiprecision::cpp_int;
using uint128 = unsigned __int128;

/// Trial-division primality for the small moduli used as field sizes.
bool is_small_prime(std::uint64_t n);

bool is_square_free(std::uint64_t n);

/// Element of F_r.  The value is always the reduced representative.
class PrimeFieldElem {
 public:
  PrimeFieldElem(std::int64_t value, std::uint32_t modulus);

  std::uint32_t value() const noexcept { return value_; }
  std::uint32_t modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return value_ == 0; }

  PrimeFieldElem operator+(PrimeFieldElem other) const;
  PrimeFieldElem operator-(PrimeFieldElem other) const;
  PrimeFieldElem operator*(PrimeFieldElem other) const;
  PrimeFieldElem operator-() const;

  friend bool operator==(PrimeFieldElem, PrimeFieldElem) = default;

 private:
  void check_same(PrimeFieldElem other) const;

  std::uint32_t value_;
  std::uint32_t modulus_;
};

/// Element of Z/d for square-free d > 1.
class ZdElem {
 public:
  ZdElem(std::int64_t value, std::uint64_t modulus);

  std::uint64_t value() const noexcept { return value_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return value_ == 0; }

  ZdElem operator+(ZdElem other) const;
  ZdElem operator*(ZdElem other) const;

  friend bool operator==(ZdElem, ZdElem) = default;

 private:
  std::uint64_t value_;
  std::uint64_t modulus_;
};

// Raw helpers on reduced representatives; r must fit in 32 bits.
inline std::uint32_t add_mod(std::uint32_t a, std::uint32_t b, std::uint32_t r) {
  std::uint64_t s = std::uint64_t{a} + b;
  return static_cast<std::uint32_t>(s >= r ? s - r : s);
}
inline std::uint32_t sub_mod(std::uint32_t a, std::uint32_t b, std::uint32_t r) {
  return a >= b ? a - b : static_cast<std::uint32_t>(std::uint64_t{a} + r - b);
}
inline std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t r) {
  return static_cast<std::uint32_t>(std::uint64_t{a} * b % r);
}
inline std::uint32_t neg_mod(std::uint32_t a, std::uint32_t r) { return a == 0 ? 0 : r - a; }
std::uint32_t reduce_mod(std::int64_t a, std::uint32_t r);
std::uint32_t pow_mod(std::uint32_t base, std::uint64_t exp, std::uint32_t r);
std::uint64_t mul_mod64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

PrimeFieldElem ff_inv(PrimeFieldElem a);
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t r);

/// r^k, throwing InvalidConfig when it does not fit in 64 bits.
std::uint64_t checked_power(std::uint64_t r, int k);

struct CrtCoefficients {
  std::vector<BigInt> q;  ///< q_i = 1 mod r_i^(k+1), 0 mod r_j^(k+1) for j != i
  BigInt exponent;        ///< e = sum_i q_i r_i^k
  BigInt modulus;         ///< prod_i r_i^(k+1)
};

/// Idempotent CRT lifts for distinct primes sharing the exponent k.
CrtCoefficients crt_coefficients(std::span<const std::uint32_t> primes, int k);

/// C(n, e) mod r via Lucas' theorem.
PrimeFieldElem binomial_mod_r(std::uint64_t n, std::uint64_t e, std::uint32_t r);

/// Catalan numbers C_0 .. C_{count-1} reduced mod r, from the convolution
/// recurrence C_{m+1} = sum_i C_i C_{m-i} (no division needed).
std::vector<std::uint32_t> catalan_mod_r(std::size_t count, std::uint32_t r);

std::string to_string(const BigInt& value);

}  // namespace primhom
