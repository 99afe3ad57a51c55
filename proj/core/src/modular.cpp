#include "primhom/modular.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <utility>

#include "primhom/errors.hpp"

namespace primhom {

bool is_small_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t f = 3; f * f <= n; f += 2)
    if (n % f == 0) return false;
  return true;
}

bool is_square_free(std::uint64_t n) {
  if (n == 0) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      n /= f;
      if (n % f == 0) return false;
    }
  }
  return true;
}

std::uint32_t reduce_mod(std::int64_t a, std::uint32_t r) {
  std::int64_t m = a % static_cast<std::int64_t>(r);
  if (m < 0) m += r;
  return static_cast<std::uint32_t>(m);
}

std::uint32_t pow_mod(std::uint32_t base, std::uint64_t exp, std::uint32_t r) {
  std::uint32_t result = 1 % r;
  base %= r;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, r);
    base = mul_mod(base, base, r);
    exp >>= 1;
  }
  return result;
}

std::uint64_t mul_mod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % m);
}

std::uint64_t pow_mod64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod64(result, base, m);
    base = mul_mod64(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t r) {
  if (a % r == 0) fail(ErrorCode::DivisionByZero, "inverse of 0 mod " + std::to_string(r));
  // extended Euclid; r need not be prime as long as gcd(a, r) = 1
  std::int64_t t = 0, new_t = 1;
  std::int64_t rem = r, new_rem = a % r;
  while (new_rem != 0) {
    std::int64_t quot = rem / new_rem;
    t = std::exchange(new_t, t - quot * new_t);
    rem = std::exchange(new_rem, rem - quot * new_rem);
  }
  if (rem != 1) fail(ErrorCode::DivisionByZero, "element not invertible mod " + std::to_string(r));
  return reduce_mod(t, r);
}

PrimeFieldElem::PrimeFieldElem(std::int64_t value, std::uint32_t modulus) : value_(0), modulus_(modulus) {
  if (!is_small_prime(modulus)) fail(ErrorCode::InvalidConfig, "field modulus must be prime, got " + std::to_string(modulus));
  value_ = reduce_mod(value, modulus);
}

void PrimeFieldElem::check_same(PrimeFieldElem other) const {
  if (other.modulus_ != modulus_) fail(ErrorCode::SpecMismatch, "field elements over different primes");
}

PrimeFieldElem PrimeFieldElem::operator+(PrimeFieldElem other) const {
  check_same(other);
  return {add_mod(value_, other.value_, modulus_), modulus_};
}
PrimeFieldElem PrimeFieldElem::operator-(PrimeFieldElem other) const {
  check_same(other);
  return {sub_mod(value_, other.value_, modulus_), modulus_};
}
PrimeFieldElem PrimeFieldElem::operator*(PrimeFieldElem other) const {
  check_same(other);
  return {mul_mod(value_, other.value_, modulus_), modulus_};
}
PrimeFieldElem PrimeFieldElem::operator-() const { return {neg_mod(value_, modulus_), modulus_}; }

PrimeFieldElem ff_inv(PrimeFieldElem a) {
  if (a.is_zero()) fail(ErrorCode::DivisionByZero, "inverse of 0 in F_" + std::to_string(a.modulus()));
  return {inv_mod(a.value(), a.modulus()), a.modulus()};
}

ZdElem::ZdElem(std::int64_t value, std::uint64_t modulus) : value_(0), modulus_(modulus) {
  if (modulus < 2 || !is_square_free(modulus))
    fail(ErrorCode::InvalidConfig, "Z/d needs square-free d > 1, got " + std::to_string(modulus));
  std::int64_t m = value % static_cast<std::int64_t>(modulus);
  value_ = static_cast<std::uint64_t>(m < 0 ? m + static_cast<std::int64_t>(modulus) : m);
}

ZdElem ZdElem::operator+(ZdElem other) const {
  if (other.modulus_ != modulus_) fail(ErrorCode::SpecMismatch, "Z/d elements with different moduli");
  ZdElem out = *this;
  out.value_ = (value_ + other.value_) % modulus_;
  return out;
}

ZdElem ZdElem::operator*(ZdElem other) const {
  if (other.modulus_ != modulus_) fail(ErrorCode::SpecMismatch, "Z/d elements with different moduli");
  ZdElem out = *this;
  out.value_ = mul_mod64(value_, other.value_, modulus_);
  return out;
}

std::uint64_t checked_power(std::uint64_t r, int k) {
  if (k < 0) fail(ErrorCode::InvalidConfig, "negative exponent");
  std::uint64_t out = 1;
  for (int i = 0; i < k; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / r)
      fail(ErrorCode::InvalidConfig, "r^k overflows 64 bits");
    out *= r;
  }
  return out;
}

namespace {

BigInt inverse_big(const BigInt& a, const BigInt& m) {
  BigInt t = 0, new_t = 1, rem = m, new_rem = a % m;
  while (new_rem != 0) {
    BigInt quot = rem / new_rem;
    BigInt tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = rem - quot * new_rem;
    rem = new_rem;
    new_rem = tmp;
  }
  if (rem != 1) fail(ErrorCode::InvalidConfig, "CRT moduli are not coprime");
  if (t < 0) t += m;
  return t;
}

}  // namespace

CrtCoefficients crt_coefficients(std::span<const std::uint32_t> primes, int k) {
  if (primes.empty()) fail(ErrorCode::InvalidConfig, "CRT needs at least one prime");
  if (k < 1) fail(ErrorCode::InvalidConfig, "CRT needs k >= 1");
  std::set<std::uint32_t> seen;
  for (auto p : primes) {
    if (!is_small_prime(p)) fail(ErrorCode::InvalidConfig, std::to_string(p) + " is not prime");
    if (!seen.insert(p).second) fail(ErrorCode::InvalidConfig, "repeated prime " + std::to_string(p));
  }

  std::vector<BigInt> moduli;
  BigInt total = 1;
  for (auto p : primes) {
    BigInt m = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k + 1));
    moduli.push_back(m);
    total *= m;
  }

  CrtCoefficients out;
  out.modulus = total;
  out.exponent = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    BigInt cofactor = total / moduli[i];
    BigInt q = cofactor * inverse_big(cofactor % moduli[i], moduli[i]) % total;
    out.exponent += q * boost::multiprecision::pow(BigInt(primes[i]), static_cast<unsigned>(k));
    out.q.push_back(std::move(q));
  }
  return out;
}

PrimeFieldElem binomial_mod_r(std::uint64_t n, std::uint64_t e, std::uint32_t r) {
  if (e > n) fail(ErrorCode::InvalidConfig, "binomial lower index exceeds upper index");
  if (!is_small_prime(r)) fail(ErrorCode::InvalidConfig, "binomial modulus must be prime");
  // factorials below r are invertible mod r
  std::vector<std::uint32_t> fact(r, 1);
  for (std::uint32_t i = 1; i < r; ++i) fact[i] = mul_mod(fact[i - 1], i, r);
  std::uint32_t result = 1 % r;
  while (n > 0 || e > 0) {
    auto nd = static_cast<std::uint32_t>(n % r);
    auto ed = static_cast<std::uint32_t>(e % r);
    if (ed > nd) return {0, r};
    std::uint32_t digit = mul_mod(fact[nd], inv_mod(mul_mod(fact[ed], fact[nd - ed], r), r), r);
    result = mul_mod(result, digit, r);
    n /= r;
    e /= r;
  }
  return {result, r};
}

std::vector<std::uint32_t> catalan_mod_r(std::size_t count, std::uint32_t r) {
  std::vector<std::uint32_t> c(count, 0);
  if (count == 0) return c;
  c[0] = 1 % r;
  for (std::size_t m = 1; m < count; ++m) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < m; ++i) acc = (acc + std::uint64_t{c[i]} * c[m - 1 - i]) % r;
    c[m] = static_cast<std::uint32_t>(acc);
  }
  return c;
}

std::string to_string(const BigInt& value) { return value.str(); }

}  // namespace primhom
