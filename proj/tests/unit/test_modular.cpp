#include <gtest/gtest.h>

#include <array>

#include "primhom/errors.hpp"
#include "primhom/modular.hpp"

namespace primhom {
namespace {

std::uint64_t exact_binomial(std::uint64_t n, std::uint64_t e) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= e; ++i) out = out * (n - e + i) / i;
  return out;
}

TEST(FieldInverse, SmallValues) {
  EXPECT_EQ(ff_inv(PrimeFieldElem(1, 3)).value(), 1u);
  EXPECT_EQ(ff_inv(PrimeFieldElem(2, 3)).value(), 2u);
  for (std::uint32_t r : {3u, 5u, 7u, 11u, 101u})
    for (std::uint32_t a = 1; a < r; ++a) EXPECT_EQ((PrimeFieldElem(a, r) * ff_inv(PrimeFieldElem(a, r))).value(), 1u);
}

TEST(FieldInverse, ZeroIsRejected) {
  try {
    ff_inv(PrimeFieldElem(0, 5));
    FAIL() << "expected DivisionByZero";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivisionByZero);
  }
}

TEST(FieldElement, ReducesNegativeValues) {
  EXPECT_EQ(PrimeFieldElem(-1, 5).value(), 4u);
  EXPECT_EQ((PrimeFieldElem(3, 5) + PrimeFieldElem(4, 5)).value(), 2u);
  EXPECT_EQ((-PrimeFieldElem(1, 7)).value(), 6u);
  EXPECT_EQ(reduce_mod(-10, 3), 2u);
}

TEST(ZdElement, ArithmeticModSquareFree) {
  const ZdElem a(7, 15), b(11, 15);
  EXPECT_EQ((a + b).value(), 3u);
  EXPECT_EQ((a * b).value(), 2u);
  EXPECT_THROW(ZdElem(1, 12), Error);
}

TEST(CrtCoefficients, ThreeAndFive) {
  const std::array<std::uint32_t, 2> primes{3, 5};
  const auto c = crt_coefficients(primes, 1);
  ASSERT_EQ(c.q.size(), 2u);
  EXPECT_EQ(c.q[0], 100);
  EXPECT_EQ(c.q[1], 126);
  EXPECT_EQ(c.exponent, 930);
  // both congruence families, checked directly
  EXPECT_EQ(c.q[0] % 9, 1);
  EXPECT_EQ(c.q[0] % 25, 0);
  EXPECT_EQ(c.q[1] % 9, 0);
  EXPECT_EQ(c.q[1] % 25, 1);
}

TEST(CrtCoefficients, SinglePrimeIsIdentity) {
  const std::array<std::uint32_t, 1> primes{3};
  const auto c = crt_coefficients(primes, 1);
  EXPECT_EQ(c.q.at(0), 1);
  EXPECT_EQ(c.exponent, 3);
}

TEST(CrtCoefficients, RepeatedPrimeIsInvalid) {
  const std::array<std::uint32_t, 2> primes{3, 3};
  try {
    crt_coefficients(primes, 1);
    FAIL() << "expected InvalidConfig";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
}

TEST(CrtCoefficients, CongruencesForThreePrimes) {
  const std::array<std::uint32_t, 3> primes{3, 5, 7};
  for (int k = 1; k <= 3; ++k) {
    const auto c = crt_coefficients(primes, k);
    BigInt e = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      e += c.q[i] * BigInt(checked_power(primes[i], k));
      for (std::size_t j = 0; j < primes.size(); ++j) {
        const BigInt m = BigInt(checked_power(primes[j], k + 1));
        EXPECT_EQ(c.q[i] % m, i == j ? 1 : 0) << "k=" << k << " i=" << i << " j=" << j;
      }
    }
    EXPECT_EQ(c.exponent, e);
  }
}

TEST(BinomialModR, SpecExamples) {
  EXPECT_EQ(binomial_mod_r(3, 1, 3).value(), 0u);
  EXPECT_EQ(binomial_mod_r(9, 4, 3).value(), 0u);
  EXPECT_EQ(binomial_mod_r(9, 9, 3).value(), 1u);
  EXPECT_THROW(binomial_mod_r(3, 4, 3), Error);
}

TEST(BinomialModR, AgreesWithExactBinomials) {
  for (std::uint32_t r : {2u, 3u, 5u, 7u})
    for (std::uint64_t n = 0; n <= 40; ++n)
      for (std::uint64_t e = 0; e <= n; ++e)
        EXPECT_EQ(binomial_mod_r(n, e, r).value(), exact_binomial(n, e) % r) << n << " choose " << e;
}

TEST(BinomialModR, PrimePowerRowsVanish) {
  for (int k = 1; k <= 3; ++k) {
    const std::uint64_t D = checked_power(3, k);
    for (std::uint64_t e = 1; e < D; ++e) EXPECT_EQ(binomial_mod_r(D, e, 3).value(), 0u);
  }
}

TEST(CatalanModR, MatchesKnownValues) {
  // 1, 1, 2, 5, 14, 42, 132, 429
  const std::array<std::uint32_t, 8> catalan{1, 1, 2, 5, 14, 42, 132, 429};
  for (std::uint32_t r : {3u, 5u, 7u}) {
    const auto c = catalan_mod_r(catalan.size(), r);
    for (std::size_t i = 0; i < catalan.size(); ++i) EXPECT_EQ(c[i], catalan[i] % r);
  }
}

TEST(Primes, SmallPrimeAndSquareFree) {
  EXPECT_TRUE(is_small_prime(2));
  EXPECT_TRUE(is_small_prime(97));
  EXPECT_FALSE(is_small_prime(1));
  EXPECT_FALSE(is_small_prime(91));
  EXPECT_TRUE(is_square_free(15));
  EXPECT_TRUE(is_square_free(30));
  EXPECT_FALSE(is_square_free(18));
}

TEST(ModularHelpers, PowAndMul) {
  EXPECT_EQ(pow_mod(2, 10, 1000003), 1024u);
  const std::uint64_t p = (std::uint64_t{1} << 61) - 1;
  EXPECT_EQ(mul_mod64(p - 1, p - 1, p), 1u);
  EXPECT_EQ(pow_mod64(3, p - 1, p), 1u);
  EXPECT_EQ(inv_mod(4, 7), 2u);
  EXPECT_THROW(checked_power(10, 40), Error);
}

}  // namespace
}  // namespace primhom
