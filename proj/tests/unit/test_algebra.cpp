#include <gtest/gtest.h>

#include <random>
#include <set>

#include "primhom/algebra.hpp"
#include "primhom/errors.hpp"
#include "test_support.hpp"

namespace primhom {
namespace {

using testing::naive_product;
using testing::random_element;
using testing::random_unit_element;
using testing::small_specs;

AlgElement parse(const AlgebraSpec& s, const char* text) { return AlgElement::parse(s, text); }

TEST(Multiplication, AdjacentPairVanishesInM) {
  const auto m = AlgebraSpec::m_trunc(3, 1, 2);
  EXPECT_TRUE((parse(m, "X1") * parse(m, "Y1")).is_zero());
  EXPECT_TRUE((parse(m, "Y1") * parse(m, "X1")).is_zero());
  EXPECT_EQ((parse(m, "X1") * parse(m, "Y2")).to_string(), "X1.Y2");
}

TEST(Multiplication, QuaternionHamiltonTable) {
  const auto h = AlgebraSpec::quat_trunc(3, 1);
  const AlgElement Ai = parse(h, "A.i"), Bj = parse(h, "B.j");
  EXPECT_EQ(Ai * Bj, parse(h, "A.B.k"));
  EXPECT_EQ(Bj * Ai, parse(h, "2*A.B.k"));
  EXPECT_TRUE((parse(h, "B") * parse(h, "B")).is_zero());
  // A^D B is killed
  EXPECT_TRUE((parse(h, "A^3") * parse(h, "B")).is_zero());
  EXPECT_FALSE((parse(h, "A^2") * parse(h, "B")).is_zero());
}

TEST(Multiplication, QuaternionUnitTableIsHamilton) {
  const QuatUnit units[4] = {QuatUnit::One, QuatUnit::I, QuatUnit::J, QuatUnit::K};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const auto got = quat_multiply(units[a], units[b]);
      const auto [sign, unit] = testing::hamilton(a, b);
      EXPECT_EQ(static_cast<int>(got.unit), unit);
      EXPECT_EQ(got.negative, sign < 0);
    }
}

TEST(Multiplication, SpecMismatchIsRejected) {
  const auto a = AlgebraSpec::free_trunc(3, 1, 2), b = AlgebraSpec::sorted_trunc(3, 1, 2);
  try {
    (void)(AlgElement::one(a) * AlgElement::one(b));
    FAIL() << "expected SpecMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpecMismatch);
  }
}

TEST(Multiplication, AgreesWithSchoolbookProduct) {
  std::mt19937_64 rng(11);
  for (const auto& spec : small_specs()) {
    for (int i = 0; i < 300; ++i) {
      const AlgElement a = random_element(spec, rng, 1 + static_cast<int>(rng() % 8));
      const AlgElement b = random_element(spec, rng, 1 + static_cast<int>(rng() % 8));
      ASSERT_EQ(a * b, naive_product(a, b)) << spec.describe() << ": " << a.to_string() << " * " << b.to_string();
    }
  }
}

TEST(RingAxioms, AssociativityAndDistributivity) {
  std::mt19937_64 rng(12);
  std::size_t cases = 0;
  for (const auto& spec : small_specs()) {
    for (int i = 0; i < 10'000; ++i) {
      const AlgElement a = random_element(spec, rng, 4), b = random_element(spec, rng, 4),
                       c = random_element(spec, rng, 4);
      ASSERT_EQ((a * b) * c, a * (b * c)) << spec.describe();
      ASSERT_EQ(a * (b + c), a * b + a * c) << spec.describe();
      ASSERT_EQ((a + b) * c, a * c + b * c) << spec.describe();
      ++cases;
    }
  }
  EXPECT_EQ(cases, 10'000 * small_specs().size());
}

TEST(RingAxioms, TruncationSoundness) {
  std::mt19937_64 rng(13);
  for (const auto& spec : small_specs()) {
    for (int i = 0; i < 500; ++i) {
      const AlgElement a = random_element(spec, rng, 3, 1), b = random_element(spec, rng, 3, 1);
      const AlgElement p = a * b;
      if (!p.is_zero()) {
        EXPECT_GE(p.min_degree(), a.min_degree() + b.min_degree());
      }
    }
  }
}

TEST(Inverse, GeometricSeries) {
  const auto f = AlgebraSpec::free_trunc(3, 1, 2);
  EXPECT_EQ(inverse_unit(parse(f, "1 + X1")), parse(f, "1 - X1 + X1^2 - X1^3"));
  EXPECT_EQ(inverse_unit(AlgElement::one(f)), AlgElement::one(f));
}

TEST(Inverse, MAdjacentPairsDropped) {
  const auto m = AlgebraSpec::m_trunc(3, 1, 2);
  const AlgElement u = parse(m, "1 + X1 + Y1");
  const AlgElement inv = inverse_unit(u);
  EXPECT_EQ(u * inv, AlgElement::one(m));
  EXPECT_EQ(graded_part(inv, 2), parse(m, "X1^2 + Y1^2"));
}

TEST(Inverse, RandomUnitsBothSides) {
  std::mt19937_64 rng(14);
  for (const auto& spec : small_specs()) {
    for (int i = 0; i < 1000; ++i) {
      const AlgElement u = random_unit_element(spec, rng, 5);
      const AlgElement v = inverse_unit(u);
      ASSERT_EQ(u * v, AlgElement::one(spec)) << spec.describe() << " " << u.to_string();
      ASSERT_EQ(v * u, AlgElement::one(spec)) << spec.describe() << " " << u.to_string();
    }
  }
}

TEST(Inverse, NonUnitIsRejected) {
  const auto f = AlgebraSpec::free_trunc(3, 1, 2);
  try {
    inverse_unit(parse(f, "2 + X1"));
    FAIL() << "expected NotAUnit";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAUnit);
  }
}

TEST(Power, SpecExamples) {
  const auto f = AlgebraSpec::free_trunc(3, 1, 2);
  EXPECT_EQ(power(parse(f, "1 + X1"), 3), parse(f, "1 + X1^3"));
  // all eight words of length three
  const AlgElement cube = power(parse(f, "1 + X1 + X2"), 3);
  EXPECT_EQ(cube, parse(f, "1 + X1^3 + X1^2.X2 + X1.X2.X1 + X1.X2^2 + X2.X1^2 + X2.X1.X2 + X2^2.X1 + X2^3"));
  const auto s = AlgebraSpec::sorted_trunc(3, 1, 2);
  EXPECT_EQ(power(parse(s, "1 + X1 + X2"), 3), parse(s, "1 + X1^3 + X1^2.X2 + X1.X2^2 + X2^3"));
}

TEST(Power, MatchesRepeatedMultiplication) {
  std::mt19937_64 rng(15);
  for (const auto& spec : small_specs()) {
    const AlgElement u = random_unit_element(spec, rng, 4);
    AlgElement acc = AlgElement::one(spec);
    for (int e = 0; e <= 12; ++e) {
      ASSERT_EQ(power(u, e), acc) << spec.describe() << " e=" << e;
      acc = naive_product(acc, u);
    }
    EXPECT_EQ(power(u, -1), inverse_unit(u));
    EXPECT_EQ(power(u, BigInt(7)), power(u, 7));
  }
}

TEST(FreshmansDream, PowerDependsOnlyOnLinearPart) {
  std::mt19937_64 rng(16);
  for (const auto& spec : small_specs()) {
    const std::int64_t D = spec.degree_bound();
    for (int i = 0; i < 1000; ++i) {
      const AlgElement u = random_unit_element(spec, rng, 6);
      const AlgElement ell = linear_embedding(spec, linear_part(u));
      ASSERT_EQ(power(u, D), AlgElement::one(spec) + power(ell, D)) << spec.describe() << " " << u.to_string();
    }
  }
}

TEST(GradedParts, AugmentationAndLinearPart) {
  const auto f = AlgebraSpec::free_trunc(3, 1, 2);
  EXPECT_EQ(graded_part(parse(f, "1 + X1 + X1.X2"), 2), parse(f, "X1.X2"));
  EXPECT_EQ(augmentation(parse(f, "1 + 2*X1")).value(), 1u);
  EXPECT_EQ(linear_part(parse(f, "1 + 2*X1 + X2 + X1.X2")), (std::vector<std::uint32_t>{2, 1}));
  const auto h = AlgebraSpec::quat_trunc(3, 1);
  EXPECT_EQ(linear_part(parse(h, "1 + A.i + 2*B.j")), (std::vector<std::uint32_t>{0, 1, 0, 0, 0, 0, 2, 0}));
}

TEST(TextFormat, RoundTrip) {
  std::mt19937_64 rng(17);
  for (const auto& spec : small_specs())
    for (int i = 0; i < 200; ++i) {
      const AlgElement a = random_element(spec, rng, 6);
      EXPECT_EQ(AlgElement::parse(spec, a.to_string()), a) << a.to_string();
    }
  const auto f = AlgebraSpec::free_trunc(3, 1, 2);
  EXPECT_EQ(parse(f, "1 + 2*X1 + X1.X2").to_string(), "1 + 2*X1 + X1.X2");
}

TEST(Basis, SizesMatchCounting) {
  // free: sum_{d<=D} n^d; sorted: sum C(d+n-1, n-1); M at (3, k=2, g=2) is 39,365 words of degree <= 9
  EXPECT_EQ(AlgebraSpec::free_trunc(3, 1, 2).basis_size(3), 15);
  EXPECT_EQ(AlgebraSpec::sorted_trunc(3, 1, 2).basis_size(3), 10);
  EXPECT_EQ(AlgebraSpec::m_trunc(3, 2, 2).basis_size(9), 39'365);
  EXPECT_EQ(AlgebraSpec::quat_trunc(3, 1).basis(0, 3).size(), 4u * (4 + 3));
  const auto m = AlgebraSpec::m_trunc(3, 1, 2);
  const auto basis = m.basis(0, 3);
  EXPECT_EQ(basis.size(), static_cast<std::size_t>(m.basis_size(3)));
  for (const auto& mono : basis) EXPECT_TRUE(m.admissible(mono));
}

TEST(Basis, KeysAreInjective) {
  const auto m = AlgebraSpec::m_trunc(3, 1, 2);
  std::set<std::string> keys;
  for (const auto& mono : m.basis(0, 3)) keys.insert(m.serialize(mono));
  EXPECT_EQ(keys.size(), m.basis(0, 3).size());
}

TEST(Specs, RejectBadParameters) {
  EXPECT_THROW(AlgebraSpec::free_trunc(4, 1, 2), Error);
  EXPECT_THROW(AlgebraSpec::m_trunc(2, 1, 2), Error);
  EXPECT_THROW(AlgebraSpec::quat_trunc(2, 1), Error);
  EXPECT_THROW(AlgebraSpec::free_trunc(3, 0, 2), Error);
  EXPECT_NO_THROW(AlgebraSpec::free_trunc(2, 1, 2));
}

}  // namespace
}  // namespace primhom
