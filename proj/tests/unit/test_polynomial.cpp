#include <gtest/gtest.h>

#include <set>

#include "primhom/errors.hpp"
#include "primhom/modular.hpp"
#include "primhom/polynomial.hpp"

namespace primhom {
namespace {

/// Independent expansion of the recursion:
/// P_n = Σ_{T nonempty} (-1)^(|T|-1) a_{min T} Π_{l ∈ T, l > min T} a_l^(r-1).
NvPoly closed_form(std::uint32_t r, int n) {
  NvPoly p(n, r);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Exponents e(n, 0);
    int first = -1, size = 0;
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      ++size;
      if (first < 0) {
        first = i;
        e[i] = 1;
      } else {
        e[i] = r - 1;
      }
    }
    p.add_term(e, size % 2 == 1 ? 1 : -1);
  }
  return p;
}

/// Calls fn on every point of F_r^n.
template <class Fn>
void for_each_point(std::uint32_t r, int n, Fn&& fn) {
  std::vector<std::uint32_t> x(n, 0);
  for (;;) {
    fn(x);
    int i = 0;
    while (i < n && ++x[i] == r) x[i++] = 0;
    if (i == n) return;
  }
}

Exponents ex(std::initializer_list<std::uint32_t> v) { return Exponents(v); }

TEST(MinimalK, SpecExamples) {
  EXPECT_EQ(minimal_k(3, 2), 1);
  EXPECT_EQ(minimal_k(3, 4), 2);
  EXPECT_EQ(minimal_k(3, 1), 1);
  EXPECT_EQ(minimal_k(5, 6), 2);  // 25 > 20
  EXPECT_EQ(minimal_k(2, 3), 2);  // 4 > 2
}

TEST(Construction, RawRecursionMatchesClosedForm) {
  for (std::uint32_t r : {2u, 3u, 5u, 7u})
    for (int n = 1; n <= 5; ++n) EXPECT_EQ(build_nonvanishing_raw(r, n), closed_form(r, n)) << "r=" << r << " n=" << n;
}

TEST(Construction, SmallestFreeCase) {
  const NvPoly p = build_nonvanishing(3, 2, 1);
  NvPoly expected(2, 3);
  expected.add_term(ex({3, 0}), 1);
  expected.add_term(ex({1, 2}), -1);
  expected.add_term(ex({0, 3}), 1);
  EXPECT_EQ(p, expected);
  EXPECT_EQ(p.to_string(), "a1^3 + 2*a1.a2^2 + a2^3");
}

TEST(Construction, FirstStepEqualsSecondVariableWhenNonzero) {
  const NvPoly p1 = build_nonvanishing_raw(3, 2);
  for (std::uint32_t a1 = 0; a1 < 3; ++a1)
    for (std::uint32_t a2 = 0; a2 < 3; ++a2) {
      const std::vector<std::uint32_t> pt{a1, a2};
      EXPECT_EQ(p1.evaluate(pt), a2 != 0 ? a2 : a1);
    }
}

TEST(Construction, DegreeTooSmallIsInvalid) {
  for (auto [r, n, k] : {std::tuple{3u, 2, 0}, std::tuple{3u, 4, 1}, std::tuple{5u, 7, 1}}) {
    try {
      build_nonvanishing(r, n, k);
      FAIL() << "expected InvalidConfig";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
    }
  }
}

TEST(Homogenization, PreservesValuesDegreeAndResidues) {
  for (std::uint32_t r : {2u, 3u, 5u, 7u}) {
    for (int n = 1; n <= 4; ++n) {
      const int k = minimal_k(r, n);
      const NvPoly raw = build_nonvanishing_raw(r, n);
      const NvPoly hom = build_nonvanishing(r, n, k);
      const std::uint64_t D = checked_power(r, k);
      ASSERT_TRUE(hom.is_homogeneous());
      ASSERT_EQ(hom.degree(), D);
      for_each_point(r, n, [&](const std::vector<std::uint32_t>& x) {
        ASSERT_EQ(raw.evaluate(x), hom.evaluate(x)) << "r=" << r << " n=" << n;
      });
      // every output monomial comes from a raw monomial with the same
      // support and the same exponents mod r-1
      std::set<std::vector<std::uint32_t>> raw_patterns;
      auto pattern = [r](const Exponents& e) {
        std::vector<std::uint32_t> out;
        for (auto x : e) out.push_back(x == 0 ? 0 : 1 + (r > 2 ? x % (r - 1) : 0));
        return out;
      };
      for (const auto& [e, c] : raw.terms()) raw_patterns.insert(pattern(e));
      for (const auto& [e, c] : hom.terms()) EXPECT_TRUE(raw_patterns.count(pattern(e))) << "r=" << r;
    }
  }
}

TEST(Homogenization, NoTwoVariableMonomialWithBadResidues) {
  for (std::uint32_t r : {5u, 7u}) {
    for (int n = 2; n <= 5; ++n) {
      const NvPoly p = build_nonvanishing(r, n, minimal_k(r, n));
      for (const auto& [e, c] : p.terms()) {
        std::vector<std::uint32_t> nz;
        for (auto x : e)
          if (x) nz.push_back(x % (r - 1));
        if (nz.size() != 2) continue;
        // one exponent is 1 and the other 0 mod r-1, as in a_i a_l^(r-1)
        const bool ok = (nz[0] == 0 && nz[1] == 1) || (nz[0] == 1 && nz[1] == 0);
        EXPECT_TRUE(ok) << p.to_string();
      }
    }
  }
}

TEST(Nonvanishing, BruteForce) {
  EXPECT_TRUE(verify_nonvanishing(build_nonvanishing(3, 2, 1)).pass);
  const auto report = verify_nonvanishing(build_nonvanishing(3, 4, 2));
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.points_checked, 80u);
  for (std::uint32_t r : {2u, 3u, 5u, 7u})
    for (int n = 1; n <= 5; ++n) {
      if (checked_power(r, n) > 200'000) continue;
      EXPECT_TRUE(verify_nonvanishing(build_nonvanishing(r, n, minimal_k(r, n))).pass) << r << " " << n;
    }
}

TEST(Nonvanishing, ReportsFirstZero) {
  NvPoly p(2, 3);
  p.add_term(ex({1, 1}), 1);
  const auto report = verify_nonvanishing(p);
  EXPECT_FALSE(report.pass);
  ASSERT_TRUE(report.zero_at.has_value());
  EXPECT_EQ(*report.zero_at, (std::vector<std::uint32_t>{1, 0}));
}

TEST(Nonvanishing, GuardRejectsHugeDomains) {
  NvPoly p(20, 3);
  p.add_term(Exponents(20, 0), 1);
  try {
    verify_nonvanishing(p, 1000);
    FAIL() << "expected TooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(Classification, MonomialTypes) {
  const Pairing pairing = Pairing::surface(2);  // variables x1, y1, x2, y2
  EXPECT_EQ(classify_monomial(ex({9, 0, 0, 0}), 3, &pairing), MonomialType::I);
  EXPECT_EQ(classify_monomial(ex({8, 1, 0, 0}), 3, &pairing), MonomialType::IIIb);
  EXPECT_EQ(classify_monomial(ex({8, 0, 0, 1}), 3, &pairing), MonomialType::IIIa);
  EXPECT_EQ(classify_monomial(ex({1, 7, 1, 0}), 3, &pairing), MonomialType::II);
  EXPECT_EQ(classify_monomial(ex({8, 1, 0, 0}), 3), MonomialType::III);
}

TEST(Classification, OutputsOnlyAllowedTypes) {
  const Pairing pairing = Pairing::surface(2);
  const NvPoly p = build_nonvanishing(3, 4, 2);
  const auto parts = classify(p, &pairing);
  std::size_t total = 0;
  for (const auto& [type, sub] : parts) {
    EXPECT_NE(type, MonomialType::III);  // split into IIIa / IIIb
    total += sub.terms().size();
  }
  EXPECT_EQ(total, p.terms().size());
  // the same-pair terms are exactly x_i y_i^8
  ASSERT_TRUE(parts.count(MonomialType::IIIb));
  for (const auto& [e, c] : parts.at(MonomialType::IIIb).terms()) {
    const bool first_pair = e[0] == 1 && e[1] == 8;
    const bool second_pair = e[2] == 1 && e[3] == 8;
    EXPECT_TRUE(first_pair || second_pair);
  }
}

TEST(Classification, BadResiduesAreObservationViolations) {
  try {
    classify_monomial(ex({2, 3}), 5);  // two variables, residues 2 and 3 mod 4
    FAIL() << "expected ObservationViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ObservationViolation);
  }
}

}  // namespace
}  // namespace primhom
