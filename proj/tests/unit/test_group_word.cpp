#include <gtest/gtest.h>

#include <random>
#include <set>

#include "primhom/errors.hpp"
#include "primhom/group_word.hpp"

namespace primhom {
namespace {

TEST(Alphabet, GeneratorNames) {
  const Alphabet s = Alphabet::surface(2);
  EXPECT_EQ(s.size(), 4);
  EXPECT_EQ(s.generator_name(0), "x1");
  EXPECT_EQ(s.generator_name(3), "y2");
  EXPECT_EQ(s.generator_index("y1"), 1);
  EXPECT_EQ(s.generator_index("z1"), -1);
  EXPECT_EQ(Alphabet::free(3).generator_name(2), "x3");
}

TEST(GroupWord, ParseAndPrint) {
  const Alphabet s = Alphabet::surface(2);
  const GroupWord w = GroupWord::parse(s, "x1.y1^-1.x2^2");
  EXPECT_EQ(w.length(), 4u);
  EXPECT_EQ(w.to_string(), "x1.y1^-1.x2^2");
  EXPECT_TRUE(GroupWord::parse(s, "1").empty());
  EXPECT_THROW(GroupWord::parse(s, "x3"), Error);
}

TEST(GroupWord, ReductionAndInverse) {
  const Alphabet f = Alphabet::free(2);
  EXPECT_TRUE(GroupWord::parse(f, "x1.x1^-1").reduced().empty());
  const GroupWord w = GroupWord::parse(f, "x1.x2^-1.x1");
  EXPECT_TRUE((w * w.inverse()).reduced().empty());
  EXPECT_EQ(w.power(2).length(), 6u);
  EXPECT_EQ(w.power(-1), w.inverse());
}

TEST(GroupWord, SurfaceRelator) {
  EXPECT_EQ(GroupWord::surface_relator(2).to_string(), "x1.y1.x1^-1.y1^-1.x2.y2.x2^-1.y2^-1");
  const auto ab = GroupWord::surface_relator(3).abelianization();
  for (auto v : ab) EXPECT_EQ(v, 0);
}

TEST(GroupWord, Abelianization) {
  const Alphabet f = Alphabet::free(2);
  const GroupWord w = GroupWord::parse(f, "x1^2.x2^-1.x1^-1");
  EXPECT_EQ(w.abelianization(), (std::vector<std::int64_t>{1, -1}));
  EXPECT_EQ(w.abelianization_mod(3), (std::vector<std::uint64_t>{1, 2}));
}

TEST(Enumeration, CountsReducedWords) {
  // 2n (2n-1)^(L-1) reduced words of length L
  const Alphabet f = Alphabet::free(2);
  const auto words = enumerate_reduced_words(f, 4);
  EXPECT_EQ(words.size(), 4u + 12 + 36 + 108);
  std::set<std::string> seen;
  for (const auto& w : words) {
    EXPECT_EQ(w.reduced(), w);
    seen.insert(w.to_string());
  }
  EXPECT_EQ(seen.size(), words.size());
  EXPECT_EQ(words.front().to_string(), "x1");
  EXPECT_EQ(words[1].to_string(), "x1^-1");
}

TEST(Enumeration, RandomWordsAreReduced) {
  std::mt19937_64 rng(3);
  const Alphabet s = Alphabet::surface(2);
  for (int i = 0; i < 500; ++i) {
    const GroupWord w = random_reduced_word(s, 1 + i % 20, rng);
    EXPECT_EQ(w.length(), static_cast<std::size_t>(1 + i % 20));
    EXPECT_EQ(w.reduced(), w);
  }
}

TEST(ClassRepresentative, HasRequestedAbelianization) {
  const Alphabet s = Alphabet::surface(2);
  const std::vector<std::uint64_t> cls{2, 0, 1, 2};
  const GroupWord w = class_representative(s, cls);
  EXPECT_EQ(w.abelianization_mod(3), cls);
  EXPECT_EQ(w.to_string(), "x1^2.x2.y2^2");
}

}  // namespace
}  // namespace primhom
