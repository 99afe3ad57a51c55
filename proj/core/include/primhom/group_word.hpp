#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace primhom {

/// Generators of a free group F_n (x1..xn) or of a closed surface group of
/// genus g (x1, y1, ..., xg, yg).  Surface generator x_i has index 2(i-1)
/// and y_i has index 2(i-1)+1.
class Alphabet {
 public:
  static Alphabet free(int rank);
  static Alphabet surface(int genus);

  bool is_surface() const noexcept { return surface_; }
  int rank() const noexcept { return surface_ ? 0 : size_; }
  int genus() const noexcept { return surface_ ? size_ / 2 : 0; }
  /// Number of generators (n or 2g).
  int size() const noexcept { return size_; }

  std::string generator_name(int generator) const;
  /// Parses "x1", "y2" etc.; returns -1 for unknown names.
  int generator_index(std::string_view name) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  Alphabet(bool surface, int size) : surface_(surface), size_(size) {}

  bool surface_;
  int size_;
};

struct Letter {
  int generator;
  int exponent;  ///< +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

class GroupWord {
 public:
  explicit GroupWord(Alphabet alphabet, std::vector<Letter> letters = {});

  static GroupWord generator(const Alphabet& alphabet, int generator, int exponent = 1);
  /// Parses dot- or space-separated factors like "x1.y1^-1.x2^3"; "1" or
  /// the empty string is the identity.
  static GroupWord parse(const Alphabet& alphabet, std::string_view text);
  /// prod_i [x_i, y_i] = prod_i x_i y_i x_i^-1 y_i^-1.
  static GroupWord surface_relator(int genus);
  static GroupWord commutator(const GroupWord& a, const GroupWord& b);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  /// Free reduction (cancels adjacent x x^-1).
  GroupWord reduced() const;
  GroupWord inverse() const;
  GroupWord power(int e) const;
  GroupWord operator*(const GroupWord& other) const;

  /// Exponent sum of every generator.
  std::vector<std::int64_t> abelianization() const;
  /// Exponent sums reduced into [0, d).
  std::vector<std::uint64_t> abelianization_mod(std::uint64_t d) const;

  std::string to_string() const;

  friend bool operator==(const GroupWord&, const GroupWord&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Letter> letters_;
};

/// All freely reduced words of length 1..max_length in deterministic order
/// (by length, then letters ordered x1, x1^-1, x2, x2^-1, ...).
std::vector<GroupWord> enumerate_reduced_words(const Alphabet& alphabet, int max_length);

/// A uniformly random freely reduced word of exactly `length` letters.
GroupWord random_reduced_word(const Alphabet& alphabet, int length, std::mt19937_64& rng);

/// The representative x_1^{c_1} x_2^{c_2} ... of an abelianization class.
GroupWord class_representative(const Alphabet& alphabet, std::span<const std::uint64_t> exponents);

}  // namespace primhom
