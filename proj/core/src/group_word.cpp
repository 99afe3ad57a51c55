#include "primhom/group_word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "primhom/errors.hpp"

namespace primhom {

Alphabet Alphabet::free(int rank) {
  if (rank < 1) fail(ErrorCode::InvalidConfig, "free group rank must be at least 1");
  return {false, rank};
}

Alphabet Alphabet::surface(int genus) {
  if (genus < 1) fail(ErrorCode::InvalidConfig, "surface genus must be at least 1");
  return {true, 2 * genus};
}

std::string Alphabet::generator_name(int generator) const {
  if (!surface_) return "x" + std::to_string(generator + 1);
  return (generator % 2 == 0 ? "x" : "y") + std::to_string(generator / 2 + 1);
}

int Alphabet::generator_index(std::string_view name) const {
  if (name.size() < 2) return -1;
  const char head = name.front();
  int index = 0;
  auto digits = name.substr(1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || index < 1) return -1;
  int g = -1;
  if (!surface_ && head == 'x') g = index - 1;
  if (surface_ && head == 'x') g = 2 * (index - 1);
  if (surface_ && head == 'y') g = 2 * (index - 1) + 1;
  return (g >= 0 && g < size_) ? g : -1;
}

GroupWord::GroupWord(Alphabet alphabet, std::vector<Letter> letters)
    : alphabet_(alphabet), letters_(std::move(letters)) {
  for (const auto& l : letters_)
    if (l.generator < 0 || l.generator >= alphabet_.size() || (l.exponent != 1 && l.exponent != -1))
      fail(ErrorCode::InvalidConfig, "invalid letter in group word");
}

GroupWord GroupWord::generator(const Alphabet& alphabet, int generator, int exponent) {
  return GroupWord(alphabet, {{generator, exponent}});
}

GroupWord GroupWord::parse(const Alphabet& alphabet, std::string_view text) {
  std::vector<Letter> letters;
  std::size_t pos = 0;
  auto is_sep = [](char c) { return c == '.' || c == '*' || std::isspace(static_cast<unsigned char>(c)); };
  while (pos < text.size()) {
    while (pos < text.size() && is_sep(text[pos])) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !is_sep(text[end])) ++end;
    if (end == pos) break;
    std::string_view token = text.substr(pos, end - pos);
    pos = end;
    if (token == "1") continue;
    int exponent = 1;
    if (auto caret = token.find('^'); caret != std::string_view::npos) {
      auto digits = token.substr(caret + 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exponent);
      if (ec != std::errc{} || ptr != digits.data() + digits.size())
        fail(ErrorCode::InvalidConfig, "bad exponent in word '" + std::string(text) + "'");
      token = token.substr(0, caret);
    }
    int g = alphabet.generator_index(token);
    if (g < 0) fail(ErrorCode::InvalidConfig, "unknown generator '" + std::string(token) + "'");
    for (int i = 0; i < std::abs(exponent); ++i) letters.push_back({g, exponent > 0 ? 1 : -1});
  }
  return GroupWord(alphabet, std::move(letters));
}

GroupWord GroupWord::surface_relator(int genus) {
  Alphabet a = Alphabet::surface(genus);
  std::vector<Letter> letters;
  for (int i = 0; i < genus; ++i) {
    letters.push_back({2 * i, 1});
    letters.push_back({2 * i + 1, 1});
    letters.push_back({2 * i, -1});
    letters.push_back({2 * i + 1, -1});
  }
  return GroupWord(a, std::move(letters));
}

GroupWord GroupWord::commutator(const GroupWord& a, const GroupWord& b) {
  return a * b * a.inverse() * b.inverse();
}

GroupWord GroupWord::reduced() const {
  std::vector<Letter> out;
  for (const auto& l : letters_) {
    if (!out.empty() && out.back().generator == l.generator && out.back().exponent == -l.exponent)
      out.pop_back();
    else
      out.push_back(l);
  }
  return GroupWord(alphabet_, std::move(out));
}

GroupWord GroupWord::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l.exponent = -l.exponent;
  return GroupWord(alphabet_, std::move(out));
}

GroupWord GroupWord::power(int e) const {
  GroupWord base = e < 0 ? inverse() : *this;
  std::vector<Letter> out;
  for (int i = 0; i < std::abs(e); ++i) out.insert(out.end(), base.letters_.begin(), base.letters_.end());
  return GroupWord(alphabet_, std::move(out));
}

GroupWord GroupWord::operator*(const GroupWord& other) const {
  if (!(alphabet_ == other.alphabet_)) fail(ErrorCode::SpecMismatch, "words over different alphabets");
  std::vector<Letter> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return GroupWord(alphabet_, std::move(out));
}

std::vector<std::int64_t> GroupWord::abelianization() const {
  std::vector<std::int64_t> out(alphabet_.size(), 0);
  for (const auto& l : letters_) out[l.generator] += l.exponent;
  return out;
}

std::vector<std::uint64_t> GroupWord::abelianization_mod(std::uint64_t d) const {
  if (d < 1) fail(ErrorCode::InvalidConfig, "modulus must be positive");
  std::vector<std::uint64_t> out;
  for (auto v : abelianization()) {
    auto m = static_cast<std::int64_t>(d);
    out.push_back(static_cast<std::uint64_t>(((v % m) + m) % m));
  }
  return out;
}

std::string GroupWord::to_string() const {
  if (letters_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < letters_.size();) {
    std::size_t run = 1;
    while (i + run < letters_.size() && letters_[i + run] == letters_[i]) ++run;
    if (!out.empty()) out += '.';
    out += alphabet_.generator_name(letters_[i].generator);
    const long long e = static_cast<long long>(run) * letters_[i].exponent;
    if (e != 1) out += "^" + std::to_string(e);
    i += run;
  }
  return out;
}

std::vector<GroupWord> enumerate_reduced_words(const Alphabet& alphabet, int max_length) {
  std::vector<GroupWord> out;
  const int m = alphabet.size();
  std::vector<Letter> current;
  for (int length = 1; length <= max_length; ++length) {
    current.assign(static_cast<std::size_t>(length), Letter{0, 1});
    auto extend = [&](auto&& self, int pos) -> void {
      if (pos == length) {
        out.emplace_back(alphabet, current);
        return;
      }
      for (int g = 0; g < m; ++g) {
        for (int e : {1, -1}) {
          if (pos > 0 && current[pos - 1].generator == g && current[pos - 1].exponent == -e) continue;
          current[pos] = {g, e};
          self(self, pos + 1);
        }
      }
    };
    extend(extend, 0);
  }
  return out;
}

GroupWord random_reduced_word(const Alphabet& alphabet, int length, std::mt19937_64& rng) {
  const int choices = 2 * alphabet.size();
  std::vector<Letter> letters;
  while (static_cast<int>(letters.size()) < length) {
    // the first letter has 2n choices, later ones 2n - 1 (no cancellation)
    const int bound = letters.empty() ? choices : choices - 1;
    int pick = std::uniform_int_distribution<int>(0, bound - 1)(rng);
    Letter next{pick / 2, pick % 2 == 0 ? 1 : -1};
    if (!letters.empty()) {
      const Letter undo{letters.back().generator, -letters.back().exponent};
      const int undo_index = 2 * undo.generator + (undo.exponent > 0 ? 0 : 1);
      if (pick >= undo_index) ++pick;
      next = {pick / 2, pick % 2 == 0 ? 1 : -1};
    }
    letters.push_back(next);
  }
  return GroupWord(alphabet, std::move(letters));
}

GroupWord class_representative(const Alphabet& alphabet, std::span<const std::uint64_t> exponents) {
  if (static_cast<int>(exponents.size()) != alphabet.size())
    fail(ErrorCode::InvalidConfig, "class vector has the wrong length");
  std::vector<Letter> letters;
  for (int g = 0; g < alphabet.size(); ++g)
    for (std::uint64_t i = 0; i < exponents[g]; ++i) letters.push_back({g, 1});
  return GroupWord(alphabet, std::move(letters));
}

}  // namespace primhom
