#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "primhom/modular.hpp"

namespace primhom {

/// The four truncated algebras over F_r.  All of them are graded by total
/// degree and every monomial of degree above D = r^k is identified with 0.
///
///  - FreeTrunc:   F_r<X_1..X_n>
///  - SortedTrunc: FreeTrunc with X_i X_j = 0 for i > j
///  - MTrunc:      F_r<X_1,Y_1..X_g,Y_g> with X_iY_i = Y_iX_i = 0
///  - QuatTrunc:   F_r[A,B]/(A^(D+1), A^D B, B^2) tensored with the
///                 Hamilton quaternions (i^2 = j^2 = k^2 = -1, ij = k)
enum class AlgebraKind { FreeTrunc, SortedTrunc, MTrunc, QuatTrunc };

std::string_view to_string(AlgebraKind kind);

enum class QuatUnit : std::uint8_t { One = 0, I = 1, J = 2, K = 3 };

/// Product of two quaternion units: returns the unit and whether the sign
/// is negative.
struct QuatProduct {
  QuatUnit unit;
  bool negative;
};
QuatProduct quat_multiply(QuatUnit a, QuatUnit b);

/// A basis monomial, meaningful only relative to an AlgebraSpec.
///
/// Word algebras pack the letters into `code`, first letter in the most
/// significant position, `bits_per_letter` bits each, so that for equal
/// degree the numeric order is the lexicographic order.  QuatTrunc stores
/// code = 4 * (B exponent) + unit and the A exponent is degree - B exponent.
struct Monomial {
  std::uint32_t degree = 0;
  uint128 code = 0;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (a.degree != b.degree) return a.degree <=> b.degree;
    if (a.code != b.code) return a.code < b.code ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

struct QuatParts {
  std::uint32_t a_exp;
  std::uint32_t b_exp;
  QuatUnit unit;
};

class AlgebraSpec {
 public:
  static AlgebraSpec free_trunc(std::uint32_t r, int k, int n);
  static AlgebraSpec sorted_trunc(std::uint32_t r, int k, int n);
  static AlgebraSpec m_trunc(std::uint32_t r, int k, int genus);
  static AlgebraSpec quat_trunc(std::uint32_t r, int k);

  AlgebraKind kind() const noexcept { return kind_; }
  std::uint32_t prime() const noexcept { return r_; }
  int k() const noexcept { return k_; }
  /// Truncation degree D = r^k.
  std::uint32_t degree_bound() const noexcept { return D_; }
  /// Number of word symbols (n, 2g) or 2 for the quaternion variables A, B.
  int symbol_count() const noexcept { return symbols_; }
  int genus() const noexcept { return kind_ == AlgebraKind::MTrunc ? symbols_ / 2 : 0; }
  bool is_word_algebra() const noexcept { return kind_ != AlgebraKind::QuatTrunc; }
  int bits_per_letter() const noexcept { return bits_; }

  std::string symbol_name(int symbol) const;
  std::string describe() const;

  Monomial word(std::span<const int> letters) const;
  std::vector<int> letters(const Monomial& m) const;
  int first_letter(const Monomial& m) const;
  int last_letter(const Monomial& m) const;

  Monomial quat(std::uint32_t a_exp, std::uint32_t b_exp, QuatUnit unit) const;
  QuatParts quat_parts(const Monomial& m) const;

  bool admissible(const Monomial& m) const;

  /// Number of admissible monomials of degree <= max_degree.
  BigInt basis_size(std::uint32_t max_degree) const;
  /// All admissible monomials with min_degree <= degree <= max_degree in
  /// canonical order; throws TooLarge above `limit`.
  std::vector<Monomial> basis(std::uint32_t min_degree, std::uint32_t max_degree,
                              std::size_t limit = 1u << 22) const;
  /// Degree-one monomials in the fixed generator order (quaternion case:
  /// A*1, A*i, A*j, A*k, B*1, B*i, B*j, B*k).
  std::vector<Monomial> degree_one_basis() const;

  std::string render(const Monomial& m) const;
  /// Length-prefixed byte serialization of a monomial.
  std::string serialize(const Monomial& m) const;

  /// Size of the dense accumulator used by multiplication; 0 when the
  /// monomial space is too large and hashing is used instead.
  std::size_t dense_size() const noexcept { return dense_size_; }
  std::size_t dense_index(const Monomial& m) const;
  Monomial from_dense_index(std::size_t index) const;

  friend bool operator==(const AlgebraSpec& a, const AlgebraSpec& b) {
    return a.kind_ == b.kind_ && a.r_ == b.r_ && a.k_ == b.k_ && a.symbols_ == b.symbols_;
  }

 private:
  AlgebraSpec(AlgebraKind kind, std::uint32_t r, int k, int symbols);

  AlgebraKind kind_;
  std::uint32_t r_;
  int k_;
  std::uint32_t D_;
  int symbols_;
  int bits_;
  std::size_t dense_size_ = 0;
  std::shared_ptr<const std::vector<std::uint64_t>> offsets_;
};

/// Sparse element: terms sorted by (degree, code), all coefficients nonzero.
class AlgElement {
 public:
  struct Term {
    Monomial mono;
    std::uint32_t coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  explicit AlgElement(AlgebraSpec spec);

  static AlgElement one(const AlgebraSpec& spec);
  static AlgElement constant(const AlgebraSpec& spec, std::int64_t c);
  static AlgElement monomial(const AlgebraSpec& spec, const Monomial& m, std::int64_t c = 1);
  /// Word algebras: the symbol X_i (or Y_i).  QuatTrunc: 0 -> A, 1 -> B.
  static AlgElement generator(const AlgebraSpec& spec, int symbol);
  static AlgElement unit(const AlgebraSpec& spec, QuatUnit u);
  /// Sorts, merges equal monomials, drops zero coefficients.  Inadmissible
  /// monomials are rejected with InvalidConfig.
  static AlgElement from_terms(const AlgebraSpec& spec, std::vector<Term> terms);
  static AlgElement parse(const AlgebraSpec& spec, std::string_view text);

  const AlgebraSpec& spec() const noexcept { return spec_; }
  std::span<const Term> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  std::uint32_t coeff(const Monomial& m) const;
  /// Smallest degree with a nonzero term (degree_bound() + 1 for zero).
  std::uint32_t min_degree() const;

  std::string to_string() const;
  /// Canonical byte key: serialized monomials with 4-byte coefficients.
  std::string key() const;

  AlgElement operator+(const AlgElement& other) const;
  AlgElement operator-(const AlgElement& other) const;
  AlgElement operator-() const;
  AlgElement operator*(const AlgElement& other) const;
  AlgElement scaled(std::int64_t c) const;

  friend bool operator==(const AlgElement& a, const AlgElement& b) {
    return a.spec_ == b.spec_ && a.terms_ == b.terms_;
  }

 private:
  friend AlgElement mul(const AlgElement& a, const AlgElement& b);

  AlgebraSpec spec_;
  std::vector<Term> terms_;
};

AlgElement mul(const AlgElement& a, const AlgElement& b);
AlgElement inverse_unit(const AlgElement& a);
AlgElement power(const AlgElement& a, std::int64_t e);
AlgElement power(const AlgElement& a, const BigInt& e);

AlgElement graded_part(const AlgElement& a, std::uint32_t degree);
PrimeFieldElem augmentation(const AlgElement& a);
/// Degree-one coefficients in degree_one_basis() order.
std::vector<std::uint32_t> linear_part(const AlgElement& a);
AlgElement linear_embedding(const AlgebraSpec& spec, std::span<const std::uint32_t> coefficients);

}  // namespace primhom
