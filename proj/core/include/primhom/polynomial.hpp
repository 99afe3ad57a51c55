#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace primhom {

using Exponents = std::vector<std::uint32_t>;

/// Commutative polynomial over F_r in n variables, stored as a sparse map
/// from exponent vector to nonzero coefficient.
class NvPoly {
 public:
  NvPoly(int variables, std::uint32_t r);

  int variables() const noexcept { return n_; }
  std::uint32_t prime() const noexcept { return r_; }
  const std::map<Exponents, std::uint32_t>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Adds c * monomial, merging with an existing term and dropping zeros.
  void add_term(const Exponents& exps, std::int64_t c);
  std::uint32_t coeff(const Exponents& exps) const;

  /// Largest total degree (0 for the zero polynomial).
  std::uint64_t degree() const;
  bool is_homogeneous() const;

  std::uint32_t evaluate(std::span<const std::uint32_t> point) const;

  NvPoly operator+(const NvPoly& other) const;
  NvPoly operator-(const NvPoly& other) const;
  NvPoly operator*(const NvPoly& other) const;
  NvPoly scaled(std::int64_t c) const;

  /// Canonical text such as "a1^3 + 2*a1.a2^2 + a2^3"; `names` overrides
  /// the default a1..an variable names.
  std::string to_string(std::span<const std::string> names = {}) const;

  friend bool operator==(const NvPoly&, const NvPoly&) = default;

 private:
  int n_;
  std::uint32_t r_;
  std::map<Exponents, std::uint32_t> terms_;
};

/// Variable names x1, y1, x2, y2, ... used for surface polynomials.
std::vector<std::string> surface_variable_names(int genus);

/// Smallest k >= 1 with r^k > (n - 1)(r - 1).
int minimal_k(std::uint32_t r, int n);

/// The inhomogeneous polynomial P_{n-1} of the recursive construction
/// (P = a_1 for n = 1).
NvPoly build_nonvanishing_raw(std::uint32_t r, int n);

/// Multiplies each monomial of degree e by a_i^(degree - e) where a_i is the
/// variable with the largest exponent in it (lowest index on ties).  Every
/// degree difference must be a multiple of r - 1.
NvPoly homogenize(const NvPoly& p, std::uint64_t degree);

/// Homogeneous degree-r^k polynomial nonzero on F_r^n \ {0}.
NvPoly build_nonvanishing(std::uint32_t r, int n, int k);

enum class MonomialType { I, II, III, IIIa, IIIb };
std::string_view to_string(MonomialType type);

/// Pairing of variables into (x_i, y_i); the surface convention pairs
/// variable 2i with 2i + 1.
struct Pairing {
  std::vector<int> partner;
  static Pairing surface(int genus);
};

/// Type of a single monomial; throws ObservationViolation when it fits none
/// of the classes.
MonomialType classify_monomial(const Exponents& exps, std::uint32_t r, const Pairing* pairing = nullptr);

/// Splits p by monomial type.  Without a pairing two-variable monomials are
/// reported as III; with one they are split into IIIa and IIIb.
std::map<MonomialType, NvPoly> classify(const NvPoly& p, const Pairing* pairing = nullptr);

struct NonvanishingReport {
  bool pass = true;
  std::uint64_t points_checked = 0;
  std::optional<std::vector<std::uint32_t>> zero_at;
};

/// Evaluates p at every point of F_r^n \ {0} (a_1 varies fastest).  Throws
/// TooLarge when r^n exceeds `guard`.
NonvanishingReport verify_nonvanishing(const NvPoly& p, std::uint64_t guard = 100'000'000);

}  // namespace primhom
