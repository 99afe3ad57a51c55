#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "primhom/algebra.hpp"
#include "primhom/polynomial.hpp"

namespace primhom {

/// Element of G = 1 + I: an algebra element with constant term 1.
class UnitElement {
 public:
  /// Throws NotAUnit unless the constant term is 1.
  explicit UnitElement(AlgElement value);
  static UnitElement one(const AlgebraSpec& spec);

  const AlgElement& value() const noexcept { return value_; }
  const AlgebraSpec& spec() const noexcept { return value_.spec(); }

  UnitElement operator*(const UnitElement& other) const;
  UnitElement inverse() const;
  UnitElement pow(std::int64_t e) const;
  UnitElement pow(const BigInt& e) const;

  std::string to_string() const { return value_.to_string(); }
  std::string key() const { return value_.key(); }

  friend bool operator==(const UnitElement&, const UnitElement&) = default;

 private:
  AlgElement value_;
};

/// Word algebras: the full degree-one coefficient vector.  QuatTrunc: the
/// coefficients of (A i, B j, A j, B i).
std::vector<std::uint32_t> alpha(const UnitElement& g);

/// True iff g - 1 lives in degree >= D (for QuatTrunc this is the span of
/// A^D l and A^(D-1) B l).
bool in_central_C(const UnitElement& g);

/// Ψ(c) = Σ weight * coeff(c, monomial) over degree-D monomials.
struct PsiSpec {
  explicit PsiSpec(AlgebraSpec spec) : spec(std::move(spec)) {}

  AlgebraSpec spec;
  std::vector<std::pair<Monomial, std::uint32_t>> weights;

  /// Adds c to the weight of m; m must be admissible of degree D.
  void add(const Monomial& m, std::int64_t c);
  std::string to_string() const;
};

/// Throws NotInC when c is not central.
PrimeFieldElem psi_eval(const PsiSpec& psi, const UnitElement& c);

/// The Quat C_H basis element A^(D-1) B j.
Monomial quat_psi_monomial(const AlgebraSpec& spec);

/// An admissible word whose letter multiset matches the exponent vector.
/// FreeTrunc/SortedTrunc: letters in index order.  MTrunc: seeded with two
/// symbols from different pairs, remaining symbols appended on whichever
/// side avoids an adjacent X_i Y_i.  Throws UnsupportedMonomialType for
/// IIIb monomials in MTrunc and SpecMismatch for QuatTrunc.
Monomial word_for_monomial(const Exponents& exps, const AlgebraSpec& spec);

PsiSpec build_psi_for_monomial(const Exponents& exps, const AlgebraSpec& spec);
/// Σ coeff * projection onto word_for_monomial(m) over the monomials m of P.
PsiSpec psi_for_polynomial(const NvPoly& p, const AlgebraSpec& spec);

/// Random unit 1 + (random linear part) + up to `extra_terms` random
/// admissible monomials of degree 2..D with random coefficients.
UnitElement random_unit(const AlgebraSpec& spec, std::mt19937_64& rng, int extra_terms = 6);

/// 1 + Σ c_i * (degree-one basis element i).
UnitElement linear_unit(const AlgebraSpec& spec, std::span<const std::uint32_t> coefficients);

/// Deterministic per-index seed derived from a base seed (splitmix64).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

struct PropertyReport {
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  /// Serialization of the first failing element (by index) and the reason.
  std::optional<std::string> counterexample;
  bool pass() const { return failures == 0; }
};

/// Checks g^D ∈ C and Ψ_P(g^D) = P(α(g)) on one representative per linear
/// class (when exhaustive) and on `samples` random units.  Violations are
/// collected in the report; callers decide whether they are fatal.
PropertyReport verify_power_identity(const AlgebraSpec& spec, const NvPoly& p, bool exhaustive,
                                     std::uint64_t samples, std::uint64_t seed);

}  // namespace primhom
