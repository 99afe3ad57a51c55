#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primhom/algebra.hpp"
#include "primhom/group_word.hpp"
#include "primhom/polynomial.hpp"
#include "primhom/unit_group.hpp"

namespace primhom {

/// A homomorphism from a free or surface group into one unit group, given
/// by generator images.  Inverses are computed once.
class GeneratorImages {
 public:
  GeneratorImages(Alphabet alphabet, std::vector<UnitElement> images);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const AlgebraSpec& spec() const noexcept { return images_.front().spec(); }
  const UnitElement& image(int generator) const { return images_.at(generator); }
  const UnitElement& inverse_image(int generator) const { return inverses_.at(generator); }

  UnitElement apply(const GroupWord& w) const;

 private:
  Alphabet alphabet_;
  std::vector<UnitElement> images_;
  std::vector<UnitElement> inverses_;
};

/// x_i -> 1 + X_i into FreeTrunc or SortedTrunc with n = rank.
GeneratorImages rho_free(const Alphabet& alphabet, const AlgebraSpec& spec);
UnitElement rho_free(const GroupWord& w, const AlgebraSpec& spec);

/// x_i -> 1 + X_i, y_i -> 1 + Y_i into MTrunc of the same genus.
GeneratorImages rho_m(const Alphabet& alphabet, const AlgebraSpec& spec);

/// E = -Σ_{m>=1} C_{m-1} A^{2m} in QuatTrunc(r, k); satisfies A^2 + E + E^2 = 0.
AlgElement catalan_series_E(std::uint32_t r, int k);

/// The genus-2 images 1 + A i + E k, 1 + B j, 1 + A j - E k, 1 + B i.
GeneratorImages tau_images(const AlgebraSpec& quat_spec);
UnitElement tau(const GroupWord& w, const AlgebraSpec& quat_spec);

/// Collapses a genus-g word to genus 2: pair `pair` (1-based) goes to
/// (x1, y1), the next pair (wrapping from g to 1) to (x2, y2) and all other
/// generators to 1.  `swapped` then exchanges x and y.
GroupWord h_collapse(const GroupWord& w, int pair, bool swapped);

struct WitnessFactor {
  std::string label;
  GeneratorImages rho;
  PsiSpec psi;
};

/// Witness data for a single prime: G is the product of the factor unit
/// groups, ρ acts factorwise, α is read from factor 0 and Ψ sums the
/// factor projections.
struct PrimeWitness {
  std::uint32_t r = 0;
  int k = 0;
  std::uint64_t D = 0;
  Alphabet alphabet = Alphabet::free(1);
  std::string variant;
  NvPoly P{1, 2};
  std::vector<WitnessFactor> factors;

  // surface data
  int sign = 1;
  std::vector<std::uint32_t> a, b;
  std::optional<NvPoly> m_part;
  std::vector<std::string> notes;

  std::vector<UnitElement> rho(const GroupWord& w) const;
  std::vector<std::uint32_t> alpha(const std::vector<UnitElement>& g) const;
  bool in_C(const std::vector<UnitElement>& g) const;
  /// Throws NotInC when some factor is not central.
  std::uint32_t psi(const std::vector<UnitElement>& c) const;
};

struct WordCheck {
  std::vector<std::uint32_t> alpha;
  bool central = false;
  std::uint32_t psi = 0;
  std::uint32_t expected = 0;  ///< P(alpha)
  bool ok() const { return central && psi == expected; }
};

/// Computes ρ(w)^D and compares Ψ with P(α).
WordCheck check_word(const PrimeWitness& witness, const GroupWord& w);

/// variant: "full" (FreeTrunc) or "sorted" (SortedTrunc).
PrimeWitness assemble_witness_free(std::uint32_t r, int n, int k, const std::string& variant);
PrimeWitness assemble_witness_surface(std::uint32_t r, int genus, int k);

/// (x1^2 + x2^2)^((D-3)/2) (x1^2 y1 - x1 x2 y2) in the variables
/// (u1, v1, u2, v2) of a polynomial ring with `variables` variables.
NvPoly surface_power_form(std::uint32_t r, std::uint64_t D, int variables, int u1, int v1, int u2, int v2);

/// Product of per-prime witnesses with CRT-combined α and Ψ over Z/d.
struct WitnessBundle {
  std::vector<PrimeWitness> parts;
  std::vector<BigInt> q;
  BigInt exponent;  ///< e = Σ q_i r_i^k
  BigInt modulus;   ///< d = Π r_i

  /// α(ρ(w)) = Σ q_i α_i mod d.
  std::vector<BigInt> alpha(const GroupWord& w) const;
  /// Ψ(ρ(w)^e) = Σ q_i Ψ_i(ρ_i(w)^e) mod d; throws NotInC if the power is
  /// not central in some factor.
  BigInt psi_of_power(const GroupWord& w) const;
};

WitnessBundle crt_lift(std::vector<PrimeWitness> parts);

}  // namespace primhom
