#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "primhom/modular.hpp"

namespace primhom {

using Rational = boost::multiprecision::cpp_rational;

/// Q(ω) for a primitive d-th root of unity ω, with elements stored as
/// coefficient vectors of length φ(d) modulo the cyclotomic polynomial Φ_d.
class CyclotomicField {
 public:
  using Element = std::vector<Rational>;

  explicit CyclotomicField(std::uint32_t d);

  std::uint32_t order() const noexcept { return d_; }
  std::size_t degree() const noexcept { return phi_.size() - 1; }
  /// Φ_d, lowest coefficient first (monic).
  const std::vector<std::int64_t>& polynomial() const noexcept { return phi_; }

  Element zero() const { return Element(degree(), 0); }
  Element one() const;
  Element from_rational(const Rational& q) const;
  /// ω^e for any integer e.
  const Element& omega_power(std::int64_t e) const;

  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element mul(const Element& a, const Element& b) const;
  Element scale(const Element& a, const Rational& q) const;
  bool is_zero(const Element& a) const;

  /// Σ counts[e] ω^e for integer counts indexed by e in [0, d).
  Element from_power_counts(std::span<const std::int64_t> counts) const;
  /// Whether Σ counts[e] ω^e vanishes, using integer arithmetic only.
  bool power_counts_vanish(std::span<const std::int64_t> counts) const;

  std::string to_string(const Element& a) const;

 private:
  std::uint32_t d_;
  std::vector<std::int64_t> phi_;
  std::vector<Element> powers_;
};

/// Integer coefficients of Φ_d, lowest first.
std::vector<std::int64_t> cyclotomic_polynomial(std::uint32_t d);

}  // namespace primhom
