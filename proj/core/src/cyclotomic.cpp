#include "primhom/cyclotomic.hpp"

#include "primhom/errors.hpp"

namespace primhom {

namespace {

/// Reduces a polynomial with integer coefficients modulo a monic divisor,
/// in place; the result occupies the first deg(divisor) entries.
void reduce_monic(std::vector<std::int64_t>& p, const std::vector<std::int64_t>& monic) {
  const std::size_t n = monic.size() - 1;
  for (std::size_t top = p.size(); top-- > n;) {
    const std::int64_t c = p[top];
    if (c == 0) continue;
    for (std::size_t i = 0; i <= n; ++i) p[top - n + i] -= c * monic[i];
  }
  p.resize(n);
}

}  // namespace

std::vector<std::int64_t> cyclotomic_polynomial(std::uint32_t d) {
  if (d < 1) fail(ErrorCode::InvalidConfig, "cyclotomic order must be positive");
  if (d > 10000) fail(ErrorCode::TooLarge, "cyclotomic order too large");
  // x^d - 1 divided by Φ_e for every proper divisor e of d
  std::vector<std::int64_t> num(d + 1, 0);
  num[0] = -1;
  num[d] = 1;
  for (std::uint32_t e = 1; e < d; ++e) {
    if (d % e != 0) continue;
    const auto div = cyclotomic_polynomial(e);
    const std::size_t n = div.size() - 1;
    std::vector<std::int64_t> quot(num.size() - n, 0);
    for (std::size_t top = num.size(); top-- > n;) {
      const std::int64_t c = num[top];
      quot[top - n] = c;
      if (c == 0) continue;
      for (std::size_t i = 0; i <= n; ++i) num[top - n + i] -= c * div[i];
    }
    for (std::size_t i = 0; i < n; ++i)
      if (num[i] != 0) fail(ErrorCode::PropertyViolation, "cyclotomic division left a remainder");
    num = std::move(quot);
  }
  return num;
}

CyclotomicField::CyclotomicField(std::uint32_t d) : d_(d), phi_(cyclotomic_polynomial(d)) {
  for (std::uint32_t e = 0; e < d_; ++e) {
    std::vector<std::int64_t> p(std::max<std::size_t>(e + 1, degree()), 0);
    p[e] = 1;
    if (p.size() > degree()) reduce_monic(p, phi_);
    Element out(degree());
    for (std::size_t i = 0; i < degree(); ++i) out[i] = p[i];
    powers_.push_back(std::move(out));
  }
}

CyclotomicField::Element CyclotomicField::one() const { return from_rational(1); }

CyclotomicField::Element CyclotomicField::from_rational(const Rational& q) const {
  Element out = zero();
  out[0] = q;
  return out;
}

const CyclotomicField::Element& CyclotomicField::omega_power(std::int64_t e) const {
  const auto d = static_cast<std::int64_t>(d_);
  return powers_[static_cast<std::size_t>(((e % d) + d) % d)];
}

CyclotomicField::Element CyclotomicField::add(const Element& a, const Element& b) const {
  Element out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

CyclotomicField::Element CyclotomicField::sub(const Element& a, const Element& b) const {
  Element out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

CyclotomicField::Element CyclotomicField::mul(const Element& a, const Element& b) const {
  const std::size_t n = degree();
  std::vector<Rational> prod(2 * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) prod[i + j] += a[i] * b[j];
  }
  for (std::size_t top = prod.size(); top-- > n;) {
    if (prod[top] == 0) continue;
    const Rational c = prod[top];
    for (std::size_t i = 0; i <= n; ++i) prod[top - n + i] -= c * phi_[i];
  }
  prod.resize(n);
  return prod;
}

CyclotomicField::Element CyclotomicField::scale(const Element& a, const Rational& q) const {
  Element out = a;
  for (auto& c : out) c *= q;
  return out;
}

bool CyclotomicField::is_zero(const Element& a) const {
  for (const auto& c : a)
    if (c != 0) return false;
  return true;
}

CyclotomicField::Element CyclotomicField::from_power_counts(std::span<const std::int64_t> counts) const {
  std::vector<std::int64_t> p(counts.begin(), counts.end());
  if (p.size() < degree()) p.resize(degree(), 0);
  reduce_monic(p, phi_);
  Element out(degree());
  for (std::size_t i = 0; i < degree(); ++i) out[i] = p[i];
  return out;
}

bool CyclotomicField::power_counts_vanish(std::span<const std::int64_t> counts) const {
  std::vector<std::int64_t> p(counts.begin(), counts.end());
  if (p.size() < degree()) p.resize(degree(), 0);
  reduce_monic(p, phi_);
  for (auto c : p)
    if (c != 0) return false;
  return true;
}

std::string CyclotomicField::to_string(const Element& a) const {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    if (!out.empty()) out += " + ";
    out += "(" + a[i].str() + ")";
    if (i == 1) out += "*w";
    if (i > 1) out += "*w^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace primhom
