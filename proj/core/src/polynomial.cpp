#include "primhom/polynomial.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#include "primhom/errors.hpp"
#include "primhom/modular.hpp"
#include "primhom/parallel.hpp"

namespace primhom {

NvPoly::NvPoly(int variables, std::uint32_t r) : n_(variables), r_(r) {
  if (variables < 1) fail(ErrorCode::InvalidConfig, "polynomial needs at least one variable");
  if (!is_small_prime(r)) fail(ErrorCode::InvalidConfig, "coefficient field size " + std::to_string(r) + " is not prime");
}

void NvPoly::add_term(const Exponents& exps, std::int64_t c) {
  if (static_cast<int>(exps.size()) != n_) fail(ErrorCode::InvalidConfig, "exponent vector has the wrong length");
  std::uint32_t v = reduce_mod(c, r_);
  if (v == 0) return;
  auto [it, inserted] = terms_.try_emplace(exps, v);
  if (!inserted) {
    it->second = add_mod(it->second, v, r_);
    if (it->second == 0) terms_.erase(it);
  }
}

std::uint32_t NvPoly::coeff(const Exponents& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? 0 : it->second;
}

namespace {

std::uint64_t total_degree(const Exponents& e) {
  std::uint64_t s = 0;
  for (auto x : e) s += x;
  return s;
}

void require_compatible(const NvPoly& a, const NvPoly& b) {
  if (a.variables() != b.variables() || a.prime() != b.prime())
    fail(ErrorCode::SpecMismatch, "polynomials over different rings");
}

}  // namespace

std::uint64_t NvPoly::degree() const {
  std::uint64_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

bool NvPoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  const std::uint64_t d = total_degree(terms_.begin()->first);
  return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return total_degree(t.first) == d; });
}

std::uint32_t NvPoly::evaluate(std::span<const std::uint32_t> point) const {
  if (static_cast<int>(point.size()) != n_) fail(ErrorCode::InvalidConfig, "evaluation point has the wrong length");
  std::uint32_t sum = 0;
  for (const auto& [e, c] : terms_) {
    std::uint32_t v = c;
    for (int i = 0; i < n_ && v != 0; ++i)
      if (e[i] != 0) v = mul_mod(v, pow_mod(point[i] % r_, e[i], r_), r_);
    sum = add_mod(sum, v, r_);
  }
  return sum;
}

NvPoly NvPoly::operator+(const NvPoly& other) const {
  require_compatible(*this, other);
  NvPoly out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, c);
  return out;
}

NvPoly NvPoly::operator-(const NvPoly& other) const { return *this + other.scaled(-1); }

NvPoly NvPoly::operator*(const NvPoly& other) const {
  require_compatible(*this, other);
  NvPoly out(n_, r_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      Exponents e(n_);
      for (int i = 0; i < n_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, std::int64_t{mul_mod(ca, cb, r_)});
    }
  }
  return out;
}

NvPoly NvPoly::scaled(std::int64_t c) const {
  NvPoly out(n_, r_);
  const std::uint32_t s = reduce_mod(c, r_);
  if (s == 0) return out;
  for (const auto& [e, v] : terms_) out.terms_.emplace(e, mul_mod(v, s, r_));
  return out;
}

std::string NvPoly::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  // graded order: higher total degree first, then reverse lexicographic on
  // exponent vectors so that a1^3 precedes a1.a2^2
  std::vector<std::pair<Exponents, std::uint32_t>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
    auto dx = total_degree(x.first), dy = total_degree(y.first);
    if (dx != dy) return dx > dy;
    return x.first > y.first;
  });
  std::string out;
  for (const auto& [e, c] : sorted) {
    if (!out.empty()) out += " + ";
    std::string mono;
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += '.';
      mono += static_cast<std::size_t>(i) < names.size() ? names[i] : "a" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      out += std::to_string(c);
    else
      out += (c == 1 ? "" : std::to_string(c) + "*") + mono;
  }
  return out;
}

std::vector<std::string> surface_variable_names(int genus) {
  std::vector<std::string> names;
  for (int i = 1; i <= genus; ++i) {
    names.push_back("x" + std::to_string(i));
    names.push_back("y" + std::to_string(i));
  }
  return names;
}

int minimal_k(std::uint32_t r, int n) {
  if (n < 1) fail(ErrorCode::InvalidConfig, "n must be at least 1");
  if (r < 2) fail(ErrorCode::InvalidConfig, "r must be at least 2");
  const std::uint64_t bound = static_cast<std::uint64_t>(n - 1) * (r - 1);
  int k = 1;
  std::uint64_t power = r;
  while (power <= bound) {
    power *= r;
    ++k;
  }
  return k;
}

NvPoly build_nonvanishing_raw(std::uint32_t r, int n) {
  NvPoly p(n, r);
  Exponents e(n, 0);
  e[0] = 1;
  p.add_term(e, 1);
  // P_i = P_{i-1} - P_{i-1} a_{i+1}^(r-1) + a_{i+1}
  for (int v = 1; v < n; ++v) {
    NvPoly next = p;
    for (const auto& [exps, c] : p.terms()) {
      Exponents shifted = exps;
      shifted[v] += r - 1;
      next.add_term(shifted, -std::int64_t{c});
    }
    Exponents single(n, 0);
    single[v] = 1;
    next.add_term(single, 1);
    p = std::move(next);
  }
  return p;
}

NvPoly homogenize(const NvPoly& p, std::uint64_t degree) {
  const std::uint32_t step = p.prime() - 1;
  NvPoly out(p.variables(), p.prime());
  for (const auto& [exps, c] : p.terms()) {
    const std::uint64_t d = total_degree(exps);
    if (d > degree) fail(ErrorCode::InvalidConfig, "monomial degree exceeds the homogenization degree");
    if (d == 0 && degree > 0) fail(ErrorCode::InvalidConfig, "cannot homogenize a constant term");
    if ((degree - d) % step != 0)
      fail(ErrorCode::InvalidConfig, "degree gap is not a multiple of r - 1, homogenization would change values");
    Exponents e = exps;
    auto target = std::max_element(e.begin(), e.end());  // first maximal entry
    *target += static_cast<std::uint32_t>(degree - d);
    out.add_term(e, c);
  }
  return out;
}

NvPoly build_nonvanishing(std::uint32_t r, int n, int k) {
  if (!is_small_prime(r)) fail(ErrorCode::InvalidConfig, "r = " + std::to_string(r) + " is not prime");
  if (n < 1) fail(ErrorCode::InvalidConfig, "n must be at least 1");
  const int kmin = minimal_k(r, n);
  if (k < kmin)
    fail(ErrorCode::InvalidConfig, "k = " + std::to_string(k) + " is below the minimum " + std::to_string(kmin) +
                                       " for r = " + std::to_string(r) + ", n = " + std::to_string(n));
  const std::uint64_t D = checked_power(r, k);
  if (D > std::numeric_limits<std::uint32_t>::max()) fail(ErrorCode::InvalidConfig, "r^k too large for exponents");
  return homogenize(build_nonvanishing_raw(r, n), D);
}

std::string_view to_string(MonomialType type) {
  switch (type) {
    case MonomialType::I: return "I";
    case MonomialType::II: return "II";
    case MonomialType::III: return "III";
    case MonomialType::IIIa: return "IIIa";
    case MonomialType::IIIb: return "IIIb";
  }
  return "?";
}

Pairing Pairing::surface(int genus) {
  Pairing p;
  for (int v = 0; v < 2 * genus; ++v) p.partner.push_back(v ^ 1);
  return p;
}

MonomialType classify_monomial(const Exponents& exps, std::uint32_t r, const Pairing* pairing) {
  std::vector<int> support;
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] != 0) support.push_back(static_cast<int>(i));
  auto describe = [&] {
    std::string s = "(";
    for (std::size_t i = 0; i < exps.size(); ++i) s += (i ? "," : "") + std::to_string(exps[i]);
    return s + ")";
  };
  if (support.size() == 1) return MonomialType::I;
  if (support.size() >= 3) return MonomialType::II;
  if (support.empty()) fail(ErrorCode::ObservationViolation, "constant monomial has no type");

  const std::uint32_t m = r - 1;
  const std::uint32_t e0 = exps[support[0]] % m, e1 = exps[support[1]] % m;
  const bool residues_ok = (e0 == 1 % m && e1 == 0) || (e0 == 0 && e1 == 1 % m);
  if (!residues_ok)
    fail(ErrorCode::ObservationViolation, "two-variable monomial " + describe() + " has exponent residues outside {0, 1}");
  if (pairing == nullptr) return MonomialType::III;
  if (static_cast<std::size_t>(support[0]) >= pairing->partner.size())
    fail(ErrorCode::InvalidConfig, "pairing does not cover every variable");
  return pairing->partner[support[0]] == support[1] ? MonomialType::IIIb : MonomialType::IIIa;
}

std::map<MonomialType, NvPoly> classify(const NvPoly& p, const Pairing* pairing) {
  std::map<MonomialType, NvPoly> out;
  for (const auto& [exps, c] : p.terms()) {
    MonomialType t = classify_monomial(exps, p.prime(), pairing);
    out.try_emplace(t, p.variables(), p.prime()).first->second.add_term(exps, c);
  }
  return out;
}

NonvanishingReport verify_nonvanishing(const NvPoly& p, std::uint64_t guard) {
  const std::uint32_t r = p.prime();
  const int n = p.variables();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > guard / r) fail(ErrorCode::TooLarge, "r^n exceeds the enumeration guard of " + std::to_string(guard));
    total *= r;
  }

  // flatten terms; small fields use power tables
  struct Flat {
    std::uint32_t coeff;
    std::vector<std::pair<int, std::uint32_t>> factors;
  };
  std::vector<Flat> flat;
  for (const auto& [e, c] : p.terms()) {
    Flat f{c, {}};
    for (int i = 0; i < n; ++i)
      if (e[i] != 0) f.factors.emplace_back(i, e[i]);
    flat.push_back(std::move(f));
  }
  const bool tables = r <= 4096;
  std::map<std::uint32_t, std::vector<std::uint32_t>> pow_table;
  if (tables) {
    for (auto& f : flat)
      for (auto& [var, exp] : f.factors) {
        auto& t = pow_table[exp];
        if (t.empty())
          for (std::uint32_t v = 0; v < r; ++v) t.push_back(pow_mod(v, exp, r));
      }
  }
  std::vector<std::vector<const std::vector<std::uint32_t>*>> table_of(flat.size());
  if (tables)
    for (std::size_t t = 0; t < flat.size(); ++t)
      for (auto& [var, exp] : flat[t].factors) table_of[t].push_back(&pow_table[exp]);

  auto eval_point = [&](const std::vector<std::uint32_t>& pt) {
    std::uint32_t sum = 0;
    for (std::size_t t = 0; t < flat.size(); ++t) {
      std::uint32_t v = flat[t].coeff;
      const auto& fs = flat[t].factors;
      for (std::size_t j = 0; j < fs.size() && v != 0; ++j) {
        std::uint32_t x = pt[fs[j].first];
        v = mul_mod(v, tables ? (*table_of[t][j])[x] : pow_mod(x, fs[j].second, r), r);
      }
      sum = add_mod(sum, v, r);
    }
    return sum;
  };

  std::atomic<std::uint64_t> first_zero{std::numeric_limits<std::uint64_t>::max()};
  parallel_for(total - 1, [&](std::size_t begin, std::size_t end, unsigned) {
    std::vector<std::uint32_t> pt(n);
    for (std::size_t idx = begin; idx < end; ++idx) {
      if (idx + 1 >= first_zero.load(std::memory_order_relaxed)) return;
      std::uint64_t code = idx + 1;  // skip the origin
      for (int i = 0; i < n; ++i) {
        pt[i] = static_cast<std::uint32_t>(code % r);
        code /= r;
      }
      if (eval_point(pt) == 0) {
        std::uint64_t cur = first_zero.load();
        while (idx + 1 < cur && !first_zero.compare_exchange_weak(cur, idx + 1)) {
        }
        return;
      }
    }
  });

  NonvanishingReport report;
  report.points_checked = total - 1;
  const std::uint64_t z = first_zero.load();
  if (z != std::numeric_limits<std::uint64_t>::max()) {
    report.pass = false;
    std::vector<std::uint32_t> pt(n);
    std::uint64_t code = z;
    for (int i = 0; i < n; ++i) {
      pt[i] = static_cast<std::uint32_t>(code % r);
      code /= r;
    }
    report.zero_at = pt;
    report.points_checked = z;
  }
  return report;
}

}  // namespace primhom
