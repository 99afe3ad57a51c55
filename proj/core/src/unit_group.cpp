#include "primhom/unit_group.hpp"

#include <algorithm>
#include <mutex>

#include "primhom/errors.hpp"
#include "primhom/parallel.hpp"

namespace primhom {

UnitElement::UnitElement(AlgElement value) : value_(std::move(value)) {
  if (augmentation(value_).value() != 1)
    fail(ErrorCode::NotAUnit, "constant term of " + value_.to_string() + " is not 1");
}

UnitElement UnitElement::one(const AlgebraSpec& spec) { return UnitElement(AlgElement::one(spec)); }

UnitElement UnitElement::operator*(const UnitElement& other) const { return UnitElement(value_ * other.value_); }
UnitElement UnitElement::inverse() const { return UnitElement(inverse_unit(value_)); }
UnitElement UnitElement::pow(std::int64_t e) const { return UnitElement(power(value_, e)); }
UnitElement UnitElement::pow(const BigInt& e) const { return UnitElement(power(value_, e)); }

std::vector<std::uint32_t> alpha(const UnitElement& g) {
  const AlgebraSpec& spec = g.spec();
  if (spec.is_word_algebra()) return linear_part(g.value());
  return {g.value().coeff(spec.quat(1, 0, QuatUnit::I)), g.value().coeff(spec.quat(0, 1, QuatUnit::J)),
          g.value().coeff(spec.quat(1, 0, QuatUnit::J)), g.value().coeff(spec.quat(0, 1, QuatUnit::I))};
}

bool in_central_C(const UnitElement& g) {
  const std::uint32_t D = g.spec().degree_bound();
  const auto terms = g.value().terms();
  // terms are sorted by degree; the first one is the constant 1
  return std::all_of(terms.begin() + 1, terms.end(), [D](const auto& t) { return t.mono.degree >= D; });
}

void PsiSpec::add(const Monomial& m, std::int64_t c) {
  if (!spec.admissible(m) || m.degree != spec.degree_bound())
    fail(ErrorCode::InvalidConfig, "projection target must be an admissible monomial of degree D");
  const std::uint32_t r = spec.prime();
  const std::uint32_t v = reduce_mod(c, r);
  auto it = std::find_if(weights.begin(), weights.end(), [&](const auto& w) { return w.first == m; });
  if (it == weights.end()) {
    if (v != 0) weights.emplace_back(m, v);
    return;
  }
  it->second = add_mod(it->second, v, r);
  if (it->second == 0) weights.erase(it);
}

std::string PsiSpec::to_string() const {
  auto sorted = weights;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out = "{";
  for (std::size_t i = 0; i < sorted.size(); ++i)
    out += (i ? ", " : "") + spec.render(sorted[i].first) + " -> " + std::to_string(sorted[i].second);
  return out + "}";
}

PrimeFieldElem psi_eval(const PsiSpec& psi, const UnitElement& c) {
  if (!(psi.spec == c.spec())) fail(ErrorCode::SpecMismatch, "projection and element live in different algebras");
  if (!in_central_C(c)) fail(ErrorCode::NotInC, c.to_string() + " is not in the central subgroup");
  const std::uint32_t r = psi.spec.prime();
  std::uint32_t sum = 0;
  for (const auto& [m, w] : psi.weights) sum = add_mod(sum, mul_mod(w, c.value().coeff(m), r), r);
  return {sum, r};
}

Monomial quat_psi_monomial(const AlgebraSpec& spec) {
  return spec.quat(spec.degree_bound() - 1, 1, QuatUnit::J);
}

Monomial word_for_monomial(const Exponents& exps, const AlgebraSpec& spec) {
  if (!spec.is_word_algebra()) fail(ErrorCode::SpecMismatch, "words are not defined in " + spec.describe());
  if (static_cast<int>(exps.size()) != spec.symbol_count())
    fail(ErrorCode::InvalidConfig, "exponent vector does not match the generator count");
  std::uint64_t degree = 0;
  for (auto e : exps) degree += e;
  if (degree > spec.degree_bound()) fail(ErrorCode::InvalidConfig, "monomial degree exceeds r^k");

  std::vector<int> letters;
  auto append_power = [&](int symbol, bool right) {
    std::vector<int> run(exps[symbol], symbol);
    letters.insert(right ? letters.end() : letters.begin(), run.begin(), run.end());
  };

  if (spec.kind() != AlgebraKind::MTrunc) {
    for (int s = 0; s < spec.symbol_count(); ++s) append_power(s, true);
    return spec.word(letters);
  }

  std::vector<int> support;
  for (int s = 0; s < spec.symbol_count(); ++s)
    if (exps[s] != 0) support.push_back(s);
  if (support.size() <= 1) {
    for (int s : support) append_power(s, true);
    return spec.word(letters);
  }
  // seed with two symbols from different pairs
  const int a = support[0];
  auto second = std::find_if(support.begin() + 1, support.end(), [a](int s) { return (s ^ 1) != a; });
  if (second == support.end())
    fail(ErrorCode::UnsupportedMonomialType, "monomial in " + spec.symbol_name(a) + ", " +
                                                 spec.symbol_name(a ^ 1) + " alone has no admissible word");
  const int b = *second;
  append_power(a, true);
  append_power(b, true);
  for (int s : support) {
    if (s == a || s == b) continue;
    // the two ends differ, so at most one side touches the partner of s
    const bool right_ok = (letters.back() ^ s) != 1;
    append_power(s, right_ok);
  }
  Monomial m = spec.word(letters);
  if (!spec.admissible(m)) fail(ErrorCode::PropertyViolation, "constructed word is not admissible");
  return m;
}

PsiSpec build_psi_for_monomial(const Exponents& exps, const AlgebraSpec& spec) {
  PsiSpec psi(spec);
  psi.add(word_for_monomial(exps, spec), 1);
  return psi;
}

PsiSpec psi_for_polynomial(const NvPoly& p, const AlgebraSpec& spec) {
  if (p.variables() != spec.symbol_count() || p.prime() != spec.prime())
    fail(ErrorCode::SpecMismatch, "polynomial ring does not match " + spec.describe());
  PsiSpec psi(spec);
  for (const auto& [exps, c] : p.terms()) psi.add(word_for_monomial(exps, spec), c);
  return psi;
}

namespace {

Monomial random_monomial(const AlgebraSpec& spec, std::uint32_t degree, std::mt19937_64& rng) {
  if (!spec.is_word_algebra()) {
    const std::uint32_t b = degree == 0 ? 0 : static_cast<std::uint32_t>(rng() % 2);
    return spec.quat(degree - b, b, static_cast<QuatUnit>(rng() % 4));
  }
  const int n = spec.symbol_count();
  std::vector<int> letters;
  for (std::uint32_t i = 0; i < degree; ++i) {
    int s = static_cast<int>(rng() % n);
    if (!letters.empty()) {
      const int prev = letters.back();
      if (spec.kind() == AlgebraKind::SortedTrunc && s < prev) s = prev + static_cast<int>(rng() % (n - prev));
      if (spec.kind() == AlgebraKind::MTrunc && (s ^ 1) == prev) s = prev;
    }
    letters.push_back(s);
  }
  return spec.word(letters);
}

}  // namespace

UnitElement random_unit(const AlgebraSpec& spec, std::mt19937_64& rng, int extra_terms) {
  const std::uint32_t r = spec.prime();
  std::vector<AlgElement::Term> terms;
  terms.push_back({Monomial{}, 1});
  for (const auto& m : spec.degree_one_basis()) terms.push_back({m, static_cast<std::uint32_t>(rng() % r)});
  const std::uint32_t D = spec.degree_bound();
  if (D >= 2) {
    for (int t = 0; t < extra_terms; ++t) {
      auto degree = static_cast<std::uint32_t>(2 + rng() % (D - 1));
      terms.push_back({random_monomial(spec, degree, rng), static_cast<std::uint32_t>(rng() % r)});
    }
  }
  return UnitElement(AlgElement::from_terms(spec, std::move(terms)));
}

UnitElement linear_unit(const AlgebraSpec& spec, std::span<const std::uint32_t> coefficients) {
  return UnitElement(AlgElement::one(spec) + linear_embedding(spec, coefficients));
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

PropertyReport verify_power_identity(const AlgebraSpec& spec, const NvPoly& p, bool exhaustive,
                                     std::uint64_t samples, std::uint64_t seed) {
  if (!spec.is_word_algebra()) fail(ErrorCode::SpecMismatch, "power identity check needs a word algebra");
  const PsiSpec psi = psi_for_polynomial(p, spec);
  const std::uint32_t r = spec.prime();
  const int n = spec.symbol_count();
  const std::uint64_t D = spec.degree_bound();
  if (p.degree() != D || !p.is_homogeneous())
    fail(ErrorCode::InvalidConfig, "polynomial must be homogeneous of degree r^k");

  std::uint64_t classes = 0;
  if (exhaustive) {
    classes = 1;
    for (int i = 0; i < n; ++i) {
      if (classes > (std::uint64_t{1} << 32) / r) fail(ErrorCode::TooLarge, "too many linear classes to enumerate");
      classes *= r;
    }
  }
  const std::uint64_t total = classes + samples;

  auto make = [&](std::uint64_t idx) {
    if (idx < classes) {
      std::vector<std::uint32_t> coeffs(n);
      for (int i = 0; i < n; ++i) {
        coeffs[i] = static_cast<std::uint32_t>(idx % r);
        idx /= r;
      }
      return linear_unit(spec, coeffs);
    }
    std::mt19937_64 rng(split_seed(seed, idx - classes));
    return random_unit(spec, rng);
  };

  PropertyReport report;
  report.checked = total;
  std::mutex mutex;
  std::uint64_t first_bad = total;
  parallel_for(total, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      UnitElement g = make(idx);
      UnitElement c = g.pow(static_cast<std::int64_t>(D));
      std::string problem;
      if (!in_central_C(c)) {
        problem = "g^D not central";
      } else {
        auto a = alpha(g);
        const std::uint32_t want = p.evaluate(a);
        const std::uint32_t got = psi_eval(psi, c).value();
        if (want != got) problem = "psi(g^D) = " + std::to_string(got) + " but P(alpha(g)) = " + std::to_string(want);
      }
      if (problem.empty()) continue;
      std::lock_guard lock(mutex);
      ++report.failures;
      if (idx < first_bad) {
        first_bad = idx;
        report.counterexample = "g = " + g.to_string() + ": " + problem;
      }
    }
  });
  return report;
}

}  // namespace primhom
