#include "primhom/embedding.hpp"


#include "primhom/errors.hpp"

namespace primhom {

GeneratorImages::GeneratorImages(Alphabet alphabet, std::vector<UnitElement> images)
    : alphabet_(alphabet), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != alphabet_.size())
    fail(ErrorCode::InvalidConfig, "need one image per generator");
  for (const auto& g : images_) {
    if (!(g.spec() == images_.front().spec())) fail(ErrorCode::SpecMismatch, "generator images in different algebras");
    inverses_.push_back(g.inverse());
  }
}

UnitElement GeneratorImages::apply(const GroupWord& w) const {
  if (!(w.alphabet() == alphabet_)) fail(ErrorCode::SpecMismatch, "word is over a different group");
  UnitElement out = UnitElement::one(spec());
  for (const auto& l : w.letters()) out = out * (l.exponent > 0 ? images_[l.generator] : inverses_[l.generator]);
  return out;
}

GeneratorImages rho_free(const Alphabet& alphabet, const AlgebraSpec& spec) {
  if (alphabet.is_surface()) fail(ErrorCode::InvalidConfig, "rho_free needs a free group");
  if (spec.kind() != AlgebraKind::FreeTrunc && spec.kind() != AlgebraKind::SortedTrunc)
    fail(ErrorCode::SpecMismatch, "rho_free targets FreeTrunc or SortedTrunc, got " + spec.describe());
  if (spec.symbol_count() != alphabet.size()) fail(ErrorCode::SpecMismatch, "rank does not match generator count");
  std::vector<UnitElement> images;
  for (int i = 0; i < alphabet.size(); ++i)
    images.emplace_back(AlgElement::one(spec) + AlgElement::generator(spec, i));
  return {alphabet, std::move(images)};
}

UnitElement rho_free(const GroupWord& w, const AlgebraSpec& spec) { return rho_free(w.alphabet(), spec).apply(w); }

GeneratorImages rho_m(const Alphabet& alphabet, const AlgebraSpec& spec) {
  if (!alphabet.is_surface() || spec.kind() != AlgebraKind::MTrunc || spec.genus() != alphabet.genus())
    fail(ErrorCode::SpecMismatch, "rho_m needs a surface group and MTrunc of the same genus");
  std::vector<UnitElement> images;
  for (int i = 0; i < alphabet.size(); ++i)
    images.emplace_back(AlgElement::one(spec) + AlgElement::generator(spec, i));
  return {alphabet, std::move(images)};
}

AlgElement catalan_series_E(std::uint32_t r, int k) {
  if (r == 2) fail(ErrorCode::InvalidConfig, "the square-root series needs an odd prime");
  const AlgebraSpec spec = AlgebraSpec::quat_trunc(r, k);
  const std::uint32_t D = spec.degree_bound();
  const auto catalan = catalan_mod_r(D / 2 + 1, r);
  std::vector<AlgElement::Term> terms;
  for (std::uint32_t m = 1; 2 * m <= D; ++m)
    terms.push_back({spec.quat(2 * m, 0, QuatUnit::One), neg_mod(catalan[m - 1], r)});
  return AlgElement::from_terms(spec, std::move(terms));
}

GeneratorImages tau_images(const AlgebraSpec& spec) {
  if (spec.kind() != AlgebraKind::QuatTrunc) fail(ErrorCode::SpecMismatch, "tau targets QuatTrunc");
  const AlgElement one = AlgElement::one(spec);
  const AlgElement A = AlgElement::generator(spec, 0);
  const AlgElement B = AlgElement::generator(spec, 1);
  const AlgElement i = AlgElement::unit(spec, QuatUnit::I);
  const AlgElement j = AlgElement::unit(spec, QuatUnit::J);
  const AlgElement k = AlgElement::unit(spec, QuatUnit::K);
  const AlgElement E = catalan_series_E(spec.prime(), spec.k());
  std::vector<UnitElement> images{UnitElement(one + A * i + E * k), UnitElement(one + B * j),
                                  UnitElement(one + A * j - E * k), UnitElement(one + B * i)};
  return {Alphabet::surface(2), std::move(images)};
}

UnitElement tau(const GroupWord& w, const AlgebraSpec& spec) { return tau_images(spec).apply(w); }

GroupWord h_collapse(const GroupWord& w, int pair, bool swapped) {
  const Alphabet& alphabet = w.alphabet();
  if (!alphabet.is_surface()) fail(ErrorCode::InvalidConfig, "collapse maps act on surface words");
  const int g = alphabet.genus();
  if (g < 2) fail(ErrorCode::InvalidConfig, "collapse maps need genus at least 2");
  if (pair < 1 || pair > g) fail(ErrorCode::InvalidConfig, "pair index out of range");
  const int first = pair - 1;
  const int second = pair % g;  // wraps pair g onto pair 1
  std::vector<Letter> out;
  for (const auto& l : w.letters()) {
    const int p = l.generator / 2;
    int target;
    if (p == first)
      target = l.generator % 2;
    else if (p == second)
      target = 2 + l.generator % 2;
    else
      continue;
    if (swapped) target ^= 1;
    out.push_back({target, l.exponent});
  }
  return GroupWord(Alphabet::surface(2), std::move(out));
}

std::vector<UnitElement> PrimeWitness::rho(const GroupWord& w) const {
  std::vector<UnitElement> out;
  out.reserve(factors.size());
  for (const auto& f : factors) out.push_back(f.rho.apply(w));
  return out;
}

std::vector<std::uint32_t> PrimeWitness::alpha(const std::vector<UnitElement>& g) const {
  return primhom::alpha(g.front());
}

bool PrimeWitness::in_C(const std::vector<UnitElement>& g) const {
  for (const auto& x : g)
    if (!in_central_C(x)) return false;
  return true;
}

std::uint32_t PrimeWitness::psi(const std::vector<UnitElement>& c) const {
  if (c.size() != factors.size()) fail(ErrorCode::SpecMismatch, "element has the wrong number of factors");
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) sum = add_mod(sum, psi_eval(factors[i].psi, c[i]).value(), r);
  return sum;
}

WordCheck check_word(const PrimeWitness& witness, const GroupWord& w) {
  WordCheck out;
  auto g = witness.rho(w);
  out.alpha = witness.alpha(g);
  out.expected = witness.P.evaluate(out.alpha);
  std::vector<UnitElement> c;
  for (const auto& x : g) c.push_back(x.pow(static_cast<std::int64_t>(witness.D)));
  out.central = witness.in_C(c);
  if (out.central) out.psi = witness.psi(c);
  return out;
}

PrimeWitness assemble_witness_free(std::uint32_t r, int n, int k, const std::string& variant) {
  if (variant != "full" && variant != "sorted")
    fail(ErrorCode::InvalidConfig, "variant must be 'full' or 'sorted', got '" + variant + "'");
  PrimeWitness w;
  w.r = r;
  w.k = k;
  w.P = build_nonvanishing(r, n, k);
  const AlgebraSpec spec = variant == "full" ? AlgebraSpec::free_trunc(r, k, n) : AlgebraSpec::sorted_trunc(r, k, n);
  w.D = spec.degree_bound();
  w.alphabet = Alphabet::free(n);
  w.variant = variant;
  w.factors.push_back({std::string(to_string(spec.kind())), rho_free(w.alphabet, spec), psi_for_polynomial(w.P, spec)});
  return w;
}

NvPoly surface_power_form(std::uint32_t r, std::uint64_t D, int variables, int u1, int v1, int u2, int v2) {
  if (D < 3 || D % 2 == 0) fail(ErrorCode::InvalidConfig, "the surface power form needs odd D >= 3");
  const std::uint64_t N = (D - 3) / 2;
  NvPoly sum(variables, r);
  for (std::uint64_t j = 0; j <= N; ++j) {
    const std::uint32_t c = binomial_mod_r(N, j, r).value();
    if (c == 0) continue;
    Exponents e(variables, 0);
    e[u1] = static_cast<std::uint32_t>(2 * j);
    e[u2] = static_cast<std::uint32_t>(2 * (N - j));
    sum.add_term(e, c);
  }
  NvPoly tail(variables, r);
  Exponents e1(variables, 0);
  e1[u1] = 2;
  e1[v1] = 1;
  tail.add_term(e1, 1);
  Exponents e2(variables, 0);
  e2[u1] = 1;
  e2[u2] = 1;
  e2[v2] = 1;
  tail.add_term(e2, -1);
  return sum * tail;
}

PrimeWitness assemble_witness_surface(std::uint32_t r, int genus, int k) {
  if (r == 2) fail(ErrorCode::InvalidConfig, "surface witnesses need an odd prime");
  if (genus < 2) fail(ErrorCode::InvalidConfig, "surface witnesses need genus at least 2");
  const int n = 2 * genus;
  PrimeWitness w;
  w.r = r;
  w.k = k;
  w.P = build_nonvanishing(r, n, k);
  w.alphabet = Alphabet::surface(genus);
  w.variant = "surface";
  const AlgebraSpec m_spec = AlgebraSpec::m_trunc(r, k, genus);
  const AlgebraSpec h_spec = AlgebraSpec::quat_trunc(r, k);
  const std::uint32_t D = m_spec.degree_bound();
  w.D = D;

  // split off the same-pair terms x_i^(D-1) y_i and x_i y_i^(D-1)
  const Pairing pairing = Pairing::surface(genus);
  NvPoly Q(n, r);
  w.a.assign(genus, 0);
  w.b.assign(genus, 0);
  for (const auto& [exps, c] : w.P.terms()) {
    if (classify_monomial(exps, r, &pairing) != MonomialType::IIIb) {
      Q.add_term(exps, c);
      continue;
    }
    int x = -1;
    for (int v = 0; v < n; ++v)
      if (exps[v] != 0) {
        x = v;
        break;
      }
    const int pair = x / 2;
    if (exps[2 * pair] == D - 1 && exps[2 * pair + 1] == 1)
      w.a[pair] = c;
    else if (exps[2 * pair] == 1 && exps[2 * pair + 1] == D - 1)
      w.b[pair] = c;
    else
      fail(ErrorCode::UnsupportedMonomialType, "same-pair term with exponents (" + std::to_string(exps[2 * pair]) +
                                                   ", " + std::to_string(exps[2 * pair + 1]) + ") is not handled");
  }

  // sign of the quaternion power map, read off the probe word x1 y1 whose
  // linear coordinates are (1, 1, 0, 0) where the power form equals 1
  const GeneratorImages tau_gen = tau_images(h_spec);
  const Monomial target = quat_psi_monomial(h_spec);
  {
    const UnitElement probe = tau_gen.apply(GroupWord::parse(Alphabet::surface(2), "x1.y1"));
    const std::uint32_t v = probe.pow(static_cast<std::int64_t>(D)).value().coeff(target);
    if (v == 1)
      w.sign = 1;
    else if (v == r - 1)
      w.sign = -1;
    else
      fail(ErrorCode::PropertyViolation, "quaternion probe power has coefficient " + std::to_string(v) + ", not +-1");
  }

  // move the non-leading part of each quaternion power form onto M
  NvPoly m_part = Q;
  for (int i = 0; i < genus; ++i) {
    const int xi = 2 * i, yi = 2 * i + 1;
    const int xn = 2 * ((i + 1) % genus), yn = xn + 1;
    NvPoly lead_u(n, r), lead_s(n, r);
    Exponents eu(n, 0), es(n, 0);
    eu[xi] = D - 1;
    eu[yi] = 1;
    es[xi] = 1;
    es[yi] = D - 1;
    lead_u.add_term(eu, 1);
    lead_s.add_term(es, 1);
    const NvPoly R_u = surface_power_form(r, D, n, xi, yi, xn, yn) - lead_u;
    const NvPoly R_s = surface_power_form(r, D, n, yi, xi, yn, xn) - lead_s;
    m_part = m_part - R_u.scaled(w.a[i]) - R_s.scaled(w.b[i]);
  }
  for (const auto& [exps, c] : m_part.terms())
    if (classify_monomial(exps, r, &pairing) == MonomialType::IIIb)
      fail(ErrorCode::PropertyViolation, "correction left a same-pair term on the M factor");

  const GeneratorImages m_gen = rho_m(w.alphabet, m_spec);
  w.factors.push_back({"M", m_gen, psi_for_polynomial(m_part, m_spec)});
  w.m_part = std::move(m_part);

  for (int i = 1; i <= genus; ++i) {
    for (bool swapped : {false, true}) {
      std::vector<UnitElement> images;
      for (int gen = 0; gen < n; ++gen)
        images.push_back(tau_gen.apply(h_collapse(GroupWord::generator(w.alphabet, gen), i, swapped)));
      PsiSpec psi(h_spec);
      const std::uint32_t weight = swapped ? w.b[i - 1] : w.a[i - 1];
      psi.add(target, w.sign > 0 ? std::int64_t{weight} : -std::int64_t{weight});
      const int index = 2 * i - (swapped ? 0 : 1);
      w.factors.push_back({"H" + std::to_string(index) + (swapped ? " (pair " + std::to_string(i) + ", swapped)"
                                                                 : " (pair " + std::to_string(i) + ")"),
                           GeneratorImages(w.alphabet, std::move(images)), std::move(psi)});
    }
  }
  w.notes.push_back("quaternion factors are numbered H1..H" + std::to_string(n) +
                    ": H(2i-1) collapses onto pair i, H(2i) composes that with the x/y exchange");
  return w;
}

std::vector<BigInt> WitnessBundle::alpha(const GroupWord& w) const {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto a = parts[i].alpha(parts[i].rho(w));
    if (out.empty()) out.assign(a.size(), 0);
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = (out[j] + q[i] * a[j]) % modulus;
  }
  return out;
}

BigInt WitnessBundle::psi_of_power(const GroupWord& w) const {
  BigInt total = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<UnitElement> c;
    for (const auto& g : parts[i].rho(w)) c.push_back(g.pow(exponent));
    total = (total + q[i] * parts[i].psi(c)) % modulus;
  }
  return total;
}

WitnessBundle crt_lift(std::vector<PrimeWitness> parts) {
  if (parts.empty()) fail(ErrorCode::InvalidConfig, "CRT lift needs at least one witness");
  std::vector<std::uint32_t> primes;
  for (const auto& p : parts) {
    if (!(p.alphabet == parts.front().alphabet)) fail(ErrorCode::InvalidConfig, "witnesses have different ranks");
    if (p.k != parts.front().k) fail(ErrorCode::InvalidConfig, "witnesses have different k");
    primes.push_back(p.r);
  }
  const CrtCoefficients crt = crt_coefficients(primes, parts.front().k);
  WitnessBundle out;
  out.modulus = 1;
  for (auto p : primes) out.modulus *= p;
  out.q = crt.q;
  out.exponent = crt.exponent;
  out.parts = std::move(parts);
  return out;
}

}  // namespace primhom
