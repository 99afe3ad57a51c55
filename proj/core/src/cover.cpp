#include "primhom/cover.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <set>

#include "primhom/errors.hpp"
#include "primhom/parallel.hpp"

namespace primhom {

// ---------------------------------------------------------------------------
// FiniteQuotient

FiniteQuotient::FiniteQuotient(Alphabet domain, std::vector<QuotientElement> images, std::vector<std::uint64_t> moduli)
    : domain_(domain), images_(std::move(images)), moduli_(std::move(moduli)) {
  if (static_cast<int>(images_.size()) != domain_.size())
    fail(ErrorCode::InvalidConfig, "quotient needs one image per generator (" + std::to_string(domain_.size()) + ")");
  for (const auto& img : images_) {
    if (img.index() != images_.front().index()) fail(ErrorCode::InvalidConfig, "generator images of mixed kinds");
    if (const auto* p = std::get_if<Permutation>(&img)) {
      if (p->size() != std::get<Permutation>(images_.front()).size())
        fail(ErrorCode::InvalidConfig, "permutations of different degrees");
      std::vector<bool> hit(p->size(), false);
      for (auto x : *p) {
        if (x >= p->size() || hit[x]) fail(ErrorCode::InvalidConfig, "generator image is not a permutation");
        hit[x] = true;
      }
    } else if (const auto* t = std::get_if<ResidueTuple>(&img)) {
      if (t->size() != moduli_.size()) fail(ErrorCode::InvalidConfig, "residue tuple length does not match moduli");
      for (std::size_t i = 0; i < t->size(); ++i)
        if ((*t)[i] >= moduli_[i]) fail(ErrorCode::InvalidConfig, "residue out of range");
    } else {
      const auto& u = std::get<UnitTuple>(img);
      const auto& first = std::get<UnitTuple>(images_.front());
      if (u.empty() || u.size() != first.size()) fail(ErrorCode::InvalidConfig, "unit tuples of different lengths");
      for (std::size_t i = 0; i < u.size(); ++i)
        if (!(u[i].spec() == first[i].spec())) fail(ErrorCode::InvalidConfig, "unit tuple factors disagree");
    }
  }
  for (const auto& m : moduli_)
    if (m < 1) fail(ErrorCode::InvalidConfig, "moduli must be positive");
  for (const auto& img : images_) inverses_.push_back(invert(img));
  if (domain_.is_surface() && !is_identity(evaluate(GroupWord::surface_relator(domain_.genus()))))
    fail(ErrorCode::InvalidConfig, "the surface relator does not map to the identity");
}

FiniteQuotient FiniteQuotient::permutations(const Alphabet& domain, std::vector<Permutation> images) {
  std::vector<QuotientElement> imgs(images.begin(), images.end());
  return {domain, std::move(imgs), {}};
}

FiniteQuotient FiniteQuotient::residues(const Alphabet& domain, std::vector<std::uint64_t> moduli,
                                        std::vector<ResidueTuple> images) {
  std::vector<QuotientElement> imgs(images.begin(), images.end());
  return {domain, std::move(imgs), std::move(moduli)};
}

FiniteQuotient FiniteQuotient::units(const Alphabet& domain, std::vector<UnitTuple> images) {
  std::vector<QuotientElement> imgs(images.begin(), images.end());
  return {domain, std::move(imgs), {}};
}

FiniteQuotient FiniteQuotient::from_witness(const PrimeWitness& witness) {
  std::vector<UnitTuple> images;
  for (int g = 0; g < witness.alphabet.size(); ++g) {
    UnitTuple t;
    for (const auto& f : witness.factors) t.push_back(f.rho.image(g));
    images.push_back(std::move(t));
  }
  return units(witness.alphabet, std::move(images));
}

FiniteQuotient FiniteQuotient::from_json(const nlohmann::json& j) {
  try {
    const auto& dom = j.at("domain");
    const std::string type = dom.at("type").get<std::string>();
    Alphabet domain = type == "free"      ? Alphabet::free(dom.at("rank").get<int>())
                      : type == "surface" ? Alphabet::surface(dom.at("genus").get<int>())
                                          : (fail(ErrorCode::InvalidConfig, "unknown domain type '" + type + "'"),
                                             Alphabet::free(1));
    const int present = static_cast<int>(j.contains("permutations")) + static_cast<int>(j.contains("residues")) +
                        static_cast<int>(j.contains("algebra"));
    if (present != 1)
      fail(ErrorCode::InvalidConfig, "quotient JSON needs exactly one of permutations, residues, algebra");
    if (j.contains("permutations")) return permutations(domain, j.at("permutations").get<std::vector<Permutation>>());
    if (j.contains("residues"))
      return residues(domain, j.at("moduli").get<std::vector<std::uint64_t>>(),
                      j.at("residues").get<std::vector<ResidueTuple>>());
    const auto& alg = j.at("algebra");
    const std::string kind = alg.at("kind").get<std::string>();
    const auto r = alg.at("r").get<std::uint32_t>();
    const int k = alg.at("k").get<int>();
    AlgebraSpec spec = kind == "FreeTrunc"     ? AlgebraSpec::free_trunc(r, k, alg.at("n").get<int>())
                       : kind == "SortedTrunc" ? AlgebraSpec::sorted_trunc(r, k, alg.at("n").get<int>())
                       : kind == "MTrunc"      ? AlgebraSpec::m_trunc(r, k, alg.at("genus").get<int>())
                       : kind == "QuatTrunc"   ? AlgebraSpec::quat_trunc(r, k)
                                               : (fail(ErrorCode::InvalidConfig, "unknown algebra kind '" + kind + "'"),
                                                  AlgebraSpec::quat_trunc(3, 1));
    std::vector<UnitTuple> images;
    for (const auto& e : j.at("elements")) images.push_back({UnitElement(AlgElement::parse(spec, e.get<std::string>()))});
    return units(domain, std::move(images));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidConfig, std::string("malformed quotient JSON: ") + e.what());
  }
}

std::string FiniteQuotient::kind() const {
  switch (images_.front().index()) {
    case 0: return "permutations";
    case 1: return "residues";
    default: return "units";
  }
}

QuotientElement FiniteQuotient::identity() const {
  const auto& first = images_.front();
  if (const auto* p = std::get_if<Permutation>(&first)) {
    Permutation id(p->size());
    for (std::uint32_t i = 0; i < id.size(); ++i) id[i] = i;
    return id;
  }
  if (std::holds_alternative<ResidueTuple>(first)) return ResidueTuple(moduli_.size(), 0);
  UnitTuple id;
  for (const auto& u : std::get<UnitTuple>(first)) id.push_back(UnitElement::one(u.spec()));
  return id;
}

QuotientElement FiniteQuotient::multiply(const QuotientElement& a, const QuotientElement& b) const {
  if (a.index() != b.index()) fail(ErrorCode::SpecMismatch, "quotient elements of different kinds");
  if (const auto* pa = std::get_if<Permutation>(&a)) {
    const auto& pb = std::get<Permutation>(b);
    Permutation out(pa->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = pb[(*pa)[i]];  // a first, then b
    return out;
  }
  if (const auto* ta = std::get_if<ResidueTuple>(&a)) {
    const auto& tb = std::get<ResidueTuple>(b);
    ResidueTuple out(ta->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ((*ta)[i] + tb[i]) % moduli_[i];
    return out;
  }
  const auto& ua = std::get<UnitTuple>(a);
  const auto& ub = std::get<UnitTuple>(b);
  UnitTuple out;
  for (std::size_t i = 0; i < ua.size(); ++i) out.push_back(ua[i] * ub[i]);
  return out;
}

QuotientElement FiniteQuotient::invert(const QuotientElement& a) const {
  if (const auto* p = std::get_if<Permutation>(&a)) {
    Permutation out(p->size());
    for (std::uint32_t i = 0; i < p->size(); ++i) out[(*p)[i]] = i;
    return out;
  }
  if (const auto* t = std::get_if<ResidueTuple>(&a)) {
    ResidueTuple out(t->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (moduli_[i] - (*t)[i]) % moduli_[i];
    return out;
  }
  UnitTuple out;
  for (const auto& u : std::get<UnitTuple>(a)) out.push_back(u.inverse());
  return out;
}

QuotientElement FiniteQuotient::evaluate(const GroupWord& w) const {
  if (!(w.alphabet() == domain_)) fail(ErrorCode::SpecMismatch, "word is over a different group");
  QuotientElement out = identity();
  for (const auto& l : w.letters()) out = multiply(out, l.exponent > 0 ? images_[l.generator] : inverses_[l.generator]);
  return out;
}

bool FiniteQuotient::is_identity(const QuotientElement& a) const { return key(a) == key(identity()); }

std::string FiniteQuotient::key(const QuotientElement& a) const {
  std::string out;
  if (const auto* p = std::get_if<Permutation>(&a)) {
    out.resize(p->size() * sizeof(std::uint32_t));
    std::memcpy(out.data(), p->data(), out.size());
  } else if (const auto* t = std::get_if<ResidueTuple>(&a)) {
    out.resize(t->size() * sizeof(std::uint64_t));
    std::memcpy(out.data(), t->data(), out.size());
  } else {
    for (const auto& u : std::get<UnitTuple>(a)) {
      std::string k = u.key();
      const auto len = static_cast<std::uint32_t>(k.size());
      out.append(reinterpret_cast<const char*>(&len), sizeof(len));
      out += k;
    }
  }
  return out;
}

std::string FiniteQuotient::describe(const QuotientElement& a) const {
  std::string out = "(";
  auto sep = [&out](std::size_t i) {
    if (i) out += ", ";
  };
  if (const auto* p = std::get_if<Permutation>(&a)) {
    for (std::size_t i = 0; i < p->size(); ++i) sep(i), out += std::to_string((*p)[i]);
  } else if (const auto* t = std::get_if<ResidueTuple>(&a)) {
    for (std::size_t i = 0; i < t->size(); ++i) sep(i), out += std::to_string((*t)[i]);
  } else {
    const auto& u = std::get<UnitTuple>(a);
    for (std::size_t i = 0; i < u.size(); ++i) sep(i), out += u[i].to_string();
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// CoverComplex

Chain chain_from_steps(const std::vector<EdgeStep>& steps) {
  std::map<std::uint32_t, std::int64_t> acc;
  for (const auto& s : steps) acc[s.edge] += s.sign;
  Chain out;
  for (const auto& [e, c] : acc)
    if (c != 0) out.emplace_back(e, c);
  return out;
}

namespace {

Chain merge_chain(std::vector<std::pair<std::uint32_t, std::int64_t>> entries) {
  std::sort(entries.begin(), entries.end());
  Chain out;
  for (const auto& [e, c] : entries) {
    if (!out.empty() && out.back().first == e)
      out.back().second += c;
    else
      out.emplace_back(e, c);
    if (out.back().second == 0) out.pop_back();
  }
  return out;
}

}  // namespace

std::int64_t CoverComplex::euler_characteristic() const {
  return static_cast<std::int64_t>(vertex_count()) - static_cast<std::int64_t>(edge_count()) +
         static_cast<std::int64_t>(face_count());
}

std::uint32_t CoverComplex::walk(std::uint32_t start, const GroupWord& w, std::vector<EdgeStep>* steps) const {
  std::uint32_t v = start;
  for (const auto& l : w.letters()) {
    if (l.exponent > 0) {
      const std::uint32_t e = v * generators + static_cast<std::uint32_t>(l.generator);
      if (steps) steps->push_back({e, 1});
      v = next[e];
    } else {
      const std::uint32_t u = prev[v * generators + static_cast<std::uint32_t>(l.generator)];
      if (steps) steps->push_back({u * generators + static_cast<std::uint32_t>(l.generator), -1});
      v = u;
    }
  }
  return v;
}

std::vector<std::uint32_t> CoverComplex::deck_map(std::uint32_t q) const {
  std::vector<std::uint32_t> image(vertex_count());
  image[0] = q;
  // vertices are numbered in BFS order, so parents come first
  for (std::size_t v = 1; v < image.size(); ++v) image[v] = next[image[parent[v]] * generators + parent_generator[v]];
  return image;
}

Chain CoverComplex::apply_deck(const Chain& chain, const std::vector<std::uint32_t>& map) const {
  std::vector<std::pair<std::uint32_t, std::int64_t>> out;
  out.reserve(chain.size());
  for (const auto& [e, c] : chain) out.emplace_back(map[e / generators] * generators + e % generators, c);
  std::sort(out.begin(), out.end());
  return out;
}

SparseRow CoverComplex::cycle_coordinates(const Chain& chain) const {
  SparseRow out;
  for (const auto& [e, c] : chain)
    if (cycle_coordinate[e] >= 0) out.emplace_back(static_cast<std::uint32_t>(cycle_coordinate[e]), c);
  std::sort(out.begin(), out.end());
  return out;
}

Chain CoverComplex::face_boundary(std::uint32_t v) const {
  if (!domain.is_surface()) fail(ErrorCode::InvalidConfig, "free covers have no 2-cells");
  std::vector<EdgeStep> steps;
  const std::uint32_t end = walk(v, GroupWord::surface_relator(domain.genus()), &steps);
  if (end != v) fail(ErrorCode::PropertyViolation, "relator lift is not closed");
  return chain_from_steps(steps);
}

Chain CoverComplex::fundamental_cycle(std::uint32_t edge) const {
  if (cycle_coordinate.at(edge) < 0) fail(ErrorCode::InvalidConfig, "fundamental cycles start from non-tree edges");
  std::vector<std::pair<std::uint32_t, std::int64_t>> entries{{edge, 1}};
  for (std::uint32_t u = edge / generators; u != 0; u = parent[u])
    entries.emplace_back(parent[u] * generators + parent_generator[u], 1);
  for (std::uint32_t u = next[edge]; u != 0; u = parent[u])
    entries.emplace_back(parent[u] * generators + parent_generator[u], -1);
  return merge_chain(std::move(entries));
}

bool CoverComplex::is_cycle(const Chain& chain) const {
  std::map<std::uint32_t, std::int64_t> boundary;
  for (const auto& [e, c] : chain) {
    boundary[next[e]] += c;
    boundary[e / generators] -= c;
  }
  return std::all_of(boundary.begin(), boundary.end(), [](const auto& b) { return b.second == 0; });
}

CoverComplex build_cover(const FiniteQuotient& q, std::size_t guard_vertices) {
  CoverComplex c;
  c.domain = q.domain();
  const auto m = static_cast<std::uint32_t>(q.domain().size());
  c.generators = m;
  std::unordered_map<std::string, std::uint32_t> index;
  c.elements.push_back(q.identity());
  index.emplace(q.key(c.elements.front()), 0);
  c.parent.push_back(0);
  c.parent_generator.push_back(0);
  std::vector<bool> tree_edge;
  for (std::size_t v = 0; v < c.elements.size(); ++v) {
    for (std::uint32_t s = 0; s < m; ++s) {
      QuotientElement w = q.multiply(c.elements[v], q.image(static_cast<int>(s)));
      std::string key = q.key(w);
      auto [it, inserted] = index.try_emplace(std::move(key), static_cast<std::uint32_t>(c.elements.size()));
      if (inserted) {
        if (c.elements.size() >= guard_vertices)
          fail(ErrorCode::TooLarge, "quotient has more than " + std::to_string(guard_vertices) + " elements");
        c.elements.push_back(std::move(w));
        c.parent.push_back(static_cast<std::uint32_t>(v));
        c.parent_generator.push_back(s);
      }
      c.next.push_back(it->second);
      tree_edge.push_back(inserted);
    }
  }
  c.prev.assign(c.next.size(), 0);
  c.cycle_coordinate.assign(c.next.size(), -1);
  for (std::uint32_t e = 0; e < c.next.size(); ++e) {
    c.prev[c.next[e] * m + e % m] = e / m;
    if (!tree_edge[e]) {
      c.cycle_coordinate[e] = static_cast<std::int64_t>(c.non_tree_edges.size());
      c.non_tree_edges.push_back(e);
    }
  }
  return c;
}

namespace {

std::vector<SparseRow> face_rows(const CoverComplex& c) {
  std::vector<SparseRow> rows;
  if (!c.domain.is_surface()) return rows;
  for (std::uint32_t v = 0; v < c.vertex_count(); ++v) rows.push_back(c.cycle_coordinates(c.face_boundary(v)));
  return rows;
}

void guard_columns(const CoverComplex& c, std::size_t guard_dim) {
  if (c.cycle_rank() > guard_dim)
    fail(ErrorCode::TooLarge, "cycle space dimension " + std::to_string(c.cycle_rank()) + " exceeds the guard of " +
                                  std::to_string(guard_dim));
}

}  // namespace

HomologyInfo homology(const CoverComplex& c, std::uint64_t seed, std::size_t guard_dim) {
  HomologyInfo out;
  out.cycle_rank = c.cycle_rank();
  if (!c.domain.is_surface()) {
    out.dimension = out.cycle_rank;
    out.method = "graph";
    return out;
  }
  guard_columns(c, guard_dim);
  const auto rows = face_rows(c);
  const RankResult r = rank_over_q(rows, {}, c.cycle_rank(), seed);
  out.boundary_rank = r.base_rank;
  out.dimension = out.cycle_rank - out.boundary_rank;
  out.method = r.method;
  return out;
}

GaschutzReport gaschutz_check(const CoverComplex& c, std::uint64_t seed, std::size_t guard_dim) {
  GaschutzReport out;
  const auto order = static_cast<std::int64_t>(c.vertex_count());
  out.group_order = c.vertex_count();
  out.computed = homology(c, seed, guard_dim).dimension;
  std::int64_t base_chi;
  if (c.domain.is_surface()) {
    const std::int64_t g = c.domain.genus();
    out.expected = static_cast<std::size_t>(2 + (2 * g - 2) * order);
    base_chi = 2 - 2 * g;
  } else {
    const std::int64_t n = c.domain.rank();
    out.expected = static_cast<std::size_t>(1 + (n - 1) * order);
    base_chi = 1 - n;
  }
  out.euler_ok = c.euler_characteristic() == order * base_chi;
  return out;
}

Elevation elevation_class(const CoverComplex& c, const GroupWord& w, std::uint32_t basepoint) {
  Elevation out;
  std::vector<EdgeStep> steps;
  std::uint32_t v = basepoint;
  do {
    v = c.walk(v, w, &steps);
    if (++out.m > c.vertex_count()) fail(ErrorCode::PropertyViolation, "lift does not close up");
  } while (v != basepoint);
  out.chain = chain_from_steps(steps);
  out.cycle = c.cycle_coordinates(out.chain);
  return out;
}

bool homologous(const CoverComplex& c, const Chain& a, const Chain& b, std::uint64_t seed) {
  std::vector<std::pair<std::uint32_t, std::int64_t>> diff(a.begin(), a.end());
  for (const auto& [e, x] : b) diff.emplace_back(e, -x);
  const Chain d = merge_chain(std::move(diff));
  if (!c.is_cycle(d)) return false;
  const SparseRow row = c.cycle_coordinates(d);
  if (row.empty()) return true;
  if (!c.domain.is_surface()) return false;
  const auto rows = face_rows(c);
  const std::vector<SparseRow> extra{row};
  const RankResult r = rank_over_q(rows, extra, c.cycle_rank(), seed);
  return r.base_rank == r.total_rank;
}

WordPredicate d_primitive(std::uint64_t d) {
  if (d < 2) fail(ErrorCode::InvalidConfig, "d must be at least 2");
  return [d](const GroupWord& w) {
    auto a = w.abelianization_mod(d);
    return std::any_of(a.begin(), a.end(), [](std::uint64_t x) { return x != 0; });
  };
}

WordPredicate theta_nonkernel(const FiniteQuotient& theta) {
  return [theta](const GroupWord& w) { return !theta.is_identity(theta.evaluate(w)); };
}

SpanReport orbit_span_rank(const CoverComplex& c, const WordPredicate& predicate, int max_length, std::uint64_t seed,
                           std::size_t guard_dim) {
  guard_columns(c, guard_dim);
  SpanReport out;
  std::vector<GroupWord> words;
  for (auto& w : enumerate_reduced_words(c.domain, max_length))
    if (predicate(w)) words.push_back(std::move(w));
  out.words = words.size();
  if (words.size() * c.vertex_count() > 2'000'000) fail(ErrorCode::TooLarge, "too many elevations to rank");

  std::vector<Chain> at_identity;
  for (const auto& w : words) at_identity.push_back(elevation_class(c, w, 0).chain);
  std::set<SparseRow> rows;
  for (std::uint32_t q = 0; q < c.vertex_count(); ++q) {
    const auto map = c.deck_map(q);
    for (const auto& chain : at_identity) {
      SparseRow row = c.cycle_coordinates(c.apply_deck(chain, map));
      if (!row.empty()) rows.insert(std::move(row));
    }
  }
  const std::vector<SparseRow> extra(rows.begin(), rows.end());
  const auto base = face_rows(c);
  const RankResult r = rank_over_q(base, extra, c.cycle_rank(), seed);
  out.rank = r.total_rank - r.base_rank;
  out.dimension = c.cycle_rank() - r.base_rank;
  out.method = r.method;
  return out;
}

CentralCharacter central_character(const CoverComplex& c, const PrimeWitness& witness) {
  CentralCharacter chi;
  chi.d = witness.r;
  for (std::uint32_t v = 0; v < c.vertex_count(); ++v) {
    const auto* t = std::get_if<UnitTuple>(&c.elements[v]);
    if (t == nullptr) fail(ErrorCode::InvalidConfig, "central character needs a unit quotient");
    if (witness.in_C(*t)) chi.elements.emplace_back(v, witness.psi(*t));
  }
  return chi;
}

// ---------------------------------------------------------------------------
// Isotypic projection

IsotypicProjector::IsotypicProjector(const CoverComplex& c, const CentralCharacter& chi)
    : cover_(c), chi_(chi), field_(chi.d) {
  if (chi.elements.empty()) fail(ErrorCode::InvalidConfig, "central subgroup is empty");
  if (chi.elements.size() * c.vertex_count() > 100'000'000)
    fail(ErrorCode::TooLarge, "central subgroup times cover size exceeds the deck-map budget");
  for (const auto& [v, psi] : chi.elements) maps_.push_back(c.deck_map(v));
}

IsotypicProjector::Vector IsotypicProjector::lift(const Chain& chain) const {
  Vector out(cover_.edge_count(), field_.zero());
  for (const auto& [e, x] : chain) out[e] = field_.from_rational(x);
  return out;
}

IsotypicProjector::Vector IsotypicProjector::deck(const Vector& chain, const std::vector<std::uint32_t>& map) const {
  const std::uint32_t m = cover_.generators;
  Vector out(chain.size(), field_.zero());
  for (std::uint32_t e = 0; e < chain.size(); ++e) out[map[e / m] * m + e % m] = chain[e];
  return out;
}

IsotypicProjector::Vector IsotypicProjector::apply(const Vector& chain) const {
  const std::uint32_t m = cover_.generators;
  const Rational scale(1, static_cast<long long>(chi_.elements.size()));
  Vector out(chain.size(), field_.zero());
  for (std::uint32_t e = 0; e < chain.size(); ++e) {
    if (field_.is_zero(chain[e])) continue;
    for (std::size_t i = 0; i < maps_.size(); ++i) {
      const auto target = maps_[i][e / m] * m + e % m;
      const auto& w = field_.omega_power(-static_cast<std::int64_t>(chi_.elements[i].second));
      out[target] = field_.add(out[target], field_.mul(w, chain[e]));
    }
  }
  for (auto& x : out) x = field_.scale(x, scale);
  return out;
}

IsotypicProjector::Vector IsotypicProjector::apply(const Chain& chain) const {
  // integer chains: collect Σ_c ω^{-Ψ(c)} per edge as counts of powers of ω
  const std::uint32_t m = cover_.generators;
  const std::uint32_t d = chi_.d;
  std::map<std::uint32_t, std::vector<std::int64_t>> counts;
  for (const auto& [e, x] : chain) {
    for (std::size_t i = 0; i < maps_.size(); ++i) {
      auto& slot = counts[maps_[i][e / m] * m + e % m];
      slot.resize(d, 0);
      slot[(d - chi_.elements[i].second % d) % d] += x;
    }
  }
  const Rational scale(1, static_cast<long long>(chi_.elements.size()));
  Vector out(cover_.edge_count(), field_.zero());
  for (const auto& [e, cnt] : counts) out[e] = field_.scale(field_.from_power_counts(cnt), scale);
  return out;
}

bool IsotypicProjector::is_zero(const Vector& v) const {
  return std::all_of(v.begin(), v.end(), [this](const auto& x) { return field_.is_zero(x); });
}

namespace {

bool is_prime_small(std::uint32_t d) {
  if (d < 2) return false;
  for (std::uint32_t f = 2; f * f <= d; ++f)
    if (d % f == 0) return false;
  return true;
}

/// Per-orbit accumulator for π_Ψ on integer chains.  With v = c_v · o for
/// the orbit representative o, π_Ψ(z) vanishes iff Σ_{v ∈ O} ω^{Ψ(c_v)} z(v, s)
/// vanishes for every orbit O and generator s.
class OrbitSums {
 public:
  OrbitSums(const std::vector<std::uint32_t>& orbit, const std::vector<std::uint32_t>& phase, std::size_t orbits,
            std::uint32_t m, const CyclotomicField& field)
      : orbit_(orbit), phase_(phase), m_(m), d_(field.order()), field_(field), prime_(is_prime_small(d_)),
        counts_(orbits * m * d_, 0), seen_(orbits * m, 0) {}

  void add(std::uint32_t edge, std::int64_t sign) {
    const std::uint32_t v = edge / m_;
    const std::size_t slot = static_cast<std::size_t>(orbit_[v]) * m_ + edge % m_;
    counts_[slot * d_ + phase_[v]] += sign;
    if (!seen_[slot]) {
      seen_[slot] = 1;
      touched_.push_back(slot);
    }
  }

  /// Whether every touched slot sums to zero in Z[ω]; resets the state.
  bool vanishes_and_reset() {
    bool zero = true;
    for (auto slot : touched_) {
      const std::int64_t* c = &counts_[slot * d_];
      if (zero) {
        if (prime_) {
          // for prime d the only relation is 1 + ω + ... + ω^(d-1) = 0
          for (std::uint32_t i = 1; i < d_ && zero; ++i) zero = c[i] == c[0];
        } else {
          zero = field_.power_counts_vanish(std::span<const std::int64_t>(c, d_));
        }
      }
      std::fill(counts_.begin() + static_cast<std::ptrdiff_t>(slot * d_),
                counts_.begin() + static_cast<std::ptrdiff_t>((slot + 1) * d_), 0);
      seen_[slot] = 0;
    }
    touched_.clear();
    return zero;
  }

 private:
  const std::vector<std::uint32_t>& orbit_;
  const std::vector<std::uint32_t>& phase_;
  std::uint32_t m_;
  std::uint32_t d_;
  const CyclotomicField& field_;
  bool prime_;
  std::vector<std::int64_t> counts_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::size_t> touched_;
};

}  // namespace

IsotypicReport isotypic_projection_check(const CoverComplex& c, const CentralCharacter& chi,
                                         const WordPredicate& predicate, int max_length, std::size_t cross_checks) {
  if (c.domain.is_surface())
    fail(ErrorCode::InvalidConfig, "the isotypic projection check is implemented for free covers");
  const IsotypicProjector projector(c, chi);
  const std::uint32_t m = c.generators;
  const std::size_t V = c.vertex_count();

  // C-orbits and phases
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> orbit(V, kUnset), phase(V, 0);
  std::size_t orbits = 0;
  for (std::uint32_t v = 0; v < V; ++v) {
    if (orbit[v] != kUnset) continue;
    for (std::size_t i = 0; i < chi.elements.size(); ++i) {
      const std::uint32_t u = projector.deck_maps()[i][v];
      if (orbit[u] != kUnset) fail(ErrorCode::PropertyViolation, "central subgroup does not act freely");
      orbit[u] = static_cast<std::uint32_t>(orbits);
      phase[u] = chi.elements[i].second % chi.d;
    }
    ++orbits;
  }

  IsotypicReport report;
  report.central_order = chi.elements.size();
  std::vector<GroupWord> words;
  for (auto& w : enumerate_reduced_words(c.domain, max_length))
    if (predicate(w)) words.push_back(std::move(w));
  report.words = words.size();

  struct Partial {
    std::uint64_t elevations = 0;
    std::uint64_t nonzero = 0;
    std::size_t first_word = std::numeric_limits<std::size_t>::max();
    std::uint32_t first_base = 0;
  };
  const unsigned workers = thread_count();
  std::vector<Partial> partials(workers);
  parallel_for(
      words.size(),
      [&](std::size_t begin, std::size_t end, unsigned worker) {
        OrbitSums sums(orbit, phase, orbits, m, projector.field());
        Partial& part = partials[worker];
        for (std::size_t wi = begin; wi < end; ++wi) {
          const auto letters = words[wi].letters();
          for (std::uint32_t q = 0; q < V; ++q) {
            std::uint32_t v = q;
            std::uint64_t reps = 0;
            do {
              for (const auto& l : letters) {
                const auto g = static_cast<std::uint32_t>(l.generator);
                if (l.exponent > 0) {
                  const std::uint32_t e = v * m + g;
                  sums.add(e, 1);
                  v = c.next[e];
                } else {
                  const std::uint32_t u = c.prev[v * m + g];
                  sums.add(u * m + g, -1);
                  v = u;
                }
              }
              if (++reps > V) fail(ErrorCode::PropertyViolation, "lift does not close up");
            } while (v != q);
            ++part.elevations;
            if (!sums.vanishes_and_reset()) {
              if (part.nonzero++ == 0 || wi < part.first_word) {
                part.first_word = std::min(part.first_word, wi);
                if (part.first_word == wi) part.first_base = q;
              }
            }
          }
        }
      },
      workers);

  std::size_t first_word = std::numeric_limits<std::size_t>::max();
  std::uint32_t first_base = 0;
  for (const auto& p : partials) {
    report.elevations += p.elevations;
    report.nonzero_elevations += p.nonzero;
    if (p.nonzero > 0 && p.first_word < first_word) {
      first_word = p.first_word;
      first_base = p.first_base;
    }
  }
  if (report.nonzero_elevations > 0)
    report.first_nonzero = words[first_word].to_string() + " at vertex " + std::to_string(first_base);

  // cross-check a few elevations with the generic projector
  OrbitSums sums(orbit, phase, orbits, m, projector.field());
  auto kernel_zero = [&](const Chain& chain) {
    for (const auto& [e, x] : chain) sums.add(e, x);
    return sums.vanishes_and_reset();
  };
  for (std::size_t i = 0; i < std::min(cross_checks, words.size()); ++i) {
    const std::uint32_t base = static_cast<std::uint32_t>((i * 7919) % V);
    const Chain chain = elevation_class(c, words[i], base).chain;
    const bool generic_zero = projector.is_zero(projector.apply(chain));
    if (generic_zero != kernel_zero(chain)) report.cross_check_ok = false;
    ++report.cross_checked;
  }

  // a fundamental cycle with nonzero projection
  for (const auto e : c.non_tree_edges) {
    const Chain cycle = c.fundamental_cycle(e);
    if (kernel_zero(cycle)) continue;
    report.witness_edge = e;
    if (projector.is_zero(projector.apply(cycle))) report.cross_check_ok = false;
    ++report.cross_checked;
    break;
  }
  return report;
}

}  // namespace primhom
