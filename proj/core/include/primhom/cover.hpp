#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "primhom/cyclotomic.hpp"
#include "primhom/embedding.hpp"
#include "primhom/group_word.hpp"
#include "primhom/linalg.hpp"
#include "primhom/unit_group.hpp"

namespace primhom {

using Permutation = std::vector<std::uint32_t>;
using ResidueTuple = std::vector<std::uint64_t>;
using UnitTuple = std::vector<UnitElement>;
using QuotientElement = std::variant<Permutation, ResidueTuple, UnitTuple>;

/// A homomorphism θ from a free or surface group onto the finite group it
/// generates inside a concrete realization: permutations (composed left to
/// right), tuples of residues, or tuples of algebra units.
class FiniteQuotient {
 public:
  static FiniteQuotient permutations(const Alphabet& domain, std::vector<Permutation> images);
  static FiniteQuotient residues(const Alphabet& domain, std::vector<std::uint64_t> moduli,
                                 std::vector<ResidueTuple> images);
  static FiniteQuotient units(const Alphabet& domain, std::vector<UnitTuple> images);
  /// θ = ρ of a witness (its factor unit groups).
  static FiniteQuotient from_witness(const PrimeWitness& witness);
  /// Schema: {"domain": {"type": "free", "rank": n} | {"type": "surface",
  /// "genus": g}} plus one of "permutations": [[...], ...], "moduli" with
  /// "residues", or "algebra": {"kind", "r", "k", "n" | "genus"} with
  /// "elements": ["1 + X1", ...].
  static FiniteQuotient from_json(const nlohmann::json& j);

  const Alphabet& domain() const noexcept { return domain_; }
  std::string kind() const;

  QuotientElement identity() const;
  QuotientElement multiply(const QuotientElement& a, const QuotientElement& b) const;
  const QuotientElement& image(int generator) const { return images_.at(generator); }
  const QuotientElement& inverse_image(int generator) const { return inverses_.at(generator); }
  QuotientElement evaluate(const GroupWord& w) const;
  bool is_identity(const QuotientElement& a) const;
  std::string key(const QuotientElement& a) const;
  std::string describe(const QuotientElement& a) const;

 private:
  FiniteQuotient(Alphabet domain, std::vector<QuotientElement> images, std::vector<std::uint64_t> moduli);
  QuotientElement invert(const QuotientElement& a) const;

  Alphabet domain_;
  std::vector<QuotientElement> images_;
  std::vector<QuotientElement> inverses_;
  std::vector<std::uint64_t> moduli_;
};

/// One signed traversal of a directed edge.
struct EdgeStep {
  std::uint32_t edge;
  int sign;
};

/// Sparse integer 1-chain: (edge id, coefficient) with increasing edge ids.
using Chain = std::vector<std::pair<std::uint32_t, std::int64_t>>;

/// The regular cover of the base complex (one vertex, one loop per
/// generator, and one relator 2-cell for surfaces) attached to im θ.
/// Vertices are the elements of im θ in BFS order from the identity; edge
/// v * m + s runs from v to v·θ(s).  Deck transformations act by left
/// multiplication and commute with the edges.
struct CoverComplex {
  Alphabet domain = Alphabet::free(1);
  std::uint32_t generators = 0;
  std::vector<QuotientElement> elements;
  std::vector<std::uint32_t> next;  ///< next[v * m + s] = v·θ(s)
  std::vector<std::uint32_t> prev;  ///< prev[v * m + s] = v·θ(s)^-1
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> parent_generator;
  std::vector<std::int64_t> cycle_coordinate;  ///< edge -> index among non-tree edges, or -1
  std::vector<std::uint32_t> non_tree_edges;

  std::size_t vertex_count() const noexcept { return elements.size(); }
  std::size_t edge_count() const noexcept { return next.size(); }
  std::size_t face_count() const noexcept { return domain.is_surface() ? elements.size() : 0; }
  /// First Betti number of the 1-skeleton, E - V + 1.
  std::size_t cycle_rank() const noexcept { return non_tree_edges.size(); }
  std::int64_t euler_characteristic() const;

  /// Path of the word starting at `start`, returning the end vertex.
  std::uint32_t walk(std::uint32_t start, const GroupWord& w, std::vector<EdgeStep>* steps = nullptr) const;
  /// deck(q): vertex v -> q·v, computed through the BFS tree.
  std::vector<std::uint32_t> deck_map(std::uint32_t q) const;
  Chain apply_deck(const Chain& chain, const std::vector<std::uint32_t>& map) const;
  /// Coordinates of a 1-cycle on the non-tree edges (they determine it).
  SparseRow cycle_coordinates(const Chain& chain) const;
  /// Boundary of the 2-cell at vertex v (surface covers only).
  Chain face_boundary(std::uint32_t v) const;
  /// The fundamental cycle of a non-tree edge: tree path, edge, tree path back.
  Chain fundamental_cycle(std::uint32_t edge) const;
  bool is_cycle(const Chain& chain) const;
};

Chain chain_from_steps(const std::vector<EdgeStep>& steps);

/// BFS closure of the generator images; throws TooLarge above the guard.
CoverComplex build_cover(const FiniteQuotient& q, std::size_t guard_vertices = 100'000);

struct HomologyInfo {
  std::size_t cycle_rank = 0;     ///< dim Z_1
  std::size_t boundary_rank = 0;  ///< dim B_1 (image of the 2-cells)
  std::size_t dimension = 0;      ///< dim H_1 = dim Z_1 - dim B_1
  std::string method;
};

/// dim H_1(cover; Q); throws TooLarge when a rank computation would exceed
/// `guard_dim` columns.
HomologyInfo homology(const CoverComplex& c, std::uint64_t seed = 1, std::size_t guard_dim = 20'000);

struct GaschutzReport {
  std::size_t group_order = 0;
  std::size_t computed = 0;
  std::size_t expected = 0;
  bool euler_ok = false;
  bool pass() const { return euler_ok && computed == expected; }
};

/// dim H_1 against 1 + (n-1)|Q| (free) or 2 + (2g-2)|Q| (surface).
GaschutzReport gaschutz_check(const CoverComplex& c, std::uint64_t seed = 1, std::size_t guard_dim = 20'000);

struct Elevation {
  std::uint64_t m = 0;  ///< order of θ(w)
  Chain chain;          ///< lift of w^m from the basepoint
  SparseRow cycle;      ///< non-tree coordinates of the chain
};

Elevation elevation_class(const CoverComplex& c, const GroupWord& w, std::uint32_t basepoint = 0);

/// Whether two cycles agree in H_1 (i.e. differ by a sum of 2-cells).
bool homologous(const CoverComplex& c, const Chain& a, const Chain& b, std::uint64_t seed = 1);

using WordPredicate = std::function<bool(const GroupWord&)>;

/// w is d-primitive when its exponent-sum vector is nonzero mod d.
WordPredicate d_primitive(std::uint64_t d);
/// θ'(w) is not the identity.
WordPredicate theta_nonkernel(const FiniteQuotient& theta);

struct SpanReport {
  std::size_t rank = 0;
  std::size_t dimension = 0;
  std::size_t words = 0;
  std::string method;
};

/// Rank of the span, inside H_1, of the elevations of all reduced words of
/// length <= max_length satisfying the predicate, at every basepoint (deck
/// translates of the identity-based elevations).
SpanReport orbit_span_rank(const CoverComplex& c, const WordPredicate& predicate, int max_length,
                           std::uint64_t seed = 1, std::size_t guard_dim = 20'000);

/// Central subgroup data for the projection: each listed vertex is an
/// element c of C together with Ψ(c) in Z/d.
struct CentralCharacter {
  std::uint32_t d = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> elements;  ///< (vertex, Ψ)
};

/// C = vertices central in every factor, Ψ = witness projection (d = r).
CentralCharacter central_character(const CoverComplex& c, const PrimeWitness& witness);

/// π_Ψ = (1/|C|) Σ_c ω^{-Ψ(c)} deck(c) on 1-chains with coefficients in Q(ω).
class IsotypicProjector {
 public:
  IsotypicProjector(const CoverComplex& c, const CentralCharacter& chi);

  const CyclotomicField& field() const noexcept { return field_; }
  using Vector = std::vector<CyclotomicField::Element>;

  Vector apply(const Vector& chain) const;
  Vector apply(const Chain& chain) const;
  Vector lift(const Chain& chain) const;
  Vector deck(const Vector& chain, const std::vector<std::uint32_t>& map) const;
  bool is_zero(const Vector& v) const;
  const CentralCharacter& character() const noexcept { return chi_; }
  /// deck(c) for each listed central element, in the same order.
  const std::vector<std::vector<std::uint32_t>>& deck_maps() const noexcept { return maps_; }

 private:
  const CoverComplex& cover_;
  CentralCharacter chi_;
  CyclotomicField field_;
  std::vector<std::vector<std::uint32_t>> maps_;
};

struct IsotypicReport {
  std::size_t central_order = 0;
  std::size_t words = 0;
  std::uint64_t elevations = 0;
  std::uint64_t nonzero_elevations = 0;
  std::optional<std::string> first_nonzero;
  std::optional<std::uint32_t> witness_edge;  ///< fundamental cycle with π ≠ 0
  bool cross_check_ok = true;
  std::size_t cross_checked = 0;
  bool vanishing_ok() const { return nonzero_elevations == 0; }
  bool nonzero_ok() const { return witness_edge.has_value(); }
  bool pass() const { return vanishing_ok() && nonzero_ok() && cross_check_ok; }
};

/// (a) π_Ψ(elevation of w at q) = 0 for every word passing the predicate
/// and every basepoint q; (b) some fundamental cycle has π_Ψ ≠ 0.  Sums are
/// evaluated per C-orbit in Z[ω]; the generic projector re-checks the first
/// `cross_checks` elevations and the witness.  Free covers only, where
/// H_1 equals the cycle space and chain-level vanishing is exact.
IsotypicReport isotypic_projection_check(const CoverComplex& c, const CentralCharacter& chi,
                                         const WordPredicate& predicate, int max_length, std::size_t cross_checks = 8);

}  // namespace primhom
