#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <random>

#include "primhom/cover.hpp"
#include "primhom/embedding.hpp"
#include "primhom/errors.hpp"
#include "primhom/modular.hpp"
#include "primhom/polynomial.hpp"
#include "primhom/report.hpp"
#include "primhom/unit_group.hpp"

namespace primhom::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Options shared by every subcommand plus the union of command flags.
struct RunConfig {
  std::uint32_t r = 3;
  int n = 0;
  int genus = 0;
  int k = 0;  ///< 0 means "use minimal_k"
  std::string variant = "full";
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  std::uint64_t d = 0;
  std::string orbit = "none";
  std::string quotient;
  std::string theta;
  std::string expect = "any";
  int max_word_len = 4;
  std::size_t guard_vertices = 100'000;
  std::size_t guard_dim = 20'000;
  std::size_t cross_checks = 8;
  std::string out;
};

/// Runs `body` as a named check, timing it; `body` fills the details and
/// returns whether the check passed.
void add_check(Report& report, const std::string& name, const std::function<bool(Json&)>& body) {
  CheckRecord rec;
  rec.name = name;
  Stopwatch sw;
  rec.status = body(rec.details) ? CheckStatus::Pass : CheckStatus::Fail;
  rec.wall_ms = sw.elapsed_ms();
  report.checks.push_back(std::move(rec));
}

void add_skipped(Report& report, const std::string& name, const std::string& reason) {
  CheckRecord rec;
  rec.name = name;
  rec.status = CheckStatus::Skipped;
  rec.details["reason"] = reason;
  report.checks.push_back(std::move(rec));
}

Json big_list(const std::vector<BigInt>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidConfig, "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidConfig, "'" + path + "' is not valid JSON: " + e.what());
  }
}

void require_prime(std::uint64_t r, bool allow_two) {
  if (!is_small_prime(r)) fail(ErrorCode::InvalidConfig, "r = " + std::to_string(r) + " is not a prime");
  if (r == 2 && !allow_two) fail(ErrorCode::InvalidConfig, "r = 2 is not supported by this command");
}

int resolve_k(std::uint32_t r, int variables, int k) {
  const int minimal = minimal_k(r, variables);
  if (k == 0) return minimal;
  if (k < minimal)
    fail(ErrorCode::InvalidConfig, "k = " + std::to_string(k) + " is below minimal_k = " + std::to_string(minimal) +
                                       " for r = " + std::to_string(r) + " and " + std::to_string(variables) +
                                       " variables");
  return k;
}

/// Every nonzero vector of (Z/m)^n with the first coordinate varying fastest.
template <class Fn>
void for_each_nonzero_class(std::uint64_t m, int n, std::uint64_t guard, Fn&& fn) {
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= m;
    if (total > guard) fail(ErrorCode::TooLarge, "more than " + std::to_string(guard) + " abelianization classes");
  }
  std::vector<std::uint64_t> v(n, 0);
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    for (int i = 0; i < n; ++i) {
      if (++v[i] < m) break;
      v[i] = 0;
    }
    fn(v);
  }
}

/// Exhaustive Ψ(ρ(w)^D) = P(α) ≠ 0 over class representatives.
bool check_witness_classes(const PrimeWitness& w, Json& details) {
  std::uint64_t checked = 0, failures = 0;
  Json first = nullptr;
  for_each_nonzero_class(w.r, w.alphabet.size(), 1'000'000, [&](const std::vector<std::uint64_t>& cls) {
    const GroupWord word = class_representative(w.alphabet, cls);
    const WordCheck c = check_word(w, word);
    ++checked;
    if (!c.ok() || c.expected == 0) {
      if (failures++ == 0)
        first = {{"class", cls}, {"alpha", c.alpha}, {"central", c.central}, {"psi", c.psi}, {"expected", c.expected}};
    }
  });
  details["classes"] = checked;
  details["failures"] = failures;
  if (failures) details["counterexample"] = first;
  return failures == 0;
}

// ---------------------------------------------------------------------------

Report cmd_nvpoly(const RunConfig& cfg) {
  require_prime(cfg.r, true);
  const bool surface = cfg.genus > 0;
  const int n = surface ? 2 * cfg.genus : cfg.n;
  if (n < 1) fail(ErrorCode::InvalidConfig, "give --n >= 1 or --genus >= 1");
  const int k = resolve_k(cfg.r, n, cfg.k);

  Report report;
  report.command = "nvpoly";
  report.config = {{"r", cfg.r}, {"n", n}, {"k", k}};
  if (surface) report.config["genus"] = cfg.genus;

  const NvPoly p = build_nonvanishing(cfg.r, n, k);
  const auto names = surface ? surface_variable_names(cfg.genus) : std::vector<std::string>{};
  add_check(report, "nonvanishing", [&](Json& d) {
    d["polynomial"] = p.to_string(names);
    d["terms"] = p.terms().size();
    d["degree"] = p.degree();
    d["homogeneous"] = p.is_homogeneous();
    const NonvanishingReport nv = verify_nonvanishing(p);
    d["points_checked"] = nv.points_checked;
    if (nv.zero_at) d["zero_at"] = *nv.zero_at;
    return nv.pass && p.is_homogeneous();
  });
  add_check(report, "monomial_classification", [&](Json& d) {
    std::optional<Pairing> pairing;
    if (surface) pairing = Pairing::surface(cfg.genus);
    const auto parts = classify(p, pairing ? &*pairing : nullptr);
    Json counts = Json::object();
    for (const auto& [type, sub] : parts) counts[std::string(to_string(type))] = sub.terms().size();
    d["counts"] = counts;
    return true;
  });
  return report;
}

Report cmd_verify_free(const RunConfig& cfg) {
  require_prime(cfg.r, true);
  if (cfg.n < 1) fail(ErrorCode::InvalidConfig, "--n must be at least 1");
  if (cfg.variant != "full" && cfg.variant != "sorted")
    fail(ErrorCode::InvalidConfig, "--variant must be full or sorted");
  const int k = resolve_k(cfg.r, cfg.n, cfg.k);
  const std::uint64_t samples = cfg.samples ? cfg.samples : 10'000;

  Report report;
  report.command = "verify-free";
  report.config = {{"r", cfg.r},          {"n", cfg.n},       {"k", k},
                   {"variant", cfg.variant}, {"samples", samples}, {"seed", cfg.seed}};

  const PrimeWitness w = assemble_witness_free(cfg.r, cfg.n, k, cfg.variant);
  const AlgebraSpec& spec = w.factors.front().rho.spec();
  add_check(report, "witness", [&](Json& d) {
    d["polynomial"] = w.P.to_string();
    d["exponent"] = w.D;
    d["psi"] = w.factors.front().psi.to_string();
    return true;
  });
  add_check(report, "power_identity", [&](Json& d) {
    const PropertyReport pr = verify_power_identity(spec, w.P, true, samples, cfg.seed);
    d["checked"] = pr.checked;
    d["failures"] = pr.failures;
    if (pr.counterexample) d["counterexample"] = *pr.counterexample;
    return pr.pass();
  });
  add_check(report, "witness_classes", [&](Json& d) { return check_witness_classes(w, d); });
  return report;
}

Report cmd_verify_surface(const RunConfig& cfg) {
  require_prime(cfg.r, false);
  if (cfg.genus < 2) fail(ErrorCode::InvalidConfig, "--genus must be at least 2");
  const int k = resolve_k(cfg.r, 2 * cfg.genus, cfg.k);
  const std::uint64_t samples = cfg.samples ? cfg.samples : 1000;

  Report report;
  report.command = "verify-surface";
  report.config = {{"r", cfg.r}, {"genus", cfg.genus}, {"k", k}, {"samples", samples}, {"seed", cfg.seed}};

  const AlgebraSpec h = AlgebraSpec::quat_trunc(cfg.r, k);
  const std::uint64_t D = h.degree_bound();
  add_check(report, "catalan_relation", [&](Json& d) {
    const AlgElement E = catalan_series_E(cfg.r, k);
    const AlgElement A = AlgElement::generator(h, 0);
    d["E"] = E.to_string();
    return (A * A + E + E * E).is_zero();
  });
  add_check(report, "relator_killed", [&](Json& d) {
    const UnitElement img = tau(GroupWord::surface_relator(2), h);
    d["image"] = img.to_string();
    return img == UnitElement::one(h);
  });

  const PrimeWitness w = assemble_witness_surface(cfg.r, cfg.genus, k);
  add_check(report, "witness", [&](Json& d) {
    d["polynomial"] = w.P.to_string(surface_variable_names(cfg.genus));
    d["sign"] = w.sign;
    d["a"] = w.a;
    d["b"] = w.b;
    Json factors = Json::array();
    for (const auto& f : w.factors) factors.push_back(f.label);
    d["factors"] = factors;
    d["notes"] = w.notes;
    // ρ kills the genus-g relator in every factor
    const auto img = w.rho(GroupWord::surface_relator(cfg.genus));
    bool ok = true;
    for (const auto& g : img) ok = ok && g == UnitElement::one(g.spec());
    d["relator_killed"] = ok;
    return ok;
  });

  add_check(report, "quaternion_power_form", [&](Json& d) {
    const NvPoly form = surface_power_form(cfg.r, D, 4, 0, 1, 2, 3);
    const Monomial target = quat_psi_monomial(h);
    const Alphabet genus2 = Alphabet::surface(2);
    auto value_at = [&](const UnitElement& g) {
      const std::uint32_t raw = g.pow(static_cast<std::int64_t>(D)).value().coeff(target);
      return w.sign > 0 ? raw : neg_mod(raw, cfg.r);
    };
    std::uint64_t failures = 0;
    Json first = nullptr;
    std::mt19937_64 rng(cfg.seed);
    for (std::uint64_t i = 0; i < samples; ++i) {
      const GroupWord word = random_reduced_word(genus2, 1 + static_cast<int>(rng() % 12), rng);
      const UnitElement g = tau(word, h);
      const auto a = alpha(g);
      const std::uint32_t lhs = value_at(g), rhs = form.evaluate(a);
      if (lhs != rhs && failures++ == 0)
        first = {{"word", word.to_string()}, {"alpha", a}, {"psi", lhs}, {"form", rhs}};
    }
    Json spots = Json::array();
    for (const char* text : {"x1.y1", "x2.y2", "x1.y1.x2.y2"}) {
      const UnitElement g = tau(GroupWord::parse(genus2, text), h);
      spots.push_back({{"word", text}, {"alpha", alpha(g)}, {"value", value_at(g)}});
    }
    d["samples"] = samples;
    d["failures"] = failures;
    d["spot_values"] = spots;
    if (failures) d["counterexample"] = first;
    return failures == 0;
  });
  add_check(report, "witness_classes", [&](Json& d) { return check_witness_classes(w, d); });
  return report;
}

WordPredicate make_predicate(const RunConfig& cfg, std::optional<FiniteQuotient>& theta) {
  if (cfg.orbit == "all") return [](const GroupWord&) { return true; };
  if (cfg.orbit == "d-primitive") {
    if (cfg.d < 2) fail(ErrorCode::InvalidConfig, "--orbit d-primitive needs --d >= 2");
    return d_primitive(cfg.d);
  }
  if (cfg.orbit == "theta-nonkernel") {
    if (cfg.theta.empty()) fail(ErrorCode::InvalidConfig, "--orbit theta-nonkernel needs --theta FILE");
    theta = FiniteQuotient::from_json(read_json_file(cfg.theta));
    return theta_nonkernel(*theta);
  }
  fail(ErrorCode::InvalidConfig, "unknown --orbit '" + cfg.orbit + "'");
}

Json cover_summary(const CoverComplex& c) {
  return {{"vertices", c.vertex_count()},
          {"edges", c.edge_count()},
          {"faces", c.face_count()},
          {"cycle_rank", c.cycle_rank()},
          {"euler_characteristic", c.euler_characteristic()}};
}

Report cmd_cover_report(const RunConfig& cfg) {
  if (cfg.quotient.empty()) fail(ErrorCode::InvalidConfig, "--quotient FILE is required");
  if (cfg.expect != "any" && cfg.expect != "full" && cfg.expect != "proper")
    fail(ErrorCode::InvalidConfig, "--expect must be any, full or proper");
  const FiniteQuotient q = FiniteQuotient::from_json(read_json_file(cfg.quotient));
  std::optional<FiniteQuotient> theta;
  std::optional<WordPredicate> predicate;
  if (cfg.orbit != "none") predicate = make_predicate(cfg, theta);

  Report report;
  report.command = "cover-report";
  report.config = {{"quotient", cfg.quotient},          {"orbit", cfg.orbit},
                   {"max_word_len", cfg.max_word_len},  {"guard_vertices", cfg.guard_vertices},
                   {"guard_dim", cfg.guard_dim},        {"seed", cfg.seed}};
  if (cfg.orbit == "d-primitive") report.config["d"] = cfg.d;
  if (cfg.orbit == "theta-nonkernel") report.config["theta"] = cfg.theta;

  const CoverComplex c = build_cover(q, cfg.guard_vertices);
  add_check(report, "cover", [&](Json& d) {
    d = cover_summary(c);
    d["kind"] = q.kind();
    return true;
  });
  HomologyInfo h1;
  add_check(report, "gaschutz", [&](Json& d) {
    const GaschutzReport g = gaschutz_check(c, cfg.seed, cfg.guard_dim);
    h1 = homology(c, cfg.seed, cfg.guard_dim);
    d["group_order"] = g.group_order;
    d["h1_dimension"] = g.computed;
    d["expected"] = g.expected;
    d["euler_ok"] = g.euler_ok;
    d["method"] = h1.method;
    return g.pass();
  });
  if (!predicate) {
    add_skipped(report, "orbit_span", "no --orbit given");
    return report;
  }
  add_check(report, "orbit_span", [&](Json& d) {
    const SpanReport s = orbit_span_rank(c, *predicate, cfg.max_word_len, cfg.seed, cfg.guard_dim);
    d["words"] = s.words;
    d["rank"] = s.rank;
    d["h1_dimension"] = s.dimension;
    d["method"] = s.method;
    d["expect"] = cfg.expect;
    if (cfg.expect == "full") return s.rank == s.dimension;
    if (cfg.expect == "proper") return s.rank < s.dimension;
    return true;
  });
  return report;
}

Report cmd_witness_e2e(const RunConfig& cfg) {
  require_prime(cfg.r, false);
  if (cfg.n < 2) fail(ErrorCode::InvalidConfig, "--n must be at least 2");
  if (cfg.variant != "full" && cfg.variant != "sorted")
    fail(ErrorCode::InvalidConfig, "--variant must be full or sorted");
  const std::uint64_t d = cfg.d ? cfg.d : cfg.r;
  if (d != cfg.r) fail(ErrorCode::InvalidConfig, "the end-to-end cover is built for a single prime: --d must equal --r");
  if (cfg.max_word_len < 1) fail(ErrorCode::InvalidConfig, "--max-word-len must be positive");
  const int k = resolve_k(cfg.r, cfg.n, cfg.k);

  Report report;
  report.command = "witness-e2e";
  report.config = {{"r", cfg.r},
                   {"n", cfg.n},
                   {"k", k},
                   {"variant", cfg.variant},
                   {"d", d},
                   {"max_word_len", cfg.max_word_len},
                   {"guard_vertices", cfg.guard_vertices},
                   {"guard_dim", cfg.guard_dim},
                   {"seed", cfg.seed}};

  const PrimeWitness w = assemble_witness_free(cfg.r, cfg.n, k, cfg.variant);
  const CoverComplex c = build_cover(FiniteQuotient::from_witness(w), cfg.guard_vertices);
  add_check(report, "cover", [&](Json& dj) {
    dj = cover_summary(c);
    return true;
  });
  add_check(report, "gaschutz", [&](Json& dj) {
    const GaschutzReport g = gaschutz_check(c, cfg.seed, cfg.guard_dim);
    dj["group_order"] = g.group_order;
    dj["h1_dimension"] = g.computed;
    dj["expected"] = g.expected;
    dj["euler_ok"] = g.euler_ok;
    return g.pass();
  });
  const CentralCharacter chi = central_character(c, w);
  add_check(report, "central_character", [&](Json& dj) {
    dj["central_order"] = chi.elements.size();
    bool nontrivial = false;
    for (const auto& e : chi.elements) nontrivial = nontrivial || e.second != 0;
    dj["nontrivial"] = nontrivial;
    return nontrivial;
  });
  IsotypicReport iso;
  add_check(report, "primitive_elevations_vanish", [&](Json& dj) {
    iso = isotypic_projection_check(c, chi, d_primitive(d), cfg.max_word_len, cfg.cross_checks);
    dj["words"] = iso.words;
    dj["elevations"] = iso.elevations;
    dj["nonzero"] = iso.nonzero_elevations;
    if (iso.first_nonzero) dj["counterexample"] = *iso.first_nonzero;
    return iso.vanishing_ok();
  });
  add_check(report, "projection_nonzero", [&](Json& dj) {
    if (iso.witness_edge) {
      dj["fundamental_cycle_edge"] = *iso.witness_edge;
      dj["edge"] = {{"vertex", *iso.witness_edge / c.generators},
                    {"generator", c.domain.generator_name(static_cast<int>(*iso.witness_edge % c.generators))}};
    }
    return iso.nonzero_ok();
  });
  add_check(report, "projector_cross_check", [&](Json& dj) {
    dj["cross_checked"] = iso.cross_checked;
    return iso.cross_check_ok;
  });
  add_check(report, "proper_subspace", [&](Json& dj) {
    dj["certified"] = iso.pass();
    return iso.pass();
  });
  return report;
}

Report cmd_crt_lift(const RunConfig& cfg) {
  if (cfg.d < 2 || !is_square_free(cfg.d)) fail(ErrorCode::InvalidConfig, "--d must be square-free and at least 2");
  if (cfg.n < 1) fail(ErrorCode::InvalidConfig, "--n must be at least 1");
  if (cfg.variant != "full" && cfg.variant != "sorted")
    fail(ErrorCode::InvalidConfig, "--variant must be full or sorted");
  std::vector<std::uint32_t> primes;
  std::uint64_t rest = cfg.d;
  for (std::uint64_t p = 2; p <= rest; ++p)
    if (rest % p == 0) {
      if (p > 1000) fail(ErrorCode::TooLarge, "prime factor " + std::to_string(p) + " is too large");
      primes.push_back(static_cast<std::uint32_t>(p));
      rest /= p;
    }
  int k = 0;
  for (auto p : primes) k = std::max(k, minimal_k(p, cfg.n));
  if (cfg.k != 0) {
    if (cfg.k < k)
      fail(ErrorCode::InvalidConfig, "k = " + std::to_string(cfg.k) + " is below the largest minimal_k = " +
                                         std::to_string(k) + " over the prime factors of d");
    k = cfg.k;
  }
  const std::uint64_t samples = cfg.samples ? cfg.samples : 1000;

  Report report;
  report.command = "crt-lift";
  report.config = {{"d", cfg.d}, {"n", cfg.n}, {"k", k}, {"variant", cfg.variant}, {"samples", samples},
                   {"seed", cfg.seed}};

  std::vector<PrimeWitness> parts;
  for (auto p : primes) parts.push_back(assemble_witness_free(p, cfg.n, k, cfg.variant));
  const WitnessBundle bundle = crt_lift(std::move(parts));
  const auto d = static_cast<std::uint64_t>(bundle.modulus);

  add_check(report, "crt_coefficients", [&](Json& dj) {
    dj["primes"] = primes;
    dj["q"] = big_list(bundle.q);
    dj["exponent"] = to_string(bundle.exponent);
    dj["modulus"] = to_string(bundle.modulus);
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const BigInt m = BigInt(checked_power(primes[i], k + 1));
      for (std::size_t j = 0; j < primes.size(); ++j)
        if (bundle.q[j] % m != (i == j ? 1 : 0)) return false;
    }
    return true;
  });
  auto check = [&](const GroupWord& word, std::uint64_t& failures, Json& first) {
    const auto ab = word.abelianization_mod(d);
    const auto a = bundle.alpha(word);
    bool ok = true;
    for (std::size_t i = 0; i < ab.size(); ++i) ok = ok && a[i] == BigInt(ab[i]);
    const BigInt psi = bundle.psi_of_power(word);
    ok = ok && psi != 0;
    if (!ok && failures++ == 0)
      first = {{"word", word.to_string()}, {"abelianization", ab}, {"psi", to_string(psi)}};
  };
  add_check(report, "classes", [&](Json& dj) {
    std::uint64_t checked = 0, failures = 0;
    Json first = nullptr;
    for_each_nonzero_class(d, cfg.n, 100'000, [&](const std::vector<std::uint64_t>& cls) {
      ++checked;
      check(class_representative(bundle.parts.front().alphabet, cls), failures, first);
    });
    dj["classes"] = checked;
    dj["failures"] = failures;
    if (failures) dj["counterexample"] = first;
    return failures == 0;
  });
  add_check(report, "random_words", [&](Json& dj) {
    std::mt19937_64 rng(cfg.seed);
    std::uint64_t checked = 0, failures = 0, skipped = 0;
    Json first = nullptr;
    while (checked < samples) {
      const GroupWord word = random_reduced_word(bundle.parts.front().alphabet, 1 + static_cast<int>(rng() % 16), rng);
      const auto ab = word.abelianization_mod(d);
      if (std::all_of(ab.begin(), ab.end(), [](auto x) { return x == 0; })) {
        ++skipped;  // kernel of the mod-d abelianization: nothing to assert
        continue;
      }
      ++checked;
      check(word, failures, first);
    }
    dj["checked"] = checked;
    dj["skipped_kernel_words"] = skipped;
    dj["failures"] = failures;
    if (failures) dj["counterexample"] = first;
    return failures == 0;
  });
  return report;
}

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::PropertyViolation || code == ErrorCode::ObservationViolation ? kExitViolation
                                                                                           : kExitConfig;
}

void emit(const Report& report, const RunConfig& cfg, std::ostream& out) {
  const std::string text = report.to_json().dump(2) + "\n";
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out);
  if (!file) fail(ErrorCode::InvalidConfig, "cannot write '" + cfg.out + "'");
  file << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Witness construction and verification for primitive homology of finite covers", "primhom"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--out", cfg.out, "Write the JSON report to this file instead of stdout");
  };
  auto algebra = [&cfg](CLI::App* sub, bool need_n) {
    sub->add_option("--r", cfg.r, "Prime r")->required();
    sub->add_option("--k", cfg.k, "Truncation exponent (default: minimal_k)");
    auto* n = sub->add_option("--n", cfg.n, "Free group rank");
    if (need_n) n->required();
    sub->add_option("--variant", cfg.variant, "full or sorted truncation")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "Random samples");
  };

  auto* nv = app.add_subcommand("nvpoly", "Build and brute-force the nonvanishing polynomial");
  nv->add_option("--r", cfg.r, "Prime r")->required();
  nv->add_option("--k", cfg.k, "Truncation exponent (default: minimal_k)");
  auto* nv_n = nv->add_option("--n", cfg.n, "Number of variables");
  nv->add_option("--genus", cfg.genus, "Surface genus (2g paired variables)")->excludes(nv_n);
  common(nv);

  auto* vf = app.add_subcommand("verify-free", "Verify the free-group witness");
  algebra(vf, true);
  common(vf);

  auto* vs = app.add_subcommand("verify-surface", "Verify the surface-group witness");
  vs->add_option("--r", cfg.r, "Odd prime r")->required();
  vs->add_option("--k", cfg.k, "Truncation exponent (default: minimal_k)");
  vs->add_option("--genus", cfg.genus, "Surface genus")->required();
  vs->add_option("--samples", cfg.samples, "Random genus-2 words for the quaternion power form");
  common(vs);

  auto* cr = app.add_subcommand("cover-report", "Homology of the cover attached to a finite quotient");
  cr->add_option("--quotient", cfg.quotient, "Quotient JSON file")->required();
  cr->add_option("--orbit", cfg.orbit, "none, all, d-primitive or theta-nonkernel")->capture_default_str();
  cr->add_option("--d", cfg.d, "Modulus for the d-primitive predicate");
  cr->add_option("--theta", cfg.theta, "Quotient JSON file for the theta-nonkernel predicate");
  cr->add_option("--expect", cfg.expect, "Assert the span rank: any, full or proper")->capture_default_str();
  cr->add_option("--max-word-len", cfg.max_word_len, "Longest enumerated word")->capture_default_str();
  cr->add_option("--guard-vertices", cfg.guard_vertices, "Largest quotient to enumerate")->capture_default_str();
  cr->add_option("--guard-dim", cfg.guard_dim, "Largest cycle space for rank computations")->capture_default_str();
  common(cr);

  auto* e2e = app.add_subcommand("witness-e2e", "Certify a proper primitive subspace on the witness cover");
  algebra(e2e, true);
  e2e->add_option("--d", cfg.d, "Character order (must equal r)");
  e2e->add_option("--max-word-len", cfg.max_word_len, "Longest enumerated word")->capture_default_str();
  e2e->add_option("--guard-vertices", cfg.guard_vertices, "Largest quotient to enumerate")->capture_default_str();
  e2e->add_option("--guard-dim", cfg.guard_dim, "Largest cycle space for rank computations")->capture_default_str();
  e2e->add_option("--cross-checks", cfg.cross_checks, "Elevations re-checked by the generic projector")
      ->capture_default_str();
  common(e2e);

  auto* crt = app.add_subcommand("crt-lift", "Combine free witnesses for the prime factors of d");
  crt->add_option("--d", cfg.d, "Square-free modulus")->required();
  crt->add_option("--n", cfg.n, "Free group rank")->required();
  crt->add_option("--k", cfg.k, "Shared truncation exponent (default: largest minimal_k)");
  crt->add_option("--variant", cfg.variant, "full or sorted truncation")->capture_default_str();
  crt->add_option("--samples", cfg.samples, "Random words");
  common(crt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }

  Report report;
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (nv->parsed()) report = cmd_nvpoly(cfg);
    if (vf->parsed()) report = cmd_verify_free(cfg);
    if (vs->parsed()) report = cmd_verify_surface(cfg);
    if (cr->parsed()) report = cmd_cover_report(cfg);
    if (e2e->parsed()) report = cmd_witness_e2e(cfg);
    if (crt->parsed()) report = cmd_crt_lift(cfg);
    emit(report, cfg, out);
  } catch (const Error& e) {
    err << "primhom: " << e.what() << "\n";
    const int code = exit_code_for(e.code());
    if (code == kExitViolation) {
      // a violated property still produces a report naming the failure
      Report failed;
      failed.command = command;
      CheckRecord rec;
      rec.name = "error";
      rec.status = CheckStatus::Fail;
      rec.details = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
      failed.checks.push_back(std::move(rec));
      try {
        emit(failed, cfg, out);
      } catch (const Error&) {
      }
    }
    return code;
  } catch (const std::exception& e) {
    err << "primhom: internal error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (!report.pass()) {
    for (const auto& c : report.checks)
      if (c.status == CheckStatus::Fail) err << "primhom: check failed: " << c.name << "\n";
    return kExitViolation;
  }
  return kExitPass;
}

}  // namespace primhom::cli
