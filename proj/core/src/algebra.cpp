#include "primhom/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>

#include "primhom/errors.hpp"

namespace primhom {

namespace {

constexpr std::size_t kDenseLimit = std::size_t{1} << 22;

constexpr QuatProduct kHamilton[4][4] = {
    //     1                      i                      j                      k
    {{QuatUnit::One, false}, {QuatUnit::I, false}, {QuatUnit::J, false}, {QuatUnit::K, false}},  // 1
    {{QuatUnit::I, false}, {QuatUnit::One, true}, {QuatUnit::K, false}, {QuatUnit::J, true}},    // i
    {{QuatUnit::J, false}, {QuatUnit::K, true}, {QuatUnit::One, true}, {QuatUnit::I, false}},    // j
    {{QuatUnit::K, false}, {QuatUnit::J, false}, {QuatUnit::I, true}, {QuatUnit::One, true}},    // k
};

int letter_bits(int symbols) {
  int bits = 1;
  while ((1 << bits) < symbols) ++bits;
  return bits;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

}  // namespace

std::string_view to_string(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::FreeTrunc: return "FreeTrunc";
    case AlgebraKind::SortedTrunc: return "SortedTrunc";
    case AlgebraKind::MTrunc: return "MTrunc";
    case AlgebraKind::QuatTrunc: return "QuatTrunc";
  }
  return "?";
}

QuatProduct quat_multiply(QuatUnit a, QuatUnit b) {
  return kHamilton[static_cast<int>(a)][static_cast<int>(b)];
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  auto lo = static_cast<std::uint64_t>(m.code);
  auto hi = static_cast<std::uint64_t>(m.code >> 64);
  return static_cast<std::size_t>(mix64(lo ^ mix64(hi ^ (std::uint64_t{m.degree} << 56))));
}

// ---------------------------------------------------------------------------
// AlgebraSpec

AlgebraSpec::AlgebraSpec(AlgebraKind kind, std::uint32_t r, int k, int symbols)
    : kind_(kind), r_(r), k_(k), D_(0), symbols_(symbols), bits_(0) {
  if (!is_small_prime(r)) fail(ErrorCode::InvalidConfig, "r = " + std::to_string(r) + " is not prime");
  if (r >= (1u << 31)) fail(ErrorCode::InvalidConfig, "r must be below 2^31");
  if (r == 2 && (kind == AlgebraKind::MTrunc || kind == AlgebraKind::QuatTrunc))
    fail(ErrorCode::InvalidConfig, std::string(to_string(kind)) + " requires an odd prime");
  if (k < 1) fail(ErrorCode::InvalidConfig, "k must be at least 1");
  std::uint64_t D = checked_power(r, k);

  if (kind == AlgebraKind::QuatTrunc) {
    if (D > (1u << 16)) fail(ErrorCode::InvalidConfig, "quaternion truncation degree too large");
    D_ = static_cast<std::uint32_t>(D);
    dense_size_ = 8 * (static_cast<std::size_t>(D_) + 1);
    return;
  }

  if (symbols < 1) fail(ErrorCode::InvalidConfig, "need at least one generator");
  if (symbols > 64) fail(ErrorCode::InvalidConfig, "at most 64 generators are supported");
  bits_ = letter_bits(symbols);
  if (D * static_cast<std::uint64_t>(bits_) > 128)
    fail(ErrorCode::InvalidConfig, "words of length r^k = " + std::to_string(D) + " over " +
                                       std::to_string(symbols) + " symbols exceed the 128-bit monomial key");
  D_ = static_cast<std::uint32_t>(D);

  auto offsets = std::make_shared<std::vector<std::uint64_t>>();
  offsets->push_back(0);
  bool dense = true;
  for (std::uint32_t len = 0; len <= D_; ++len) {
    std::uint64_t shift = std::uint64_t{static_cast<std::uint64_t>(bits_)} * len;
    if (shift >= 40) {
      dense = false;
      break;
    }
    offsets->push_back(offsets->back() + (std::uint64_t{1} << shift));
    if (offsets->back() > kDenseLimit) {
      dense = false;
      break;
    }
  }
  if (dense) {
    dense_size_ = offsets->back();
    offsets_ = std::move(offsets);
  }
}

AlgebraSpec AlgebraSpec::free_trunc(std::uint32_t r, int k, int n) { return {AlgebraKind::FreeTrunc, r, k, n}; }
AlgebraSpec AlgebraSpec::sorted_trunc(std::uint32_t r, int k, int n) { return {AlgebraKind::SortedTrunc, r, k, n}; }
AlgebraSpec AlgebraSpec::m_trunc(std::uint32_t r, int k, int genus) {
  if (genus < 1) fail(ErrorCode::InvalidConfig, "genus must be at least 1");
  return {AlgebraKind::MTrunc, r, k, 2 * genus};
}
AlgebraSpec AlgebraSpec::quat_trunc(std::uint32_t r, int k) { return {AlgebraKind::QuatTrunc, r, k, 2}; }

std::string AlgebraSpec::symbol_name(int symbol) const {
  switch (kind_) {
    case AlgebraKind::QuatTrunc: return symbol == 0 ? "A" : "B";
    case AlgebraKind::MTrunc: return (symbol % 2 == 0 ? "X" : "Y") + std::to_string(symbol / 2 + 1);
    default: return "X" + std::to_string(symbol + 1);
  }
}

std::string AlgebraSpec::describe() const {
  std::string out = std::string(to_string(kind_)) + "(r=" + std::to_string(r_) + ",k=" + std::to_string(k_);
  if (kind_ == AlgebraKind::MTrunc)
    out += ",g=" + std::to_string(genus());
  else if (kind_ != AlgebraKind::QuatTrunc)
    out += ",n=" + std::to_string(symbols_);
  return out + ")";
}

Monomial AlgebraSpec::word(std::span<const int> letters) const {
  if (!is_word_algebra()) fail(ErrorCode::SpecMismatch, "word monomial requested in " + describe());
  if (letters.size() * static_cast<std::size_t>(bits_) > 128)
    fail(ErrorCode::InvalidConfig, "word too long for the monomial key");
  Monomial m;
  m.degree = static_cast<std::uint32_t>(letters.size());
  for (int letter : letters) {
    if (letter < 0 || letter >= symbols_) fail(ErrorCode::InvalidConfig, "letter out of range");
    m.code = (m.code << bits_) | static_cast<uint128>(letter);
  }
  return m;
}

std::vector<int> AlgebraSpec::letters(const Monomial& m) const {
  std::vector<int> out(m.degree);
  const uint128 mask = (uint128{1} << bits_) - 1;
  uint128 code = m.code;
  for (std::size_t i = m.degree; i-- > 0;) {
    out[i] = static_cast<int>(code & mask);
    code >>= bits_;
  }
  return out;
}

int AlgebraSpec::first_letter(const Monomial& m) const {
  if (m.degree == 0) return -1;
  return static_cast<int>((m.code >> (bits_ * (m.degree - 1))) & ((uint128{1} << bits_) - 1));
}

int AlgebraSpec::last_letter(const Monomial& m) const {
  if (m.degree == 0) return -1;
  return static_cast<int>(m.code & ((uint128{1} << bits_) - 1));
}

Monomial AlgebraSpec::quat(std::uint32_t a_exp, std::uint32_t b_exp, QuatUnit unit) const {
  if (is_word_algebra()) fail(ErrorCode::SpecMismatch, "quaternion monomial requested in " + describe());
  Monomial m;
  m.degree = a_exp + b_exp;
  m.code = static_cast<uint128>(b_exp) * 4 + static_cast<uint128>(unit);
  return m;
}

QuatParts AlgebraSpec::quat_parts(const Monomial& m) const {
  auto b = static_cast<std::uint32_t>(m.code >> 2);
  return {m.degree - b, b, static_cast<QuatUnit>(static_cast<int>(m.code & 3))};
}

bool AlgebraSpec::admissible(const Monomial& m) const {
  if (m.degree > D_) return false;
  if (kind_ == AlgebraKind::QuatTrunc) {
    auto b = m.code >> 2;
    return b <= 1 && b <= m.degree;
  }
  if (m.degree * static_cast<std::uint64_t>(bits_) < 128 && (m.code >> (bits_ * m.degree)) != 0) return false;
  auto ls = letters(m);
  for (int l : ls)
    if (l >= symbols_) return false;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (kind_ == AlgebraKind::SortedTrunc && ls[i - 1] > ls[i]) return false;
    if (kind_ == AlgebraKind::MTrunc && (ls[i - 1] ^ ls[i]) == 1) return false;
  }
  return true;
}

BigInt AlgebraSpec::basis_size(std::uint32_t max_degree) const {
  max_degree = std::min(max_degree, D_);
  BigInt total = 0;
  const BigInt n = symbols_;
  switch (kind_) {
    case AlgebraKind::FreeTrunc:
      for (std::uint32_t L = 0; L <= max_degree; ++L) total += boost::multiprecision::pow(n, L);
      break;
    case AlgebraKind::SortedTrunc: {
      // C(L + n - 1, n - 1)
      for (std::uint32_t L = 0; L <= max_degree; ++L) {
        BigInt c = 1;
        for (int i = 1; i < symbols_; ++i) c = c * (L + i) / i;
        total += c;
      }
      break;
    }
    case AlgebraKind::MTrunc:
      total = 1;
      for (std::uint32_t L = 1; L <= max_degree; ++L) total += n * boost::multiprecision::pow(n - 1, L - 1);
      break;
    case AlgebraKind::QuatTrunc:
      total = 4 + 8 * BigInt(max_degree);
      break;
  }
  return total;
}

std::vector<Monomial> AlgebraSpec::basis(std::uint32_t min_degree, std::uint32_t max_degree, std::size_t limit) const {
  max_degree = std::min(max_degree, D_);
  if (basis_size(max_degree) > limit) fail(ErrorCode::TooLarge, "basis of " + describe() + " exceeds enumeration limit");
  std::vector<Monomial> out;
  for (std::uint32_t L = min_degree; L <= max_degree; ++L) {
    if (kind_ == AlgebraKind::QuatTrunc) {
      for (std::uint32_t b = 0; b <= 1; ++b) {
        if (b > L) continue;
        for (int u = 0; u < 4; ++u) out.push_back(quat(L - b, b, static_cast<QuatUnit>(u)));
      }
      continue;
    }
    std::vector<int> word_letters(L, 0);
    // odometer over letter strings in lexicographic order, skipping inadmissible prefixes
    auto push_all = [&](auto&& self, std::size_t pos) -> void {
      if (pos == L) {
        out.push_back(word(word_letters));
        return;
      }
      for (int s = 0; s < symbols_; ++s) {
        if (pos > 0) {
          int prev = word_letters[pos - 1];
          if (kind_ == AlgebraKind::SortedTrunc && prev > s) continue;
          if (kind_ == AlgebraKind::MTrunc && (prev ^ s) == 1) continue;
        }
        word_letters[pos] = s;
        self(self, pos + 1);
      }
    };
    push_all(push_all, 0);
  }
  return out;
}

std::vector<Monomial> AlgebraSpec::degree_one_basis() const {
  std::vector<Monomial> out;
  if (kind_ == AlgebraKind::QuatTrunc) {
    for (std::uint32_t b = 0; b <= 1; ++b)
      for (int u = 0; u < 4; ++u) out.push_back(quat(1 - b, b, static_cast<QuatUnit>(u)));
    return out;
  }
  for (int s = 0; s < symbols_; ++s) {
    int letter[1] = {s};
    out.push_back(word(letter));
  }
  return out;
}

std::string AlgebraSpec::render(const Monomial& m) const {
  if (m.degree == 0 && (kind_ != AlgebraKind::QuatTrunc || (m.code & 3) == 0)) return "1";
  std::string out;
  auto append = [&out](const std::string& factor) {
    if (!out.empty()) out += '.';
    out += factor;
  };
  if (kind_ == AlgebraKind::QuatTrunc) {
    auto p = quat_parts(m);
    if (p.a_exp == 1) append("A");
    if (p.a_exp > 1) append("A^" + std::to_string(p.a_exp));
    if (p.b_exp == 1) append("B");
    static constexpr const char* kUnitNames[] = {"", "i", "j", "k"};
    if (p.unit != QuatUnit::One) append(kUnitNames[static_cast<int>(p.unit)]);
    return out;
  }
  auto ls = letters(m);
  for (std::size_t i = 0; i < ls.size();) {
    std::size_t run = 1;
    while (i + run < ls.size() && ls[i + run] == ls[i]) ++run;
    append(symbol_name(ls[i]) + (run > 1 ? "^" + std::to_string(run) : ""));
    i += run;
  }
  return out;
}

std::string AlgebraSpec::serialize(const Monomial& m) const {
  std::string out;
  if (kind_ == AlgebraKind::QuatTrunc) {
    auto p = quat_parts(m);
    out.push_back(static_cast<char>(p.a_exp & 0xff));
    out.push_back(static_cast<char>(p.a_exp >> 8));
    out.push_back(static_cast<char>(p.b_exp));
    out.push_back(static_cast<char>(p.unit));
    return out;
  }
  out.push_back(static_cast<char>(m.degree));
  for (int l : letters(m)) out.push_back(static_cast<char>(l));
  return out;
}

std::size_t AlgebraSpec::dense_index(const Monomial& m) const {
  if (kind_ == AlgebraKind::QuatTrunc) return std::size_t{m.degree} * 8 + static_cast<std::size_t>(m.code);
  return static_cast<std::size_t>((*offsets_)[m.degree] + static_cast<std::uint64_t>(m.code));
}

Monomial AlgebraSpec::from_dense_index(std::size_t index) const {
  Monomial m;
  if (kind_ == AlgebraKind::QuatTrunc) {
    m.degree = static_cast<std::uint32_t>(index / 8);
    m.code = index % 8;
    return m;
  }
  const auto& off = *offsets_;
  auto it = std::upper_bound(off.begin(), off.end(), static_cast<std::uint64_t>(index));
  m.degree = static_cast<std::uint32_t>(it - off.begin() - 1);
  m.code = index - off[m.degree];
  return m;
}

// ---------------------------------------------------------------------------
// AlgElement basics

AlgElement::AlgElement(AlgebraSpec spec) : spec_(std::move(spec)) {}

AlgElement AlgElement::one(const AlgebraSpec& spec) { return constant(spec, 1); }

AlgElement AlgElement::constant(const AlgebraSpec& spec, std::int64_t c) {
  AlgElement out(spec);
  std::uint32_t v = reduce_mod(c, spec.prime());
  if (v != 0) out.terms_.push_back({Monomial{}, v});
  return out;
}

AlgElement AlgElement::monomial(const AlgebraSpec& spec, const Monomial& m, std::int64_t c) {
  if (!spec.admissible(m)) fail(ErrorCode::InvalidConfig, "monomial not admissible in " + spec.describe());
  AlgElement out(spec);
  std::uint32_t v = reduce_mod(c, spec.prime());
  if (v != 0) out.terms_.push_back({m, v});
  return out;
}

AlgElement AlgElement::generator(const AlgebraSpec& spec, int symbol) {
  if (symbol < 0 || symbol >= spec.symbol_count()) fail(ErrorCode::InvalidConfig, "generator index out of range");
  if (!spec.is_word_algebra())
    return monomial(spec, symbol == 0 ? spec.quat(1, 0, QuatUnit::One) : spec.quat(0, 1, QuatUnit::One));
  int letter[1] = {symbol};
  return monomial(spec, spec.word(letter));
}

AlgElement AlgElement::unit(const AlgebraSpec& spec, QuatUnit u) { return monomial(spec, spec.quat(0, 0, u)); }

AlgElement AlgElement::from_terms(const AlgebraSpec& spec, std::vector<Term> terms) {
  const std::uint32_t r = spec.prime();
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.mono < b.mono; });
  AlgElement out(spec);
  for (auto& t : terms) {
    if (!spec.admissible(t.mono)) fail(ErrorCode::InvalidConfig, "monomial not admissible in " + spec.describe());
    std::uint32_t c = t.coeff % r;
    if (!out.terms_.empty() && out.terms_.back().mono == t.mono) {
      out.terms_.back().coeff = add_mod(out.terms_.back().coeff, c, r);
      if (out.terms_.back().coeff == 0) out.terms_.pop_back();
    } else if (c != 0) {
      out.terms_.push_back({t.mono, c});
    }
  }
  return out;
}

std::uint32_t AlgElement::coeff(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, const Monomial& x) { return t.mono < x; });
  return (it != terms_.end() && it->mono == m) ? it->coeff : 0;
}

std::uint32_t AlgElement::min_degree() const {
  return terms_.empty() ? spec_.degree_bound() + 1 : terms_.front().mono.degree;
}

std::string AlgElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    std::string mono = spec_.render(t.mono);
    if (mono == "1")
      out += std::to_string(t.coeff);
    else if (t.coeff == 1)
      out += mono;
    else
      out += std::to_string(t.coeff) + "*" + mono;
  }
  return out;
}

std::string AlgElement::key() const {
  std::string out;
  out.reserve(terms_.size() * 8);
  for (const auto& t : terms_) {
    out += spec_.serialize(t.mono);
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((t.coeff >> (8 * b)) & 0xff));
  }
  return out;
}

namespace {

void require_same(const AlgElement& a, const AlgElement& b) {
  if (!(a.spec() == b.spec()))
    fail(ErrorCode::SpecMismatch, a.spec().describe() + " vs " + b.spec().describe());
}

template <class Combine>
std::vector<AlgElement::Term> merge_terms(std::span<const AlgElement::Term> x, std::span<const AlgElement::Term> y,
                                          std::uint32_t r, Combine combine) {
  std::vector<AlgElement::Term> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].mono < y[j].mono)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].mono < x[i].mono) {
      out.push_back({y[j].mono, combine(0u, y[j].coeff, r)});
      ++j;
    } else {
      std::uint32_t c = combine(x[i].coeff, y[j].coeff, r);
      if (c != 0) out.push_back({x[i].mono, c});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

AlgElement AlgElement::operator+(const AlgElement& other) const {
  require_same(*this, other);
  AlgElement out(spec_);
  out.terms_ = merge_terms(terms_, other.terms_, spec_.prime(), add_mod);
  return out;
}

AlgElement AlgElement::operator-(const AlgElement& other) const {
  require_same(*this, other);
  AlgElement out(spec_);
  out.terms_ = merge_terms(terms_, other.terms_, spec_.prime(), sub_mod);
  return out;
}

AlgElement AlgElement::operator-() const { return scaled(-1); }

AlgElement AlgElement::scaled(std::int64_t c) const {
  const std::uint32_t r = spec_.prime();
  std::uint32_t s = reduce_mod(c, r);
  AlgElement out(spec_);
  if (s == 0) return out;
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.mono, mul_mod(t.coeff, s, r)});
  return out;
}

AlgElement AlgElement::operator*(const AlgElement& other) const { return mul(*this, other); }

// ---------------------------------------------------------------------------
// Multiplication kernel

namespace {

struct DenseScratch {
  std::vector<std::uint64_t> acc;
  std::vector<std::uint8_t> seen;
  std::vector<std::uint32_t> touched;
};

DenseScratch& dense_scratch(std::size_t size) {
  thread_local DenseScratch scratch;
  if (scratch.acc.size() < size) {
    scratch.acc.resize(size, 0);
    scratch.seen.resize(size, 0);
  }
  scratch.touched.clear();
  return scratch;
}

/// Calls sink(degree, code, product, negative) for every pair of terms whose
/// product survives the relations of the algebra.
template <AlgebraKind Kind, class Sink>
void for_each_product(const AlgElement& a, const AlgElement& b, Sink&& sink) {
  const AlgebraSpec& spec = a.spec();
  const std::uint32_t D = spec.degree_bound();
  const int bits = spec.bits_per_letter();
  auto bt = b.terms();

  // b_end[d] = number of terms of b with degree <= d
  std::vector<std::size_t> b_end(D + 1, 0);
  {
    std::size_t j = 0;
    for (std::uint32_t d = 0; d <= D; ++d) {
      while (j < bt.size() && bt[j].mono.degree <= d) ++j;
      b_end[d] = j;
    }
  }
  std::vector<int> b_first;
  if constexpr (Kind == AlgebraKind::SortedTrunc || Kind == AlgebraKind::MTrunc) {
    b_first.resize(bt.size());
    for (std::size_t j = 0; j < bt.size(); ++j) b_first[j] = spec.first_letter(bt[j].mono);
  }

  for (const auto& ta : a.terms()) {
    const std::uint32_t da = ta.mono.degree;
    if (da > D) break;
    const std::size_t limit = b_end[D - da];
    const std::uint64_t ca = ta.coeff;

    if constexpr (Kind == AlgebraKind::QuatTrunc) {
      const auto va = static_cast<unsigned>(ta.mono.code >> 2);
      const auto ua = static_cast<int>(ta.mono.code & 3);
      for (std::size_t j = 0; j < limit; ++j) {
        const auto& tb = bt[j];
        const auto vb = static_cast<unsigned>(tb.mono.code >> 2);
        if (va + vb > 1) continue;
        const QuatProduct p = kHamilton[ua][static_cast<int>(tb.mono.code & 3)];
        sink(da + tb.mono.degree, static_cast<uint128>((va + vb) * 4 + static_cast<unsigned>(p.unit)), ca * tb.coeff,
             p.negative);
      }
    } else {
      const int la = spec.last_letter(ta.mono);
      for (std::size_t j = 0; j < limit; ++j) {
        const auto& tb = bt[j];
        if constexpr (Kind == AlgebraKind::SortedTrunc) {
          if (la >= 0 && b_first[j] >= 0 && la > b_first[j]) continue;
        }
        if constexpr (Kind == AlgebraKind::MTrunc) {
          if (la >= 0 && b_first[j] >= 0 && (la ^ b_first[j]) == 1) continue;
        }
        const unsigned shift = static_cast<unsigned>(bits) * tb.mono.degree;
        const uint128 code = shift >= 128 ? tb.mono.code : ((ta.mono.code << shift) | tb.mono.code);
        sink(da + tb.mono.degree, code, ca * tb.coeff, false);
      }
    }
  }
}

template <AlgebraKind Kind>
std::vector<AlgElement::Term> multiply_terms(const AlgElement& a, const AlgElement& b) {
  const AlgebraSpec& spec = a.spec();
  const std::uint64_t r = spec.prime();
  const std::uint64_t rr = r * r;
  std::vector<AlgElement::Term> out;

  if (spec.dense_size() > 0) {
    const std::size_t size = spec.dense_size();
    DenseScratch& s = dense_scratch(size);
    std::uint64_t* acc = s.acc.data();
    std::uint8_t* seen = s.seen.data();
    Monomial probe;
    for_each_product<Kind>(a, b, [&](std::uint32_t degree, uint128 code, std::uint64_t prod, bool negative) {
      probe.degree = degree;
      probe.code = code;
      const std::size_t idx = spec.dense_index(probe);
      std::uint64_t v = acc[idx] + (negative ? rr - prod : prod);
      acc[idx] = v >= rr ? v - rr : v;
      if (!seen[idx]) {
        seen[idx] = 1;
        s.touched.push_back(static_cast<std::uint32_t>(idx));
      }
    });
    auto emit = [&](std::size_t idx) {
      auto c = static_cast<std::uint32_t>(acc[idx] % r);
      acc[idx] = 0;
      seen[idx] = 0;
      if (c != 0) out.push_back({spec.from_dense_index(idx), c});
    };
    if (s.touched.size() * 16 > size) {
      out.reserve(s.touched.size());
      for (std::size_t idx = 0; idx < size; ++idx)
        if (seen[idx]) emit(idx);
    } else {
      std::sort(s.touched.begin(), s.touched.end());
      out.reserve(s.touched.size());
      for (auto idx : s.touched) emit(idx);
    }
    return out;
  }

  std::unordered_map<Monomial, std::uint64_t, MonomialHash> acc;
  acc.reserve(std::min<std::size_t>(a.size() * b.size(), std::size_t{1} << 20));
  for_each_product<Kind>(a, b, [&](std::uint32_t degree, uint128 code, std::uint64_t prod, bool negative) {
    std::uint64_t& slot = acc[Monomial{degree, code}];
    std::uint64_t v = slot + (negative ? rr - prod : prod);
    slot = v >= rr ? v - rr : v;
  });
  out.reserve(acc.size());
  for (const auto& [mono, value] : acc) {
    auto c = static_cast<std::uint32_t>(value % r);
    if (c != 0) out.push_back({mono, c});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.mono < y.mono; });
  return out;
}

}  // namespace

AlgElement mul(const AlgElement& a, const AlgElement& b) {
  require_same(a, b);
  AlgElement out(a.spec());
  if (a.is_zero() || b.is_zero()) return out;
  switch (a.spec().kind()) {
    case AlgebraKind::FreeTrunc: out.terms_ = multiply_terms<AlgebraKind::FreeTrunc>(a, b); break;
    case AlgebraKind::SortedTrunc: out.terms_ = multiply_terms<AlgebraKind::SortedTrunc>(a, b); break;
    case AlgebraKind::MTrunc: out.terms_ = multiply_terms<AlgebraKind::MTrunc>(a, b); break;
    case AlgebraKind::QuatTrunc: out.terms_ = multiply_terms<AlgebraKind::QuatTrunc>(a, b); break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Units, powers, graded pieces

PrimeFieldElem augmentation(const AlgElement& a) {
  Monomial constant_term;
  return {a.coeff(constant_term), a.spec().prime()};
}

AlgElement inverse_unit(const AlgElement& a) {
  if (augmentation(a).value() != 1)
    fail(ErrorCode::NotAUnit, "constant term of " + a.to_string() + " is not 1");
  // Newton iteration x <- x (2 - a x): if 1 - a x has min degree m, the
  // update squares it, so precision doubles until it passes D.
  const AlgebraSpec& spec = a.spec();
  const AlgElement two = AlgElement::constant(spec, 2);
  AlgElement x = AlgElement::one(spec);
  for (std::uint64_t precision = 1; precision <= spec.degree_bound(); precision *= 2) x = x * (two - a * x);
  return x;
}

AlgElement power(const AlgElement& a, std::int64_t e) {
  if (e < 0) {
    // -(e) overflows for INT64_MIN; go through the BigInt path instead
    return power(inverse_unit(a), -BigInt(e));
  }
  AlgElement result = AlgElement::one(a.spec());
  if (e == 0) return result;
  int top = 63;
  while (((e >> top) & 1) == 0) --top;
  for (int bit = top; bit >= 0; --bit) {
    result = result * result;
    if ((e >> bit) & 1) result = result * a;
  }
  return result;
}

AlgElement power(const AlgElement& a, const BigInt& e) {
  if (e < 0) return power(inverse_unit(a), BigInt(-e));
  AlgElement result = AlgElement::one(a.spec());
  if (e == 0) return result;
  const auto top = static_cast<std::int64_t>(boost::multiprecision::msb(e));
  for (std::int64_t bit = top; bit >= 0; --bit) {
    result = result * result;
    if (boost::multiprecision::bit_test(e, static_cast<unsigned>(bit))) result = result * a;
  }
  return result;
}

AlgElement graded_part(const AlgElement& a, std::uint32_t degree) {
  std::vector<AlgElement::Term> kept;
  for (const auto& t : a.terms())
    if (t.mono.degree == degree) kept.push_back(t);
  return AlgElement::from_terms(a.spec(), std::move(kept));
}

std::vector<std::uint32_t> linear_part(const AlgElement& a) {
  auto basis = a.spec().degree_one_basis();
  std::vector<std::uint32_t> out;
  out.reserve(basis.size());
  for (const auto& m : basis) out.push_back(a.coeff(m));
  return out;
}

AlgElement linear_embedding(const AlgebraSpec& spec, std::span<const std::uint32_t> coefficients) {
  auto basis = spec.degree_one_basis();
  if (coefficients.size() != basis.size())
    fail(ErrorCode::InvalidConfig, "linear embedding needs " + std::to_string(basis.size()) + " coefficients");
  std::vector<AlgElement::Term> terms;
  for (std::size_t i = 0; i < basis.size(); ++i) terms.push_back({basis[i], coefficients[i]});
  return AlgElement::from_terms(spec, std::move(terms));
}

// ---------------------------------------------------------------------------
// Parsing: "1 + 2*X1 + X1.X2", "A^2.B.j", "-X1^3"

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s, std::string_view context) {
  s = trim(s);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    fail(ErrorCode::InvalidConfig, "cannot parse integer '" + std::string(s) + "' in " + std::string(context));
  return value;
}

AlgElement parse_factor(const AlgebraSpec& spec, std::string_view token, std::string_view context) {
  token = trim(token);
  std::int64_t exponent = 1;
  if (auto caret = token.find('^'); caret != std::string_view::npos) {
    exponent = parse_int(token.substr(caret + 1), context);
    token = trim(token.substr(0, caret));
  }
  if (exponent < 0) fail(ErrorCode::InvalidConfig, "negative exponent in '" + std::string(context) + "'");
  AlgElement base(spec);
  if (!token.empty() && std::isdigit(static_cast<unsigned char>(token.front()))) {
    base = AlgElement::constant(spec, parse_int(token, context));
  } else if (!spec.is_word_algebra()) {
    if (token == "A") base = AlgElement::generator(spec, 0);
    else if (token == "B") base = AlgElement::generator(spec, 1);
    else if (token == "i") base = AlgElement::unit(spec, QuatUnit::I);
    else if (token == "j") base = AlgElement::unit(spec, QuatUnit::J);
    else if (token == "k") base = AlgElement::unit(spec, QuatUnit::K);
    else fail(ErrorCode::InvalidConfig, "unknown symbol '" + std::string(token) + "' for " + spec.describe());
  } else {
    int found = -1;
    for (int s = 0; s < spec.symbol_count(); ++s)
      if (spec.symbol_name(s) == token) found = s;
    if (found < 0) fail(ErrorCode::InvalidConfig, "unknown symbol '" + std::string(token) + "' for " + spec.describe());
    base = AlgElement::generator(spec, found);
  }
  return power(base, exponent);
}

}  // namespace

AlgElement AlgElement::parse(const AlgebraSpec& spec, std::string_view text) {
  AlgElement total(spec);
  std::string_view rest = trim(text);
  if (rest.empty()) fail(ErrorCode::InvalidConfig, "empty algebra element");
  bool negative = false;
  while (!rest.empty()) {
    if (rest.front() == '+' || rest.front() == '-') {
      negative = rest.front() == '-';
      rest = trim(rest.substr(1));
    }
    std::size_t end = rest.find_first_of("+-");
    // a '-' right after '^' is an exponent sign, not a term separator
    while (end != std::string_view::npos && end > 0 && rest[end - 1] == '^') end = rest.find_first_of("+-", end + 1);
    std::string_view term = trim(rest.substr(0, end));
    if (term.empty()) fail(ErrorCode::InvalidConfig, "malformed algebra element '" + std::string(text) + "'");
    AlgElement value = AlgElement::one(spec);
    std::size_t pos = 0;
    while (pos <= term.size()) {
      std::size_t next = term.find_first_of(".*", pos);
      if (next == std::string_view::npos) next = term.size();
      value = value * parse_factor(spec, term.substr(pos, next - pos), text);
      pos = next + 1;
    }
    total = negative ? total - value : total + value;
    negative = false;
    rest = end == std::string_view::npos ? std::string_view{} : trim(rest.substr(end));
  }
  return total;
}

}  // namespace primhom
