#include "primhom/linalg.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include "primhom/errors.hpp"
#include "primhom/modular.hpp"

namespace primhom {

ModEchelon::ModEchelon(std::size_t columns, std::uint64_t p) : columns_(columns), p_(p) {
  if (p < 2 || p >= (std::uint64_t{1} << 62)) fail(ErrorCode::InvalidConfig, "elimination prime out of range");
}

bool ModEchelon::insert(const SparseRow& row) {
  if (rows_.size() == columns_) return false;
  std::vector<std::uint64_t> v(columns_, 0);
  bool any = false;
  for (const auto& [col, value] : row) {
    if (col >= columns_) fail(ErrorCode::InvalidConfig, "row entry beyond the column count");
    const auto m = static_cast<std::int64_t>(p_);
    std::int64_t r = value % m;
    if (r < 0) r += m;
    v[col] = (v[col] + static_cast<std::uint64_t>(r)) % p_;
    any = true;
  }
  if (!any) return false;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::uint64_t c = v[pivots_[i]];
    if (c == 0) continue;
    const auto& basis = rows_[i];
    for (std::size_t j = pivots_[i]; j < columns_; ++j) {
      if (basis[j] == 0) continue;
      const std::uint64_t t = mul_mod64(c, basis[j], p_);
      v[j] = v[j] >= t ? v[j] - t : v[j] + p_ - t;
    }
  }
  std::size_t pivot = 0;
  while (pivot < columns_ && v[pivot] == 0) ++pivot;
  if (pivot == columns_) return false;
  // normalize so the pivot entry is 1 (Fermat inverse, p is prime)
  const std::uint64_t inv = pow_mod64(v[pivot], p_ - 2, p_);
  for (std::size_t j = pivot; j < columns_; ++j)
    if (v[j] != 0) v[j] = mul_mod64(v[j], inv, p_);
  rows_.push_back(std::move(v));
  pivots_.push_back(static_cast<std::uint32_t>(pivot));
  return true;
}

RationalEchelon::RationalEchelon(std::size_t columns) : columns_(columns) {}

bool RationalEchelon::insert(const SparseRow& row) {
  if (rows_.size() == columns_) return false;
  std::vector<Rational> v(columns_, 0);
  for (const auto& [col, value] : row) {
    if (col >= columns_) fail(ErrorCode::InvalidConfig, "row entry beyond the column count");
    v[col] += value;
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (v[pivots_[i]] == 0) continue;
    const Rational c = v[pivots_[i]];
    for (std::size_t j = pivots_[i]; j < columns_; ++j)
      if (rows_[i][j] != 0) v[j] -= c * rows_[i][j];
  }
  std::size_t pivot = 0;
  while (pivot < columns_ && v[pivot] == 0) ++pivot;
  if (pivot == columns_) return false;
  const Rational inv = 1 / v[pivot];
  for (std::size_t j = pivot; j < columns_; ++j) v[j] *= inv;
  rows_.push_back(std::move(v));
  pivots_.push_back(static_cast<std::uint32_t>(pivot));
  return true;
}

std::uint64_t random_prime_62(std::mt19937_64& rng) {
  for (;;) {
    std::uint64_t candidate = (std::uint64_t{1} << 61) | (rng() & ((std::uint64_t{1} << 61) - 1)) | 1;
    if (boost::multiprecision::miller_rabin_test(BigInt(candidate), 25, rng)) return candidate;
  }
}

namespace {

template <class Echelon>
std::pair<std::size_t, std::size_t> two_ranks(Echelon& e, std::span<const SparseRow> base,
                                              std::span<const SparseRow> extra) {
  for (const auto& row : base) e.insert(row);
  const std::size_t base_rank = e.rank();
  for (const auto& row : extra) e.insert(row);
  return {base_rank, e.rank()};
}

}  // namespace

RankResult rank_over_q(std::span<const SparseRow> base, std::span<const SparseRow> extra, std::size_t columns,
                       std::uint64_t seed) {
  RankResult out;
  std::mt19937_64 rng(seed);
  const std::uint64_t p1 = random_prime_62(rng);
  std::uint64_t p2 = random_prime_62(rng);
  while (p2 == p1) p2 = random_prime_62(rng);
  out.primes = {p1, p2};
  ModEchelon e1(columns, p1), e2(columns, p2);
  const auto r1 = two_ranks(e1, base, extra);
  const auto r2 = two_ranks(e2, base, extra);
  if (r1 == r2) {
    out.base_rank = r1.first;
    out.total_rank = r1.second;
    out.method = "two-prime";
    return out;
  }
  RationalEchelon exact(columns);
  const auto r = two_ranks(exact, base, extra);
  out.base_rank = r.first;
  out.total_rank = r.second;
  out.method = "exact";
  return out;
}

}  // namespace primhom
