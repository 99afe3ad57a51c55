#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "primhom/cyclotomic.hpp"

namespace primhom {

/// Sparse integer row: (column, value) pairs with increasing columns.
using SparseRow = std::vector<std::pair<std::uint32_t, std::int64_t>>;

/// Incremental row echelon basis over F_p for prime p < 2^62.
class ModEchelon {
 public:
  ModEchelon(std::size_t columns, std::uint64_t p);

  /// Reduces the row against the basis; keeps it and returns true when it
  /// is independent.
  bool insert(const SparseRow& row);
  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t columns() const noexcept { return columns_; }

 private:
  std::size_t columns_;
  std::uint64_t p_;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<std::uint32_t> pivots_;
};

/// Same as ModEchelon over Q; used as the exact fallback.
class RationalEchelon {
 public:
  explicit RationalEchelon(std::size_t columns);

  bool insert(const SparseRow& row);
  std::size_t rank() const noexcept { return rows_.size(); }

 private:
  std::size_t columns_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::uint32_t> pivots_;
};

/// A random prime in [2^61, 2^62), certified by Miller-Rabin with 25 rounds.
std::uint64_t random_prime_62(std::mt19937_64& rng);

struct RankResult {
  std::size_t base_rank = 0;   ///< rank of the base rows
  std::size_t total_rank = 0;  ///< rank of base and extra rows together
  std::string method;          ///< "two-prime" or "exact"
  std::vector<std::uint64_t> primes;
};

/// Ranks over Q of `base` and of `base` together with `extra`.  Two random
/// 62-bit primes are used; if their ranks disagree the computation is
/// redone with exact rationals.  Elimination stops early once the rank
/// reaches the column count.
RankResult rank_over_q(std::span<const SparseRow> base, std::span<const SparseRow> extra, std::size_t columns,
                       std::uint64_t seed);

}  // namespace primhom
