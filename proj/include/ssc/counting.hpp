#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ssc/group.hpp"
#include "ssc/partitions.hpp"

namespace ssc {

inline constexpr std::uint64_t kDefaultBruteCap = 10'000'000;

/// Dense count per element rank over all of G. Values are nonnegative.
class CountDistribution {
 public:
  CountDistribution(AbelianGroup group, std::vector<mpz_class> values);

  const AbelianGroup& group() const { return group_; }
  const std::vector<mpz_class>& values() const { return values_; }
  const mpz_class& total() const { return total_; }
  std::size_t size() const { return values_.size(); }

  const mpz_class& operator[](std::uint64_t rank) const { return values_[rank]; }
  const mpz_class& at(const Element& a) const { return values_[group_.rank(a)]; }

  friend bool operator==(const CountDistribution& a, const CountDistribution& b) {
    return a.group_ == b.group_ && a.values_ == b.values_;
  }

 private:
  AbelianGroup group_;
  std::vector<mpz_class> values_;
  mpz_class total_;
};

/// Thread-safe memo of distributions of k_1 y_1 + ... + k_c y_c where all
/// k_j act identically on G (same per-component gcd vector). Entries are
/// keyed on (gcd vector, repetition count).
class SumDistributionCache {
 public:
  using Dense = std::vector<mpz_class>;
  using Key = std::pair<std::vector<std::uint64_t>, unsigned>;

  std::shared_ptr<const Dense> find(const Key& key) const;
  /// Inserts unless present; returns the stored entry either way.
  std::shared_ptr<const Dense> insert(Key key, std::shared_ptr<const Dense> value);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<Key, std::shared_ptr<const Dense>> entries_;
};

struct EngineOptions {
  unsigned threads = 1;
  // Optional cross-call memo; a per-call one is used when null.
  std::shared_ptr<SumDistributionCache> cache;
};

enum class SumPath {
  automatic,    // constant n^(r-1) when gcd(parts, n) = 1, convolution otherwise
  convolution,  // always convolve
};

/// #{(y_1..y_r) in G^r : sum k_i y_i = a} for every a.
CountDistribution weighted_sum_distribution(const AbelianGroup& g,
                                            std::span<const unsigned> parts,
                                            SumPath path = SumPath::automatic);

/// Target-independent part of T plus the per-target corrections coming from
/// partition types whose parts share a factor with n.
struct UniformSplit {
  mpz_class good_constant;             // sum over types with gcd(parts_gcd, n) = 1
  std::vector<mpz_class> corrections;  // signed, indexed by rank
  // (1/n) * n!/(n-h)!, exact for h >= 1; absent for h = 0.
  std::optional<mpz_class> baseline;
  std::vector<mpz_class> deviation;  // T(a) - baseline; empty for h = 0
  std::size_t good_types = 0;
  std::size_t bad_types = 0;
  std::size_t convolutions = 0;  // distinct image keys actually convolved
};

UniformSplit uniform_part_and_corrections(const AbelianGroup& g, unsigned h,
                                          const EngineOptions& opts = {});

/// T(a): ordered h-tuples of pairwise distinct elements summing to a.
CountDistribution count_distinct_ordered_all(const AbelianGroup& g, unsigned h,
                                             const EngineOptions& opts = {});

/// |F_a| = T(a) / h!.
CountDistribution count_subsets_all(const AbelianGroup& g, unsigned h,
                                    const EngineOptions& opts = {});

/// Direct enumeration of all h-subsets. Throws CapExceeded when C(n,h) > cap.
CountDistribution brute_force_subsets(const AbelianGroup& g, unsigned h,
                                      std::uint64_t cap = kDefaultBruteCap);

struct ExtremesReport {
  mpz_class min;
  mpz_class max;
  mpq_class ratio;  // min/max, 0 when max = 0
  Element argmin;
  Element argmax;
};

ExtremesReport extremes(const CountDistribution& dist);

struct BoundReport {
  std::string group;
  unsigned h = 0;
  mpz_class baseline;
  std::vector<mpz_class> ordered;  // T(a)
  std::vector<mpz_class> delta;    // T(a) - baseline
  mpq_class envelope;              // (3/4)^h * baseline
  std::vector<bool> within_bound;
  mpq_class max_ratio;  // max |delta| / baseline
  bool all_within_bound = true;
};

/// Compares every |T(a) - baseline| against (3/4)^h * baseline. Violations
/// are recorded, never thrown. Requires 1 <= h <= n-1.
BoundReport theorem2_report(const AbelianGroup& g, unsigned h, const EngineOptions& opts = {});

struct ShiftCheck {
  bool ok = true;
  // first violation: value at a differs from value at a + shift
  std::optional<std::uint64_t> target_rank;
  std::optional<Element> shift;
  std::string detail;
};

/// Checks |F_a| = |F_{a + h d}| for all a, d on a subset distribution.
ShiftCheck shift_conjugacy_check(const CountDistribution& subsets, unsigned h);

mpz_class falling_factorial(std::uint64_t n, std::uint64_t h);
mpz_class binomial(std::uint64_t n, std::uint64_t h);

/// Throws InternalError unless total = C(n,h) and every value is nonnegative.
void assert_subset_totals(const CountDistribution& subsets, unsigned h);

}  // namespace ssc
