#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "ssc/errors.hpp"

namespace ssc {

inline constexpr unsigned kDefaultSetPartitionCap = 8;
// c(P) for a set partition is kept in 64 bits; 19! still fits.
inline constexpr unsigned kMaxSetPartitionCap = 20;

/// n!, memoized; safe for concurrent use.
const mpz_class& factorial(unsigned n);

struct PartPower {
  unsigned part = 0;   // block size i
  unsigned count = 0;  // alpha_i, number of blocks of that size

  friend bool operator==(const PartPower&, const PartPower&) = default;
};

/// Integer partition of h stored as part-size multiplicities, largest part
/// first. This is the shape shared by every set partition of {1..h} whose
/// block sizes form the same multiset.
class PartitionType {
 public:
  PartitionType() = default;  // the empty partition of 0
  explicit PartitionType(std::vector<unsigned> parts);

  const std::vector<PartPower>& multiplicities() const { return mult_; }
  std::vector<unsigned> parts() const;

  unsigned h() const { return h_; }
  /// Number of blocks r.
  unsigned classes() const { return r_; }
  /// gcd of the distinct part sizes; 0 for the empty type.
  unsigned parts_gcd() const { return gcd_; }

  friend bool operator==(const PartitionType&, const PartitionType&) = default;

 private:
  std::vector<PartPower> mult_;
  unsigned h_ = 0;
  unsigned r_ = 0;
  unsigned gcd_ = 0;
};

/// All integer partitions of h in reverse-lexicographic order
/// ([h] first, [1,...,1] last). h = 0 yields the single empty type.
std::vector<PartitionType> partition_types(unsigned h);

/// (-1)^(h-r) * prod_i ((i-1)!)^alpha_i
mpz_class coefficient(const PartitionType& t);

/// h! / prod_i (alpha_i! * (i!)^alpha_i), the number of set partitions of
/// {1..h} having this type.
mpz_class type_multiplicity(const PartitionType& t);

/// Blocks over 0-based indices 0..h-1, each block sorted, blocks ordered by
/// smallest element.
struct SetPartition {
  std::vector<std::vector<unsigned>> blocks;

  unsigned size() const;
  friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

/// Every set partition of {0..h-1}, enumerated through restricted growth
/// strings. Throws CapExceeded when h > cap.
std::vector<SetPartition> set_partitions(unsigned h, unsigned cap = kDefaultSetPartitionCap);

PartitionType type_of(const SetPartition& p);

/// c(P) evaluated block by block.
std::int64_t coefficient(const SetPartition& p);

/// 1 iff the tuple is constant on every block of p.
template <std::equality_comparable T>
int delta(const SetPartition& p, std::span<const T> tuple) {
  if (tuple.size() != p.size()) {
    throw std::invalid_argument("delta: tuple length " + std::to_string(tuple.size()) +
                                " does not match partition of " + std::to_string(p.size()));
  }
  for (const auto& block : p.blocks) {
    for (std::size_t j = 1; j < block.size(); ++j) {
      if (!(tuple[block[j]] == tuple[block[0]])) return 0;
    }
  }
  return 1;
}

/// sum_P c(P) * delta(P)(tuple), with the set partitions and their
/// coefficients prepared once for a fixed h.
class DistinctnessIdentity {
 public:
  explicit DistinctnessIdentity(unsigned h, unsigned cap = kDefaultSetPartitionCap);

  unsigned h() const { return h_; }
  const std::vector<SetPartition>& partitions() const { return partitions_; }
  const std::vector<std::int64_t>& coefficients() const { return coefficients_; }

  template <std::equality_comparable T>
  std::int64_t operator()(std::span<const T> tuple) const {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < partitions_.size(); ++i) {
      total += coefficients_[i] * delta(partitions_[i], tuple);
    }
    return total;
  }

 private:
  unsigned h_;
  std::vector<SetPartition> partitions_;
  std::vector<std::int64_t> coefficients_;
};

template <std::equality_comparable T>
std::int64_t distinctness_identity(std::span<const T> tuple,
                                   unsigned cap = kDefaultSetPartitionCap) {
  if (tuple.size() > cap) {
    throw CapExceeded("distinctness_identity: h=" + std::to_string(tuple.size()) +
                      " above set-partition cap " + std::to_string(cap));
  }
  return DistinctnessIdentity(static_cast<unsigned>(tuple.size()), cap)(tuple);
}

}  // namespace ssc
