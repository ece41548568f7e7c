#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ssc/group.hpp"

namespace ssc {

/// Rank-level addition, tabulated for small groups.
class RankAdder {
 public:
  explicit RankAdder(const AbelianGroup& g) : group_(&g), n_(g.size()) {
    if (n_ <= kTableLimit) {
      table_.resize(n_ * n_);
      for (std::uint64_t i = 0; i < n_; ++i) {
        for (std::uint64_t j = 0; j < n_; ++j) {
          table_[i * n_ + j] = static_cast<std::uint32_t>(g.add_ranks(i, j));
        }
      }
    }
  }

  std::uint64_t operator()(std::uint64_t i, std::uint64_t j) const {
    return table_.empty() ? group_->add_ranks(i, j) : table_[i * n_ + j];
  }

 private:
  static constexpr std::uint64_t kTableLimit = 1024;
  const AbelianGroup* group_;
  std::uint64_t n_;
  std::vector<std::uint32_t> table_;
};

/// Visits every h-subset of G in lexicographic order of sorted ranks as
/// visit(std::span<const std::uint64_t> ranks, std::uint64_t sum_rank).
template <class Visit>
void for_each_subset(const AbelianGroup& g, std::uint64_t h, Visit&& visit) {
  const auto n = g.size();
  if (h > n) return;
  if (h == 0) {
    visit(std::span<const std::uint64_t>{}, std::uint64_t{0});
    return;
  }
  const RankAdder add(g);
  std::vector<std::uint64_t> pick(h);
  std::vector<std::uint64_t> sums(h + 1, 0);  // sums[d] = sum of pick[0..d-1]
  std::int64_t d = 0;
  pick[0] = 0;
  const auto last = static_cast<std::int64_t>(h) - 1;
  while (d >= 0) {
    if (pick[d] + (h - static_cast<std::uint64_t>(d)) > n) {
      if (--d >= 0) ++pick[d];
      continue;
    }
    sums[d + 1] = add(sums[d], pick[d]);
    if (d == last) {
      visit(std::span<const std::uint64_t>(pick), sums[h]);
      ++pick[d];
    } else {
      pick[d + 1] = pick[d] + 1;
      ++d;
    }
  }
}

}  // namespace ssc
