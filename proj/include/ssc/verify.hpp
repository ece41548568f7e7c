#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ssc/counting.hpp"
#include "ssc/group.hpp"

namespace ssc {

/// One group per multiset of cyclic factors (each >= 2) with product n,
/// factors listed in non-increasing order.
std::vector<AbelianGroup> groups_of_order(std::uint64_t n);

/// groups_of_order(n) for n = 2..max_order.
std::vector<AbelianGroup> groups_up_to_order(std::uint64_t max_order);

struct VerifyMismatch {
  std::string group;
  unsigned h = 0;
  std::string target;  // element literal
  std::string formula;
  std::string brute;
};

struct VerifySkip {
  std::string group;
  unsigned h = 0;
  std::string reason;
};

struct VerifySummary {
  std::uint64_t max_order = 0;
  std::uint64_t groups = 0;
  std::uint64_t cases = 0;  // (group, h) pairs compared
  std::vector<VerifyMismatch> mismatches;
  std::vector<VerifySkip> skipped;

  bool passed() const { return mismatches.empty(); }
};

struct VerifyOptions {
  std::uint64_t max_order = 12;
  std::optional<unsigned> h;  // restrict to one h; all 0..n otherwise
  std::uint64_t brute_cap = kDefaultBruteCap;
  EngineOptions engine;
  bool stop_at_first_mismatch = true;
  // Test hook applied to the formula result before comparison.
  std::function<CountDistribution(const AbelianGroup&, unsigned, CountDistribution)> perturb;
};

/// Formula vs brute force for every group of order <= max_order.
VerifySummary verify_against_brute_force(const VerifyOptions& opts);

}  // namespace ssc
