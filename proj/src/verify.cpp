#include "ssc/verify.hpp"

#include "ssc/errors.hpp"

namespace ssc {

namespace {

void factor_multisets(std::uint64_t rest, std::uint64_t max_factor,
                      std::vector<std::uint64_t>& current,
                      std::vector<std::vector<std::uint64_t>>& out) {
  if (rest == 1) {
    out.push_back(current);
    return;
  }
  for (std::uint64_t f = std::min(rest, max_factor); f >= 2; --f) {
    if (rest % f) continue;
    current.push_back(f);
    factor_multisets(rest / f, f, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<AbelianGroup> groups_of_order(std::uint64_t n) {
  std::vector<std::vector<std::uint64_t>> lists;
  std::vector<std::uint64_t> current;
  if (n >= 2) factor_multisets(n, n, current, lists);
  std::vector<AbelianGroup> out;
  out.reserve(lists.size());
  for (auto& l : lists) out.emplace_back(std::move(l));
  return out;
}

std::vector<AbelianGroup> groups_up_to_order(std::uint64_t max_order) {
  std::vector<AbelianGroup> out;
  for (std::uint64_t n = 2; n <= max_order; ++n) {
    for (auto& g : groups_of_order(n)) out.push_back(std::move(g));
  }
  return out;
}

VerifySummary verify_against_brute_force(const VerifyOptions& opts) {
  VerifySummary sum;
  sum.max_order = opts.max_order;
  for (const auto& g : groups_up_to_order(opts.max_order)) {
    ++sum.groups;
    const auto n = g.size();
    unsigned lo = 0;
    unsigned hi = static_cast<unsigned>(n);
    if (opts.h) {
      if (*opts.h > n) continue;
      lo = hi = *opts.h;
    }
    for (unsigned h = lo; h <= hi; ++h) {
      std::optional<CountDistribution> brute;
      try {
        brute = brute_force_subsets(g, h, opts.brute_cap);
      } catch (const CapExceeded& e) {
        sum.skipped.push_back({g.to_string(), h, e.what()});
        continue;
      }
      auto formula = count_subsets_all(g, h, opts.engine);
      if (opts.perturb) formula = opts.perturb(g, h, std::move(formula));
      ++sum.cases;
      for (std::uint64_t a = 0; a < n; ++a) {
        if (formula[a] != (*brute)[a]) {
          sum.mismatches.push_back({g.to_string(), h, g.format_element(g.unrank(a)),
                                    formula[a].get_str(), (*brute)[a].get_str()});
          if (opts.stop_at_first_mismatch) return sum;
          break;
        }
      }
    }
  }
  return sum;
}

}  // namespace ssc
