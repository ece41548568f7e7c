#include "ssc/counting.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "ssc/errors.hpp"
#include "ssc/subsets.hpp"

namespace ssc {

namespace {

using Dense = std::vector<mpz_class>;
using GcdVector = std::vector<std::uint64_t>;

mpz_class to_mpz(std::uint64_t v) {
  mpz_class out;
  mpz_set_ui(out.get_mpz_t(), v);
  return out;
}

mpz_class power(std::uint64_t base, unsigned e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, e);
  return out;
}

GcdVector gcd_vector(const AbelianGroup& g, std::uint64_t k) {
  return g.image_subgroup(k).generators;
}

// multiplicity on every element of the subgroup generated by gens, 0 elsewhere
Dense subgroup_indicator(const AbelianGroup& g, const GcdVector& gens) {
  const auto n = g.size();
  const auto& orders = g.component_orders();
  std::uint64_t sub = 1;
  for (std::size_t i = 0; i < orders.size(); ++i) sub *= orders[i] / gens[i];
  const auto mult = to_mpz(n / sub);

  Dense out(n);
  std::vector<std::uint64_t> digit(orders.size(), 0);
  while (true) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) r = r * orders[i] + digit[i];
    out[r] = mult;
    std::size_t c = orders.size();
    while (c-- > 0) {
      digit[c] += gens[c];
      if (digit[c] < orders[c]) break;
      digit[c] = 0;
    }
    if (c == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

Dense convolve(const AbelianGroup& g, const RankAdder& add, const Dense& f, const Dense& h) {
  const auto n = g.size();
  std::vector<std::uint64_t> sf, sh;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (sgn(f[i]) != 0) sf.push_back(i);
    if (sgn(h[i]) != 0) sh.push_back(i);
  }
  Dense out(n);
  for (auto i : sf) {
    for (auto j : sh) {
      mpz_addmul(out[add(i, j)].get_mpz_t(), f[i].get_mpz_t(), h[j].get_mpz_t());
    }
  }
  return out;
}

class SumEngine {
 public:
  SumEngine(const AbelianGroup& g, std::shared_ptr<SumDistributionCache> cache)
      : g_(g), add_(g), cache_(cache ? std::move(cache) : std::make_shared<SumDistributionCache>()) {}

  // distribution of y_1*k + ... + y_count*k for k acting as gens
  std::shared_ptr<const Dense> power_of(const GcdVector& gens, unsigned count) {
    SumDistributionCache::Key key{gens, count};
    if (auto hit = cache_->find(key)) return hit;
    std::shared_ptr<const Dense> value;
    if (count == 1) {
      value = std::make_shared<const Dense>(subgroup_indicator(g_, gens));
    } else {
      const auto half = power_of(gens, count / 2);
      Dense sq = convolve(g_, add_, *half, *half);
      if (count % 2) sq = convolve(g_, add_, sq, *power_of(gens, 1));
      value = std::make_shared<const Dense>(std::move(sq));
    }
    return cache_->insert(std::move(key), std::move(value));
  }

  // key: sorted (gens, count) pairs
  Dense distribution(const std::vector<std::pair<GcdVector, unsigned>>& key) {
    Dense acc = *power_of(key.front().first, key.front().second);
    for (std::size_t i = 1; i < key.size(); ++i) {
      acc = convolve(g_, add_, acc, *power_of(key[i].first, key[i].second));
    }
    return acc;
  }

 private:
  const AbelianGroup& g_;
  RankAdder add_;
  std::shared_ptr<SumDistributionCache> cache_;
};

using ImageKey = std::vector<std::pair<GcdVector, unsigned>>;

ImageKey image_key(const AbelianGroup& g, std::span<const PartPower> mult) {
  std::map<GcdVector, unsigned> counts;
  for (const auto& [part, count] : mult) counts[gcd_vector(g, part)] += count;
  return ImageKey(counts.begin(), counts.end());
}

ImageKey image_key(const AbelianGroup& g, std::span<const unsigned> parts) {
  std::map<GcdVector, unsigned> counts;
  for (auto k : parts) {
    if (k == 0) throw std::invalid_argument("weighted_sum_distribution: parts must be positive");
    ++counts[gcd_vector(g, k)];
  }
  return ImageKey(counts.begin(), counts.end());
}

void check_h(const AbelianGroup& g, unsigned h) {
  const auto n = g.size();
  if (h > n) {
    throw RangeError("h=" + std::to_string(h) + " exceeds group order " + std::to_string(n));
  }
}

}  // namespace

std::shared_ptr<const SumDistributionCache::Dense> SumDistributionCache::find(
    const Key& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : it->second;
}

std::shared_ptr<const SumDistributionCache::Dense> SumDistributionCache::insert(
    Key key, std::shared_ptr<const Dense> value) {
  std::lock_guard lock(mu_);
  auto [it, inserted] = entries_.try_emplace(std::move(key), std::move(value));
  return it->second;
}

std::size_t SumDistributionCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

CountDistribution::CountDistribution(AbelianGroup group, std::vector<mpz_class> values)
    : group_(std::move(group)), values_(std::move(values)), total_(0) {
  if (values_.size() != group_.size()) {
    throw InternalError("distribution length " + std::to_string(values_.size()) +
                        " does not match group order " + std::to_string(group_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (sgn(values_[i]) < 0) {
      throw InternalError("negative count " + values_[i].get_str() + " at rank " +
                          std::to_string(i));
    }
    total_ += values_[i];
  }
}

mpz_class falling_factorial(std::uint64_t n, std::uint64_t h) {
  if (h > n) return 0;
  mpz_class out = 1;
  for (std::uint64_t i = 0; i < h; ++i) out *= to_mpz(n - i);
  return out;
}

mpz_class binomial(std::uint64_t n, std::uint64_t h) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, h);
  return out;
}

CountDistribution weighted_sum_distribution(const AbelianGroup& g, std::span<const unsigned> parts,
                                            SumPath path) {
  if (parts.empty()) throw std::invalid_argument("weighted_sum_distribution: empty parts");
  const auto n = g.size();
  const auto key = image_key(g, parts);
  const auto r = static_cast<unsigned>(parts.size());

  std::uint64_t common = 0;
  for (auto k : parts) common = std::gcd(common, std::uint64_t{k});
  if (path == SumPath::automatic && std::gcd(common, n) == 1) {
    return CountDistribution(g, Dense(n, power(n, r - 1)));
  }
  SumEngine engine(g, nullptr);
  return CountDistribution(g, engine.distribution(key));
}

UniformSplit uniform_part_and_corrections(const AbelianGroup& g, unsigned h,
                                          const EngineOptions& opts) {
  check_h(g, h);
  const auto n = g.size();
  UniformSplit out;
  out.corrections.assign(n, mpz_class(0));

  if (h == 0) {
    // the empty tuple sums to zero
    out.corrections[0] = 1;
    out.bad_types = 1;
    return out;
  }

  std::vector<mpz_class> n_pow(h + 1);
  n_pow[0] = 1;
  for (unsigned i = 1; i <= h; ++i) n_pow[i] = n_pow[i - 1] * to_mpz(n);

  std::map<ImageKey, mpz_class> bad;
  for (const auto& t : partition_types(h)) {
    mpz_class weight = type_multiplicity(t) * coefficient(t);
    if (std::gcd(std::uint64_t{t.parts_gcd()}, n) == 1) {
      out.good_constant += weight * n_pow[t.classes() - 1];
      ++out.good_types;
    } else {
      bad[image_key(g, t.multiplicities())] += weight;
      ++out.bad_types;
    }
  }

  std::vector<std::pair<const ImageKey*, const mpz_class*>> jobs;
  for (const auto& [key, weight] : bad) {
    if (sgn(weight) != 0) jobs.emplace_back(&key, &weight);
  }
  out.convolutions = jobs.size();

  const unsigned workers =
      std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(jobs.size())));
  std::vector<Dense> partial(workers, Dense(n));
  SumEngine engine(g, opts.cache);
  std::atomic<std::size_t> next{0};
  auto work = [&](unsigned w) {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      const Dense s = engine.distribution(*jobs[j].first);
      const auto& weight = *jobs[j].second;
      for (std::uint64_t a = 0; a < n; ++a) {
        if (sgn(s[a]) != 0) mpz_addmul(partial[w][a].get_mpz_t(), weight.get_mpz_t(), s[a].get_mpz_t());
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  // integer addition is exact, so the reduction order cannot change the result
  for (const auto& p : partial) {
    for (std::uint64_t a = 0; a < n; ++a) out.corrections[a] += p[a];
  }

  const mpz_class ordered_total = falling_factorial(n, h);
  mpz_class base;
  if (!mpz_divisible_ui_p(ordered_total.get_mpz_t(), n)) {
    throw InternalError("n does not divide n!/(n-h)!");
  }
  mpz_divexact_ui(base.get_mpz_t(), ordered_total.get_mpz_t(), n);
  out.deviation.resize(n);
  for (std::uint64_t a = 0; a < n; ++a) {
    out.deviation[a] = out.good_constant + out.corrections[a] - base;
  }
  out.baseline = std::move(base);
  return out;
}

CountDistribution count_distinct_ordered_all(const AbelianGroup& g, unsigned h,
                                             const EngineOptions& opts) {
  auto split = uniform_part_and_corrections(g, h, opts);
  const auto n = g.size();
  Dense values(n);
  for (std::uint64_t a = 0; a < n; ++a) {
    values[a] = split.good_constant + split.corrections[a];
    if (sgn(values[a]) < 0) {
      throw InternalError("negative ordered count at rank " + std::to_string(a));
    }
    if (!mpz_divisible_p(values[a].get_mpz_t(), factorial(h).get_mpz_t())) {
      throw InternalError("h! does not divide T(a) at rank " + std::to_string(a));
    }
  }
  CountDistribution dist(g, std::move(values));
  if (dist.total() != falling_factorial(n, h)) {
    throw InternalError("ordered total " + dist.total().get_str() + " != n!/(n-h)!");
  }
  return dist;
}

CountDistribution count_subsets_all(const AbelianGroup& g, unsigned h,
                                    const EngineOptions& opts) {
  const auto ordered = count_distinct_ordered_all(g, h, opts);
  Dense values(ordered.size());
  const auto& hf = factorial(h);
  for (std::size_t a = 0; a < values.size(); ++a) {
    mpz_divexact(values[a].get_mpz_t(), ordered[a].get_mpz_t(), hf.get_mpz_t());
  }
  CountDistribution dist(g, std::move(values));
  assert_subset_totals(dist, h);
  return dist;
}

void assert_subset_totals(const CountDistribution& subsets, unsigned h) {
  const auto expected = binomial(subsets.group().size(), h);
  if (subsets.total() != expected) {
    throw InternalError("subset total " + subsets.total().get_str() + " != C(n,h) = " +
                        expected.get_str());
  }
}

CountDistribution brute_force_subsets(const AbelianGroup& g, unsigned h, std::uint64_t cap) {
  check_h(g, h);
  const auto n = g.size();
  if (binomial(n, h) > to_mpz(cap)) {
    throw CapExceeded("C(" + std::to_string(n) + "," + std::to_string(h) + ") exceeds brute-force cap " +
                      std::to_string(cap));
  }
  std::vector<std::uint64_t> counts(n, 0);
  // enumerate the smaller side; a subset and its complement have sums adding to sum(G)
  const bool complement = h > n / 2;
  if (complement) {
    const RankAdder add(g);
    std::uint64_t all = 0;
    for (std::uint64_t x = 0; x < n; ++x) all = add(all, x);
    std::vector<std::uint64_t> minus(n);
    for (std::uint64_t x = 0; x < n; ++x) minus[x] = g.rank(g.neg(g.unrank(x)));
    for_each_subset(g, n - h, [&](std::span<const std::uint64_t>, std::uint64_t s) {
      ++counts[add(all, minus[s])];
    });
  } else {
    for_each_subset(g, h, [&](std::span<const std::uint64_t>, std::uint64_t s) { ++counts[s]; });
  }
  Dense values(n);
  for (std::uint64_t a = 0; a < n; ++a) values[a] = to_mpz(counts[a]);
  CountDistribution dist(g, std::move(values));
  assert_subset_totals(dist, h);
  return dist;
}

ExtremesReport extremes(const CountDistribution& dist) {
  if (dist.size() == 0) throw std::invalid_argument("extremes of an empty distribution");
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  for (std::uint64_t a = 1; a < dist.size(); ++a) {
    if (dist[a] < dist[lo]) lo = a;
    if (dist[a] > dist[hi]) hi = a;
  }
  ExtremesReport rep;
  rep.min = dist[lo];
  rep.max = dist[hi];
  rep.ratio = sgn(rep.max) == 0 ? mpq_class(0) : mpq_class(rep.min, rep.max);
  rep.ratio.canonicalize();
  rep.argmin = dist.group().unrank(lo);
  rep.argmax = dist.group().unrank(hi);
  return rep;
}

BoundReport theorem2_report(const AbelianGroup& g, unsigned h, const EngineOptions& opts) {
  const auto n = g.size();
  if (h < 1 || h + 1 > n) {
    throw RangeError("bound report needs 1 <= h <= n-1, got h=" + std::to_string(h) +
                     " n=" + std::to_string(n));
  }
  auto split = uniform_part_and_corrections(g, h, opts);
  BoundReport rep;
  rep.group = g.to_string();
  rep.h = h;
  rep.baseline = *split.baseline;
  mpz_class three_h, four_h;
  mpz_ui_pow_ui(three_h.get_mpz_t(), 3, h);
  mpz_ui_pow_ui(four_h.get_mpz_t(), 4, h);
  rep.envelope = mpq_class(three_h * rep.baseline, four_h);
  rep.envelope.canonicalize();

  rep.ordered.resize(n);
  rep.delta = std::move(split.deviation);
  rep.within_bound.resize(n);
  mpz_class worst = 0;
  mpz_class sum = 0;
  for (std::uint64_t a = 0; a < n; ++a) {
    rep.ordered[a] = rep.baseline + rep.delta[a];
    sum += rep.delta[a];
    const mpz_class mag = abs(rep.delta[a]);
    if (mag > worst) worst = mag;
    // |delta| <= 3^h baseline / 4^h  <=>  4^h |delta| <= 3^h baseline
    rep.within_bound[a] = four_h * mag <= three_h * rep.baseline;
    rep.all_within_bound = rep.all_within_bound && rep.within_bound[a];
  }
  if (sgn(sum) != 0) throw InternalError("deviations do not sum to zero");
  rep.max_ratio = mpq_class(worst, rep.baseline);
  rep.max_ratio.canonicalize();
  return rep;
}

ShiftCheck shift_conjugacy_check(const CountDistribution& subsets, unsigned h) {
  const auto& g = subsets.group();
  const auto n = g.size();
  ShiftCheck out;
  // hG is generated by h*e_i, so invariance under those shifts suffices
  for (std::size_t c = 0; c < g.components(); ++c) {
    Element d = g.zero();
    d.residues[c] = 1;
    const auto shift = g.rank(g.scalar_mul(h, d));
    if (shift == 0) continue;
    for (std::uint64_t a = 0; a < n; ++a) {
      const auto b = g.add_ranks(a, shift);
      if (subsets[a] != subsets[b]) {
        out.ok = false;
        out.target_rank = a;
        out.shift = d;
        out.detail = "|F_a| at " + g.format_element(g.unrank(a)) + " is " + subsets[a].get_str() +
                     " but at a+h*d=" + g.format_element(g.unrank(b)) + " is " +
                     subsets[b].get_str();
        return out;
      }
    }
  }
  return out;
}

}  // namespace ssc
