#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "ssc/counting.hpp"
#include "ssc/errors.hpp"
#include "ssc/verify.hpp"

using namespace ssc;

namespace {

std::vector<mpz_class> ints(std::initializer_list<long> v) {
  std::vector<mpz_class> out;
  for (auto x : v) out.emplace_back(x);
  return out;
}

// #{(y_1..y_r) : sum k_i y_i = a} by walking all of G^r.
std::vector<mpz_class> weighted_sum_by_enumeration(const AbelianGroup& g,
                                                   const std::vector<unsigned>& parts) {
  const auto n = g.size();
  std::vector<std::uint64_t> counts(n, 0);
  std::vector<std::uint64_t> y(parts.size(), 0);
  while (true) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) s = g.add_ranks(s, g.scalar_mul_rank(parts[i], y[i]));
    ++counts[s];
    std::size_t i = 0;
    while (i < y.size() && ++y[i] == n) y[i++] = 0;
    if (i == y.size()) break;
  }
  std::vector<mpz_class> out;
  for (auto c : counts) out.emplace_back(static_cast<unsigned long>(c));
  return out;
}

// y -> sum k_i y_i is a homomorphism G^r -> G, so every element of its image
// K is hit n^r/|K| times. K is found by closing the generators k_i e_c.
std::vector<mpz_class> weighted_sum_by_image(const AbelianGroup& g,
                                             const std::vector<unsigned>& parts) {
  const auto n = g.size();
  std::vector<std::uint64_t> gens;
  for (auto k : parts) {
    for (std::size_t c = 0; c < g.components(); ++c) {
      Element e = g.zero();
      e.residues[c] = 1;
      gens.push_back(g.rank(g.scalar_mul(k, e)));
    }
  }
  std::vector<bool> in(n, false);
  std::vector<std::uint64_t> frontier{0};
  in[0] = true;
  while (!frontier.empty()) {
    const auto x = frontier.back();
    frontier.pop_back();
    for (auto s : gens) {
      const auto y = g.add_ranks(x, s);
      if (!in[y]) {
        in[y] = true;
        frontier.push_back(y);
      }
    }
  }
  const auto size = static_cast<unsigned long>(std::count(in.begin(), in.end(), true));
  mpz_class each;
  mpz_ui_pow_ui(each.get_mpz_t(), n, parts.size());
  each /= size;
  std::vector<mpz_class> out(n);
  for (std::uint64_t a = 0; a < n; ++a) out[a] = in[a] ? each : mpz_class(0);
  return out;
}

// Ordered tuples of distinct elements, enumerated directly.
std::vector<mpz_class> ordered_by_enumeration(const AbelianGroup& g, unsigned h) {
  const auto n = g.size();
  std::vector<std::uint64_t> counts(n, 0);
  std::vector<std::uint64_t> t(h, 0);
  std::vector<bool> used(n, false);
  auto rec = [&](auto& self, unsigned depth, std::uint64_t sum) -> void {
    if (depth == h) {
      ++counts[sum];
      return;
    }
    for (std::uint64_t x = 0; x < n; ++x) {
      if (used[x]) continue;
      used[x] = true;
      self(self, depth + 1, g.add_ranks(sum, x));
      used[x] = false;
    }
  };
  rec(rec, 0, 0);
  std::vector<mpz_class> out;
  for (auto c : counts) out.emplace_back(static_cast<unsigned long>(c));
  return out;
}

}  // namespace

TEST_CASE("weighted_sum_distribution examples") {
  const std::vector<unsigned> p23{2, 3};
  CHECK(weighted_sum_distribution(parse_group("5"), p23).values() == ints({5, 5, 5, 5, 5}));
  const std::vector<unsigned> p2{2};
  CHECK(weighted_sum_distribution(parse_group("4"), p2).values() == ints({2, 0, 2, 0}));
  const std::vector<unsigned> p11{1, 1};
  CHECK(weighted_sum_distribution(parse_group("4"), p11).values() == ints({4, 4, 4, 4}));
  CHECK_THROWS(weighted_sum_distribution(parse_group("4"), std::span<const unsigned>{}));
}

TEST_CASE("weighted_sum_distribution agrees with enumeration and the image oracle") {
  std::mt19937_64 rng(11);
  for (const auto& g : groups_up_to_order(16)) {
    for (int t = 0; t < 12; ++t) {
      const unsigned r = 1 + static_cast<unsigned>(rng() % 3);
      std::vector<unsigned> parts;
      for (unsigned i = 0; i < r; ++i) parts.push_back(1 + static_cast<unsigned>(rng() % 12));
      const auto fast = weighted_sum_distribution(g, parts);
      const auto conv = weighted_sum_distribution(g, parts, SumPath::convolution);
      const auto expected = weighted_sum_by_enumeration(g, parts);
      CHECK(fast.values() == expected);
      CHECK(conv.values() == expected);
      CHECK(weighted_sum_by_image(g, parts) == expected);
    }
  }
}

TEST_CASE("weighted_sum_distribution with ones has no distinctness constraint") {
  for (const auto& g : groups_up_to_order(12)) {
    for (unsigned h = 1; h <= 5; ++h) {
      const std::vector<unsigned> ones(h, 1);
      const auto d = weighted_sum_distribution(g, ones, SumPath::convolution);
      mpz_class each;
      mpz_ui_pow_ui(each.get_mpz_t(), g.size(), h - 1);
      for (const auto& v : d.values()) CHECK(v == each);
    }
  }
}

TEST_CASE("fast path equals convolution for coprime parts") {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 150) {
    const auto n = 2 + rng() % 63;
    const auto groups = groups_of_order(n);
    const auto& g = groups[rng() % groups.size()];
    const unsigned r = 1 + static_cast<unsigned>(rng() % 4);
    std::vector<unsigned> parts;
    std::uint64_t common = 0;
    for (unsigned i = 0; i < r; ++i) {
      parts.push_back(1 + static_cast<unsigned>(rng() % (2 * n)));
      common = std::gcd(common, std::uint64_t{parts.back()});
    }
    if (std::gcd(common, n) != 1) continue;
    ++checked;
    CHECK(weighted_sum_distribution(g, parts, SumPath::convolution) ==
          weighted_sum_distribution(g, parts));
  }
}

TEST_CASE("ordered counts: examples") {
  CHECK(count_distinct_ordered_all(parse_group("4"), 2).values() == ints({2, 4, 2, 4}));
  CHECK(count_distinct_ordered_all(parse_group("5"), 2).values() == ints({4, 4, 4, 4, 4}));
  for (unsigned r = 1; r <= 6; ++r) {
    const auto g = AbelianGroup(std::vector<std::uint64_t>(r, 2));
    CHECK(count_distinct_ordered_all(g, 2)[0] == 0);
  }
}

TEST_CASE("ordered counts agree with tuple enumeration") {
  for (const auto& g : groups_up_to_order(9)) {
    for (unsigned h = 0; h <= std::min<unsigned>(5, g.size()); ++h) {
      CHECK(count_distinct_ordered_all(g, h).values() == ordered_by_enumeration(g, h));
    }
  }
}

TEST_CASE("subset counts: examples and errors") {
  const auto z4 = parse_group("4");
  const auto d = count_subsets_all(z4, 2);
  CHECK(d.values() == ints({1, 2, 1, 2}));
  CHECK(d.total() == 6);

  for (const auto& g : groups_up_to_order(10)) {
    const auto empty = count_subsets_all(g, 0);
    CHECK(empty[0] == 1);
    CHECK(empty.total() == 1);
  }

  CHECK_THROWS_AS(count_subsets_all(z4, 5), RangeError);
  CHECK_THROWS_AS(count_distinct_ordered_all(z4, 5), RangeError);
}

TEST_CASE("coprime h and n give exact uniformity") {
  for (std::uint64_t n = 3; n <= 45; n += 2) {
    for (const auto& g : groups_of_order(n)) {
      for (unsigned h = 1; h <= std::min<std::uint64_t>(n, 7); ++h) {
        if (std::gcd<std::uint64_t>(h, n) != 1) continue;
        const auto d = count_subsets_all(g, h);
        const mpz_class each = binomial(n, h) / mpz_class(static_cast<unsigned long>(n));
        for (const auto& v : d.values()) CHECK(v == each);
      }
    }
  }
}

TEST_CASE("odd order alone does not force uniformity") {
  CHECK(count_subsets_all(parse_group("3"), 3).values() == ints({1, 0, 0}));
  const auto z9 = extremes(count_subsets_all(parse_group("9"), 3));
  CHECK(z9.min != z9.max);
  const auto split = uniform_part_and_corrections(parse_group("15"), 3);
  CHECK(split.bad_types > 0);
  CHECK(std::any_of(split.corrections.begin(), split.corrections.end(),
                    [](const mpz_class& c) { return sgn(c) != 0; }));
}

TEST_CASE("subset counts agree with a size-by-sum dynamic program") {
  // dp[k][s] = number of k-subsets of the elements seen so far with sum s
  for (const char* spec : {"40", "2^5", "6x6", "3x3x3", "64", "5x8"}) {
    const auto g = parse_group(spec);
    const auto n = g.size();
    std::vector<std::vector<mpz_class>> dp(n + 1, std::vector<mpz_class>(n));
    dp[0][0] = 1;
    for (std::uint64_t x = 0; x < n; ++x) {
      for (std::uint64_t k = x + 1; k-- > 0;) {
        for (std::uint64_t s = 0; s < n; ++s) {
          if (sgn(dp[k][s]) != 0) dp[k + 1][g.add_ranks(s, x)] += dp[k][s];
        }
      }
    }
    for (unsigned h : {0u, 1u, 2u, 3u, 5u, 8u, static_cast<unsigned>(n / 2), static_cast<unsigned>(n - 1)}) {
      CHECK_MESSAGE(count_subsets_all(g, h).values() == dp[h], spec << " h=" << h);
    }
  }
}

TEST_CASE("brute force examples") {
  CHECK(brute_force_subsets(parse_group("4"), 2).values() == ints({1, 2, 1, 2}));
  CHECK(brute_force_subsets(parse_group("2x2"), 4).values() == ints({1, 0, 0, 0}));
  for (const auto& g : groups_up_to_order(10)) {
    const auto d = brute_force_subsets(g, 1);
    for (const auto& v : d.values()) CHECK(v == 1);
  }
  CHECK_THROWS_AS(brute_force_subsets(parse_group("40"), 20), CapExceeded);
  CHECK_THROWS_AS(brute_force_subsets(parse_group("4"), 2, 5), CapExceeded);
  CHECK_NOTHROW(brute_force_subsets(parse_group("4"), 2, 6));
}

TEST_CASE("formula equals brute force on small groups") {
  for (const auto& g : groups_up_to_order(10)) {
    for (unsigned h = 0; h <= g.size(); ++h) {
      const auto f = count_subsets_all(g, h);
      REQUIRE(f == brute_force_subsets(g, h));
      CHECK(shift_conjugacy_check(f, h).ok);
    }
  }
}

TEST_CASE("extremes") {
  const auto z4 = parse_group("4");
  const auto e = extremes(count_subsets_all(z4, 2));
  CHECK(e.min == 1);
  CHECK(e.max == 2);
  CHECK(e.ratio == mpq_class(1, 2));
  CHECK(z4.rank(e.argmin) == 0);
  CHECK(z4.rank(e.argmax) == 1);

  const auto flat = extremes(count_subsets_all(parse_group("7"), 3));
  CHECK(flat.ratio == 1);

  const auto zero = extremes(count_subsets_all(parse_group("2^3"), 2));
  CHECK(zero.min == 0);
  CHECK(zero.ratio == 0);
}

TEST_CASE("uniform split") {
  const auto z4 = parse_group("4");
  const auto s = uniform_part_and_corrections(z4, 2);
  CHECK(s.good_constant == 4);
  CHECK(s.corrections == ints({-2, 0, -2, 0}));
  CHECK(*s.baseline == 3);
  CHECK(s.deviation == ints({-1, 1, -1, 1}));
  CHECK(s.bad_types == 1);
  CHECK(s.good_types == 1);

  for (const auto& g : groups_up_to_order(30)) {
    const auto n = g.size();
    for (unsigned h = 1; h <= std::min<std::uint64_t>(n, 8); ++h) {
      const auto split = uniform_part_and_corrections(g, h);
      const auto ordered = count_distinct_ordered_all(g, h);
      mpz_class corr_sum = 0;
      for (std::uint64_t a = 0; a < n; ++a) {
        CHECK(split.good_constant + split.corrections[a] == ordered[a]);
        CHECK(*split.baseline + split.deviation[a] == ordered[a]);
        corr_sum += split.corrections[a];
      }
      CHECK(corr_sum == falling_factorial(n, h) - mpz_class(static_cast<unsigned long>(n)) *
                                                      split.good_constant);
      if (std::gcd<std::uint64_t>(h, n) == 1) {
        CHECK(split.bad_types == 0);
        for (const auto& c : split.corrections) CHECK(c == 0);
      }
    }
  }
}

TEST_CASE("theorem2_report") {
  const auto rep = theorem2_report(parse_group("4"), 2);
  CHECK(rep.baseline == 3);
  CHECK(rep.delta == ints({-1, 1, -1, 1}));
  CHECK(rep.ordered == ints({2, 4, 2, 4}));
  CHECK(rep.envelope == mpq_class(27, 16));
  CHECK(rep.max_ratio == mpq_class(1, 3));
  CHECK(rep.all_within_bound);

  const auto odd = theorem2_report(parse_group("3x5"), 7);
  CHECK(odd.max_ratio == 0);
  CHECK(odd.all_within_bound);
  for (const auto& d : odd.delta) CHECK(d == 0);

  // Z_2^3, h=2: zero is never hit, so |delta(0)| = baseline > (3/4)^2 baseline
  const auto kml = theorem2_report(parse_group("2^3"), 2);
  CHECK_FALSE(kml.all_within_bound);
  CHECK_FALSE(kml.within_bound[0]);
  CHECK(kml.max_ratio == 1);

  CHECK_THROWS_AS(theorem2_report(parse_group("4"), 0), RangeError);
  CHECK_THROWS_AS(theorem2_report(parse_group("4"), 4), RangeError);
}

TEST_CASE("shift conjugacy") {
  const auto z4 = parse_group("4");
  CHECK(shift_conjugacy_check(count_subsets_all(z4, 2), 2).ok);

  CountDistribution tampered(z4, ints({1, 2, 2, 1}));
  const auto bad = shift_conjugacy_check(tampered, 2);
  CHECK_FALSE(bad.ok);
  CHECK(bad.target_rank == 0u);
  CHECK_FALSE(bad.detail.empty());

  // odd n: h*G = G, so the check forces a constant distribution
  CountDistribution lumpy(parse_group("5"), ints({1, 1, 1, 1, 2}));
  CHECK_FALSE(shift_conjugacy_check(lumpy, 2).ok);
}

TEST_CASE("isomorphic specs give the same counts") {
  // Z_6 -> Z_2 x Z_3, x -> (x mod 2, x mod 3)
  const auto z6 = parse_group("6");
  const auto z23 = parse_group("2x3");
  const auto z32 = parse_group("3x2");
  for (unsigned h = 0; h <= 6; ++h) {
    const auto a = count_subsets_all(z6, h);
    const auto b = count_subsets_all(z23, h);
    const auto c = count_subsets_all(z32, h);
    for (std::uint64_t x = 0; x < 6; ++x) {
      Element e23{{x % 2, x % 3}};
      Element e32{{x % 3, x % 2}};
      CHECK(a[x] == b.at(e23));
      CHECK(a[x] == c.at(e32));
    }
  }
  // factor order only permutes coordinates
  const auto g42 = parse_group("4x2");
  const auto g24 = parse_group("2x4");
  for (unsigned h = 0; h <= 8; ++h) {
    const auto a = count_subsets_all(g42, h);
    const auto b = count_subsets_all(g24, h);
    for (std::uint64_t x = 0; x < 8; ++x) {
      const auto e = g42.unrank(x);
      CHECK(a[x] == b.at(Element{{e.residues[1], e.residues[0]}}));
    }
  }
}

TEST_CASE("thread count does not change results") {
  const auto g = parse_group("2x36");
  EngineOptions one;
  EngineOptions four;
  four.threads = 4;
  for (unsigned h : {6u, 12u, 18u}) {
    CHECK(count_subsets_all(g, h, one) == count_subsets_all(g, h, four));
  }
}

TEST_CASE("shared cache across calls") {
  auto cache = std::make_shared<SumDistributionCache>();
  EngineOptions opts;
  opts.cache = cache;
  const auto g = parse_group("24");
  const auto first = count_subsets_all(g, 12, opts);
  const auto filled = cache->size();
  CHECK(filled > 0);
  CHECK(count_subsets_all(g, 12, opts) == first);
  CHECK(cache->size() == filled);
  CHECK(count_subsets_all(g, 12) == first);
}

TEST_CASE("binomial and falling factorial helpers") {
  CHECK(binomial(64, 32) == mpz_class("1832624140942590534"));
  CHECK(falling_factorial(10, 3) == 720);
  CHECK(falling_factorial(3, 4) == 0);
  CHECK(falling_factorial(7, 0) == 1);
}
