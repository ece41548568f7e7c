#include "ssc/code.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "ssc/errors.hpp"
#include "ssc/subsets.hpp"

namespace ssc {

std::size_t Codeword::weight() const {
  std::size_t w = 0;
  for (auto word : words_) w += std::popcount(word);
  return w;
}

std::string Codeword::to_string() const {
  std::string out(length_, '0');
  for (std::size_t i = 0; i < length_; ++i) {
    if (test(i)) out[i] = '1';
  }
  return out;
}

std::size_t distance(const Codeword& a, const Codeword& b) {
  if (a.length_ != b.length_) throw std::invalid_argument("codeword lengths differ");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.words_.size(); ++i) d += std::popcount(a.words_[i] ^ b.words_[i]);
  return d;
}

Code build_code(const AbelianGroup& g, unsigned h, const Element& a, std::uint64_t cap) {
  const auto n = g.size();
  if (h > n) throw RangeError("h exceeds group order");
  if (binomial(n, h) > mpz_class(std::to_string(cap))) {
    throw CapExceeded("C(" + std::to_string(n) + "," + std::to_string(h) +
                      ") exceeds brute-force cap " + std::to_string(cap));
  }
  const auto target = g.rank(a);
  Code code{n, h, {}};
  if (h > n / 2) {
    // walk complements: sum(S) = sum(G) - sum(complement)
    const RankAdder add(g);
    std::uint64_t all = 0;
    for (std::uint64_t x = 0; x < n; ++x) all = add(all, x);
    const auto want = g.rank(g.add(g.unrank(all), g.neg(a)));
    for_each_subset(g, n - h, [&](std::span<const std::uint64_t> ranks, std::uint64_t s) {
      if (s != want) return;
      Codeword w(n);
      std::size_t j = 0;
      for (std::uint64_t x = 0; x < n; ++x) {
        if (j < ranks.size() && ranks[j] == x) {
          ++j;
        } else {
          w.set(x);
        }
      }
      code.codewords.push_back(std::move(w));
    });
    std::sort(code.codewords.begin(), code.codewords.end(),
              [](const Codeword& x, const Codeword& y) { return x.to_string() > y.to_string(); });
  } else {
    for_each_subset(g, h, [&](std::span<const std::uint64_t> ranks, std::uint64_t s) {
      if (s != target) return;
      Codeword w(n);
      for (auto x : ranks) w.set(x);
      code.codewords.push_back(std::move(w));
    });
  }
  return code;
}

Code build_code_from_subsets(const AbelianGroup& g, unsigned h,
                             std::span<const std::vector<std::uint64_t>> subsets) {
  const auto n = g.size();
  Code code{n, h, {}};
  for (const auto& s : subsets) {
    Codeword w(n);
    for (auto x : s) {
      if (x >= n) throw RangeError("subset rank out of range");
      w.set(x);
    }
    code.codewords.push_back(std::move(w));
  }
  return code;
}

std::optional<std::size_t> min_pairwise_distance(const Code& code) {
  const auto& cw = code.codewords;
  if (cw.size() < 2) return std::nullopt;
  std::size_t best = code.length + 1;
  for (std::size_t i = 0; i < cw.size(); ++i) {
    for (std::size_t j = i + 1; j < cw.size(); ++j) best = std::min(best, distance(cw[i], cw[j]));
  }
  return best;
}

std::vector<std::string> code_violations(const Code& code) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < code.codewords.size(); ++i) {
    const auto& w = code.codewords[i];
    if (w.length() != code.length) {
      out.push_back("codeword " + std::to_string(i) + " has length " + std::to_string(w.length()));
    }
    if (w.weight() != code.weight) {
      out.push_back("codeword " + std::to_string(i) + " has weight " + std::to_string(w.weight()));
    }
    if (!seen.insert(w.to_string()).second) {
      out.push_back("codeword " + std::to_string(i) + " is a duplicate");
    }
  }
  return out;
}

std::string export_code(const Code& code, const AbelianGroup& g, const Element& a) {
  std::string out = "# n=" + std::to_string(code.length) + " h=" + std::to_string(code.weight) +
                    " a=" + g.format_element(a) + " count=" + std::to_string(code.codewords.size()) +
                    "\n";
  for (const auto& w : code.codewords) {
    out += w.to_string();
    out += '\n';
  }
  return out;
}

}  // namespace ssc
