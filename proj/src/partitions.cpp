#include "ssc/partitions.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <numeric>
#include <string>

namespace ssc {

const mpz_class& factorial(unsigned n) {
  // deque keeps references stable while the table grows
  static std::deque<mpz_class> table{mpz_class(1)};
  static std::mutex mu;
  std::lock_guard lock(mu);
  while (table.size() <= n) table.push_back(table.back() * static_cast<unsigned long>(table.size()));
  return table[n];
}

PartitionType::PartitionType(std::vector<unsigned> parts) {
  std::sort(parts.begin(), parts.end(), std::greater<>());
  for (auto p : parts) {
    if (p == 0) throw std::invalid_argument("partition parts must be positive");
    if (!mult_.empty() && mult_.back().part == p) {
      ++mult_.back().count;
    } else {
      mult_.push_back({p, 1});
      gcd_ = std::gcd(gcd_, p);
    }
    h_ += p;
    ++r_;
  }
}

std::vector<unsigned> PartitionType::parts() const {
  std::vector<unsigned> out;
  out.reserve(r_);
  for (const auto& [part, count] : mult_) out.insert(out.end(), count, part);
  return out;
}

std::vector<PartitionType> partition_types(unsigned h) {
  std::vector<PartitionType> out;
  if (h == 0) {
    out.emplace_back();
    return out;
  }
  // Standard reverse-lexicographic successor on the part list.
  std::vector<unsigned> a{h};
  while (true) {
    out.emplace_back(a);
    // drop trailing ones
    unsigned ones = 0;
    while (!a.empty() && a.back() == 1) {
      a.pop_back();
      ++ones;
    }
    if (a.empty()) break;
    const unsigned k = --a.back();
    unsigned rest = ones + 1;
    while (rest > k) {
      a.push_back(k);
      rest -= k;
    }
    if (rest) a.push_back(rest);
  }
  return out;
}

mpz_class coefficient(const PartitionType& t) {
  mpz_class c = 1;
  for (const auto& [part, count] : t.multiplicities()) {
    mpz_class f;
    mpz_pow_ui(f.get_mpz_t(), factorial(part - 1).get_mpz_t(), count);
    c *= f;
  }
  if ((t.h() - t.classes()) % 2) c = -c;
  return c;
}

mpz_class type_multiplicity(const PartitionType& t) {
  mpz_class denom = 1;
  for (const auto& [part, count] : t.multiplicities()) {
    mpz_class f;
    mpz_pow_ui(f.get_mpz_t(), factorial(part).get_mpz_t(), count);
    denom *= f * factorial(count);
  }
  mpz_class out;
  mpz_divexact(out.get_mpz_t(), factorial(t.h()).get_mpz_t(), denom.get_mpz_t());
  return out;
}

unsigned SetPartition::size() const {
  unsigned n = 0;
  for (const auto& b : blocks) n += static_cast<unsigned>(b.size());
  return n;
}

std::vector<SetPartition> set_partitions(unsigned h, unsigned cap) {
  cap = std::min(cap, kMaxSetPartitionCap);
  if (h > cap) {
    throw CapExceeded("set_partitions: h=" + std::to_string(h) + " above cap " +
                      std::to_string(cap));
  }
  std::vector<SetPartition> out;
  if (h == 0) {
    out.emplace_back();
    return out;
  }
  // growth[i] = block index of element i; growth[i] <= 1 + max(growth[0..i-1])
  std::vector<unsigned> growth(h, 0);
  std::vector<unsigned> prefix_max(h, 0);
  while (true) {
    SetPartition p;
    p.blocks.resize(prefix_max[h - 1] + 1);
    for (unsigned i = 0; i < h; ++i) p.blocks[growth[i]].push_back(i);
    out.push_back(std::move(p));

    int i = static_cast<int>(h) - 1;
    while (i > 0 && growth[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++growth[i];
    prefix_max[i] = std::max(prefix_max[i - 1], growth[i]);
    for (unsigned j = i + 1; j < h; ++j) {
      growth[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return out;
}

PartitionType type_of(const SetPartition& p) {
  std::vector<unsigned> sizes;
  sizes.reserve(p.blocks.size());
  for (const auto& b : p.blocks) sizes.push_back(static_cast<unsigned>(b.size()));
  return PartitionType(std::move(sizes));
}

std::int64_t coefficient(const SetPartition& p) {
  std::int64_t c = 1;
  for (const auto& b : p.blocks) {
    const auto k = static_cast<std::int64_t>(b.size());
    for (std::int64_t j = 2; j < k; ++j) c *= j;
    if ((k - 1) % 2) c = -c;
  }
  return c;
}

DistinctnessIdentity::DistinctnessIdentity(unsigned h, unsigned cap)
    : h_(h), partitions_(set_partitions(h, cap)) {
  coefficients_.reserve(partitions_.size());
  for (const auto& p : partitions_) coefficients_.push_back(coefficient(p));
}

}  // namespace ssc
