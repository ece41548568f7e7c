#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssc/counting.hpp"
#include "ssc/group.hpp"

namespace ssc {

/// Fixed-length bit vector; bit i is the element of rank i.
class Codeword {
 public:
  explicit Codeword(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

  std::size_t length() const { return length_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  std::size_t weight() const;
  std::string to_string() const;

  friend std::size_t distance(const Codeword& a, const Codeword& b);
  friend bool operator==(const Codeword&, const Codeword&) = default;
  friend auto operator<=>(const Codeword&, const Codeword&) = default;

 private:
  std::size_t length_;
  std::vector<std::uint64_t> words_;
};

struct Code {
  std::size_t length = 0;
  std::size_t weight = 0;
  std::vector<Codeword> codewords;
};

/// Characteristic vectors of every h-subset of G summing to a.
Code build_code(const AbelianGroup& g, unsigned h, const Element& a,
                std::uint64_t cap = kDefaultBruteCap);

/// Same, from a caller-supplied list of subsets given as element ranks.
Code build_code_from_subsets(const AbelianGroup& g, unsigned h,
                             std::span<const std::vector<std::uint64_t>> subsets);

/// Minimum Hamming distance over all pairs; nullopt when there are fewer
/// than two codewords.
std::optional<std::size_t> min_pairwise_distance(const Code& code);

/// Violations of the constant-weight / distinct-codeword invariants.
std::vector<std::string> code_violations(const Code& code);

/// Export text: header line then one 0/1 string per codeword.
std::string export_code(const Code& code, const AbelianGroup& g, const Element& a);

}  // namespace ssc
