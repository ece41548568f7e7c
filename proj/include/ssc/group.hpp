#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace ssc {

using Residue = std::uint64_t;

/// Orders at or above this limit are handled with arbitrary-precision
/// arithmetic only; dense per-element work needs a machine order.
inline constexpr std::uint64_t kDefaultMachineOrderLimit = std::uint64_t{1} << 31;

struct Element {
  std::vector<Residue> residues;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

/// Description of kG = {k*g : g in G}.
struct SubgroupImage {
  std::vector<Residue> generators;  // gcd(k, n_i) per component
  std::uint64_t subgroup_order = 0;
  std::uint64_t multiplicity = 0;  // preimages of each image element
};

/// Finite abelian group Z_{n_1} x ... x Z_{n_t}, kept exactly as given
/// (no invariant-factor normalisation). Elements are ranked in mixed radix
/// with residues[0] as the most significant digit.
class AbelianGroup {
 public:
  explicit AbelianGroup(std::vector<std::uint64_t> component_orders,
                        std::uint64_t machine_limit = kDefaultMachineOrderLimit);

  const std::vector<std::uint64_t>& component_orders() const { return orders_; }
  std::size_t components() const { return orders_.size(); }
  const mpz_class& order() const { return order_; }
  std::optional<std::uint64_t> machine_order() const { return machine_order_; }

  /// Order as a machine integer; throws RangeError when above the limit.
  std::uint64_t size() const;

  bool contains(const Element& x) const;
  Element zero() const;

  Element add(const Element& x, const Element& y) const;
  Element neg(const Element& x) const;
  Element scalar_mul(std::uint64_t k, const Element& x) const;

  std::uint64_t rank(const Element& x) const;
  Element unrank(std::uint64_t i) const;
  mpz_class rank_big(const Element& x) const;
  Element unrank_big(const mpz_class& i) const;

  // Rank-level arithmetic for dense loops.
  std::uint64_t add_ranks(std::uint64_t i, std::uint64_t j) const;
  std::uint64_t scalar_mul_rank(std::uint64_t k, std::uint64_t i) const;

  SubgroupImage image_subgroup(std::uint64_t k) const;

  /// Canonical spec text, e.g. "4x2".
  std::string to_string() const;

  Element parse_element(std::string_view literal) const;
  std::string format_element(const Element& x) const;

  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
    return a.orders_ == b.orders_;
  }

 private:
  void check(const Element& x) const;

  std::vector<std::uint64_t> orders_;
  mpz_class order_;
  std::optional<std::uint64_t> machine_order_;
};

/// spec := factor ('x' factor)*,  factor := INT | INT '^' INT
AbelianGroup parse_group(std::string_view spec);

}  // namespace ssc
