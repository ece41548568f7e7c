#include "ssc/group.hpp"

#include <charconv>
#include <numeric>

#include "ssc/errors.hpp"

namespace ssc {

namespace {

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  if (text.empty()) throw ParseError("empty " + std::string(what));
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

AbelianGroup::AbelianGroup(std::vector<std::uint64_t> component_orders,
                           std::uint64_t machine_limit)
    : orders_(std::move(component_orders)), order_(1) {
  if (orders_.empty()) throw ParseError("group needs at least one cyclic factor");
  for (auto n : orders_) {
    if (n < 2) throw ParseError("cyclic factor order must be >= 2, got " + std::to_string(n));
    mpz_class f;
    mpz_set_ui(f.get_mpz_t(), n);
    order_ *= f;
  }
  mpz_class limit;
  mpz_set_ui(limit.get_mpz_t(), machine_limit);
  if (order_ < limit) machine_order_ = mpz_get_ui(order_.get_mpz_t());
}

std::uint64_t AbelianGroup::size() const {
  if (!machine_order_) {
    throw RangeError("group order " + order_.get_str() + " exceeds the machine-integer limit");
  }
  return *machine_order_;
}

bool AbelianGroup::contains(const Element& x) const {
  if (x.residues.size() != orders_.size()) return false;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (x.residues[i] >= orders_[i]) return false;
  }
  return true;
}

void AbelianGroup::check(const Element& x) const {
  if (x.residues.size() != orders_.size()) {
    throw std::invalid_argument("element has " + std::to_string(x.residues.size()) +
                                " residues, group has " + std::to_string(orders_.size()) +
                                " components");
  }
  if (!contains(x)) throw RangeError("residue out of range for group " + to_string());
}

Element AbelianGroup::zero() const { return Element{std::vector<Residue>(orders_.size(), 0)}; }

Element AbelianGroup::add(const Element& x, const Element& y) const {
  check(x);
  check(y);
  Element out{std::vector<Residue>(orders_.size())};
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    // both residues < n_i, so n_i - y avoids overflow for large n_i
    const auto n = orders_[i];
    out.residues[i] = x.residues[i] >= n - y.residues[i] ? x.residues[i] - (n - y.residues[i])
                                                          : x.residues[i] + y.residues[i];
  }
  return out;
}

Element AbelianGroup::neg(const Element& x) const {
  check(x);
  Element out{std::vector<Residue>(orders_.size())};
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    out.residues[i] = x.residues[i] == 0 ? 0 : orders_[i] - x.residues[i];
  }
  return out;
}

Element AbelianGroup::scalar_mul(std::uint64_t k, const Element& x) const {
  check(x);
  Element out{std::vector<Residue>(orders_.size())};
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const auto n = orders_[i];
    out.residues[i] = static_cast<Residue>(
        (static_cast<unsigned __int128>(k % n) * x.residues[i]) % n);
  }
  return out;
}

std::uint64_t AbelianGroup::rank(const Element& x) const {
  check(x);
  size();
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) r = r * orders_[i] + x.residues[i];
  return r;
}

Element AbelianGroup::unrank(std::uint64_t i) const {
  if (i >= size()) {
    throw RangeError("rank " + std::to_string(i) + " out of range for order " + order_.get_str());
  }
  Element out{std::vector<Residue>(orders_.size())};
  for (std::size_t c = orders_.size(); c-- > 0;) {
    out.residues[c] = i % orders_[c];
    i /= orders_[c];
  }
  return out;
}

mpz_class AbelianGroup::rank_big(const Element& x) const {
  check(x);
  mpz_class r = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    mpz_mul_ui(r.get_mpz_t(), r.get_mpz_t(), orders_[i]);
    mpz_add_ui(r.get_mpz_t(), r.get_mpz_t(), x.residues[i]);
  }
  return r;
}

Element AbelianGroup::unrank_big(const mpz_class& i) const {
  if (i < 0 || i >= order_) {
    throw RangeError("rank " + i.get_str() + " out of range for order " + order_.get_str());
  }
  Element out{std::vector<Residue>(orders_.size())};
  mpz_class rest = i;
  for (std::size_t c = orders_.size(); c-- > 0;) {
    out.residues[c] = mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), orders_[c]);
  }
  return out;
}

std::uint64_t AbelianGroup::add_ranks(std::uint64_t i, std::uint64_t j) const {
  if (orders_.size() == 1) {
    const auto n = orders_[0];
    return i >= n - j ? i - (n - j) : i + j;
  }
  std::uint64_t r = 0;
  std::uint64_t place = 1;
  for (std::size_t c = orders_.size(); c-- > 0;) {
    const auto n = orders_[c];
    auto d = i % n + j % n;
    if (d >= n) d -= n;
    r += d * place;
    place *= n;
    i /= n;
    j /= n;
  }
  return r;
}

std::uint64_t AbelianGroup::scalar_mul_rank(std::uint64_t k, std::uint64_t i) const {
  std::uint64_t r = 0;
  std::uint64_t place = 1;
  for (std::size_t c = orders_.size(); c-- > 0;) {
    const auto n = orders_[c];
    const auto d = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(k % n) * (i % n)) % n);
    r += d * place;
    place *= n;
    i /= n;
  }
  return r;
}

SubgroupImage AbelianGroup::image_subgroup(std::uint64_t k) const {
  if (k == 0) throw RangeError("image_subgroup needs k >= 1");
  const auto n = size();
  SubgroupImage img;
  img.generators.reserve(orders_.size());
  img.subgroup_order = 1;
  for (auto ni : orders_) {
    const auto g = std::gcd(k % ni, ni);
    img.generators.push_back(g);
    img.subgroup_order *= ni / g;
  }
  img.multiplicity = n / img.subgroup_order;
  return img;
}

std::string AbelianGroup::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(orders_[i]);
  }
  return out;
}

Element AbelianGroup::parse_element(std::string_view literal) const {
  Element x;
  std::size_t start = 0;
  while (true) {
    const auto comma = literal.find(',', start);
    const auto piece = literal.substr(start, comma == std::string_view::npos ? literal.npos
                                                                             : comma - start);
    x.residues.push_back(parse_uint(piece, "element residue"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (x.residues.size() != orders_.size()) {
    throw ParseError("element literal '" + std::string(literal) + "' has " +
                     std::to_string(x.residues.size()) + " residues, group " + to_string() +
                     " has " + std::to_string(orders_.size()));
  }
  if (!contains(x)) {
    throw ParseError("element literal '" + std::string(literal) + "' out of range for group " +
                     to_string());
  }
  return x;
}

std::string AbelianGroup::format_element(const Element& x) const {
  check(x);
  std::string out;
  for (std::size_t i = 0; i < x.residues.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(x.residues[i]);
  }
  return out;
}

AbelianGroup parse_group(std::string_view spec) {
  if (spec.empty()) throw ParseError("empty group spec");
  std::vector<std::uint64_t> orders;
  std::size_t start = 0;
  while (true) {
    const auto sep = spec.find('x', start);
    const auto factor =
        spec.substr(start, sep == std::string_view::npos ? spec.npos : sep - start);
    const auto caret = factor.find('^');
    if (caret == std::string_view::npos) {
      orders.push_back(parse_uint(factor, "cyclic order"));
    } else {
      const auto base = parse_uint(factor.substr(0, caret), "cyclic order");
      const auto copies = parse_uint(factor.substr(caret + 1), "exponent");
      if (copies == 0) throw ParseError("exponent must be >= 1 in '" + std::string(factor) + "'");
      if (copies > 4096) throw ParseError("exponent too large in '" + std::string(factor) + "'");
      orders.insert(orders.end(), copies, base);
    }
    if (sep == std::string_view::npos) break;
    start = sep + 1;
  }
  return AbelianGroup(std::move(orders));
}

}  // namespace ssc
