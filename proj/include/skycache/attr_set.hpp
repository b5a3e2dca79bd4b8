#ifndef SKYCACHE_ATTR_SET_HPP
#define SKYCACHE_ATTR_SET_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace skycache {

/// Index of a relation column. A preference direction is attached to each
/// attribute for the whole session, so an (attribute, direction) pair is
/// one attribute id.
using AttributeId = std::uint32_t;

/**
 * A set of attribute ids, packed into a 64-bit mask.
 *
 * Attribute ids must be < 64, which covers every workload this library
 * targets. Subset and intersection tests are single instructions, which
 * matters because query classification does them constantly.
 */
class AttrSet {
 public:
  static constexpr AttributeId kMaxAttrs = 64;

  constexpr AttrSet() = default;

  constexpr AttrSet(std::initializer_list<AttributeId> ids) {
    for (AttributeId a : ids) insert(a);
  }

  explicit AttrSet(const std::vector<AttributeId>& ids) {
    for (AttributeId a : ids) insert(a);
  }

  static constexpr AttrSet from_bits(std::uint64_t bits) {
    AttrSet s;
    s.bits_ = bits;
    return s;
  }

  constexpr void insert(AttributeId a) { bits_ |= mask(a); }
  constexpr void erase(AttributeId a) { bits_ &= ~mask(a); }

  [[nodiscard]] constexpr bool contains(AttributeId a) const {
    return a < kMaxAttrs && (bits_ & mask(a)) != 0;
  }

  [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
  [[nodiscard]] constexpr std::size_t size() const {
    return static_cast<std::size_t>(std::popcount(bits_));
  }

  [[nodiscard]] constexpr std::uint64_t bits() const { return bits_; }

  /// Largest id in the set plus one; 0 for the empty set.
  [[nodiscard]] constexpr std::size_t max_id_bound() const {
    return static_cast<std::size_t>(std::bit_width(bits_));
  }

  [[nodiscard]] constexpr bool subset_of(AttrSet other) const {
    return (bits_ & other.bits_) == bits_;
  }
  [[nodiscard]] constexpr bool strict_subset_of(AttrSet other) const {
    return bits_ != other.bits_ && subset_of(other);
  }
  [[nodiscard]] constexpr bool intersects(AttrSet other) const {
    return (bits_ & other.bits_) != 0;
  }

  friend constexpr AttrSet operator&(AttrSet a, AttrSet b) {
    return from_bits(a.bits_ & b.bits_);
  }
  friend constexpr AttrSet operator|(AttrSet a, AttrSet b) {
    return from_bits(a.bits_ | b.bits_);
  }
  friend constexpr bool operator==(AttrSet a, AttrSet b) {
    return a.bits_ == b.bits_;
  }
  friend constexpr bool operator!=(AttrSet a, AttrSet b) {
    return a.bits_ != b.bits_;
  }
  /// Orders by mask value; used only to keep containers deterministic.
  friend constexpr bool operator<(AttrSet a, AttrSet b) {
    return a.bits_ < b.bits_;
  }

  [[nodiscard]] std::vector<AttributeId> to_vector() const {
    std::vector<AttributeId> out;
    out.reserve(size());
    std::uint64_t rest = bits_;
    while (rest != 0) {
      out.push_back(static_cast<AttributeId>(std::countr_zero(rest)));
      rest &= rest - 1;
    }
    return out;
  }

  /// Renders as "{1,2,3}" with ascending ids.
  [[nodiscard]] std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (AttributeId a : to_vector()) {
      if (!first) out += ',';
      out += std::to_string(a);
      first = false;
    }
    out += '}';
    return out;
  }

 private:
  static constexpr std::uint64_t mask(AttributeId a) {
    return std::uint64_t{1} << a;
  }

  std::uint64_t bits_ = 0;
};

}  // namespace skycache

#endif  // SKYCACHE_ATTR_SET_HPP
