#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

namespace spectra {

/// A nonnegative integer or the distinguished value INF, which sits above
/// every finite value.
class ExtNat {
 public:
  constexpr ExtNat() = default;
  constexpr ExtNat(std::uint64_t n) : value_(n) {}  // NOLINT: implicit from literals

  static constexpr ExtNat inf() {
    ExtNat e;
    e.infinite_ = true;
    e.value_ = 0;
    return e;
  }

  constexpr bool is_inf() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  /// The finite value; throws InvalidArgument on INF.
  std::uint64_t value() const;

  friend constexpr bool operator==(const ExtNat& a, const ExtNat& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(const ExtNat& a,
                                                    const ExtNat& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const;

 private:
  bool infinite_ = false;
  std::uint64_t value_ = 0;
};

ExtNat ext_add(ExtNat a, ExtNat b);
ExtNat ext_min(ExtNat a, ExtNat b);
ExtNat ext_max(ExtNat a, ExtNat b);

inline ExtNat operator+(ExtNat a, ExtNat b) { return ext_add(a, b); }

std::ostream& operator<<(std::ostream& os, const ExtNat& e);

/// Closed interval [lo, hi] of ExtNat with lo <= hi. Unknown quantities
/// are [0, INF]; a singleton is an exactly known quantity.
class NatInterval {
 public:
  NatInterval() : lo_(0), hi_(ExtNat::inf()) {}
  NatInterval(ExtNat lo, ExtNat hi);

  static NatInterval unknown() { return {}; }
  static NatInterval exactly(ExtNat v) { return {v, v}; }
  static NatInterval at_least(ExtNat v) { return {v, ExtNat::inf()}; }
  static NatInterval at_most(ExtNat v) { return {0, v}; }

  ExtNat lo() const { return lo_; }
  ExtNat hi() const { return hi_; }
  bool is_exact() const { return lo_ == hi_; }
  bool is_unknown() const { return lo_ == ExtNat(0) && hi_.is_inf(); }
  bool contains(ExtNat v) const { return lo_ <= v && v <= hi_; }
  bool contains(const NatInterval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  std::optional<ExtNat> exact() const {
    if (is_exact()) return lo_;
    return std::nullopt;
  }

  friend bool operator==(const NatInterval&, const NatInterval&) = default;

  std::string to_string() const;

 private:
  ExtNat lo_;
  ExtNat hi_;
};

/// [max(lo), min(hi)]; throws EmptyIntersection when the result is empty.
NatInterval interval_intersect(const NatInterval& a, const NatInterval& b);

/// Elementwise sum, used for transcendence degrees of composite objects.
NatInterval interval_add(const NatInterval& a, const NatInterval& b);

std::ostream& operator<<(std::ostream& os, const NatInterval& i);

// JSON: integers or "inf"; intervals as two-element arrays.
void to_json(nlohmann::json& j, const ExtNat& e);
void from_json(const nlohmann::json& j, ExtNat& e);
void to_json(nlohmann::json& j, const NatInterval& i);
void from_json(const nlohmann::json& j, NatInterval& i);

/// Parses "inf" or a decimal natural.
std::optional<ExtNat> parse_ext_nat(const std::string& text);

}  // namespace spectra
