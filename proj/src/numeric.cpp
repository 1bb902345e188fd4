#include "spectra/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <ostream>

#include "spectra/error.hpp"

namespace spectra {

std::uint64_t ExtNat::value() const {
  if (infinite_) throw InvalidArgument("ExtNat::value() called on inf");
  return value_;
}

std::string ExtNat::to_string() const {
  return infinite_ ? std::string("inf") : std::to_string(value_);
}

ExtNat ext_add(ExtNat a, ExtNat b) {
  if (a.is_inf() || b.is_inf()) return ExtNat::inf();
  const auto x = a.value();
  const auto y = b.value();
  if (x > std::numeric_limits<std::uint64_t>::max() - y) {
    throw InvalidArgument("ExtNat addition overflow");
  }
  return ExtNat(x + y);
}

ExtNat ext_min(ExtNat a, ExtNat b) { return b < a ? b : a; }

ExtNat ext_max(ExtNat a, ExtNat b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const ExtNat& e) {
  return os << e.to_string();
}

NatInterval::NatInterval(ExtNat lo, ExtNat hi) : lo_(lo), hi_(hi) {
  if (hi < lo) {
    throw InvalidArgument("interval [" + lo.to_string() + ", " +
                          hi.to_string() + "] has lo > hi");
  }
}

std::string NatInterval::to_string() const {
  return "[" + lo_.to_string() + ", " + hi_.to_string() + "]";
}

NatInterval interval_intersect(const NatInterval& a, const NatInterval& b) {
  const ExtNat lo = ext_max(a.lo(), b.lo());
  const ExtNat hi = ext_min(a.hi(), b.hi());
  if (hi < lo) {
    throw EmptyIntersection(a.to_string() + " and " + b.to_string() +
                            " are disjoint");
  }
  return {lo, hi};
}

NatInterval interval_add(const NatInterval& a, const NatInterval& b) {
  return {a.lo() + b.lo(), a.hi() + b.hi()};
}

std::ostream& operator<<(std::ostream& os, const NatInterval& i) {
  return os << i.to_string();
}

void to_json(nlohmann::json& j, const ExtNat& e) {
  if (e.is_inf()) {
    j = "inf";
  } else {
    j = e.value();
  }
}

void from_json(const nlohmann::json& j, ExtNat& e) {
  if (j.is_string() && j.get<std::string>() == "inf") {
    e = ExtNat::inf();
  } else if (j.is_number_unsigned()) {
    e = ExtNat(j.get<std::uint64_t>());
  } else if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    e = ExtNat(static_cast<std::uint64_t>(j.get<std::int64_t>()));
  } else {
    throw InvalidArgument("expected a natural number or \"inf\", got " + j.dump());
  }
}

void to_json(nlohmann::json& j, const NatInterval& i) {
  j = nlohmann::json::array({i.lo(), i.hi()});
}

void from_json(const nlohmann::json& j, NatInterval& i) {
  if (j.is_array() && j.size() == 2) {
    i = NatInterval(j[0].get<ExtNat>(), j[1].get<ExtNat>());
  } else {
    // A bare value is an exactly known quantity.
    i = NatInterval::exactly(j.get<ExtNat>());
  }
}

std::optional<ExtNat> parse_ext_nat(const std::string& text) {
  if (text == "inf") return ExtNat::inf();
  if (text.empty()) return std::nullopt;
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return ExtNat(v);
}

}  // namespace spectra
