#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>

#include "json.hpp"

namespace spectra {

/// Kleene three-valued truth.
enum class TriState { False, True, Unknown };

constexpr TriState tri(bool b) { return b ? TriState::True : TriState::False; }

constexpr bool is_decisive(TriState t) { return t != TriState::Unknown; }

constexpr TriState kleene_not(TriState a) {
  switch (a) {
    case TriState::True: return TriState::False;
    case TriState::False: return TriState::True;
    default: return TriState::Unknown;
  }
}

constexpr TriState kleene_and(TriState a, TriState b) {
  if (a == TriState::False || b == TriState::False) return TriState::False;
  if (a == TriState::True && b == TriState::True) return TriState::True;
  return TriState::Unknown;
}

constexpr TriState kleene_or(TriState a, TriState b) {
  if (a == TriState::True || b == TriState::True) return TriState::True;
  if (a == TriState::False && b == TriState::False) return TriState::False;
  return TriState::Unknown;
}

inline TriState kleene_all(std::initializer_list<TriState> xs) {
  TriState acc = TriState::True;
  for (TriState x : xs) acc = kleene_and(acc, x);
  return acc;
}

inline TriState kleene_any(std::initializer_list<TriState> xs) {
  TriState acc = TriState::False;
  for (TriState x : xs) acc = kleene_or(acc, x);
  return acc;
}

std::string to_string(TriState t);
TriState parse_tristate(const std::string& text);  // throws InvalidArgument
std::ostream& operator<<(std::ostream& os, TriState t);

// true / false / "unknown"
void to_json(nlohmann::json& j, TriState t);
void from_json(const nlohmann::json& j, TriState& t);

}  // namespace spectra
