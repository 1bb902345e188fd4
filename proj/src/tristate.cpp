#include "spectra/tristate.hpp"

#include <ostream>

#include "spectra/error.hpp"

namespace spectra {

std::string to_string(TriState t) {
  switch (t) {
    case TriState::True: return "true";
    case TriState::False: return "false";
    default: return "unknown";
  }
}

TriState parse_tristate(const std::string& text) {
  if (text == "true") return TriState::True;
  if (text == "false") return TriState::False;
  if (text == "unknown") return TriState::Unknown;
  throw InvalidArgument("expected true, false or unknown, got '" + text + "'");
}

std::ostream& operator<<(std::ostream& os, TriState t) { return os << to_string(t); }

void to_json(nlohmann::json& j, TriState t) {
  if (t == TriState::Unknown) {
    j = "unknown";
  } else {
    j = (t == TriState::True);
  }
}

void from_json(const nlohmann::json& j, TriState& t) {
  if (j.is_boolean()) {
    t = tri(j.get<bool>());
  } else if (j.is_string()) {
    t = parse_tristate(j.get<std::string>());
  } else if (j.is_null()) {
    t = TriState::Unknown;
  } else {
    throw InvalidArgument("expected a tri-state, got " + j.dump());
  }
}

}  // namespace spectra
