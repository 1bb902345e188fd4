#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "spectra/algebra.hpp"

namespace spectra {

/// Expression plus extra facts asserted on its nodes with `assume(...)`.
struct ParsedInput {
  AlgebraExpr expr;
  struct Assumption {
    std::string subject;  // node label such as "n0"
    std::vector<AlgebraExpr::AtomFlag> flags;
    std::vector<AlgebraExpr::AtomQuantity> quantities;
  };
  std::vector<Assumption> assumptions;
};

using PosetLoader = std::function<std::shared_ptr<const SpectralPoset>(const std::string& ref)>;

struct ParseOptions {
  /// Resolves `poset="..."` references. Defaults to reading JSON files
  /// relative to `base_dir`.
  PosetLoader poset_loader;
  std::filesystem::path base_dir = ".";
  PosetLimits limits;
};

/// Grammar:
///   input  := expr { "assume" "(" label { "," setting } ")" }
///   expr   := "atom" "(" name { "," setting } ")"
///           | "field" "(" "td" "=" extnat [ "," "kind" "=" kind ] [ "," "finite_sep" "=" tri ] ")"
///           | "poly" "(" expr "," int ")" | "loc" "(" expr ")" | "tensor" "(" expr "," expr ")"
///   setting := property "=" tri | ("td" | "dim" | "min_rtd") "=" interval | "poset" "=" string
/// `#` starts a comment running to the end of the line.
/// Throws ParseError.
ParsedInput parse_input(std::string_view text, const ParseOptions& options = {});
AlgebraExpr parse_expr(std::string_view text, const ParseOptions& options = {});

/// Canonical text; parse_expr(print_expr(e)) == e.
std::string print_expr(const AlgebraExpr& e);
std::string print_input(const ParsedInput& input);

/// Converts assumptions into KB axioms against `kb`'s node labels.
std::vector<Axiom> assumptions_to_axioms(const ParsedInput& input);

}  // namespace spectra
