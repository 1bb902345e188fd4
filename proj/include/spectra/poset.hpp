#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "spectra/numeric.hpp"
#include "spectra/tristate.hpp"

namespace spectra {

/// One prime ideal of a finite spectrum model, with the arithmetic labels the
/// dimension formulas and property checkers consume.
struct PrimeNode {
  std::string id;
  /// Transcendence degree of the residue domain A/p over k.
  std::optional<ExtNat> residue_td;
  /// s -> ht(p[X_1..X_s]) for s >= 1.
  std::map<unsigned, ExtNat> poly_heights;
  TriState residue_is_s_domain = TriState::Unknown;
  TriState residue_is_catenarian = TriState::Unknown;

  friend bool operator==(const PrimeNode&, const PrimeNode&) = default;
};

using Cover = std::pair<std::string, std::string>;

enum class PosetProperty { P1, P2, Q1, Q2, MPC, Catenarian, SRing };

std::string to_string(PosetProperty p);
PosetProperty parse_poset_property(std::string_view name);

struct PosetLimits {
  std::size_t max_nodes = 64;
};

/// Finite poset standing in for Spec(A). Immutable once constructed; the
/// constructor rejects cyclic or non-reduced cover relations and labels that
/// violate the height/transcendence bounds.
class SpectralPoset {
 public:
  SpectralPoset(std::vector<PrimeNode> nodes, std::vector<Cover> covers,
                std::optional<ExtNat> algebra_td = std::nullopt,
                bool complete = false, PosetLimits limits = {});

  std::size_t size() const { return nodes_.size(); }
  const std::vector<PrimeNode>& nodes() const { return nodes_; }
  const std::vector<Cover>& covers() const { return covers_; }
  const PrimeNode& node(std::string_view id) const;
  bool contains(std::string_view id) const;
  std::optional<ExtNat> algebra_td() const { return algebra_td_; }
  /// Attests that every prime of the modeled ring is present.
  bool complete() const { return complete_; }

  /// a <= b in the order (reflexive).
  bool leq(std::string_view a, std::string_view b) const;
  std::vector<std::string> minimal_nodes() const;
  std::vector<std::string> maximal_nodes() const;

  ExtNat height(std::string_view id) const;
  ExtNat krull_dim() const;
  bool is_mpc() const;

  /// Lengths of saturated chains (every step a cover) from lo up to hi.
  std::set<std::size_t> saturated_chain_lengths(std::string_view lo,
                                                std::string_view hi) const;

  TriState check_property(PosetProperty prop) const;

  /// Smallest residue_td over the minimal nodes; nullopt if any is missing.
  std::optional<ExtNat> min_residue_td() const;

  std::string to_dot() const;

 private:
  std::size_t index(std::string_view id) const;
  bool reaches(std::size_t a, std::size_t b) const { return reach_[a][b]; }
  // Longest cover-path length from root to every node above it (-1 if not above).
  std::vector<long> relative_heights(std::size_t root) const;

  TriState check_p1() const;
  TriState check_p2() const;
  TriState check_q1() const;
  TriState check_q2() const;

  std::vector<PrimeNode> nodes_;
  std::vector<Cover> covers_;
  std::optional<ExtNat> algebra_td_;
  bool complete_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<std::vector<std::size_t>> up_;
  std::vector<std::vector<std::size_t>> down_;
  std::vector<std::vector<bool>> reach_;
  std::vector<std::size_t> heights_;
};

void to_json(nlohmann::json& j, const PrimeNode& n);
void to_json(nlohmann::json& j, const SpectralPoset& p);
SpectralPoset poset_from_json(const nlohmann::json& j, PosetLimits limits = {});
SpectralPoset load_poset(const std::filesystem::path& path, PosetLimits limits = {});

}  // namespace spectra
