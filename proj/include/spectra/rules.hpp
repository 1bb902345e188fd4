#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "spectra/algebra.hpp"

namespace spectra {

/// Catalog entry, exported for documentation.
struct RuleInfo {
  std::string id;
  std::string citation;
  std::string guard;
};

const std::vector<RuleInfo>& rule_catalog();
nlohmann::json rule_catalog_json();

/// A rule whose structure matched but which could not fire because some
/// hypothesis is Unknown.
struct BlockedRule {
  std::string rule_id;
  std::string subject;
  std::string conclusion;
  std::vector<std::string> missing;

  friend auto operator<=>(const BlockedRule&, const BlockedRule&) = default;
};

struct InferenceSummary {
  std::size_t passes = 0;
  std::size_t facts_added = 0;
  std::vector<BlockedRule> blocked;
};

/// Runs every rule to the least fixpoint. Throws ContradictionError when two
/// derivations disagree.
InferenceSummary infer(KnowledgeBase& kb);

enum class SRingMode {
  SRing,  // requires tensor MPC = True, decides S_RING
  P2,     // no MPC hypothesis, decides (P2) for the tensor
};

/// Kleene evaluation of the four-way disjunction characterizing when a
/// tensor product is an S-ring. `a_s`/`b_s` are the factors' S-ring (or P2)
/// values, `a_td`/`b_td` whether every minimal prime has residue t.d. >= 1.
TriState s_ring_disjunction(TriState a_s, TriState b_s, TriState a_td, TriState b_td);

/// Decides S_RING (or P2) of a tensor node from the facts in `kb`.
/// Throws NotATensor.
TriState eval_tensor_s_ring(const KnowledgeBase& kb, NodeId tensor,
                            SRingMode mode = SRingMode::SRing);

/// min_residue_td >= 1 as a tri-state.
TriState residue_td_at_least_one(const KnowledgeBase& kb, NodeId node);

struct Derivation {
  std::string subject;
  std::string target;
  std::string value;
  std::string rule_id;
  std::string citation;
  std::vector<Derivation> premises;
};

/// Provenance tree of a decided fact down to axioms. Throws NoDerivation
/// when the fact is Unknown.
Derivation explain(const KnowledgeBase& kb, NodeId subject, PropertyKind property);
Derivation explain(const KnowledgeBase& kb, NodeId subject, Quantity quantity);
Derivation explain_fact(const KnowledgeBase& kb, FactId id);

void to_json(nlohmann::json& j, const Derivation& d);
/// Indented text rendering, one line per node.
std::string render(const Derivation& d);

/// Every True/False fact's provenance walk ends at axioms.
bool provenance_grounded(const KnowledgeBase& kb);

}  // namespace spectra
