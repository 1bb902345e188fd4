#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "spectra/error.hpp"
#include "spectra/numeric.hpp"
#include "spectra/poset.hpp"
#include "spectra/tristate.hpp"

namespace spectra {

enum class FieldKind {
  PurelyTranscendental,
  SeparableAlgebraicFinite,
  Algebraic,
  PurelyInseparable,
  General,
};

std::string to_string(FieldKind k);
FieldKind parse_field_kind(std::string_view name);

enum class PropertyKind {
  Domain,
  Field,
  IntegrallyClosed,
  Noetherian,
  Prufer,
  MPC,
  SRing,
  StrongS,
  StablyStrongS,
  Catenarian,
  UnivCatenarian,
  LFD,
  AFDomain,
  PolyRingCatenarian,  // A[X] is catenarian
  P2,                  // ht(P) = 1 implies ht(P[X]) = 1
  // Hypothesis flags that are asserted, never computed.
  SepClosureContained,    // A contains a separable algebraic closure of k
  QfSepClosureContained,  // the separable closure of k in qf(A) lies in A
  IntegralClosurePrufer,  // the integral closure of A is Prufer
};

inline constexpr std::size_t kPropertyCount = 18;

std::span<const PropertyKind> all_properties();
/// Upper-case report name, e.g. "UNIV_CATENARIAN".
std::string to_string(PropertyKind p);
/// DSL flag name, e.g. "univ_catenarian".
std::string flag_name(PropertyKind p);
/// Accepts either spelling, case-insensitively.
std::optional<PropertyKind> parse_property(std::string_view name);

enum class Quantity { Dim, Td, MinResidueTd };

std::span<const Quantity> all_quantities();
std::string to_string(Quantity q);  // "dim", "td", "min_rtd"
std::optional<Quantity> parse_quantity(std::string_view name);

struct ExprNode;

/// Immutable expression tree of algebra constructions. Copies share nodes.
class AlgebraExpr {
 public:
  struct AtomFlag {
    PropertyKind property;
    TriState value;
    friend bool operator==(const AtomFlag&, const AtomFlag&) = default;
  };
  struct AtomQuantity {
    Quantity quantity;
    NatInterval value;
    friend bool operator==(const AtomQuantity&, const AtomQuantity&) = default;
  };
  struct Atom {
    std::string name;
    std::vector<AtomFlag> flags;  // assertion order, repeats allowed
    std::vector<AtomQuantity> quantities;
    std::shared_ptr<const SpectralPoset> poset;
    std::string poset_ref;  // how the poset was named in the input
  };
  struct FieldExt {
    ExtNat td;
    FieldKind kind = FieldKind::General;
    TriState finite_over_sep_closure = TriState::Unknown;
  };
  struct Poly;
  struct Localization;
  struct Tensor;

  static AlgebraExpr atom(Atom a);
  static AlgebraExpr atom(std::string name, std::vector<AtomFlag> flags = {},
                          std::vector<AtomQuantity> quantities = {});
  /// Throws InvalidExpr when an algebraic kind is given a nonzero td.
  static AlgebraExpr field(ExtNat td, FieldKind kind = FieldKind::General,
                           TriState finite_over_sep_closure = TriState::Unknown);
  static AlgebraExpr poly(AlgebraExpr inner, unsigned n);
  static AlgebraExpr loc(AlgebraExpr inner);
  static AlgebraExpr tensor(AlgebraExpr left, AlgebraExpr right);

  const ExprNode& node() const { return *node_; }

  const Atom* as_atom() const;
  const FieldExt* as_field() const;
  const Poly* as_poly() const;
  const Localization* as_loc() const;
  const Tensor* as_tensor() const;

  friend bool operator==(const AlgebraExpr& a, const AlgebraExpr& b);

 private:
  explicit AlgebraExpr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct AlgebraExpr::Poly {
  AlgebraExpr inner;
  unsigned n;
};
struct AlgebraExpr::Localization {
  AlgebraExpr inner;
};
struct AlgebraExpr::Tensor {
  AlgebraExpr left;
  AlgebraExpr right;
};

struct ExprNode {
  std::variant<AlgebraExpr::Atom, AlgebraExpr::FieldExt, AlgebraExpr::Poly,
               AlgebraExpr::Localization, AlgebraExpr::Tensor>
      kind;
};

void to_json(nlohmann::json& j, const AlgebraExpr& e);
AlgebraExpr expr_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Knowledge base

/// Index of a node of the expression in preorder (root = 0).
struct NodeId {
  std::size_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct FactId {
  std::size_t value = 0;
  friend auto operator<=>(const FactId&, const FactId&) = default;
};

using Target = std::variant<PropertyKind, Quantity>;
std::string to_string(const Target& t);

inline constexpr std::string_view kAxiomRule = "axiom";

struct Provenance {
  std::string rule_id;
  std::string citation;
  std::vector<FactId> premises;
};

struct Fact {
  FactId id;
  NodeId subject;
  Target target;
  std::variant<TriState, NatInterval> value;
  Provenance provenance;
};

struct Axiom {
  NodeId subject;
  Target target;
  std::variant<TriState, NatInterval> value;
  std::string citation = "user axiom";
};

/// Global description of the base field k.
struct BaseField {
  TriState algebraically_closed = TriState::Unknown;
};

/// Raised when two derivations disagree. Carries both derivation trees.
class ContradictionError : public Error {
 public:
  ContradictionError(const std::string& what, nlohmann::json existing, nlohmann::json incoming)
      : Error(what), existing_(std::move(existing)), incoming_(std::move(incoming)) {}
  const nlohmann::json& existing() const { return existing_; }
  const nlohmann::json& incoming() const { return incoming_; }

 private:
  nlohmann::json existing_;
  nlohmann::json incoming_;
};

struct Literal {
  NodeId subject;
  PropertyKind property;
};

/// Identifies a rule in provenance records.
struct RuleRef {
  std::string_view id;
  std::string_view citation;
};

/// Tri-state property facts and interval-valued numeric facts keyed by
/// expression node. Facts live in an append-only log; a numeric tightening
/// appends a new fact whose premises include the bound it replaces.
class KnowledgeBase {
 public:
  /// Seeds atom flags, attached-poset checks, structural field facts and the
  /// given axioms, then closes under the property lattice.
  explicit KnowledgeBase(AlgebraExpr expr, std::vector<Axiom> axioms = {},
                         BaseField base_field = {});

  const AlgebraExpr& expr() const { return expr_; }
  const BaseField& base_field() const { return base_field_; }
  std::size_t node_count() const { return nodes_.size(); }
  NodeId root() const { return NodeId{0}; }
  const AlgebraExpr& node(NodeId id) const;
  std::vector<NodeId> children(NodeId id) const;
  std::string label(NodeId id) const { return "n" + std::to_string(id.value); }
  NodeId parse_label(std::string_view label) const;  // throws UnknownSubject

  TriState value(NodeId subject, PropertyKind p) const;
  std::optional<FactId> fact_for(NodeId subject, PropertyKind p) const;
  std::pair<TriState, std::optional<Provenance>> get_fact(NodeId subject, PropertyKind p) const;
  NatInterval quantity(NodeId subject, Quantity q) const;
  std::optional<FactId> fact_for(NodeId subject, Quantity q) const;

  const Fact& fact(FactId id) const { return facts_.at(id.value); }
  const std::vector<Fact>& facts() const { return facts_; }

  /// Records a decisive value. Returns false if already known; throws
  /// ContradictionError on the opposite value.
  bool assert_property(NodeId subject, PropertyKind p, TriState value, Provenance prov);
  /// Intersects the current interval with `bound`. Returns whether it changed.
  bool tighten(NodeId subject, Quantity q, const NatInterval& bound, Provenance prov);

  /// premises => conclusion, plus the contrapositive: conclusion false and all
  /// but one premise true refutes the remaining premise. `side` facts are
  /// extra premises already known to hold.
  bool apply_implication(const RuleRef& rule, std::span<const Literal> premises,
                         Literal conclusion, std::span<const FactId> side = {});
  /// All members share one truth value.
  bool apply_equivalence(const RuleRef& rule, std::span<const Literal> members,
                         std::span<const FactId> side = {});

  /// Provenance tree of a fact as JSON {subject, target, value, rule_id, citation, premises}.
  nlohmann::json derivation_json(FactId id) const;

  std::size_t fact_count() const { return facts_.size(); }

 private:
  void index_nodes(const AlgebraExpr& e);
  void seed_atom(NodeId id, const AlgebraExpr::Atom& atom);
  void seed_field(NodeId id, const AlgebraExpr::FieldExt& field);
  void seed_axiom(const Axiom& ax);
  void close_lattice(NodeId subject);
  FactId append(NodeId subject, Target target, std::variant<TriState, NatInterval> value,
                Provenance prov);
  nlohmann::json incoming_json(NodeId subject, const Target& target,
                               const std::variant<TriState, NatInterval>& value,
                               const Provenance& prov) const;

  AlgebraExpr expr_;
  BaseField base_field_;
  std::vector<AlgebraExpr> nodes_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<Fact> facts_;
  std::map<std::pair<std::size_t, PropertyKind>, FactId> property_index_;
  std::map<std::pair<std::size_t, Quantity>, FactId> quantity_index_;
  int lattice_depth_ = 0;
};

/// Is the extension algebraic (t.d. 0)?
bool is_algebraic(const AlgebraExpr::FieldExt& f);
/// [L : k(B)] < infinity for B a transcendence basis and L the separable
/// algebraic closure of k(B) in K. Known for several kinds; asserted otherwise.
TriState sep_closure_finite(const AlgebraExpr::FieldExt& f);

}  // namespace spectra
