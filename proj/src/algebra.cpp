#include "spectra/algebra.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace spectra {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

constexpr std::array<PropertyKind, kPropertyCount> kProperties = {
    PropertyKind::Domain,
    PropertyKind::Field,
    PropertyKind::IntegrallyClosed,
    PropertyKind::Noetherian,
    PropertyKind::Prufer,
    PropertyKind::MPC,
    PropertyKind::SRing,
    PropertyKind::StrongS,
    PropertyKind::StablyStrongS,
    PropertyKind::Catenarian,
    PropertyKind::UnivCatenarian,
    PropertyKind::LFD,
    PropertyKind::AFDomain,
    PropertyKind::PolyRingCatenarian,
    PropertyKind::P2,
    PropertyKind::SepClosureContained,
    PropertyKind::QfSepClosureContained,
    PropertyKind::IntegralClosurePrufer,
};

constexpr std::array<Quantity, 3> kQuantities = {Quantity::Dim, Quantity::Td,
                                                 Quantity::MinResidueTd};

struct LatticeClause {
  std::string_view id;
  std::string_view citation;
  std::vector<PropertyKind> premises;
  PropertyKind conclusion;
};

using P = PropertyKind;

const std::vector<LatticeClause>& lattice() {
  static const std::vector<LatticeClause> clauses = {
      {"L-field-domain", "definition: a field is a domain", {P::Field}, P::Domain},
      {"L-field-ic", "definition: a field is integrally closed", {P::Field}, P::IntegrallyClosed},
      {"L-field-noetherian", "definition: a field is Noetherian", {P::Field}, P::Noetherian},
      {"L-field-prufer", "definition: a field is a Prufer domain", {P::Field}, P::Prufer},
      {"L-field-qfsep", "definition: the separable closure of k in a field K lies in K",
       {P::Field}, P::QfSepClosureContained},
      {"L-field-lfd", "definition: a field has dimension 0", {P::Field}, P::LFD},
      {"L-field-uc", "Section 1, \"LFD Pr\\\"ufer domains [7] are universally\" (a field is one)",
       {P::Field}, P::UnivCatenarian},
      {"L-prufer-uc", "Section 1, \"LFD Pr\\\"ufer domains [7] are universally\"",
       {P::Prufer, P::Domain, P::LFD}, P::UnivCatenarian},
      {"L-uc-sss", "Section 1, \"any universally catenarian domain is a stably strong S-domain\"",
       {P::UnivCatenarian}, P::StablyStrongS},
      {"L-uc-cat", "Section 1, \"universally catenarian if $A[X_1,...,X_n]$ is catenarian\"",
       {P::UnivCatenarian}, P::Catenarian},
      {"L-uc-polycat", "Section 1, \"universally catenarian if $A[X_1,...,X_n]$ is catenarian\"",
       {P::UnivCatenarian}, P::PolyRingCatenarian},
      {"L-sss-ss", "Section 1, \"stably strong S-ring (also called a universally strong S-ring )\"",
       {P::StablyStrongS}, P::StrongS},
      {"L-domain-mpc", "Section 2, \"any domain evidently satisfies MPC\"", {P::Domain}, P::MPC},
      {"L-sring-mpc", "Section 2, \"A ring $A$ is called an S-ring if it satisfies MPC and $(P_1)$\"",
       {P::SRing}, P::MPC},
      {"L-sring-p2", "Section 2, \"we verify easily that $(P_1)\\Rightarrow (P_2)$\"",
       {P::SRing}, P::P2},
      {"L-mpc-p2-sring", "Section 2, \"equivalently, MPC and $(P_2)$\"", {P::MPC, P::P2},
       P::SRing},
      {"L-ss-p2",
       "Section 1, \"is said to be a strong S-ring if $\\frac Ap$ is an S-domain for each\"; "
       "Section 2, \"$(P_1)\\Rightarrow (P_2)$\"",
       {P::StrongS}, P::P2},
      {"L-ss-mpc-sring",
       "Section 1, \"is said to be a strong S-ring if $\\frac Ap$ is an S-domain for each\"; "
       "Section 2, \"satisfies MPC and $(P_1)$\"",
       {P::StrongS, P::MPC}, P::SRing},
      {"L-cat-mpc", "Section 2, \"catenarian if $A$ satisfies MPC and $(Q_1)$\"", {P::Catenarian},
       P::MPC},
      {"L-cat-lfd", "Section 2, \"$(Q_1): A$ is LFD and\"", {P::Catenarian}, P::LFD},
  };
  return clauses;
}

std::string tri_or_interval(const std::variant<TriState, NatInterval>& v) {
  if (const auto* t = std::get_if<TriState>(&v)) return to_string(*t);
  return std::get<NatInterval>(v).to_string();
}

}  // namespace

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::PurelyTranscendental: return "pure_trans";
    case FieldKind::SeparableAlgebraicFinite: return "sep_alg_finite";
    case FieldKind::Algebraic: return "alg";
    case FieldKind::PurelyInseparable: return "insep";
    case FieldKind::General: return "general";
  }
  return "?";
}

FieldKind parse_field_kind(std::string_view name) {
  const std::string n = lower(name);
  for (auto k : {FieldKind::PurelyTranscendental, FieldKind::SeparableAlgebraicFinite,
                 FieldKind::Algebraic, FieldKind::PurelyInseparable, FieldKind::General}) {
    if (to_string(k) == n) return k;
  }
  throw InvalidArgument("unknown field kind '" + std::string(name) + "'");
}

std::span<const PropertyKind> all_properties() { return kProperties; }

std::string to_string(PropertyKind p) {
  switch (p) {
    case P::Domain: return "DOMAIN";
    case P::Field: return "FIELD";
    case P::IntegrallyClosed: return "INTEGRALLY_CLOSED";
    case P::Noetherian: return "NOETHERIAN";
    case P::Prufer: return "PRUFER";
    case P::MPC: return "MPC";
    case P::SRing: return "S_RING";
    case P::StrongS: return "STRONG_S";
    case P::StablyStrongS: return "STABLY_STRONG_S";
    case P::Catenarian: return "CATENARIAN";
    case P::UnivCatenarian: return "UNIV_CATENARIAN";
    case P::LFD: return "LFD";
    case P::AFDomain: return "AF_DOMAIN";
    case P::PolyRingCatenarian: return "POLY_RING_CATENARIAN";
    case P::P2: return "P2";
    case P::SepClosureContained: return "SEP_CLOSURE_CONTAINED";
    case P::QfSepClosureContained: return "QF_SEP_CLOSURE_CONTAINED";
    case P::IntegralClosurePrufer: return "INTEGRAL_CLOSURE_PRUFER";
  }
  return "?";
}

std::string flag_name(PropertyKind p) { return lower(to_string(p)); }

std::optional<PropertyKind> parse_property(std::string_view name) {
  const std::string n = lower(name);
  for (PropertyKind p : kProperties) {
    if (flag_name(p) == n) return p;
  }
  return std::nullopt;
}

std::span<const Quantity> all_quantities() { return kQuantities; }

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::Dim: return "dim";
    case Quantity::Td: return "td";
    case Quantity::MinResidueTd: return "min_rtd";
  }
  return "?";
}

std::optional<Quantity> parse_quantity(std::string_view name) {
  const std::string n = lower(name);
  for (Quantity q : kQuantities) {
    if (to_string(q) == n) return q;
  }
  return std::nullopt;
}

std::string to_string(const Target& t) {
  return std::visit([](auto v) { return to_string(v); }, t);
}

// ---------------------------------------------------------------------------
// AlgebraExpr

AlgebraExpr AlgebraExpr::atom(Atom a) {
  if (a.name.empty()) throw InvalidExpr("atom needs a name");
  return AlgebraExpr(std::make_shared<const ExprNode>(ExprNode{std::move(a)}));
}

AlgebraExpr AlgebraExpr::atom(std::string name, std::vector<AtomFlag> flags,
                              std::vector<AtomQuantity> quantities) {
  return atom(Atom{std::move(name), std::move(flags), std::move(quantities), nullptr, ""});
}

AlgebraExpr AlgebraExpr::field(ExtNat td, FieldKind kind, TriState finite_over_sep_closure) {
  const bool algebraic_kind = kind == FieldKind::SeparableAlgebraicFinite ||
                              kind == FieldKind::Algebraic ||
                              kind == FieldKind::PurelyInseparable;
  if (algebraic_kind && td != ExtNat(0)) {
    throw InvalidExpr("field of kind " + to_string(kind) + " must have td = 0, got " +
                      td.to_string());
  }
  return AlgebraExpr(std::make_shared<const ExprNode>(
      ExprNode{FieldExt{td, kind, finite_over_sep_closure}}));
}

AlgebraExpr AlgebraExpr::poly(AlgebraExpr inner, unsigned n) {
  if (n == 0) throw InvalidExpr("poly needs at least one indeterminate");
  return AlgebraExpr(std::make_shared<const ExprNode>(ExprNode{Poly{std::move(inner), n}}));
}

AlgebraExpr AlgebraExpr::loc(AlgebraExpr inner) {
  return AlgebraExpr(std::make_shared<const ExprNode>(ExprNode{Localization{std::move(inner)}}));
}

AlgebraExpr AlgebraExpr::tensor(AlgebraExpr left, AlgebraExpr right) {
  return AlgebraExpr(
      std::make_shared<const ExprNode>(ExprNode{Tensor{std::move(left), std::move(right)}}));
}

const AlgebraExpr::Atom* AlgebraExpr::as_atom() const { return std::get_if<Atom>(&node_->kind); }
const AlgebraExpr::FieldExt* AlgebraExpr::as_field() const {
  return std::get_if<FieldExt>(&node_->kind);
}
const AlgebraExpr::Poly* AlgebraExpr::as_poly() const { return std::get_if<Poly>(&node_->kind); }
const AlgebraExpr::Localization* AlgebraExpr::as_loc() const {
  return std::get_if<Localization>(&node_->kind);
}
const AlgebraExpr::Tensor* AlgebraExpr::as_tensor() const {
  return std::get_if<Tensor>(&node_->kind);
}

bool operator==(const AlgebraExpr& a, const AlgebraExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->kind.index() != b.node_->kind.index()) return false;
  if (const auto* x = a.as_atom()) {
    const auto* y = b.as_atom();
    return x->name == y->name && x->flags == y->flags && x->quantities == y->quantities &&
           x->poset_ref == y->poset_ref && (x->poset == nullptr) == (y->poset == nullptr);
  }
  if (const auto* x = a.as_field()) {
    const auto* y = b.as_field();
    return x->td == y->td && x->kind == y->kind &&
           x->finite_over_sep_closure == y->finite_over_sep_closure;
  }
  if (const auto* x = a.as_poly()) {
    const auto* y = b.as_poly();
    return x->n == y->n && x->inner == y->inner;
  }
  if (const auto* x = a.as_loc()) return x->inner == b.as_loc()->inner;
  const auto* x = a.as_tensor();
  const auto* y = b.as_tensor();
  return x->left == y->left && x->right == y->right;
}

void to_json(nlohmann::json& j, const AlgebraExpr& e) {
  using nlohmann::json;
  if (const auto* a = e.as_atom()) {
    json flags = json::array();
    for (const auto& f : a->flags) flags.push_back({flag_name(f.property), f.value});
    json quantities = json::array();
    for (const auto& q : a->quantities) quantities.push_back({to_string(q.quantity), q.value});
    j = {{"kind", "atom"}, {"name", a->name}, {"flags", flags}, {"quantities", quantities}};
    if (a->poset) {
      j["poset_ref"] = a->poset_ref;
      j["poset"] = *a->poset;
    }
  } else if (const auto* f = e.as_field()) {
    j = {{"kind", "field"},
         {"td", f->td},
         {"field_kind", to_string(f->kind)},
         {"finite_sep", f->finite_over_sep_closure}};
  } else if (const auto* p = e.as_poly()) {
    j = {{"kind", "poly"}, {"inner", p->inner}, {"n", p->n}};
  } else if (const auto* l = e.as_loc()) {
    j = {{"kind", "loc"}, {"inner", l->inner}};
  } else {
    const auto* t = e.as_tensor();
    j = {{"kind", "tensor"}, {"left", t->left}, {"right", t->right}};
  }
}

AlgebraExpr expr_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "atom") {
      AlgebraExpr::Atom a;
      a.name = j.at("name").get<std::string>();
      for (const auto& f : j.value("flags", nlohmann::json::array())) {
        auto p = parse_property(f.at(0).get<std::string>());
        if (!p) throw InvalidExpr("unknown property " + f.at(0).dump());
        a.flags.push_back({*p, f.at(1).get<TriState>()});
      }
      for (const auto& q : j.value("quantities", nlohmann::json::array())) {
        auto quantity = parse_quantity(q.at(0).get<std::string>());
        if (!quantity) throw InvalidExpr("unknown quantity " + q.at(0).dump());
        a.quantities.push_back({*quantity, q.at(1).get<NatInterval>()});
      }
      if (j.contains("poset")) {
        a.poset = std::make_shared<const SpectralPoset>(poset_from_json(j["poset"]));
        a.poset_ref = j.value("poset_ref", std::string());
      }
      return AlgebraExpr::atom(std::move(a));
    }
    if (kind == "field") {
      return AlgebraExpr::field(j.at("td").get<ExtNat>(),
                                parse_field_kind(j.value("field_kind", std::string("general"))),
                                j.value("finite_sep", TriState::Unknown));
    }
    if (kind == "poly") {
      return AlgebraExpr::poly(expr_from_json(j.at("inner")), j.at("n").get<unsigned>());
    }
    if (kind == "loc") return AlgebraExpr::loc(expr_from_json(j.at("inner")));
    if (kind == "tensor") {
      return AlgebraExpr::tensor(expr_from_json(j.at("left")), expr_from_json(j.at("right")));
    }
    throw InvalidExpr("unknown expression kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidExpr(std::string("malformed expression JSON: ") + e.what());
  }
}

bool is_algebraic(const AlgebraExpr::FieldExt& f) { return f.td == ExtNat(0); }

TriState sep_closure_finite(const AlgebraExpr::FieldExt& f) {
  switch (f.kind) {
    case FieldKind::PurelyTranscendental:      // L = k(B)
    case FieldKind::SeparableAlgebraicFinite:  // B empty, L = K of finite degree
    case FieldKind::PurelyInseparable:         // L = k
      return TriState::True;
    default:
      return f.finite_over_sep_closure;
  }
}

// ---------------------------------------------------------------------------
// KnowledgeBase

KnowledgeBase::KnowledgeBase(AlgebraExpr expr, std::vector<Axiom> axioms, BaseField base_field)
    : expr_(std::move(expr)), base_field_(base_field) {
  index_nodes(expr_);
  for (const Axiom& ax : axioms) {
    if (ax.subject.value >= nodes_.size()) {
      throw UnknownSubject("axiom names node n" + std::to_string(ax.subject.value) +
                           " but the expression has " + std::to_string(nodes_.size()) +
                           " nodes");
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (const auto* a = nodes_[i].as_atom()) seed_atom(NodeId{i}, *a);
    if (const auto* f = nodes_[i].as_field()) seed_field(NodeId{i}, *f);
  }
  for (const Axiom& ax : axioms) seed_axiom(ax);
}

void KnowledgeBase::index_nodes(const AlgebraExpr& e) {
  const std::size_t me = nodes_.size();
  nodes_.push_back(e);
  children_.emplace_back();
  std::vector<const AlgebraExpr*> kids;
  if (const auto* p = e.as_poly()) kids = {&p->inner};
  if (const auto* l = e.as_loc()) kids = {&l->inner};
  if (const auto* t = e.as_tensor()) kids = {&t->left, &t->right};
  for (const AlgebraExpr* k : kids) {
    children_[me].push_back(NodeId{nodes_.size()});
    index_nodes(*k);
  }
}

const AlgebraExpr& KnowledgeBase::node(NodeId id) const {
  if (id.value >= nodes_.size()) throw UnknownSubject("no node " + label(id));
  return nodes_[id.value];
}

std::vector<NodeId> KnowledgeBase::children(NodeId id) const {
  node(id);
  return children_[id.value];
}

NodeId KnowledgeBase::parse_label(std::string_view text) const {
  if (text.size() >= 2 && text[0] == 'n') {
    auto v = parse_ext_nat(std::string(text.substr(1)));
    if (v && v->is_finite() && v->value() < nodes_.size()) {
      return NodeId{static_cast<std::size_t>(v->value())};
    }
  }
  throw UnknownSubject("no expression node labeled '" + std::string(text) + "'");
}

void KnowledgeBase::seed_atom(NodeId id, const AlgebraExpr::Atom& atom) {
  const std::string where = "asserted on atom '" + atom.name + "'";
  for (const auto& f : atom.flags) {
    if (f.value == TriState::Unknown) continue;
    assert_property(id, f.property, f.value, {std::string(kAxiomRule), where, {}});
  }
  for (const auto& q : atom.quantities) {
    tighten(id, q.quantity, q.value, {std::string(kAxiomRule), where, {}});
  }
  if (!atom.poset) return;
  const SpectralPoset& poset = *atom.poset;
  const std::string src = "attached spectrum poset '" + atom.poset_ref + "' of atom '" +
                          atom.name + "'";
  if (poset.algebra_td()) {
    tighten(id, Quantity::Td, NatInterval::exactly(*poset.algebra_td()),
            {std::string(kAxiomRule), src + ": algebra_td", {}});
  }
  if (!poset.complete()) return;
  tighten(id, Quantity::Dim, NatInterval::exactly(poset.krull_dim()),
          {std::string(kAxiomRule), src + ": krull_dim", {}});
  if (auto m = poset.min_residue_td()) {
    tighten(id, Quantity::MinResidueTd, NatInterval::exactly(*m),
            {std::string(kAxiomRule), src + ": residue_td over minimal nodes", {}});
  }
  assert_property(id, P::LFD, TriState::True,
                  {std::string(kAxiomRule), src + ": finitely many primes", {}});
  const std::pair<PosetProperty, PropertyKind> checks[] = {
      {PosetProperty::MPC, P::MPC},
      {PosetProperty::P2, P::P2},
      {PosetProperty::SRing, P::SRing},
      {PosetProperty::Catenarian, P::Catenarian},
  };
  for (const auto& [check, prop] : checks) {
    const TriState v = poset.check_property(check);
    if (v == TriState::Unknown) continue;
    assert_property(id, prop, v,
                    {std::string(kAxiomRule), src + ": check_property(" + to_string(check) + ")",
                     {}});
  }
}

void KnowledgeBase::seed_field(NodeId id, const AlgebraExpr::FieldExt& field) {
  const std::string src = "structural: field extension of k";
  assert_property(id, P::Field, TriState::True, {std::string(kAxiomRule), src, {}});
  tighten(id, Quantity::Td, NatInterval::exactly(field.td), {std::string(kAxiomRule), src, {}});
  tighten(id, Quantity::MinResidueTd, NatInterval::exactly(field.td),
          {std::string(kAxiomRule), src + " (its only prime is (0))", {}});
  if (field.td.is_finite()) {
    assert_property(id, P::AFDomain, TriState::True,
                    {std::string(kAxiomRule),
                     "Section 5, \"field extensions of finite transcendence degree over $k$ are "
                     "AF-domains\"",
                     {}});
  }
}

void KnowledgeBase::seed_axiom(const Axiom& ax) {
  Provenance prov{std::string(kAxiomRule), ax.citation, {}};
  if (const auto* p = std::get_if<PropertyKind>(&ax.target)) {
    const TriState v = std::get<TriState>(ax.value);
    if (v != TriState::Unknown) assert_property(ax.subject, *p, v, std::move(prov));
  } else {
    tighten(ax.subject, std::get<Quantity>(ax.target), std::get<NatInterval>(ax.value),
            std::move(prov));
  }
}

TriState KnowledgeBase::value(NodeId subject, PropertyKind p) const {
  auto id = fact_for(subject, p);
  return id ? std::get<TriState>(facts_[id->value].value) : TriState::Unknown;
}

std::optional<FactId> KnowledgeBase::fact_for(NodeId subject, PropertyKind p) const {
  node(subject);
  auto it = property_index_.find({subject.value, p});
  if (it == property_index_.end()) return std::nullopt;
  return it->second;
}

std::pair<TriState, std::optional<Provenance>> KnowledgeBase::get_fact(NodeId subject,
                                                                       PropertyKind p) const {
  auto id = fact_for(subject, p);
  if (!id) return {TriState::Unknown, std::nullopt};
  const Fact& f = facts_[id->value];
  return {std::get<TriState>(f.value), f.provenance};
}

NatInterval KnowledgeBase::quantity(NodeId subject, Quantity q) const {
  auto id = fact_for(subject, q);
  return id ? std::get<NatInterval>(facts_[id->value].value) : NatInterval::unknown();
}

std::optional<FactId> KnowledgeBase::fact_for(NodeId subject, Quantity q) const {
  node(subject);
  auto it = quantity_index_.find({subject.value, q});
  if (it == quantity_index_.end()) return std::nullopt;
  return it->second;
}

FactId KnowledgeBase::append(NodeId subject, Target target,
                             std::variant<TriState, NatInterval> value, Provenance prov) {
  const FactId id{facts_.size()};
  facts_.push_back(Fact{id, subject, target, std::move(value), std::move(prov)});
  return id;
}

bool KnowledgeBase::assert_property(NodeId subject, PropertyKind p, TriState v, Provenance prov) {
  if (v == TriState::Unknown) return false;
  node(subject);
  const TriState current = value(subject, p);
  if (current == v) return false;
  if (current != TriState::Unknown) {
    const FactId existing = *fact_for(subject, p);
    throw ContradictionError(label(subject) + " " + to_string(p) + ": derived " + to_string(v) +
                                 " via " + prov.rule_id + " but already " + to_string(current) +
                                 " via " + facts_[existing.value].provenance.rule_id,
                             derivation_json(existing), incoming_json(subject, p, v, prov));
  }
  property_index_[{subject.value, p}] = append(subject, p, v, std::move(prov));
  if (lattice_depth_ == 0) close_lattice(subject);
  return true;
}

bool KnowledgeBase::tighten(NodeId subject, Quantity q, const NatInterval& bound, Provenance prov) {
  node(subject);
  const auto previous = fact_for(subject, q);
  const NatInterval current = quantity(subject, q);
  NatInterval next;
  try {
    next = interval_intersect(current, bound);
  } catch (const EmptyIntersection&) {
    throw ContradictionError(
        label(subject) + " " + to_string(q) + ": " + prov.rule_id + " gives " +
            bound.to_string() + ", disjoint from " + current.to_string(),
        derivation_json(*previous), incoming_json(subject, q, bound, prov));
  }
  if (next == current) return false;
  if (!previous) {
    quantity_index_[{subject.value, q}] = append(subject, q, next, std::move(prov));
  } else {
    const FactId incoming = append(subject, q, bound, std::move(prov));
    quantity_index_[{subject.value, q}] =
        append(subject, q, next,
               {"interval-intersect", "intersection of numeric bounds", {*previous, incoming}});
  }
  if (q == Quantity::Dim || q == Quantity::Td) {
    // Keep the store consistent with dim <= td as soon as either moves.
    const NatInterval dim = quantity(subject, Quantity::Dim);
    const NatInterval td = quantity(subject, Quantity::Td);
    if (td.hi() < dim.lo()) {
      throw ContradictionError(label(subject) + ": dim " + dim.to_string() + " exceeds td " +
                                   td.to_string(),
                               derivation_json(*fact_for(subject, Quantity::Dim)),
                               derivation_json(*fact_for(subject, Quantity::Td)));
    }
  }
  return true;
}

bool KnowledgeBase::apply_implication(const RuleRef& rule, std::span<const Literal> premises,
                                      Literal conclusion, std::span<const FactId> side) {
  std::vector<FactId> used(side.begin(), side.end());
  std::optional<std::size_t> open;
  std::size_t open_count = 0;
  bool any_false = false;
  for (std::size_t i = 0; i < premises.size(); ++i) {
    const TriState v = value(premises[i].subject, premises[i].property);
    if (v == TriState::True) {
      used.push_back(*fact_for(premises[i].subject, premises[i].property));
    } else if (v == TriState::False) {
      any_false = true;
    } else {
      open = i;
      ++open_count;
    }
  }
  if (any_false) return false;
  if (open_count == 0) {
    return assert_property(conclusion.subject, conclusion.property, TriState::True,
                           {std::string(rule.id), std::string(rule.citation), used});
  }
  if (open_count == 1 && value(conclusion.subject, conclusion.property) == TriState::False) {
    used.push_back(*fact_for(conclusion.subject, conclusion.property));
    const Literal& target = premises[*open];
    return assert_property(target.subject, target.property, TriState::False,
                           {std::string(rule.id) + ":contrapositive", std::string(rule.citation),
                            used});
  }
  return false;
}

bool KnowledgeBase::apply_equivalence(const RuleRef& rule, std::span<const Literal> members,
                                      std::span<const FactId> side) {
  std::optional<std::size_t> decided;
  for (std::size_t i = 0; i < members.size() && !decided; ++i) {
    if (is_decisive(value(members[i].subject, members[i].property))) decided = i;
  }
  if (!decided) return false;
  const Literal& src = members[*decided];
  const TriState v = value(src.subject, src.property);
  std::vector<FactId> used(side.begin(), side.end());
  used.push_back(*fact_for(src.subject, src.property));
  bool changed = false;
  for (const Literal& m : members) {
    changed |= assert_property(m.subject, m.property, v,
                               {std::string(rule.id), std::string(rule.citation), used});
  }
  return changed;
}

void KnowledgeBase::close_lattice(NodeId subject) {
  ++lattice_depth_;
  try {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const LatticeClause& c : lattice()) {
        std::vector<Literal> prem;
        for (PropertyKind p : c.premises) prem.push_back({subject, p});
        changed |= apply_implication({c.id, c.citation}, prem, {subject, c.conclusion});
      }
      if (value(subject, P::Field) == TriState::True) {
        changed |= tighten(subject, Quantity::Dim, NatInterval::exactly(0),
                           {"L-field-dim", "definition: a field has dimension 0",
                            {*fact_for(subject, P::Field)}});
      }
    }
  } catch (...) {
    --lattice_depth_;
    throw;
  }
  --lattice_depth_;
}

nlohmann::json KnowledgeBase::incoming_json(NodeId subject, const Target& target,
                                            const std::variant<TriState, NatInterval>& value,
                                            const Provenance& prov) const {
  nlohmann::json premises = nlohmann::json::array();
  for (FactId p : prov.premises) premises.push_back(derivation_json(p));
  return {{"subject", label(subject)},
          {"target", to_string(target)},
          {"value", tri_or_interval(value)},
          {"rule_id", prov.rule_id},
          {"citation", prov.citation},
          {"premises", premises}};
}

nlohmann::json KnowledgeBase::derivation_json(FactId id) const {
  const Fact& f = fact(id);
  return incoming_json(f.subject, f.target, f.value, f.provenance);
}

}  // namespace spectra
