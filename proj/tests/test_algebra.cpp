#include "doctest.h"
#include "spectra/algebra.hpp"
#include "spectra/dsl.hpp"
#include "spectra/error.hpp"

using namespace spectra;
using P = PropertyKind;

TEST_SUITE("algebra") {
  TEST_CASE("a field is seeded with its structure") {
    const KnowledgeBase kb(AlgebraExpr::field(0, FieldKind::Algebraic));
    const NodeId r = kb.root();
    for (P p : {P::Field, P::Domain, P::IntegrallyClosed, P::Noetherian, P::Prufer,
                P::UnivCatenarian, P::LFD, P::StablyStrongS, P::StrongS, P::Catenarian, P::MPC}) {
      CHECK_MESSAGE(kb.value(r, p) == TriState::True, to_string(p));
    }
    CHECK(kb.quantity(r, Quantity::Dim) == NatInterval::exactly(0));
    const auto [v, prov] = kb.get_fact(r, P::Field);
    CHECK(v == TriState::True);
    REQUIRE(prov);
    CHECK(prov->rule_id == kAxiomRule);
    CHECK(prov->premises.empty());
  }

  TEST_CASE("an atom holds only what it asserts") {
    const KnowledgeBase kb(AlgebraExpr::atom("A", {{P::Noetherian, TriState::True}}));
    CHECK(kb.value(kb.root(), P::Noetherian) == TriState::True);
    std::size_t property_facts = 0;
    for (const Fact& f : kb.facts()) property_facts += std::holds_alternative<P>(f.target) ? 1 : 0;
    CHECK(property_facts == 1);
    const auto [v, prov] = kb.get_fact(kb.root(), P::Domain);
    CHECK(v == TriState::Unknown);
    CHECK_FALSE(prov.has_value());
    CHECK(kb.quantity(kb.root(), Quantity::Dim).is_unknown());
  }

  TEST_CASE("contradictory axioms fail at seeding with both sides") {
    try {
      KnowledgeBase kb(
          AlgebraExpr::atom("A", {{P::Domain, TriState::True}, {P::Domain, TriState::False}}));
      FAIL("expected ContradictionError");
    } catch (const ContradictionError& e) {
      CHECK(e.existing().at("value") == "true");
      CHECK(e.incoming().at("value") == "false");
    }
    CHECK_THROWS_AS(KnowledgeBase(AlgebraExpr::atom("A", {{P::Field, TriState::True},
                                                          {P::Domain, TriState::False}})),
                    ContradictionError);
    CHECK_THROWS_AS(KnowledgeBase(AlgebraExpr::atom("A", {}, {{Quantity::Dim, NatInterval(0, 1)},
                                                              {Quantity::Dim, NatInterval(3, 4)}})),
                    ContradictionError);
  }

  TEST_CASE("axioms on unknown subjects are rejected") {
    CHECK_THROWS_AS(KnowledgeBase(AlgebraExpr::atom("A"), {{NodeId{3}, P::MPC, TriState::True}}),
                    UnknownSubject);
    const KnowledgeBase kb(AlgebraExpr::atom("A"));
    CHECK_THROWS_AS(kb.get_fact(NodeId{1}, P::MPC), UnknownSubject);
    CHECK_THROWS_AS(kb.parse_label("n7"), UnknownSubject);
    CHECK(kb.parse_label("n0") == NodeId{0});
  }

  TEST_CASE("lattice closure and contrapositives") {
    const KnowledgeBase kb(AlgebraExpr::atom(
        "A", {{P::Prufer, TriState::True}, {P::Domain, TriState::True}, {P::LFD, TriState::True}}));
    CHECK(kb.value(kb.root(), P::UnivCatenarian) == TriState::True);
    CHECK(kb.value(kb.root(), P::StablyStrongS) == TriState::True);
    CHECK(kb.value(kb.root(), P::StrongS) == TriState::True);
    CHECK(kb.value(kb.root(), P::Catenarian) == TriState::True);

    const KnowledgeBase neg(AlgebraExpr::atom("B", {{P::StrongS, TriState::False}}));
    CHECK(neg.value(neg.root(), P::StablyStrongS) == TriState::False);
    CHECK(neg.value(neg.root(), P::UnivCatenarian) == TriState::False);
    CHECK(neg.value(neg.root(), P::Field) == TriState::False);
  }

  TEST_CASE("node labels follow preorder") {
    const KnowledgeBase kb(parse_expr("tensor(poly(atom(A), 2), field(td=1))"));
    CHECK(kb.node_count() == 4);
    CHECK(kb.node(NodeId{1}).as_poly());
    CHECK(kb.node(NodeId{2}).as_atom());
    CHECK(kb.node(NodeId{3}).as_field());
    CHECK(kb.children(kb.root()) == std::vector<NodeId>{NodeId{1}, NodeId{3}});
  }

  TEST_CASE("expression invariants") {
    CHECK_THROWS_AS(AlgebraExpr::field(2, FieldKind::Algebraic), InvalidExpr);
    CHECK_THROWS_AS(AlgebraExpr::field(1, FieldKind::PurelyInseparable), InvalidExpr);
    CHECK_THROWS_AS(AlgebraExpr::poly(AlgebraExpr::atom("A"), 0), InvalidExpr);
    CHECK_NOTHROW(AlgebraExpr::field(ExtNat::inf(), FieldKind::General));
    CHECK(is_algebraic(*AlgebraExpr::field(0, FieldKind::General).as_field()));
  }

  TEST_CASE("expression json round trip") {
    const auto e = parse_expr(
        "tensor(field(td=inf, kind=general, finite_sep=true), loc(poly(atom(A, mpc=true, td=[1,inf]), 3)))");
    nlohmann::json j = e;
    CHECK(expr_from_json(j) == e);
  }

  TEST_CASE("property names") {
    CHECK(all_properties().size() == kPropertyCount);
    for (P p : all_properties()) {
      CHECK(parse_property(to_string(p)) == p);
      CHECK(parse_property(flag_name(p)) == p);
    }
    CHECK(to_string(P::UnivCatenarian) == "UNIV_CATENARIAN");
    CHECK_FALSE(parse_property("bogus").has_value());
  }
}
