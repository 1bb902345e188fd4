#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spectra/dsl.hpp"
#include "spectra/error.hpp"

using namespace spectra;

namespace {

ParseError parse_error(const std::string& text) {
  try {
    parse_input(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected ParseError for " << text);
  return ParseError(0, 0, "", "");
}

}  // namespace

TEST_SUITE("dsl") {
  TEST_CASE("examples") {
    const auto t = parse_expr("tensor(field(td=0, kind=insep), atom(A, mpc=true))");
    REQUIRE(t.as_tensor());
    const auto* f = t.as_tensor()->left.as_field();
    REQUIRE(f);
    CHECK(f->kind == FieldKind::PurelyInseparable);
    CHECK(f->td == ExtNat(0));
    const auto* a = t.as_tensor()->right.as_atom();
    REQUIRE(a);
    CHECK(a->name == "A");
    REQUIRE(a->flags.size() == 1);
    CHECK(a->flags[0].property == PropertyKind::MPC);
    CHECK(a->flags[0].value == TriState::True);

    const auto p = parse_expr("poly(atom(A, mpc=true), 2)");
    REQUIRE(p.as_poly());
    CHECK(p.as_poly()->n == 2);
    CHECK(p.as_poly()->inner.as_atom());
  }

  TEST_CASE("malformed argument is located") {
    const ParseError e = parse_error("tensor(field(td=)");
    CHECK(e.line() == 1);
    CHECK(e.column() == 17);
    CHECK(e.expected().find("inf") != std::string::npos);
  }

  TEST_CASE("positions across lines and expected sets") {
    ParseError e = parse_error("tensor(\n  atom(A),\n  bogus(B))");
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
    e = parse_error("atom(A, nonsense=true)");
    CHECK(e.line() == 1);
    CHECK(e.column() == 9);
    e = parse_error("poly(atom(A), 0)");
    CHECK(e.column() == 15);
    e = parse_error("field(td=1, kind=weird)");
    CHECK(e.column() == 18);
    e = parse_error("atom(A) trailing");
    CHECK(e.column() == 9);
    e = parse_error("field(td=2, kind=alg)");
    CHECK(e.line() == 1);
    CHECK_THROWS_AS(parse_expr("atom(A) assume(n0, mpc=true)"), ParseError);
  }

  TEST_CASE("settings, intervals, comments") {
    const auto in = parse_input(
        "# leading comment\n"
        "tensor(atom(A, td=[1, inf], dim=2, min_rtd=inf, domain=unknown),\n"
        "       field(td=inf, kind=general, finite_sep=true))  # trailing\n"
        "assume(n0, mpc=true, dim=[0,3])\n");
    const auto* a = in.expr.as_tensor()->left.as_atom();
    REQUIRE(a->quantities.size() == 3);
    CHECK(a->quantities[0].value == NatInterval(1, ExtNat::inf()));
    CHECK(a->quantities[1].value == NatInterval::exactly(2));
    CHECK(a->quantities[2].value == NatInterval::exactly(ExtNat::inf()));
    CHECK(a->flags[0].value == TriState::Unknown);
    CHECK(in.expr.as_tensor()->right.as_field()->finite_over_sep_closure == TriState::True);
    REQUIRE(in.assumptions.size() == 1);
    CHECK(in.assumptions[0].subject == "n0");
    const auto axioms = assumptions_to_axioms(in);
    CHECK(axioms.size() == 2);
  }

  TEST_CASE("assumption on a missing node") {
    const auto in = parse_input("atom(A) assume(n4, mpc=true)");
    CHECK_THROWS_AS(KnowledgeBase(in.expr, assumptions_to_axioms(in)), UnknownSubject);
    CHECK_THROWS_AS(assumptions_to_axioms(parse_input("atom(A) assume(root, mpc=true)")),
                    UnknownSubject);
  }

  TEST_CASE("poset references go through the loader") {
    auto shared = std::make_shared<const SpectralPoset>(
        std::vector<PrimeNode>{{"x", ExtNat(1), {}, TriState::True, TriState::Unknown}}, std::vector<Cover>{});
    ParseOptions options;
    std::string seen;
    options.poset_loader = [&](const std::string& ref) {
      seen = ref;
      return shared;
    };
    const auto e = parse_expr("atom(A, poset=\"some file.json\")", options);
    CHECK(seen == "some file.json");
    CHECK(e.as_atom()->poset == shared);
    CHECK(print_expr(e) == "atom(A, poset=\"some file.json\")");
  }

  TEST_CASE("canonical printing") {
    CHECK(print_expr(parse_expr("tensor( field(td=2 ,kind = general) ,field(td=5))")) ==
          "tensor(field(td=2), field(td=5))");
    CHECK(print_expr(parse_expr("field(td=1, finite_sep=true, kind=general)")) ==
          "field(td=1, finite_sep=true)");
    CHECK(print_expr(AlgebraExpr::atom("two words")) == "atom(\"two words\")");
  }

  TEST_CASE("round trip on generated expressions") {
    std::mt19937 rng(5150);
    for (int i = 0; i < 150; ++i) {
      const auto e = oracle::random_expr(rng, 4);
      const std::string text = print_expr(e);
      INFO(text);
      const auto back = parse_expr(text);
      CHECK(back == e);
      CHECK(print_expr(back) == text);
    }
  }
}
