#include <random>

#include "criteria.hpp"
#include "doctest.h"
#include "spectra/dsl.hpp"
#include "spectra/error.hpp"
#include "spectra/rules.hpp"

using namespace spectra;
using P = PropertyKind;

namespace {

struct Inferred {
  KnowledgeBase kb;
  InferenceSummary summary;
};

Inferred run(const std::string& text, BaseField base = {}) {
  const ParsedInput in = parse_input(text);
  KnowledgeBase kb(in.expr, assumptions_to_axioms(in), base);
  InferenceSummary s = infer(kb);
  return {std::move(kb), std::move(s)};
}

// Rule id without a ":contrapositive" style suffix.
std::string rule_of(const KnowledgeBase& kb, NodeId n, P p) {
  const auto [v, prov] = kb.get_fact(n, p);
  if (!prov) return "";
  return prov->rule_id.substr(0, prov->rule_id.find(':'));
}

}  // namespace

TEST_SUITE("rules") {
  TEST_CASE("purely inseparable extension transfers MPC") {
    const auto r = run("tensor(field(td=0, kind=insep), atom(A, mpc=true))");
    CHECK(r.kb.value(r.kb.root(), P::MPC) == TriState::True);
    CHECK(rule_of(r.kb, r.kb.root(), P::MPC) == "R-3.6");
  }

  TEST_CASE("purely transcendental extension transfers stably strong S") {
    const auto r = run(
        "tensor(field(td=1, kind=pure_trans), atom(A, lfd=true, td=2, stably_strong_s=true))");
    CHECK(r.kb.value(r.kb.root(), P::StablyStrongS) == TriState::True);
    CHECK(rule_of(r.kb, r.kb.root(), P::StablyStrongS) == "R-4.14");
  }

  TEST_CASE("two fields of finite degree give a universally catenarian ring") {
    const auto r = run("tensor(field(td=2), field(td=5))");
    const NodeId t = r.kb.root();
    CHECK(r.kb.value(t, P::UnivCatenarian) == TriState::True);
    CHECK(rule_of(r.kb, t, P::UnivCatenarian) == "R-4.10");
    CHECK(r.kb.value(t, P::StablyStrongS) == TriState::True);
    CHECK(r.kb.value(t, P::LFD) == TriState::True);
    CHECK(r.kb.quantity(t, Quantity::Dim) == NatInterval::exactly(2));
    const Derivation d = explain(r.kb, t, P::UnivCatenarian);
    CHECK(d.rule_id == "R-4.10");
    CHECK(d.citation.find("Cor 4.10") != std::string::npos);
    CHECK_FALSE(d.premises.empty());
  }

  TEST_CASE("noetherian domain under a finite transcendental extension") {
    const auto r = run(
        "tensor(field(td=1, kind=pure_trans), atom(A, noetherian=true, domain=true, td=3))");
    CHECK(r.kb.value(r.kb.root(), P::StablyStrongS) == TriState::True);
    CHECK(rule_of(r.kb, r.kb.root(), P::StablyStrongS) == "R-4.9");
  }

  TEST_CASE("polynomial ring over an MPC ring is an S-ring") {
    const auto r = run("poly(atom(A, mpc=true), 1)");
    const auto [v, prov] = r.kb.get_fact(r.kb.root(), P::SRing);
    CHECK(v == TriState::True);
    REQUIRE(prov);
    CHECK(prov->rule_id == "R-3.7");
    CHECK(prov->citation.find("Lemma 3.7") != std::string::npos);
    CHECK(r.kb.value(r.kb.root(), P::MPC) == TriState::True);
  }

  TEST_CASE("contradictory input raises") {
    CHECK_THROWS_AS(run("atom(A, domain=true, domain=false)"), ContradictionError);
    CHECK_THROWS_AS(run("tensor(field(td=0, kind=insep), atom(A, mpc=false)) assume(n0, mpc=true)"),
                    ContradictionError);
  }

  TEST_CASE("biconditionals propagate False backwards") {
    auto r = run("tensor(field(td=0, kind=insep), atom(A)) assume(n0, mpc=false)");
    CHECK(r.kb.value(NodeId{2}, P::MPC) == TriState::False);
    CHECK(rule_of(r.kb, NodeId{2}, P::MPC) == "R-3.6");

    r = run("tensor(atom(A, mpc=true), atom(B)) assume(n0, mpc=false)", BaseField{TriState::True});
    CHECK(r.kb.value(NodeId{2}, P::MPC) == TriState::False);

    r = run("tensor(field(td=0, kind=insep), atom(A)) assume(n0, catenarian=false)");
    CHECK(r.kb.value(NodeId{2}, P::Catenarian) == TriState::False);

    r = run("tensor(field(td=0, kind=alg), atom(A, dim=2)) assume(n0, mpc=true, strong_s=false)");
    CHECK(r.kb.value(NodeId{2}, P::StrongS) == TriState::False);
  }

  TEST_CASE("factor without MPC refutes tensor MPC") {
    const auto r = run("tensor(atom(A, mpc=false), atom(B))");
    CHECK(r.kb.value(r.kb.root(), P::MPC) == TriState::False);
    CHECK(rule_of(r.kb, r.kb.root(), P::MPC) == "R-3.1b");
  }

  TEST_CASE("integrally closed domains give MPC") {
    const auto r = run(
        "tensor(atom(A, domain=true, integrally_closed=true), atom(B, domain=true, integrally_closed=true))");
    CHECK(r.kb.value(r.kb.root(), P::MPC) == TriState::True);
    CHECK(rule_of(r.kb, r.kb.root(), P::MPC) == "R-3.4");
  }

  TEST_CASE("S-ring evaluation examples") {
    const auto both = run("tensor(atom(A, s_ring=true), atom(B, s_ring=true)) assume(n0, mpc=true)");
    CHECK(eval_tensor_s_ring(both.kb, both.kb.root()) == TriState::True);
    CHECK(both.kb.value(both.kb.root(), P::SRing) == TriState::True);

    const auto td = run("tensor(atom(A, min_rtd=2), atom(B, min_rtd=1)) assume(n0, mpc=true)");
    CHECK(eval_tensor_s_ring(td.kb, td.kb.root()) == TriState::True);

    const auto none = run(
        "tensor(atom(A, s_ring=false, min_rtd=0), atom(B, s_ring=false, min_rtd=0)) assume(n0, mpc=true)");
    CHECK(eval_tensor_s_ring(none.kb, none.kb.root()) == TriState::False);
    CHECK(none.kb.value(none.kb.root(), P::SRing) == TriState::False);

    const auto no_mpc = run("tensor(atom(A, s_ring=true), atom(B, s_ring=true))");
    CHECK(eval_tensor_s_ring(no_mpc.kb, no_mpc.kb.root()) == TriState::Unknown);
    CHECK(eval_tensor_s_ring(no_mpc.kb, no_mpc.kb.root(), SRingMode::P2) == TriState::True);
    CHECK_THROWS_AS(eval_tensor_s_ring(no_mpc.kb, NodeId{1}), NotATensor);
  }

  TEST_CASE("S-ring grid agrees with the independent evaluation") {
    const auto o = criteria::s_ring_grid();
    INFO(o.detail);
    CHECK(o.ok);
  }

  TEST_CASE("disjunction helper over all inputs") {
    const std::vector<oracle::V> vs{oracle::V::T, oracle::V::F, oracle::V::U};
    for (auto a : vs) {
      for (auto b : vs) {
        for (auto c : vs) {
          for (auto d : vs) {
            CHECK(s_ring_disjunction(oracle::to_tri(a), oracle::to_tri(b), oracle::to_tri(c),
                                     oracle::to_tri(d)) ==
                  oracle::to_tri(oracle::four_conditions(a, b, c, d)));
          }
        }
      }
    }
  }

  TEST_CASE("explain") {
    const auto r = run("atom(A, noetherian=true)");
    const Derivation d = explain(r.kb, r.kb.root(), P::Noetherian);
    CHECK(d.rule_id == "axiom");
    CHECK(d.premises.empty());
    CHECK_THROWS_AS(explain(r.kb, r.kb.root(), P::Catenarian), NoDerivation);
    CHECK(render(d).find("axiom") != std::string::npos);
  }

  TEST_CASE("blocked rules are reported") {
    const auto r = run("tensor(field(td=1, kind=pure_trans), atom(A, stably_strong_s=true))");
    bool found = false;
    for (const auto& b : r.summary.blocked) found = found || b.rule_id == "R-4.14";
    CHECK(found);
  }

  TEST_CASE("engine properties") {
    const auto o = criteria::engine_properties(100, 77);
    INFO(o.detail);
    CHECK(o.ok);
  }

  TEST_CASE("second run adds nothing") {
    for (const auto& text : criteria::engine_pool()) {
      auto r = run(text);
      const std::size_t n = r.kb.fact_count();
      CHECK(infer(r.kb).facts_added == 0);
      CHECK(r.kb.fact_count() == n);
      CHECK(provenance_grounded(r.kb));
    }
  }

  TEST_CASE("catalog") {
    std::set<std::string> ids;
    for (const auto& r : rule_catalog()) {
      CHECK_FALSE(r.citation.empty());
      // Catalog rules quote their source; the few bookkeeping rules are definitions.
      CHECK((r.citation.find('"') != std::string::npos || r.citation.rfind("definition:", 0) == 0));
      ids.insert(r.id);
    }
    CHECK(ids.size() == rule_catalog().size());
    for (const char* id : {"R-2.3", "R-2.5", "R-2.2c", "R-3.1b", "R-3.3", "R-3.4", "R-3.6", "R-3.7",
                           "R-3.8", "R-3.9", "R-4.1", "R-4.2", "R-4.3", "R-4.4", "R-4.5", "R-4.6",
                           "R-4.7", "R-4.8", "R-4.9", "R-4.10", "R-4.11", "R-4.12", "R-4.13",
                           "R-4.14", "R-dim-td"}) {
      CHECK_MESSAGE(ids.count(id) == 1, id);
    }
  }
}
