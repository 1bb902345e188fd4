#include "spectra/rules.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "spectra/dimension.hpp"

namespace spectra {

namespace {

using P = PropertyKind;

// Catalog. Order is the application order inside a pass.
const RuleRef kR23{"R-2.3", "Prop 2.3, \"integral ring extension. If $T$\""};
const RuleRef kR25{"R-2.5", "Prop 2.5, \"Let $A$ be a one-dimensional ring\""};
const RuleRef kR22b{"R-2.2b", "Remark 2.2(b), \"satisfies MPC for any multiplicative\""};
const RuleRef kR22c{"R-2.2c", "Remark 2.2(c), \"satisfies MPC for all integers\""};
const RuleRef kRLoc{"R-loc", "Section 2, \"then so is $A_S$\""};
const RuleRef kR31a{"R-3.1a", "Prop 3.1(a), \"satisfying LO and GD, and $D$ satisfies MPC\""};
const RuleRef kR31b{"R-3.1b", "Prop 3.1(b), \"then $A$ and $B$ each satisfy MPC\""};
const RuleRef kR33{"R-3.3",
                   "Thm 3.3, \"Let $k$ be an algebraically closed\" (base field configured "
                   "algebraically closed)"};
const RuleRef kR34{"R-3.4", "Thm 3.4, \"are integrally closed domains that\""};
const RuleRef kR34r{"R-3.4r", "Remark after Thm 3.4, \"If $K_s\\subseteq A$ and $L_s\\subseteq B$\""};
const RuleRef kR36{"R-3.6", "Prop 3.6, \"purely inseparable field extension\""};
const RuleRef kR37{"R-3.7", "Lemma 3.7, \"is an S-ring, for every integer\""};
const RuleRef kR38{"R-3.8", "Lemma 3.8, \"either $A$ is an S-ring\""};
const RuleRef kR39{"R-3.9", "Thm 3.9, \"is an S-ring if and only\""};
const RuleRef kR39r{"R-3.9r",
                    "Remark after Thm 3.9, \"remains true without the MPC hypothesis if we "
                    "substitute $(P_2)$\""};
const RuleRef kR41{"R-4.1", "Prop 4.1, \"If both $A$ and $B$ are LFD\""};
const RuleRef kR42{"R-4.2", "Lemma 4.2, \"LFD if and only if either\""};
const RuleRef kR43{"R-4.3", "Prop 4.3, \"is a strong S-ring (resp., catenarian)\""};
const RuleRef kR43f{"R-4.3:family",
                    "Prop 4.3, \"is a strong S-ring (resp., catenarian)\" (axiom on the "
                    "localization read as holding for every localization)"};
const RuleRef kR44{"R-4.4", "Prop 4.4, \"then $A$ is a strong S-ring\""};
const RuleRef kR45{"R-4.5", "Prop 4.5, \"a strong S-ring (resp., stably\""};
const RuleRef kR46{"R-4.6", "Prop 4.6, \"contains a separable algebraic closure\""};
const RuleRef kR47{"R-4.7", "Thm 4.7, \"integral closure $A^{\\prime}$ of\""};
const RuleRef kR48{"R-4.8", "Thm 4.8, \"an LFD Pr\\\"ufer domain\""};
const RuleRef kR49{"R-4.9", "Thm 4.9, \"is a stably strong S-ring\""};
const RuleRef kR410{"R-4.10", "Cor 4.10, \"K\\otimes _kL$ is universally catenarian\""};
const RuleRef kR411{"R-4.11", "Cor 4.11, \"a one-dimensional $k$-algebra\""};
const RuleRef kR412{"R-4.12", "Prop 4.12, \"a two-dimensional $k$-algebra\""};
const RuleRef kR413{"R-4.13", "Thm 4.13, \"Assume that $[L:k(B)]<\\infty$\""};
const RuleRef kR414{"R-4.14", "Prop 4.14, \"purely transcendental field extension\""};
const RuleRef kRDimTd{"R-dim-td", "Section 2, \"$\\dim(A)\\leq t.d.(A)$ for any ring\""};
const RuleRef kRDimLfd{"R-dim-lfd",
                       "Section 1, \"locally finite-dimensional (LFD for short)\"; every height "
                       "is bounded by a finite dim"};
const RuleRef kRDomainRtd{"R-domain-rtd",
                          "definition: the only minimal prime of a domain is (0), so min_rtd = td"};
const RuleRef kRPolyDomain{"R-poly-domain",
                           "Remark 2.2 proof, \"the minimal prime ideals of $A[X_1,...,X_n]$ "
                           "are of the form $p[X_1,...,X_n]$\""};
const RuleRef kRPolySss{"R-poly-sss",
                        "Section 1, \"the polynomial ring $A[X_1,...,X_n]$ is a strong S-ring "
                        "for each positive integer $n$\""};
const RuleRef kRPolyUc{"R-poly-uc",
                       "Section 1, \"universally catenarian if $A[X_1,...,X_n]$ is catenarian\""};
const RuleRef kRPolyCat{"R-poly-cat", "definition: POLY_RING_CATENARIAN means A[X] is catenarian"};
const RuleRef kRPolyTd{"R-poly-td",
                       "Section 2, \"t.d.(A)={\\rm sup}\" over primes; each residue domain "
                       "gains the n indeterminates"};
const RuleRef kRPolyRtd{"R-poly-rtd",
                        "Remark 2.2 proof, \"the minimal prime ideals of $A[X_1,...,X_n]$ are "
                        "of the form $p[X_1,...,X_n]$\""};
const RuleRef kRDimFields{"R-dim-fields",
                          "Lemma 4.2 proof, \"$\\dim(K\\otimes_kL)={\\rm min}(t.d.( K:k),t.d.( "
                          "L:k))$\""};
const RuleRef kRDimAfPair{"R-dim-af-pair",
                          "Section 5, \"min(\\dim (A)+t.d.(R:k),t.d.(A:k)+\\dim(R))\" [26, "
                          "Theorem 3.8]"};
const RuleRef kRDimAfGeneral{"R-dim-af-general",
                             "Section 5, \"\\dim (A\\otimes _kR)=D(t.d.(A:k),\\dim (A),R)\" "
                             "[26, Theorem 3.7]"};

struct Side {
  TriState holds = TriState::Unknown;
  std::optional<FactId> fact;
  std::string what;
};

Side either(Side a, Side b) {
  if (a.holds == TriState::True) return a;
  if (b.holds == TriState::True) return b;
  return {kleene_or(a.holds, b.holds), std::nullopt, a.what + " or " + b.what};
}

struct AfSource {
  AFSummary summary;
  std::vector<FactId> facts;
};

class Pass {
 public:
  Pass(KnowledgeBase& kb, bool diagnose, std::set<BlockedRule>& blocked)
      : kb_(kb), diagnose_(diagnose), blocked_(blocked) {}

  bool changed() const { return changed_; }

  void run() {
    for (std::size_t i = 0; i < kb_.node_count(); ++i) {
      const NodeId n{i};
      dim_td(n);
      one_dimensional(n);
      const AlgebraExpr& e = kb_.node(n);
      if (e.as_poly()) poly_rules(n);
      if (e.as_loc()) loc_rules(n);
      if (e.as_tensor()) tensor_rules(n);
      dimension_rules(n);
    }
  }

 private:
  std::string lbl(NodeId n) const { return kb_.label(n); }

  Side prop(NodeId n, PropertyKind p) const {
    return {kb_.value(n, p), kb_.fact_for(n, p), lbl(n) + " " + to_string(p)};
  }

  Side td_finite(NodeId n) const {
    const NatInterval td = kb_.quantity(n, Quantity::Td);
    TriState v = TriState::Unknown;
    if (td.hi().is_finite()) v = TriState::True;
    if (td.lo().is_inf()) v = TriState::False;
    return {v, kb_.fact_for(n, Quantity::Td), lbl(n) + " td finite"};
  }

  Side dim_is(NodeId n, unsigned d) const {
    const NatInterval dim = kb_.quantity(n, Quantity::Dim);
    TriState v = TriState::Unknown;
    if (dim == NatInterval::exactly(d)) v = TriState::True;
    if (!dim.contains(ExtNat(d))) v = TriState::False;
    return {v, kb_.fact_for(n, Quantity::Dim), lbl(n) + " dim = " + std::to_string(d)};
  }

  Side field_td(NodeId n) const {
    return {TriState::True, kb_.fact_for(n, Quantity::Td), lbl(n) + " td"};
  }

  // All sides must hold. Unknown sides are reported during diagnosis.
  bool sides_hold(const RuleRef& r, NodeId subject, const std::string& conclusion,
                  bool conclusion_open, const std::vector<Side>& sides,
                  std::vector<FactId>& facts) {
    std::vector<std::string> missing;
    for (const Side& s : sides) {
      if (s.holds == TriState::False) return false;
      if (s.holds == TriState::Unknown) missing.push_back(s.what);
      if (s.fact) facts.push_back(*s.fact);
    }
    if (missing.empty()) return true;
    if (diagnose_ && conclusion_open) {
      blocked_.insert({std::string(r.id), lbl(subject), conclusion, missing});
    }
    return false;
  }

  void implies(const RuleRef& r, std::vector<Literal> premises, Literal conclusion,
               const std::vector<Side>& sides = {}) {
    std::vector<FactId> facts;
    const bool open = kb_.value(conclusion.subject, conclusion.property) == TriState::Unknown;
    const std::string what = lbl(conclusion.subject) + " " + to_string(conclusion.property);
    if (!sides_hold(r, conclusion.subject, what, open, sides, facts)) return;
    changed_ |= kb_.apply_implication(r, premises, conclusion, facts);
    if (!diagnose_ || !open) return;
    std::vector<std::string> missing;
    for (const Literal& l : premises) {
      const TriState v = kb_.value(l.subject, l.property);
      if (v == TriState::False) return;
      if (v == TriState::Unknown) missing.push_back(lbl(l.subject) + " " + to_string(l.property));
    }
    if (!missing.empty()) blocked_.insert({std::string(r.id), lbl(conclusion.subject), what, missing});
  }

  void equivalent(const RuleRef& r, std::vector<Literal> members, const std::vector<Side>& sides = {}) {
    std::vector<FactId> facts;
    bool open = false;
    std::string what;
    for (const Literal& m : members) {
      open |= kb_.value(m.subject, m.property) == TriState::Unknown;
      if (!what.empty()) what += " <=> ";
      what += lbl(m.subject) + " " + to_string(m.property);
    }
    if (!sides_hold(r, members.front().subject, what, open, sides, facts)) return;
    changed_ |= kb_.apply_equivalence(r, members, facts);
  }

  void assert_true(const RuleRef& r, NodeId n, PropertyKind p, TriState v, std::vector<FactId> premises) {
    changed_ |= kb_.assert_property(n, p, v, {std::string(r.id), std::string(r.citation), std::move(premises)});
  }

  void tighten(const RuleRef& r, NodeId n, Quantity q, const NatInterval& bound,
               std::vector<FactId> premises) {
    if (premises.empty()) {
      // A bound that holds by construction alone.
      changed_ |= kb_.tighten(n, q, bound,
                              {std::string(kAxiomRule), "structural: " + std::string(r.id), {}});
      return;
    }
    changed_ |= kb_.tighten(n, q, bound, {std::string(r.id), std::string(r.citation), std::move(premises)});
  }

  // -------------------------------------------------------------------------

  void dim_td(NodeId n) {
    const auto td_fact = kb_.fact_for(n, Quantity::Td);
    const auto dim_fact = kb_.fact_for(n, Quantity::Dim);
    const NatInterval td = kb_.quantity(n, Quantity::Td);
    const NatInterval dim = kb_.quantity(n, Quantity::Dim);
    if (td_fact && td.hi().is_finite() && dim.hi() > td.hi()) {
      tighten(kRDimTd, n, Quantity::Dim, NatInterval::at_most(td.hi()), {*td_fact});
    }
    if (dim_fact && dim.lo() > td.lo()) {
      tighten(kRDimTd, n, Quantity::Td, NatInterval::at_least(dim.lo()), {*dim_fact});
    }
    if (kb_.value(n, P::Domain) == TriState::True) {
      const auto dom = *kb_.fact_for(n, P::Domain);
      const NatInterval rtd = kb_.quantity(n, Quantity::MinResidueTd);
      const NatInterval td_now = kb_.quantity(n, Quantity::Td);
      if (!td_now.contains(rtd)) {
        std::vector<FactId> prem{dom};
        if (auto f = kb_.fact_for(n, Quantity::Td)) prem.push_back(*f);
        tighten(kRDomainRtd, n, Quantity::MinResidueTd, td_now, prem);
      }
      if (!kb_.quantity(n, Quantity::MinResidueTd).contains(kb_.quantity(n, Quantity::Td))) {
        std::vector<FactId> prem{dom, *kb_.fact_for(n, Quantity::MinResidueTd)};
        tighten(kRDomainRtd, n, Quantity::Td, kb_.quantity(n, Quantity::MinResidueTd), prem);
      }
    }
    const auto dim_now = kb_.fact_for(n, Quantity::Dim);
    if (dim_now && kb_.quantity(n, Quantity::Dim).hi().is_finite()) {
      assert_true(kRDimLfd, n, P::LFD, TriState::True, {*dim_now});
    }
  }

  void one_dimensional(NodeId n) {
    const Side dim1 = dim_is(n, 1);
    if (dim1.holds == TriState::False) return;
    equivalent(kR25, {{n, P::StablyStrongS}, {n, P::StrongS}, {n, P::P2}}, {dim1});
    if (dim1.holds == TriState::True) {
      equivalent(kR25,
                 {{n, P::StablyStrongS}, {n, P::UnivCatenarian}, {n, P::PolyRingCatenarian},
                  {n, P::SRing}},
                 {dim1, prop(n, P::MPC)});
    }
  }

  void poly_rules(NodeId n) {
    const auto& poly = *kb_.node(n).as_poly();
    const NodeId a = kb_.children(n).front();
    implies(kR22c, {{a, P::MPC}}, {n, P::MPC});
    implies(kR31a, {{n, P::MPC}}, {a, P::MPC});
    implies(kR37, {{a, P::MPC}}, {n, P::SRing});
    equivalent(kRPolyDomain, {{a, P::Domain}, {n, P::Domain}});
    implies(kRPolySss, {{a, P::StablyStrongS}}, {n, P::StablyStrongS});
    implies(kRPolyUc, {{a, P::UnivCatenarian}}, {n, P::UnivCatenarian});
    if (poly.n == 1) equivalent(kRPolyCat, {{a, P::PolyRingCatenarian}, {n, P::Catenarian}});

    const NatInterval plus_n = NatInterval::exactly(poly.n);
    std::vector<FactId> td_prem;
    if (auto f = kb_.fact_for(a, Quantity::Td)) td_prem.push_back(*f);
    const NatInterval td = interval_add(kb_.quantity(a, Quantity::Td), plus_n);
    if (!td.contains(kb_.quantity(n, Quantity::Td))) tighten(kRPolyTd, n, Quantity::Td, td, td_prem);
    std::vector<FactId> rtd_prem;
    if (auto f = kb_.fact_for(a, Quantity::MinResidueTd)) rtd_prem.push_back(*f);
    const NatInterval rtd = interval_add(kb_.quantity(a, Quantity::MinResidueTd), plus_n);
    if (!rtd.contains(kb_.quantity(n, Quantity::MinResidueTd))) {
      tighten(kRPolyRtd, n, Quantity::MinResidueTd, rtd, rtd_prem);
    }
  }

  void loc_rules(NodeId n) {
    const NodeId inner = kb_.children(n).front();
    implies(kR22b, {{inner, P::MPC}}, {n, P::MPC});
    implies(kRLoc, {{inner, P::SRing}}, {n, P::SRing});
    implies(kRLoc, {{inner, P::Catenarian}}, {n, P::Catenarian});
    if (!kb_.node(inner).as_tensor()) return;
    for (PropertyKind p : {P::StrongS, P::Catenarian}) {
      implies(kR43, {{inner, p}}, {n, p});
      const auto f = kb_.fact_for(n, p);
      if (f && kb_.value(n, p) == TriState::True &&
          kb_.fact(*f).provenance.rule_id == kAxiomRule) {
        assert_true(kR43f, inner, p, TriState::True, {*f});
      }
    }
  }

  void tensor_rules(NodeId t) {
    const auto kids = kb_.children(t);
    const NodeId l = kids[0];
    const NodeId r = kids[1];
    const auto* lf = kb_.node(l).as_field();
    const auto* rf = kb_.node(r).as_field();

    if (lf && rf) fields_pair(t, l, r, *lf, *rf);

    implies(kR31b, {{t, P::MPC}}, {l, P::MPC});
    implies(kR31b, {{t, P::MPC}}, {r, P::MPC});
    if (kb_.base_field().algebraically_closed == TriState::True) {
      implies(kR33, {{l, P::MPC}, {r, P::MPC}}, {t, P::MPC});
    }
    implies(kR34, {{l, P::Domain}, {l, P::IntegrallyClosed}, {r, P::Domain}, {r, P::IntegrallyClosed}},
            {t, P::MPC});
    implies(kR34r,
            {{l, P::Domain}, {l, P::QfSepClosureContained}, {r, P::Domain}, {r, P::QfSepClosureContained}},
            {t, P::MPC});

    if (lf) field_side(t, l, *lf, r);
    if (rf) field_side(t, r, *rf, l);

    // Four-way disjunction, and its (P2) form without MPC.
    const TriState s_ring = eval_tensor_s_ring(kb_, t, SRingMode::SRing);
    if (is_decisive(s_ring)) {
      assert_true(kR39, t, P::SRing, s_ring, s_ring_premises(t, l, r, SRingMode::SRing));
    } else if (diagnose_ && kb_.value(t, P::SRing) == TriState::Unknown &&
               kb_.value(t, P::MPC) == TriState::Unknown) {
      blocked_.insert({std::string(kR39.id), lbl(t), lbl(t) + " S_RING", {lbl(t) + " MPC"}});
    }
    const TriState p2 = eval_tensor_s_ring(kb_, t, SRingMode::P2);
    if (is_decisive(p2)) {
      assert_true(kR39r, t, P::P2, p2, s_ring_premises(t, l, r, SRingMode::P2));
    }

    // LFD descends to each factor.
    implies(kR41, {{t, P::LFD}}, {l, P::LFD});
    implies(kR41, {{t, P::LFD}}, {r, P::LFD});
    implies(kR41, {{l, P::LFD}, {r, P::LFD}}, {t, P::LFD}, {either(td_finite(l), td_finite(r))});
  }

  std::vector<FactId> s_ring_premises(NodeId t, NodeId l, NodeId r, SRingMode mode) const {
    std::vector<FactId> out;
    const PropertyKind p = mode == SRingMode::SRing ? P::SRing : P::P2;
    if (mode == SRingMode::SRing) out.push_back(*kb_.fact_for(t, P::MPC));
    for (NodeId x : {l, r}) {
      if (auto f = kb_.fact_for(x, p)) out.push_back(*f);
      if (auto f = kb_.fact_for(x, Quantity::MinResidueTd)) out.push_back(*f);
    }
    return out;
  }

  void fields_pair(NodeId t, NodeId l, NodeId r, const AlgebraExpr::FieldExt& lf,
                   const AlgebraExpr::FieldExt& rf) {
    const std::vector<FactId> tds = {*kb_.fact_for(l, Quantity::Td), *kb_.fact_for(r, Quantity::Td)};
    const ExtNat m = dim_tensor_fields(lf.td, rf.td);
    assert_true(kR42, t, P::LFD, tri(m.is_finite()), tds);
    if (m.is_finite()) assert_true(kR410, t, P::UnivCatenarian, TriState::True, tds);
    tighten(kRDimFields, t, Quantity::Dim, NatInterval::exactly(m), tds);
  }

  // `k` is a field factor of tensor `t`, `a` the other factor.
  void field_side(NodeId t, NodeId k, const AlgebraExpr::FieldExt& kf, NodeId a) {
    const Side ktd = field_td(k);
    const bool algebraic = is_algebraic(kf);
    const bool insep = kf.kind == FieldKind::PurelyInseparable;
    const PropertyKind four[] = {P::StrongS, P::StablyStrongS, P::Catenarian, P::UnivCatenarian};

    if (algebraic) {
      implies(kR23, {{t, P::StrongS}}, {a, P::StrongS}, {ktd});
      implies(kR23, {{t, P::StablyStrongS}}, {a, P::StablyStrongS}, {ktd});
    }
    if (insep) equivalent(kR36, {{t, P::MPC}, {a, P::MPC}}, {ktd});

    // Under tensor MPC: S-ring iff A is one or t.d.(K) >= 1.
    const Side mpc = prop(t, P::MPC);
    if (kf.td >= ExtNat(1)) {
      std::vector<FactId> f;
      if (sides_hold(kR38, t, lbl(t) + " S_RING", kb_.value(t, P::SRing) == TriState::Unknown,
                     {mpc, ktd}, f)) {
        assert_true(kR38, t, P::SRing, TriState::True, f);
      }
    } else {
      equivalent(kR38, {{t, P::SRing}, {a, P::SRing}}, {mpc, ktd});
    }

    if (algebraic) {
      implies(kR44, {{t, P::StrongS}}, {a, P::StrongS}, {ktd});
      implies(kR44, {{t, P::Catenarian}}, {a, P::Catenarian}, {ktd});
    }
    if (insep) {
      for (PropertyKind p : four) equivalent(kR45, {{t, p}, {a, p}}, {ktd});
    }
    if (algebraic) {
      const Side dom = prop(a, P::Domain);
      const Side sep = prop(a, P::SepClosureContained);
      for (PropertyKind p : four) equivalent(kR46, {{t, p}, {a, p}}, {ktd, dom, sep});
      implies(kR47, {{a, P::Domain}, {a, P::IntegralClosurePrufer}}, {t, P::StablyStrongS}, {ktd});
      implies(kR48, {{a, P::LFD}, {a, P::Prufer}, {a, P::Domain}}, {t, P::Catenarian}, {ktd});
    }
    if (kf.td.is_finite()) {
      implies(kR49, {{a, P::Noetherian}, {a, P::Domain}}, {t, P::StablyStrongS}, {ktd});
      implies(kR49, {{a, P::Noetherian}, {a, P::Domain}, {t, P::MPC}, {a, P::PolyRingCatenarian}},
              {t, P::UnivCatenarian}, {ktd});
    }
    if (algebraic) {
      const Side dim1 = dim_is(a, 1);
      if (dim1.holds != TriState::False) {
        equivalent(kR411, {{t, P::StablyStrongS}, {t, P::StrongS}, {a, P::StrongS}, {a, P::P2}},
                   {ktd, dim1});
        equivalent(kR411,
                   {{t, P::StablyStrongS}, {t, P::UnivCatenarian}, {t, P::PolyRingCatenarian},
                    {t, P::SRing}, {a, P::SRing}},
                   {ktd, dim1, mpc});
      }
      const Side dim2 = dim_is(a, 2);
      if (dim2.holds != TriState::False) {
        equivalent(kR412, {{t, P::StrongS}, {a, P::StrongS}}, {ktd, dim2, mpc});
        equivalent(kR412, {{t, P::Catenarian}, {a, P::Catenarian}}, {ktd, dim2, mpc});
      }
    }

    const Side finiteness = either(td_finite(a), td_finite(k));
    const Side lfd = prop(a, P::LFD);
    if (kf.kind == FieldKind::PurelyTranscendental) {
      implies(kR414, {{a, P::StablyStrongS}}, {t, P::StablyStrongS}, {ktd, lfd, finiteness});
      implies(kR414, {{a, P::UnivCatenarian}}, {t, P::UnivCatenarian}, {ktd, lfd, finiteness});
    }
    const Side sep_finite{sep_closure_finite(kf), std::nullopt,
                          lbl(k) + " [L:k(B)] finite"};
    implies(kR413, {{a, P::StablyStrongS}}, {t, P::StablyStrongS}, {ktd, sep_finite, lfd, finiteness});
    implies(kR413, {{a, P::UnivCatenarian}, {t, P::MPC}}, {t, P::UnivCatenarian},
            {ktd, sep_finite, lfd, finiteness});
  }

  // -------------------------------------------------------------------------
  // Krull dimension via Wadsworth's formulas.

  std::optional<AfSource> af_source(NodeId n) const {
    const AlgebraExpr& e = kb_.node(n);
    if (const auto* f = e.as_field()) {
      if (f->td.is_inf()) return std::nullopt;
      return AfSource{AFSummary(f->td, 0), {*kb_.fact_for(n, Quantity::Td)}};
    }
    if (const auto* p = e.as_poly()) {
      auto inner = af_source(kb_.children(n).front());
      if (!inner) return std::nullopt;
      return AfSource{AFSummary(inner->summary.td() + p->n, inner->summary.dim() + p->n),
                      inner->facts};
    }
    if (e.as_atom() && kb_.value(n, P::AFDomain) == TriState::True) {
      const auto td = kb_.quantity(n, Quantity::Td).exact();
      const auto dim = kb_.quantity(n, Quantity::Dim).exact();
      if (!td || !dim || td->is_inf() || *td < *dim) return std::nullopt;
      return AfSource{AFSummary(*td, *dim),
                      {*kb_.fact_for(n, P::AFDomain), *kb_.fact_for(n, Quantity::Td),
                       *kb_.fact_for(n, Quantity::Dim)}};
    }
    return std::nullopt;
  }

  const SpectralPoset* complete_poset(NodeId n) const {
    const auto* a = kb_.node(n).as_atom();
    if (!a || !a->poset || !a->poset->complete()) return nullptr;
    return a->poset.get();
  }

  // dim = D(td + extra, dim + extra, R) where R is the atom `r`.
  void af_general(NodeId subject, const AfSource& af, NodeId r, unsigned extra) {
    const SpectralPoset* poset = complete_poset(r);
    if (!poset) return;
    const ExtNat s = af.summary.td() + extra;
    const ExtNat d = af.summary.dim() + extra;
    std::vector<FactId> prem = af.facts;
    if (auto f = kb_.fact_for(r, Quantity::Dim)) prem.push_back(*f);
    try {
      const ExtNat dim = big_d(static_cast<unsigned>(s.value()), static_cast<unsigned>(d.value()),
                               *poset);
      tighten(kRDimAfGeneral, subject, Quantity::Dim, NatInterval::exactly(dim), prem);
    } catch (const MissingLabel& e) {
      if (diagnose_ && !kb_.quantity(subject, Quantity::Dim).is_exact()) {
        blocked_.insert({std::string(kRDimAfGeneral.id), lbl(subject), lbl(subject) + " dim",
                         {lbl(r) + " poset " + e.label()}});
      }
    }
  }

  void dimension_rules(NodeId n) {
    const AlgebraExpr& e = kb_.node(n);
    if (e.as_tensor()) {
      const auto kids = kb_.children(n);
      for (int flip = 0; flip < 2; ++flip) {
        const NodeId x = kids[flip];
        const NodeId y = kids[1 - flip];
        const auto ax = af_source(x);
        if (!ax) continue;
        if (flip == 0) {
          if (auto ay = af_source(y)) {
            std::vector<FactId> prem = ax->facts;
            prem.insert(prem.end(), ay->facts.begin(), ay->facts.end());
            tighten(kRDimAfPair, n, Quantity::Dim,
                    NatInterval::exactly(dim_tensor_af_pair(ax->summary, ay->summary)), prem);
          }
        }
        af_general(n, *ax, y, 0);
        if (const auto* py = kb_.node(y).as_poly()) {
          af_general(n, *ax, kb_.children(y).front(), py->n);
        }
      }
    }
    if (const auto* p = e.as_poly()) {
      const NodeId inner = kb_.children(n).front();
      if (kb_.node(inner).as_tensor()) {
        const auto kids = kb_.children(inner);
        for (int flip = 0; flip < 2; ++flip) {
          if (auto ax = af_source(kids[flip])) af_general(n, *ax, kids[1 - flip], p->n);
        }
      }
    }
  }

  KnowledgeBase& kb_;
  bool diagnose_;
  std::set<BlockedRule>& blocked_;
  bool changed_ = false;
};

void collect(const KnowledgeBase& kb, FactId id, Derivation& out) {
  const Fact& f = kb.fact(id);
  out.subject = kb.label(f.subject);
  out.target = to_string(f.target);
  if (const auto* t = std::get_if<TriState>(&f.value)) {
    out.value = to_string(*t);
  } else {
    out.value = std::get<NatInterval>(f.value).to_string();
  }
  out.rule_id = f.provenance.rule_id;
  out.citation = f.provenance.citation;
  for (FactId p : f.provenance.premises) {
    out.premises.emplace_back();
    collect(kb, p, out.premises.back());
  }
}

void render_into(const Derivation& d, int depth, std::ostringstream& os) {
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << d.subject << ' ' << d.target
     << " = " << d.value << "  [" << d.rule_id << "] " << d.citation << '\n';
  for (const auto& p : d.premises) render_into(p, depth + 1, os);
}

}  // namespace

const std::vector<RuleInfo>& rule_catalog() {
  static const std::vector<RuleInfo> catalog = [] {
    const std::pair<RuleRef, const char*> entries[] = {
        {kR23, "K algebraic field factor; tensor STRONG_S / STABLY_STRONG_S => A likewise"},
        {kR25, "dim = 1: STABLY_STRONG_S <=> STRONG_S <=> P2; with MPC also UNIV_CATENARIAN, "
               "POLY_RING_CATENARIAN, S_RING"},
        {kR22b, "loc(A): A MPC => loc MPC"},
        {kR22c, "poly(A, n): A MPC => poly MPC"},
        {kRLoc, "loc(A): A S_RING / CATENARIAN => loc likewise"},
        {kR31a, "poly(A, n): poly MPC => A MPC"},
        {kR31b, "tensor MPC => both factors MPC"},
        {kR33, "base field algebraically closed: both factors MPC => tensor MPC"},
        {kR34, "both factors integrally closed domains => tensor MPC"},
        {kR34r, "both factors domains containing the separable closure of k in their quotient "
                "fields => tensor MPC"},
        {kR36, "K purely inseparable: tensor MPC <=> A MPC"},
        {kR37, "A MPC => poly(A, n) S_RING"},
        {kR38, "K field, tensor MPC: tensor S_RING <=> A S_RING or td(K) >= 1"},
        {kR39, "tensor MPC: S_RING <=> four-way disjunction over factor S_RING and residue t.d."},
        {kR39r, "no MPC hypothesis: P2 <=> four-way disjunction over factor P2 and residue t.d."},
        {kR41, "tensor LFD => factors LFD; factors LFD and one td finite => tensor LFD"},
        {kR42, "two fields: tensor LFD <=> min td finite"},
        {kR43, "loc(tensor) inherits STRONG_S / CATENARIAN"},
        {kR43f, "axiom on loc(tensor) => tensor STRONG_S / CATENARIAN"},
        {kR44, "K algebraic: tensor STRONG_S / CATENARIAN => A likewise"},
        {kR45, "K purely inseparable: STRONG_S, STABLY_STRONG_S, CATENARIAN, UNIV_CATENARIAN "
               "transfer both ways"},
        {kR46, "K algebraic, A domain containing a separable closure of k: four-property "
               "equivalence"},
        {kR47, "K algebraic, A domain with Prufer integral closure => tensor STABLY_STRONG_S"},
        {kR48, "K algebraic, A LFD Prufer domain => tensor CATENARIAN"},
        {kR49, "A Noetherian domain, td(K) finite => tensor STABLY_STRONG_S; with tensor MPC and "
               "A[X] catenarian => UNIV_CATENARIAN"},
        {kR410, "two fields, min td finite => tensor UNIV_CATENARIAN"},
        {kR411, "K algebraic, dim A = 1: equivalence blocks (i)-(iv) and, under MPC, (v)-(viii)"},
        {kR412, "K algebraic, dim A = 2, tensor MPC: STRONG_S and CATENARIAN transfer both ways"},
        {kR413, "[L:k(B)] finite, A LFD, a td finite: STABLY_STRONG_S transfers; "
                "UNIV_CATENARIAN transfers under tensor MPC"},
        {kR414, "K purely transcendental, A LFD, a td finite: STABLY_STRONG_S and "
                "UNIV_CATENARIAN transfer"},
        {kRDimTd, "dim <= td"},
        {kRDimLfd, "dim finite => LFD"},
        {kRDomainRtd, "DOMAIN => min_rtd = td"},
        {kRPolyDomain, "poly(A, n) DOMAIN <=> A DOMAIN"},
        {kRPolySss, "A STABLY_STRONG_S => poly STABLY_STRONG_S"},
        {kRPolyUc, "A UNIV_CATENARIAN => poly UNIV_CATENARIAN"},
        {kRPolyCat, "poly(A, 1) CATENARIAN <=> A POLY_RING_CATENARIAN"},
        {kRPolyTd, "td(poly(A, n)) = td(A) + n"},
        {kRPolyRtd, "min_rtd(poly(A, n)) = min_rtd(A) + n"},
        {kRDimFields, "two fields: dim = min td"},
        {kRDimAfPair, "two AF-domains: dim = min(dim A + td B, td A + dim B)"},
        {kRDimAfGeneral, "AF-domain against an atom with a complete poset: dim = D(td, dim, R)"},
    };
    std::vector<RuleInfo> out;
    for (const auto& [ref, guard] : entries) {
      out.push_back({std::string(ref.id), std::string(ref.citation), guard});
    }
    return out;
  }();
  return catalog;
}

nlohmann::json rule_catalog_json() {
  nlohmann::json j = nlohmann::json::array();
  for (const RuleInfo& r : rule_catalog()) {
    j.push_back({{"rule_id", r.id}, {"citation", r.citation}, {"guard", r.guard}});
  }
  return j;
}

InferenceSummary infer(KnowledgeBase& kb) {
  InferenceSummary summary;
  const std::size_t before = kb.fact_count();
  std::set<BlockedRule> blocked;
  // Each pass either adds a fact or stops; the bound guards against a
  // non-monotone rule.
  const std::size_t limit = 64 + 4 * kb.node_count() * (kPropertyCount + 3 * 64);
  while (true) {
    ++summary.passes;
    Pass pass(kb, false, blocked);
    pass.run();
    if (!pass.changed()) break;
    if (summary.passes > limit) throw Error("inference did not reach a fixpoint");
  }
  Pass diagnosis(kb, true, blocked);
  diagnosis.run();
  if (diagnosis.changed()) throw Error("diagnostic pass derived new facts");
  summary.facts_added = kb.fact_count() - before;
  summary.blocked.assign(blocked.begin(), blocked.end());
  return summary;
}

TriState s_ring_disjunction(TriState a_s, TriState b_s, TriState a_td, TriState b_td) {
  return kleene_any({kleene_and(a_s, b_s), kleene_and(a_s, a_td), kleene_and(b_s, b_td),
                     kleene_and(a_td, b_td)});
}

TriState residue_td_at_least_one(const KnowledgeBase& kb, NodeId node) {
  const NatInterval rtd = kb.quantity(node, Quantity::MinResidueTd);
  if (rtd.lo() >= ExtNat(1)) return TriState::True;
  if (rtd.hi() < ExtNat(1)) return TriState::False;
  return TriState::Unknown;
}

TriState eval_tensor_s_ring(const KnowledgeBase& kb, NodeId tensor, SRingMode mode) {
  if (!kb.node(tensor).as_tensor()) throw NotATensor(kb.label(tensor) + " is not a tensor product");
  if (mode == SRingMode::SRing && kb.value(tensor, PropertyKind::MPC) != TriState::True) {
    return TriState::Unknown;
  }
  const auto kids = kb.children(tensor);
  const PropertyKind p = mode == SRingMode::SRing ? PropertyKind::SRing : PropertyKind::P2;
  return s_ring_disjunction(kb.value(kids[0], p), kb.value(kids[1], p),
                            residue_td_at_least_one(kb, kids[0]),
                            residue_td_at_least_one(kb, kids[1]));
}

Derivation explain_fact(const KnowledgeBase& kb, FactId id) {
  Derivation d;
  collect(kb, id, d);
  return d;
}

Derivation explain(const KnowledgeBase& kb, NodeId subject, PropertyKind property) {
  const auto id = kb.fact_for(subject, property);
  if (!id) {
    throw NoDerivation(kb.label(subject) + " " + to_string(property) + " is unknown");
  }
  return explain_fact(kb, *id);
}

Derivation explain(const KnowledgeBase& kb, NodeId subject, Quantity quantity) {
  const auto id = kb.fact_for(subject, quantity);
  if (!id) throw NoDerivation(kb.label(subject) + " " + to_string(quantity) + " is unconstrained");
  return explain_fact(kb, *id);
}

void to_json(nlohmann::json& j, const Derivation& d) {
  j = {{"subject", d.subject},   {"target", d.target},     {"value", d.value},
       {"rule_id", d.rule_id},   {"citation", d.citation}, {"premises", d.premises}};
}

std::string render(const Derivation& d) {
  std::ostringstream os;
  render_into(d, 0, os);
  return os.str();
}

bool provenance_grounded(const KnowledgeBase& kb) {
  // Premises always precede the fact citing them, so a single forward sweep decides it.
  std::vector<bool> grounded(kb.fact_count(), false);
  for (const Fact& f : kb.facts()) {
    bool ok = true;
    if (f.provenance.rule_id == kAxiomRule) {
      ok = f.provenance.premises.empty();
    } else {
      ok = !f.provenance.premises.empty();
      for (FactId p : f.provenance.premises) {
        ok = ok && p.value < f.id.value && grounded[p.value];
      }
    }
    grounded[f.id.value] = ok;
  }
  return std::all_of(grounded.begin(), grounded.end(), [](bool b) { return b; });
}

}  // namespace spectra
