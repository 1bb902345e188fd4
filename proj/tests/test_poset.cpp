#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spectra/corpus.hpp"
#include "spectra/error.hpp"
#include "spectra/poset.hpp"

using namespace spectra;

namespace {

const SpectralPoset& ex21() {
  static const Fixture f = load_fixture("ex-2.1");
  return *f.posets.at("main");
}

SpectralPoset chain(std::size_t n) {
  std::vector<PrimeNode> nodes;
  std::vector<Cover> covers;
  for (std::size_t i = 0; i < n; ++i) {
    PrimeNode p{"c" + std::to_string(i), std::nullopt, {}, TriState::True, TriState::True};
    p.poly_heights[1] = ExtNat(i);
    nodes.push_back(p);
    if (i > 0) covers.emplace_back("c" + std::to_string(i - 1), "c" + std::to_string(i));
  }
  return SpectralPoset(nodes, covers);
}

// Up-set of `root`, as a raw poset on its own.
oracle::RawPoset up_set(const oracle::RawPoset& p, int root) {
  std::vector<int> keep;
  for (int v = 0; v < p.n; ++v) {
    if (oracle::comparable_leq(p, root, v)) keep.push_back(v);
  }
  auto pos = [&](int v) {
    return static_cast<int>(std::find(keep.begin(), keep.end(), v) - keep.begin());
  };
  oracle::RawPoset out{static_cast<int>(keep.size()), {}};
  for (auto [a, b] : p.covers) {
    if (pos(a) < out.n && pos(b) < out.n) out.covers.emplace_back(pos(a), pos(b));
  }
  return out;
}

}  // namespace

TEST_SUITE("poset") {
  TEST_CASE("heights and dimension of the four-node example") {
    const auto& p = ex21();
    CHECK(p.height("Q'") == ExtNat(0));
    CHECK(p.height("P'") == ExtNat(0));
    CHECK(p.height("m'") == ExtNat(1));
    CHECK(p.height("M'") == ExtNat(2));
    CHECK(p.krull_dim() == ExtNat(2));
    CHECK_FALSE(p.is_mpc());
    CHECK(p.saturated_chain_lengths("Q'", "M'") == std::set<std::size_t>{1});
    CHECK(p.saturated_chain_lengths("P'", "M'") == std::set<std::size_t>{2});
    CHECK_THROWS_AS(p.height("nope"), UnknownNode);
    CHECK_THROWS_AS(p.saturated_chain_lengths("Q'", "P'"), NotComparable);
  }

  TEST_CASE("the four-node example separates the chain conditions") {
    const auto& p = ex21();
    CHECK(p.check_property(PosetProperty::P2) == TriState::True);
    CHECK(p.check_property(PosetProperty::Q2) == TriState::True);
    CHECK(p.check_property(PosetProperty::P1) == TriState::False);
    CHECK(p.check_property(PosetProperty::Q1) == TriState::False);
    CHECK(p.check_property(PosetProperty::MPC) == TriState::False);
    CHECK(p.check_property(PosetProperty::Catenarian) == TriState::False);
    CHECK(p.check_property(PosetProperty::SRing) == TriState::False);
  }

  TEST_CASE("three-node chain of the dimension example") {
    const Fixture f = load_fixture("ex-5.1");
    const auto& a = *f.posets.at("A");
    CHECK(a.height("p") == ExtNat(1));
    CHECK(a.krull_dim() == ExtNat(2));
    CHECK(a.is_mpc());
  }

  TEST_CASE("small structural cases") {
    const SpectralPoset one({oracle::bare_node("x")}, {});
    CHECK(one.height("x") == ExtNat(0));
    CHECK(one.krull_dim() == ExtNat(0));
    CHECK(one.is_mpc());
    CHECK(one.saturated_chain_lengths("x", "x") == std::set<std::size_t>{0});

    const SpectralPoset c = chain(3);
    CHECK(c.krull_dim() == ExtNat(2));
    for (PosetProperty prop : {PosetProperty::P1, PosetProperty::P2, PosetProperty::Q1,
                               PosetProperty::Q2, PosetProperty::MPC,
                               PosetProperty::Catenarian, PosetProperty::SRing}) {
      CHECK_MESSAGE(c.check_property(prop) == TriState::True, to_string(prop));
    }

    oracle::RawPoset two_chains{4, {{0, 1}, {2, 3}}};
    CHECK(oracle::to_poset(two_chains).is_mpc());
  }

  TEST_CASE("missing labels give unknown") {
    const SpectralPoset p({oracle::bare_node("a"), oracle::bare_node("b")}, {{"a", "b"}});
    CHECK(p.check_property(PosetProperty::P2) == TriState::Unknown);
    CHECK(p.check_property(PosetProperty::P1) == TriState::Unknown);
    CHECK(p.check_property(PosetProperty::SRing) == TriState::Unknown);
    CHECK(p.check_property(PosetProperty::Q1) == TriState::True);
  }

  TEST_CASE("a non-catenarian residue at a minimal prime refutes Q2") {
    PrimeNode bottom = oracle::bare_node("a");
    bottom.residue_is_catenarian = TriState::False;
    const SpectralPoset p({bottom, oracle::bare_node("b")}, {{"a", "b"}});
    CHECK(p.check_property(PosetProperty::Q1) == TriState::True);
    CHECK(p.check_property(PosetProperty::Q2) == TriState::False);
  }

  TEST_CASE("constructor rejects malformed input") {
    auto node = [](std::string id) { return oracle::bare_node(std::move(id)); };
    CHECK_THROWS_AS(SpectralPoset({}, {}), InvalidPoset);
    CHECK_THROWS_AS(SpectralPoset({node("a"), node("b")}, {{"a", "b"}, {"b", "a"}}), InvalidPoset);
    CHECK_THROWS_AS(SpectralPoset({node("a"), node("b"), node("c")},
                                  {{"a", "b"}, {"b", "c"}, {"a", "c"}}),
                    InvalidPoset);
    CHECK_THROWS_AS(SpectralPoset({node("a"), node("a")}, {}), InvalidPoset);
    CHECK_THROWS_AS(SpectralPoset({node("a")}, {{"a", "z"}}), InvalidPoset);

    PrimeNode low = node("a");
    PrimeNode high = node("b");
    high.poly_heights[1] = ExtNat(0);  // below the node's own height
    CHECK_THROWS_AS(SpectralPoset({low, high}, {{"a", "b"}}), InvalidPoset);

    PrimeNode big = node("b");
    big.residue_td = ExtNat(3);
    CHECK_THROWS_AS(SpectralPoset({low, big}, {{"a", "b"}}, ExtNat(3)), InvalidPoset);

    std::vector<PrimeNode> many;
    for (int i = 0; i < 5; ++i) many.push_back(node("n" + std::to_string(i)));
    CHECK_THROWS_AS(SpectralPoset(many, {}, std::nullopt, false, PosetLimits{4}), PosetTooLarge);
  }

  TEST_CASE("json round trip") {
    const auto& p = ex21();
    nlohmann::json j = p;
    const SpectralPoset back = poset_from_json(j);
    CHECK(back.nodes() == p.nodes());
    CHECK(back.covers() == p.covers());
    CHECK(nlohmann::json(back) == j);
  }

  TEST_CASE("random posets agree with brute-force oracles") {
    std::mt19937 rng(20240611);
    int disagreements = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const oracle::RawPoset raw = oracle::random_poset(rng, 12);
      const SpectralPoset p = oracle::to_poset(raw);
      const bool q1 = oracle::q1(raw);
      const bool mpc = oracle::mpc(raw);
      disagreements += (p.check_property(PosetProperty::Q1) == tri(q1)) ? 0 : 1;
      disagreements += (p.is_mpc() == mpc) ? 0 : 1;
      disagreements += (p.check_property(PosetProperty::MPC) == tri(mpc)) ? 0 : 1;
      disagreements += (p.check_property(PosetProperty::Catenarian) == tri(q1 && mpc)) ? 0 : 1;

      bool q2 = true;
      for (int m : oracle::minimal(raw)) q2 = q2 && oracle::q1(up_set(raw, m));
      disagreements += (p.check_property(PosetProperty::Q2) == tri(q2)) ? 0 : 1;

      std::size_t dim = 0;
      for (int v = 0; v < raw.n; ++v) {
        const std::size_t h = oracle::height(raw, v);
        dim = std::max(dim, h);
        disagreements += (p.height(oracle::node_name(v)) == ExtNat(h)) ? 0 : 1;
        for (int w = 0; w < raw.n; ++w) {
          const auto lengths = oracle::chain_lengths(raw, v, w);
          if (lengths.empty()) {
            disagreements += p.leq(oracle::node_name(v), oracle::node_name(w)) ? 1 : 0;
            continue;
          }
          const auto got = p.saturated_chain_lengths(oracle::node_name(v), oracle::node_name(w));
          disagreements += got == lengths ? 0 : 1;
          if (q1) disagreements += got.size() == 1 ? 0 : 1;
        }
      }
      disagreements += p.krull_dim() == ExtNat(dim) ? 0 : 1;
    }
    CHECK(disagreements == 0);
  }

  TEST_CASE("height grows along covers, by one exactly when Q1 holds there") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      const oracle::RawPoset raw = oracle::random_poset(rng, 10);
      const SpectralPoset p = oracle::to_poset(raw);
      bool all_tight = true;
      for (auto [a, b] : raw.covers) {
        const ExtNat ha = p.height(oracle::node_name(a));
        const ExtNat hb = p.height(oracle::node_name(b));
        REQUIRE(hb >= ha + 1);
        all_tight = all_tight && hb == ha + 1;
      }
      CHECK(p.check_property(PosetProperty::Q1) == tri(all_tight));
    }
  }

  TEST_CASE("P1 never holds without P2 on consistent labels") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> coin(0, 2);
    int p1_true = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const oracle::RawPoset raw = oracle::random_poset(rng, 10);
      std::vector<PrimeNode> nodes;
      std::vector<TriState> sdom(static_cast<std::size_t>(raw.n));
      for (int v = 0; v < raw.n; ++v) {
        sdom[static_cast<std::size_t>(v)] = coin(rng) == 0 ? TriState::False : TriState::True;
      }
      for (int v = 0; v < raw.n; ++v) {
        PrimeNode n = oracle::bare_node(oracle::node_name(v));
        if (oracle::lowers(raw, v).empty()) n.residue_is_s_domain = sdom[static_cast<std::size_t>(v)];
        const std::size_t h = oracle::height(raw, v);
        bool below_all_s = true;
        for (int m : oracle::minimal(raw)) {
          if (oracle::comparable_leq(raw, m, v)) {
            below_all_s = below_all_s && sdom[static_cast<std::size_t>(m)] == TriState::True;
          }
        }
        // An S-domain residue keeps height-one primes height one after adjoining X.
        if (h == 1) n.poly_heights[1] = below_all_s ? ExtNat(1) : ExtNat(1 + static_cast<std::uint64_t>(coin(rng) % 2));
        else n.poly_heights[1] = ExtNat(h + static_cast<std::uint64_t>(coin(rng) % 2));
        nodes.push_back(n);
      }
      std::vector<Cover> covers;
      for (auto [a, b] : raw.covers) covers.emplace_back(oracle::node_name(a), oracle::node_name(b));
      const SpectralPoset p(nodes, covers);
      if (p.check_property(PosetProperty::P1) == TriState::True) {
        ++p1_true;
        CHECK(p.check_property(PosetProperty::P2) == TriState::True);
      }
    }
    CHECK(p1_true > 20);
  }
}
