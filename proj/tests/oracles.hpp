#pragma once

// Reference implementations used only by tests. They share no code with the
// library: chains are enumerated explicitly, down-sets are walked by hand and
// the tensor S-ring disjunction is evaluated by two Boolean evaluations.

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "spectra/algebra.hpp"
#include "spectra/dsl.hpp"
#include "spectra/poset.hpp"

namespace oracle {

struct RawPoset {
  int n = 0;
  std::vector<std::pair<int, int>> covers;  // (lower, upper)
};

inline std::string node_name(int i) { return "v" + std::to_string(i); }

/// Random strict order on up to `max_nodes` nodes, given by its covers.
inline RawPoset random_poset(std::mt19937& rng, int max_nodes = 12) {
  std::uniform_int_distribution<int> size(1, max_nodes);
  const int n = size(rng);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const double density = coin(rng) * 0.5;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  // less[a][b]: a < b, closed transitively.
  std::vector<std::vector<bool>> less(static_cast<std::size_t>(n),
                                      std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (coin(rng) < density) less[static_cast<std::size_t>(perm[i])][static_cast<std::size_t>(perm[j])] = true;
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (less[i][k] && less[k][j]) less[i][j] = true;
      }
    }
  }
  RawPoset p{n, {}};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!less[i][j]) continue;
      bool direct = true;
      for (int k = 0; k < n && direct; ++k) direct = !(less[i][k] && less[k][j]);
      if (direct) p.covers.emplace_back(i, j);
    }
  }
  return p;
}

/// Unlabeled node; every flag stays Unknown.
inline spectra::PrimeNode bare_node(std::string id) {
  spectra::PrimeNode n;
  n.id = std::move(id);
  return n;
}

inline spectra::SpectralPoset to_poset(const RawPoset& raw) {
  std::vector<spectra::PrimeNode> nodes;
  for (int i = 0; i < raw.n; ++i) nodes.push_back(bare_node(node_name(i)));
  std::vector<spectra::Cover> covers;
  for (auto [a, b] : raw.covers) covers.emplace_back(node_name(a), node_name(b));
  return spectra::SpectralPoset(nodes, covers);
}

inline std::vector<int> uppers(const RawPoset& p, int v) {
  std::vector<int> out;
  for (auto [a, b] : p.covers) {
    if (a == v) out.push_back(b);
  }
  return out;
}

inline std::vector<int> lowers(const RawPoset& p, int v) {
  std::vector<int> out;
  for (auto [a, b] : p.covers) {
    if (b == v) out.push_back(a);
  }
  return out;
}

/// Every saturated chain from lo to hi, as explicit node lists.
inline std::vector<std::vector<int>> all_chains(const RawPoset& p, int lo, int hi) {
  std::vector<std::vector<int>> out;
  std::vector<int> path{lo};
  std::function<void(int)> walk = [&](int v) {
    if (v == hi) {
      out.push_back(path);
      return;
    }
    for (int u : uppers(p, v)) {
      path.push_back(u);
      walk(u);
      path.pop_back();
    }
  };
  walk(lo);
  return out;
}

inline std::set<std::size_t> chain_lengths(const RawPoset& p, int lo, int hi) {
  std::set<std::size_t> out;
  for (const auto& c : all_chains(p, lo, hi)) out.insert(c.size() - 1);
  return out;
}

inline bool comparable_leq(const RawPoset& p, int lo, int hi) { return !all_chains(p, lo, hi).empty(); }

inline std::vector<int> minimal(const RawPoset& p) {
  std::vector<int> out;
  for (int v = 0; v < p.n; ++v) {
    if (lowers(p, v).empty()) out.push_back(v);
  }
  return out;
}

inline std::vector<int> maximal(const RawPoset& p) {
  std::vector<int> out;
  for (int v = 0; v < p.n; ++v) {
    if (uppers(p, v).empty()) out.push_back(v);
  }
  return out;
}

/// Height as the longest enumerated chain from any minimal node.
inline std::size_t height(const RawPoset& p, int v) {
  std::size_t best = 0;
  for (int m : minimal(p)) {
    for (const auto& c : all_chains(p, m, v)) best = std::max(best, c.size() - 1);
  }
  return best;
}

/// Q1 by brute force: all saturated chains between comparable pairs have
/// length equal to the height difference.
inline bool q1(const RawPoset& p) {
  for (int lo = 0; lo < p.n; ++lo) {
    for (int hi = 0; hi < p.n; ++hi) {
      const auto lengths = chain_lengths(p, lo, hi);
      if (lengths.empty()) continue;
      const std::size_t expected = height(p, hi) - height(p, lo);
      if (lengths.size() != 1 || *lengths.begin() != expected) return false;
    }
  }
  return true;
}

/// MPC: each maximal node's down-set contains exactly one minimal node.
inline bool mpc(const RawPoset& p) {
  for (int top : maximal(p)) {
    std::set<int> seen;
    std::vector<int> stack{top};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (!seen.insert(v).second) continue;
      for (int l : lowers(p, v)) stack.push_back(l);
    }
    int minimal_count = 0;
    for (int v : seen) minimal_count += lowers(p, v).empty() ? 1 : 0;
    if (minimal_count != 1) return false;
  }
  return true;
}

/// Tensor S-ring disjunction over possibly unknown inputs. The formula is
/// monotone, so it is True iff it holds with every unknown read as false
/// and False iff it fails with every unknown read as true.
enum class V { F, T, U };

inline V four_conditions(V a_s, V b_s, V a_td, V b_td) {
  auto f = [](bool as, bool bs, bool at, bool bt) {
    return (as && bs) || (as && at) || (bs && bt) || (at && bt);
  };
  auto low = [](V v) { return v == V::T; };
  auto high = [](V v) { return v != V::F; };
  if (f(low(a_s), low(b_s), low(a_td), low(b_td))) return V::T;
  if (!f(high(a_s), high(b_s), high(a_td), high(b_td))) return V::F;
  return V::U;
}

inline spectra::TriState to_tri(V v) {
  switch (v) {
    case V::T: return spectra::TriState::True;
    case V::F: return spectra::TriState::False;
    default: return spectra::TriState::Unknown;
  }
}

// ---------------------------------------------------------------------------
// Random expressions for parser round trips and engine properties.

inline spectra::AlgebraExpr random_expr(std::mt19937& rng, int depth) {
  using spectra::AlgebraExpr;
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
  std::uniform_int_distribution<int> small(0, 3);
  const auto props = spectra::all_properties();
  switch (pick(rng)) {
    case 0: {
      AlgebraExpr::Atom a;
      static const char* names[] = {"A", "B", "R", "V", "weird name", "x_1"};
      a.name = names[std::uniform_int_distribution<int>(0, 5)(rng)];
      const int flags = small(rng);
      for (int i = 0; i < flags; ++i) {
        const auto p = props[std::uniform_int_distribution<std::size_t>(0, props.size() - 1)(rng)];
        const spectra::TriState v = small(rng) % 3 == 0   ? spectra::TriState::Unknown
                                    : small(rng) % 2 == 0 ? spectra::TriState::True
                                                          : spectra::TriState::False;
        a.flags.push_back({p, v});
      }
      if (small(rng) == 0) {
        const spectra::ExtNat lo(static_cast<std::uint64_t>(small(rng)));
        const spectra::ExtNat hi = small(rng) == 0 ? spectra::ExtNat::inf()
                                                   : spectra::ExtNat(lo.value() + static_cast<std::uint64_t>(small(rng)));
        a.quantities.push_back({spectra::Quantity::Td, spectra::NatInterval(lo, hi)});
      }
      if (small(rng) == 0) {
        a.quantities.push_back({spectra::Quantity::Dim,
                                spectra::NatInterval::exactly(static_cast<std::uint64_t>(small(rng)))});
      }
      return AlgebraExpr::atom(std::move(a));
    }
    case 1: {
      static const spectra::FieldKind kinds[] = {
          spectra::FieldKind::PurelyTranscendental, spectra::FieldKind::SeparableAlgebraicFinite,
          spectra::FieldKind::Algebraic, spectra::FieldKind::PurelyInseparable,
          spectra::FieldKind::General};
      const auto kind = kinds[std::uniform_int_distribution<int>(0, 4)(rng)];
      const bool algebraic = kind == spectra::FieldKind::SeparableAlgebraicFinite ||
                             kind == spectra::FieldKind::Algebraic ||
                             kind == spectra::FieldKind::PurelyInseparable;
      spectra::ExtNat td = algebraic ? spectra::ExtNat(0)
                           : small(rng) == 0 ? spectra::ExtNat::inf()
                                             : spectra::ExtNat(static_cast<std::uint64_t>(small(rng)));
      const spectra::TriState fsc = small(rng) == 0 ? spectra::TriState::True : spectra::TriState::Unknown;
      return AlgebraExpr::field(td, kind, fsc);
    }
    case 2: return AlgebraExpr::poly(random_expr(rng, depth - 1), static_cast<unsigned>(1 + small(rng)));
    case 3: return AlgebraExpr::loc(random_expr(rng, depth - 1));
    default: return AlgebraExpr::tensor(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
  }
}

}  // namespace oracle
