#include "spectra/poset.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "spectra/error.hpp"

namespace spectra {

std::string to_string(PosetProperty p) {
  switch (p) {
    case PosetProperty::P1: return "P1";
    case PosetProperty::P2: return "P2";
    case PosetProperty::Q1: return "Q1";
    case PosetProperty::Q2: return "Q2";
    case PosetProperty::MPC: return "MPC";
    case PosetProperty::Catenarian: return "CATENARIAN";
    case PosetProperty::SRing: return "S_RING";
  }
  return "?";
}

PosetProperty parse_poset_property(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (auto p : {PosetProperty::P1, PosetProperty::P2, PosetProperty::Q1,
                 PosetProperty::Q2, PosetProperty::MPC, PosetProperty::Catenarian,
                 PosetProperty::SRing}) {
    if (to_string(p) == up) return p;
  }
  throw InvalidArgument("unknown poset property '" + std::string(name) + "'");
}

SpectralPoset::SpectralPoset(std::vector<PrimeNode> nodes, std::vector<Cover> covers,
                             std::optional<ExtNat> algebra_td, bool complete,
                             PosetLimits limits)
    : nodes_(std::move(nodes)),
      covers_(std::move(covers)),
      algebra_td_(algebra_td),
      complete_(complete) {
  if (nodes_.empty()) throw InvalidPoset("a spectral poset needs at least one node");
  if (nodes_.size() > limits.max_nodes) {
    throw PosetTooLarge("poset has " + std::to_string(nodes_.size()) +
                        " nodes; the limit is " + std::to_string(limits.max_nodes));
  }
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes_[i].id.empty()) throw InvalidPoset("node with empty id");
    if (!by_id_.emplace(nodes_[i].id, i).second) {
      throw InvalidPoset("duplicate node id '" + nodes_[i].id + "'");
    }
    if (nodes_[i].poly_heights.count(0) != 0) {
      throw InvalidPoset("node '" + nodes_[i].id +
                         "': poly_heights keys start at s = 1");
    }
  }

  up_.assign(n, {});
  down_.assign(n, {});
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [lo, hi] : covers_) {
    auto a = by_id_.find(lo);
    auto b = by_id_.find(hi);
    if (a == by_id_.end() || b == by_id_.end()) {
      throw InvalidPoset("cover (" + lo + ", " + hi + ") names an unknown node");
    }
    if (a->second == b->second) throw InvalidPoset("cover (" + lo + ", " + hi + ") is a loop");
    if (!seen.emplace(a->second, b->second).second) {
      throw InvalidPoset("duplicate cover (" + lo + ", " + hi + ")");
    }
    up_[a->second].push_back(b->second);
    down_[b->second].push_back(a->second);
  }

  // Kahn's algorithm: topological order or a cycle.
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i) indeg[i] = down_[i].size();
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (indeg[i] == 0) order.push_back(i);
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t v : up_[order[k]]) {
      if (--indeg[v] == 0) order.push_back(v);
    }
  }
  if (order.size() != n) throw InvalidPoset("cover relation contains a cycle");

  reach_.assign(n, std::vector<bool>(n, false));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t v = *it;
    reach_[v][v] = true;
    for (std::size_t w : up_[v]) {
      for (std::size_t x = 0; x < n; ++x) {
        if (reach_[w][x]) reach_[v][x] = true;
      }
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b : up_[a]) {
      for (std::size_t c : up_[a]) {
        if (c != b && reach_[c][b]) {
          throw InvalidPoset("cover (" + nodes_[a].id + ", " + nodes_[b].id +
                             ") is implied by transitivity through '" +
                             nodes_[c].id + "'");
        }
      }
    }
  }

  heights_.assign(n, 0);
  for (std::size_t v : order) {
    for (std::size_t w : up_[v]) heights_[w] = std::max(heights_[w], heights_[v] + 1);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const PrimeNode& node = nodes_[i];
    const ExtNat h(heights_[i]);
    for (const auto& [s, ph] : node.poly_heights) {
      if (ph < h) {
        throw InvalidPoset("node '" + node.id + "': poly_heights(" + std::to_string(s) +
                           ") = " + ph.to_string() + " is below its height " +
                           h.to_string());
      }
    }
    if (algebra_td_ && algebra_td_->is_finite() && node.residue_td &&
        node.residue_td->is_finite() && *algebra_td_ < h + *node.residue_td) {
      throw InvalidPoset("node '" + node.id + "': height + residue_td exceeds algebra_td");
    }
  }

  // A height-one prime whose minimal primes all have S-domain residues has
  // ht(P[X]) = 1; reject labels that say otherwise.
  for (std::size_t i = 0; i < n; ++i) {
    if (heights_[i] != 1) continue;
    auto it = nodes_[i].poly_heights.find(1);
    if (it == nodes_[i].poly_heights.end() || it->second == ExtNat(1)) continue;
    bool all_s = true;
    for (std::size_t m = 0; m < n; ++m) {
      if (down_[m].empty() && reach_[m][i] && m != i &&
          nodes_[m].residue_is_s_domain != TriState::True) {
        all_s = false;
      }
    }
    if (all_s) {
      throw InvalidPoset("node '" + nodes_[i].id +
                         "': minimal primes below it have S-domain residues, so "
                         "poly_heights(1) must be 1");
    }
  }
}

std::size_t SpectralPoset::index(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) throw UnknownNode("no node '" + std::string(id) + "' in poset");
  return it->second;
}

const PrimeNode& SpectralPoset::node(std::string_view id) const { return nodes_[index(id)]; }

bool SpectralPoset::contains(std::string_view id) const {
  return by_id_.count(std::string(id)) != 0;
}

bool SpectralPoset::leq(std::string_view a, std::string_view b) const {
  return reach_[index(a)][index(b)];
}

std::vector<std::string> SpectralPoset::minimal_nodes() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (down_[i].empty()) out.push_back(nodes_[i].id);
  }
  return out;
}

std::vector<std::string> SpectralPoset::maximal_nodes() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (up_[i].empty()) out.push_back(nodes_[i].id);
  }
  return out;
}

ExtNat SpectralPoset::height(std::string_view id) const { return ExtNat(heights_[index(id)]); }

ExtNat SpectralPoset::krull_dim() const {
  return ExtNat(*std::max_element(heights_.begin(), heights_.end()));
}

bool SpectralPoset::is_mpc() const {
  const std::size_t n = nodes_.size();
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t minimal_below = 0;
    for (std::size_t m = 0; m < n; ++m) {
      if (down_[m].empty() && reach_[m][v]) ++minimal_below;
    }
    if (minimal_below > 1) return false;
  }
  return true;
}

std::set<std::size_t> SpectralPoset::saturated_chain_lengths(std::string_view lo,
                                                             std::string_view hi) const {
  const std::size_t a = index(lo);
  const std::size_t b = index(hi);
  if (!reach_[a][b]) {
    throw NotComparable("'" + std::string(lo) + "' is not below '" + std::string(hi) + "'");
  }
  std::vector<std::optional<std::set<std::size_t>>> memo(nodes_.size());
  std::function<const std::set<std::size_t>&(std::size_t)> to_top =
      [&](std::size_t v) -> const std::set<std::size_t>& {
    if (memo[v]) return *memo[v];
    std::set<std::size_t> lengths;
    if (v == b) {
      lengths.insert(0);
    } else {
      for (std::size_t w : up_[v]) {
        if (!reach_[w][b]) continue;
        for (std::size_t l : to_top(w)) lengths.insert(l + 1);
      }
    }
    memo[v] = std::move(lengths);
    return *memo[v];
  };
  return to_top(a);
}

std::vector<long> SpectralPoset::relative_heights(std::size_t root) const {
  std::vector<long> h(nodes_.size(), -1);
  h[root] = 0;
  // Heights only grow along covers, so relax in global height order.
  std::vector<std::size_t> order(nodes_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return heights_[x] < heights_[y]; });
  for (std::size_t v : order) {
    if (h[v] < 0) continue;
    for (std::size_t w : up_[v]) h[w] = std::max(h[w], h[v] + 1);
  }
  return h;
}

TriState SpectralPoset::check_p1() const {
  TriState acc = TriState::True;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (down_[i].empty()) acc = kleene_and(acc, nodes_[i].residue_is_s_domain);
  }
  return acc;
}

TriState SpectralPoset::check_p2() const {
  TriState acc = TriState::True;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (heights_[i] != 1) continue;
    auto it = nodes_[i].poly_heights.find(1);
    const TriState here = it == nodes_[i].poly_heights.end()
                              ? TriState::Unknown
                              : tri(it->second == ExtNat(1));
    acc = kleene_and(acc, here);
  }
  return acc;
}

TriState SpectralPoset::check_q1() const {
  for (std::size_t p = 0; p < nodes_.size(); ++p) {
    for (std::size_t q : up_[p]) {
      if (heights_[q] != heights_[p] + 1) return TriState::False;
    }
  }
  return TriState::True;
}

TriState SpectralPoset::check_q2() const {
  TriState acc = TriState::True;
  for (std::size_t m = 0; m < nodes_.size(); ++m) {
    if (!down_[m].empty()) continue;
    const auto h = relative_heights(m);
    TriState here = TriState::True;
    for (std::size_t p = 0; p < nodes_.size() && here == TriState::True; ++p) {
      if (h[p] < 0) continue;
      for (std::size_t q : up_[p]) {
        if (h[q] != h[p] + 1) {
          here = TriState::False;
          break;
        }
      }
    }
    // An asserted residue flag can only refute; the stored order decides otherwise.
    if (nodes_[m].residue_is_catenarian == TriState::False) here = TriState::False;
    acc = kleene_and(acc, here);
  }
  return acc;
}

TriState SpectralPoset::check_property(PosetProperty prop) const {
  switch (prop) {
    case PosetProperty::P1: return check_p1();
    case PosetProperty::P2: return check_p2();
    case PosetProperty::Q1: return check_q1();
    case PosetProperty::Q2: return check_q2();
    case PosetProperty::MPC: return tri(is_mpc());
    case PosetProperty::Catenarian: return kleene_and(tri(is_mpc()), check_q1());
    case PosetProperty::SRing: return kleene_and(tri(is_mpc()), check_p1());
  }
  return TriState::Unknown;
}

std::optional<ExtNat> SpectralPoset::min_residue_td() const {
  std::optional<ExtNat> best;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!down_[i].empty()) continue;
    if (!nodes_[i].residue_td) return std::nullopt;
    best = best ? ext_min(*best, *nodes_[i].residue_td) : *nodes_[i].residue_td;
  }
  return best;
}

std::string SpectralPoset::to_dot() const {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream os;
  os << "digraph spectrum {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    os << "  " << quote(nodes_[i].id) << " [label=" << quote(nodes_[i].id + " (ht " +
                                                             std::to_string(heights_[i]) + ")")
       << "];\n";
  }
  for (const auto& [lo, hi] : covers_) os << "  " << quote(lo) << " -> " << quote(hi) << ";\n";
  os << "}\n";
  return os.str();
}

void to_json(nlohmann::json& j, const PrimeNode& n) {
  j = nlohmann::json::object();
  j["id"] = n.id;
  j["residue_td"] = n.residue_td ? nlohmann::json(*n.residue_td) : nlohmann::json(nullptr);
  nlohmann::json ph = nlohmann::json::object();
  for (const auto& [s, h] : n.poly_heights) ph[std::to_string(s)] = h;
  j["poly_heights"] = ph;
  j["residue_is_s_domain"] = n.residue_is_s_domain;
  j["residue_is_catenarian"] = n.residue_is_catenarian;
}

void to_json(nlohmann::json& j, const SpectralPoset& p) {
  j = nlohmann::json::object();
  j["nodes"] = p.nodes();
  nlohmann::json covers = nlohmann::json::array();
  for (const auto& [lo, hi] : p.covers()) covers.push_back({lo, hi});
  j["covers"] = covers;
  j["algebra_td"] = p.algebra_td() ? nlohmann::json(*p.algebra_td()) : nlohmann::json(nullptr);
  j["complete"] = p.complete();
}

SpectralPoset poset_from_json(const nlohmann::json& j, PosetLimits limits) {
  try {
    std::vector<PrimeNode> nodes;
    for (const auto& jn : j.at("nodes")) {
      PrimeNode n;
      n.id = jn.at("id").get<std::string>();
      if (jn.contains("residue_td") && !jn["residue_td"].is_null()) {
        n.residue_td = jn["residue_td"].get<ExtNat>();
      }
      if (jn.contains("poly_heights")) {
        for (const auto& [key, value] : jn["poly_heights"].items()) {
          auto s = parse_ext_nat(key);
          if (!s || s->is_inf()) throw InvalidPoset("bad poly_heights key '" + key + "'");
          n.poly_heights[static_cast<unsigned>(s->value())] = value.get<ExtNat>();
        }
      }
      if (jn.contains("residue_is_s_domain")) {
        n.residue_is_s_domain = jn["residue_is_s_domain"].get<TriState>();
      }
      if (jn.contains("residue_is_catenarian")) {
        n.residue_is_catenarian = jn["residue_is_catenarian"].get<TriState>();
      }
      nodes.push_back(std::move(n));
    }
    std::vector<Cover> covers;
    if (j.contains("covers")) {
      for (const auto& c : j["covers"]) {
        if (!c.is_array() || c.size() != 2) throw InvalidPoset("cover must be a pair: " + c.dump());
        covers.emplace_back(c[0].get<std::string>(), c[1].get<std::string>());
      }
    }
    std::optional<ExtNat> td;
    if (j.contains("algebra_td") && !j["algebra_td"].is_null()) td = j["algebra_td"].get<ExtNat>();
    const bool complete = j.value("complete", false);
    return SpectralPoset(std::move(nodes), std::move(covers), td, complete, limits);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidPoset(std::string("malformed poset JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidPoset(std::string("malformed poset JSON: ") + e.what());
  }
}

SpectralPoset load_poset(const std::filesystem::path& path, PosetLimits limits) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open poset file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidPoset("'" + path.string() + "': " + e.what());
  }
  return poset_from_json(j, limits);
}

}  // namespace spectra
