#include "spectra/corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "spectra/dimension.hpp"
#include "spectra/dsl.hpp"
#include "spectra/report.hpp"

#ifndef SPECTRA_CORPUS_DIR
#define SPECTRA_CORPUS_DIR "corpus"
#endif

namespace spectra {

namespace {

using json = nlohmann::json;

const SpectralPoset& poset_arg(const Fixture& f, const json& args) {
  const std::string key = args.value("poset", std::string("main"));
  auto it = f.posets.find(key);
  if (it == f.posets.end()) throw InvalidFixture("fixture has no poset '" + key + "'");
  return *it->second;
}

AFSummary af_arg(const json& j) {
  return AFSummary(j.at("td").get<ExtNat>(), j.at("dim").get<ExtNat>());
}

unsigned small(const json& j) {
  const auto v = j.get<std::uint64_t>();
  if (v > 1000) throw InvalidArgument("argument too large");
  return static_cast<unsigned>(v);
}

struct Evaluated {
  json actual;
  bool unknown = false;                 // the engine could not decide
  std::optional<std::string> rule_id;   // provenance of an inferred fact
};

class Runner {
 public:
  explicit Runner(const Fixture& f) : f_(f) {}

  Evaluated eval(const Expectation& e) {
    const json& a = e.args;
    if (e.op == "height") return {poset_arg(f_, a).height(a.at("node").get<std::string>())};
    if (e.op == "krull_dim") return {poset_arg(f_, a).krull_dim()};
    if (e.op == "is_mpc") return {poset_arg(f_, a).is_mpc()};
    if (e.op == "check_property") {
      const TriState v =
          poset_arg(f_, a).check_property(parse_poset_property(a.at("property").get<std::string>()));
      return {v, v == TriState::Unknown};
    }
    if (e.op == "saturated_chain_lengths") {
      const auto lengths = poset_arg(f_, a).saturated_chain_lengths(a.at("lo").get<std::string>(),
                                                                   a.at("hi").get<std::string>());
      return {json(std::vector<std::size_t>(lengths.begin(), lengths.end()))};
    }
    if (e.op == "delta") {
      return {delta(small(a.at("s")), small(a.at("d")), poset_arg(f_, a),
                    a.at("node").get<std::string>())};
    }
    if (e.op == "big_d") return {big_d(small(a.at("s")), small(a.at("d")), poset_arg(f_, a))};
    if (e.op == "dim_tensor_fields") {
      return {dim_tensor_fields(a.at("a").get<ExtNat>(), a.at("b").get<ExtNat>())};
    }
    if (e.op == "dim_tensor_af_pair") return {dim_tensor_af_pair(af_arg(a.at("a")), af_arg(a.at("b")))};
    if (e.op == "dim_tensor_af_general") {
      return {dim_tensor_af_general(af_arg(a.at("a")), poset_arg(f_, a))};
    }
    if (e.op == "infer") return infer_op(a);
    throw InvalidFixture("unknown operation '" + e.op + "'");
  }

 private:
  const KnowledgeBase& kb(const std::string& key) {
    auto it = analyses_.find(key);
    if (it != analyses_.end()) return it->second->kb;
    auto text = f_.exprs.find(key);
    if (text == f_.exprs.end()) throw InvalidFixture("fixture has no expression '" + key + "'");
    AnalyzeOptions options;
    options.base_field = f_.base_field;
    options.parse.poset_loader = [this](const std::string& ref) {
      auto p = f_.posets.find(ref);
      if (p == f_.posets.end()) throw InvalidFixture("fixture has no poset '" + ref + "'");
      return p->second;
    };
    auto analysis = std::make_unique<Analysis>(run_analysis(text->second, options));
    return analyses_.emplace(key, std::move(analysis)).first->second->kb;
  }

  Evaluated infer_op(const json& a) {
    const KnowledgeBase& k = kb(a.value("expr", std::string("main")));
    const NodeId subject = k.parse_label(a.value("subject", std::string("n0")));
    if (a.contains("property")) {
      const std::string name = a.at("property").get<std::string>();
      const auto p = parse_property(name);
      if (!p) throw InvalidFixture("unknown property '" + name + "'");
      Evaluated out{k.value(subject, *p), k.value(subject, *p) == TriState::Unknown};
      if (auto f = k.fact_for(subject, *p)) out.rule_id = k.fact(*f).provenance.rule_id;
      return out;
    }
    const std::string name = a.at("quantity").get<std::string>();
    const auto q = parse_quantity(name);
    if (!q) throw InvalidFixture("unknown quantity '" + name + "'");
    const NatInterval v = k.quantity(subject, *q);
    Evaluated out{v, !v.is_exact()};
    if (auto f = k.fact_for(subject, *q)) {
      // Report the rule that produced the bound, not the bookkeeping intersection.
      const Fact* fact = &k.fact(*f);
      while (fact->provenance.rule_id == "interval-intersect") {
        fact = &k.fact(fact->provenance.premises.back());
      }
      out.rule_id = fact->provenance.rule_id;
    }
    return out;
  }

  const Fixture& f_;
  std::map<std::string, std::unique_ptr<Analysis>> analyses_;
};

// Brings the expected value into the shape of the actual one.
json normalize_expected(const std::string& op, const json& expected, const json& args) {
  if (op == "check_property") return expected.get<TriState>();
  if (op == "infer") {
    if (args.contains("property")) return expected.get<TriState>();
    return expected.get<NatInterval>();
  }
  if (op == "is_mpc") return expected.get<bool>();
  if (op == "saturated_chain_lengths") {
    auto v = expected.get<std::vector<std::size_t>>();
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }
  return expected.get<ExtNat>();
}

ExpectationLevel parse_level(const std::string& s) {
  if (s == "derivable") return ExpectationLevel::Derivable;
  if (s == "documented") return ExpectationLevel::Documented;
  throw InvalidFixture("unknown expectation level '" + s + "'");
}

std::string level_name(ExpectationLevel l) {
  return l == ExpectationLevel::Derivable ? "derivable" : "documented";
}

}  // namespace

std::string to_string(ExpectationStatus s) {
  switch (s) {
    case ExpectationStatus::Pass: return "pass";
    case ExpectationStatus::Fail: return "fail";
    case ExpectationStatus::DocumentedUnderivable: return "documented, underivable";
  }
  return "?";
}

bool FixtureReport::ok() const {
  return std::none_of(results.begin(), results.end(),
                      [](const auto& r) { return r.status == ExpectationStatus::Fail; });
}

std::filesystem::path default_corpus_dir() {
  if (const char* env = std::getenv("SPECTRA_CORPUS_DIR"); env && *env) return env;
  return SPECTRA_CORPUS_DIR;
}

std::vector<std::string> list_fixtures(const std::filesystem::path& dir) {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(entry.path().stem().string());
    }
  }
  if (ec) throw UnknownFixture("cannot read corpus directory " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end());
  return out;
}

Fixture fixture_from_json(const json& j, const PosetLimits& limits) {
  Fixture f;
  try {
    f.name = j.at("name").get<std::string>();
    f.title = j.value("title", std::string());
    if (j.contains("posets")) {
      for (const auto& [key, pj] : j.at("posets").items()) {
        f.posets[key] = std::make_shared<const SpectralPoset>(poset_from_json(pj, limits));
      }
    }
    if (j.contains("exprs")) {
      for (const auto& [key, text] : j.at("exprs").items()) f.exprs[key] = text.get<std::string>();
    }
    f.base_field.algebraically_closed = j.value("base_field_alg_closed", TriState::Unknown);
    std::set<std::string> ids;
    for (const json& ej : j.at("expectations")) {
      Expectation e;
      e.id = ej.at("id").get<std::string>();
      e.op = ej.at("op").get<std::string>();
      e.args = ej.value("args", json::object());
      e.expected = ej.at("expected");
      e.level = parse_level(ej.value("level", std::string("derivable")));
      e.locator = ej.at("locator").get<std::string>();
      if (e.locator.find('"') == std::string::npos) {
        throw InvalidFixture("expectation '" + e.id + "' has a locator without a quoted anchor");
      }
      if (!ids.insert(e.id).second) throw InvalidFixture("duplicate expectation id '" + e.id + "'");
      normalize_expected(e.op, e.expected, e.args);
      f.expectations.push_back(std::move(e));
    }
  } catch (const InvalidFixture&) {
    throw;
  } catch (const json::exception& e) {
    throw InvalidFixture("malformed fixture: " + std::string(e.what()));
  } catch (const Error& e) {
    throw InvalidFixture("invalid fixture: " + std::string(e.what()));
  }
  // Expressions must parse against the fixture's own posets.
  for (const auto& [key, text] : f.exprs) {
    ParseOptions options;
    options.poset_loader = [&f](const std::string& ref) {
      auto p = f.posets.find(ref);
      if (p == f.posets.end()) throw InvalidFixture("no poset named '" + ref + "'");
      return p->second;
    };
    try {
      parse_input(text, options);
    } catch (const Error& e) {
      throw InvalidFixture("expression '" + key + "': " + e.what());
    }
  }
  return f;
}

Fixture load_fixture(const std::string& name, const std::filesystem::path& dir,
                     const PosetLimits& limits) {
  const auto path = dir / (name + ".json");
  std::ifstream in(path);
  if (!in) throw UnknownFixture("no fixture named '" + name + "' in " + dir.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidFixture(path.string() + ": " + e.what());
  }
  Fixture f = fixture_from_json(j, limits);
  if (f.name != name) throw InvalidFixture(path.string() + ": name field is '" + f.name + "'");
  return f;
}

FixtureReport run_fixture(const Fixture& f) {
  FixtureReport report{f.name, {}};
  Runner runner(f);
  for (const Expectation& e : f.expectations) {
    ExpectationResult r{e, ExpectationStatus::Fail, nullptr, ""};
    try {
      const Evaluated got = runner.eval(e);
      r.actual = got.actual;
      const json expected = normalize_expected(e.op, e.expected, e.args);
      if (got.actual == expected) {
        r.status = ExpectationStatus::Pass;
        if (e.args.contains("via") && got.rule_id != e.args.at("via").get<std::string>()) {
          r.status = ExpectationStatus::Fail;
          r.detail = "derived via " + got.rule_id.value_or("nothing") + ", expected via " +
                     e.args.at("via").get<std::string>();
        }
      } else if (e.level == ExpectationLevel::Documented && got.unknown) {
        r.status = ExpectationStatus::DocumentedUnderivable;
        r.detail = "the rule base cannot decide this; recorded as ground truth";
      } else {
        r.detail = "expected " + expected.dump() + ", got " + got.actual.dump();
      }
    } catch (const std::exception& ex) {
      r.actual = nullptr;
      r.detail = std::string("error: ") + ex.what();
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

json to_json(const FixtureReport& r) {
  json results = json::array();
  for (const auto& x : r.results) {
    results.push_back({{"id", x.expectation.id},
                       {"op", x.expectation.op},
                       {"args", x.expectation.args},
                       {"level", level_name(x.expectation.level)},
                       {"expected", x.expectation.expected},
                       {"actual", x.actual},
                       {"status", to_string(x.status)},
                       {"detail", x.detail},
                       {"locator", x.expectation.locator}});
  }
  return {{"fixture", r.name}, {"ok", r.ok()}, {"results", results}};
}

std::string render_table(const std::vector<FixtureReport>& reports) {
  std::ostringstream os;
  std::size_t pass = 0, fail = 0, documented = 0;
  for (const auto& r : reports) {
    for (const auto& x : r.results) {
      os << std::left << std::setw(16) << r.name << std::setw(30) << x.expectation.id
         << std::setw(26) << to_string(x.status) << "expected " << x.expectation.expected.dump()
         << ", actual " << x.actual.dump();
      if (!x.detail.empty() && x.status == ExpectationStatus::Fail) os << "  (" << x.detail << ")";
      os << "\n";
      switch (x.status) {
        case ExpectationStatus::Pass: ++pass; break;
        case ExpectationStatus::Fail: ++fail; break;
        case ExpectationStatus::DocumentedUnderivable: ++documented; break;
      }
    }
  }
  os << "\n" << pass << " pass, " << fail << " fail, " << documented
     << " documented, underivable\n";
  return os.str();
}

}  // namespace spectra
