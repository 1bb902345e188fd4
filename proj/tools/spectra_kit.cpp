// spectra-kit command line front end.
//
// Exit codes: 0 ok, 1 expectation or check failure, 2 contradiction,
// 3 parse or I/O error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spectra/corpus.hpp"
#include "spectra/dimension.hpp"
#include "spectra/dsl.hpp"
#include "spectra/report.hpp"
#include "spectra/rules.hpp"

namespace {

using nlohmann::json;
using namespace spectra;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kContradiction = 2;
constexpr int kInputError = 3;

struct Globals {
  bool json = false;
  bool trace = false;
  std::string alg_closed = "unknown";
  std::size_t max_nodes = PosetLimits{}.max_nodes;
  std::string corpus_dir;

  PosetLimits limits() const { return PosetLimits{max_nodes}; }
  std::filesystem::path corpus() const {
    return corpus_dir.empty() ? default_corpus_dir() : std::filesystem::path(corpus_dir);
  }
  BaseField base_field() const { return BaseField{parse_tristate(alg_closed)}; }
};

void emit(const Globals& g, const json& j, const std::string& text) {
  if (g.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_analyze(const Globals& g, const std::string& source) {
  AnalyzeOptions options;
  options.base_field = g.base_field();
  options.trace = g.trace;
  options.parse.limits = g.limits();
  std::string text = source;
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) {
    text = read_file(source);
    options.parse.base_dir = std::filesystem::path(source).parent_path();
  }
  const Analysis analysis = run_analysis(text, options);
  emit(g, report_json(analysis, options), report_text(analysis, options));
  return kOk;
}

int cmd_check_poset(const Globals& g, const std::string& file, const std::string& property,
                    bool dot) {
  const SpectralPoset poset = load_poset(file, g.limits());
  if (dot) {
    std::cout << poset.to_dot();
    return kOk;
  }
  std::vector<PosetProperty> props;
  if (property.empty()) {
    props = {PosetProperty::P1, PosetProperty::P2, PosetProperty::Q1, PosetProperty::Q2,
             PosetProperty::MPC, PosetProperty::Catenarian, PosetProperty::SRing};
  } else {
    props = {parse_poset_property(property)};
  }
  json j = {{"schema", kReportSchema}, {"nodes", json::array()}, {"properties", json::object()}};
  std::ostringstream os;
  os << "nodes: " << poset.size() << ", krull_dim: " << poset.krull_dim().to_string()
     << ", complete: " << (poset.complete() ? "true" : "false") << "\n";
  for (const PrimeNode& n : poset.nodes()) {
    j["nodes"].push_back({{"id", n.id}, {"height", poset.height(n.id)}});
    os << "  height(" << n.id << ") = " << poset.height(n.id).to_string() << "\n";
  }
  j["krull_dim"] = poset.krull_dim();
  j["complete"] = poset.complete();
  bool failed = false;
  for (PosetProperty p : props) {
    const TriState v = poset.check_property(p);
    j["properties"][to_string(p)] = v;
    os << to_string(p) << " = " << to_string(v) << "\n";
    failed |= v == TriState::False && !property.empty();
  }
  emit(g, j, os.str());
  return failed ? kCheckFailed : kOk;
}

int emit_value(const Globals& g, const std::string& op, const ExtNat& v) {
  emit(g, {{"schema", kReportSchema}, {"op", op}, {"value", v}}, v.to_string() + "\n");
  return kOk;
}

int cmd_corpus(const Globals& g, const std::string& name) {
  const std::filesystem::path dir = g.corpus();
  std::vector<std::string> names = name.empty() ? list_fixtures(dir) : std::vector{name};
  std::vector<FixtureReport> reports;
  for (const auto& n : names) reports.push_back(run_fixture(load_fixture(n, dir, g.limits())));
  bool ok = true;
  json j = {{"schema", kReportSchema}, {"fixtures", json::array()}};
  for (const auto& r : reports) {
    ok = ok && r.ok();
    j["fixtures"].push_back(to_json(r));
  }
  j["ok"] = ok;
  emit(g, j, render_table(reports));
  return ok ? kOk : kCheckFailed;
}

int cmd_rules(const Globals& g) {
  std::ostringstream os;
  for (const RuleInfo& r : rule_catalog()) {
    os << r.id << "\n  " << r.guard << "\n  " << r.citation << "\n";
  }
  emit(g, {{"schema", kReportSchema}, {"rules", rule_catalog_json()}}, os.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide and explain prime-spectrum properties of k-algebra constructions"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "Emit JSON");
  app.add_flag("--trace", g.trace, "Include derivation traces");
  app.add_option("--base-field-alg-closed", g.alg_closed, "Is k algebraically closed")
      ->check(CLI::IsMember({"true", "false", "unknown"}));
  app.add_option("--max-nodes", g.max_nodes, "Poset size limit")->check(CLI::PositiveNumber);
  app.add_option("--corpus-dir", g.corpus_dir, "Fixture directory");

  std::string source;
  auto* analyze = app.add_subcommand("analyze", "Infer properties of an expression");
  analyze->add_option("input", source, "DSL text or a file containing it")->required();

  std::string poset_file, property;
  bool dot = false;
  auto* check = app.add_subcommand("check-poset", "Heights and properties of a poset file");
  check->add_option("file", poset_file)->required();
  check->add_option("--property", property, "Only this property (exit 1 when False)");
  check->add_flag("--dot", dot, "Print Graphviz DOT instead");

  auto* dim = app.add_subcommand("dim", "Dimension formulas");
  dim->require_subcommand(1);
  dim->fallthrough();
  unsigned s = 0, d = 0;
  std::string node, a_td = "0", a_dim = "0", b_td = "0", b_dim = "0";
  auto* delta_cmd = dim->add_subcommand("delta", "delta(s, d, p)");
  delta_cmd->add_option("--poset", poset_file)->required();
  delta_cmd->add_option("--s", s)->required();
  delta_cmd->add_option("--d", d)->required();
  delta_cmd->add_option("--node", node)->required();
  auto* bigd_cmd = dim->add_subcommand("bigd", "D(s, d, A)");
  bigd_cmd->add_option("--poset", poset_file)->required();
  bigd_cmd->add_option("--s", s)->required();
  bigd_cmd->add_option("--d", d)->required();
  auto* fields_cmd = dim->add_subcommand("fields", "dim of a tensor product of two fields");
  fields_cmd->add_option("--a-td", a_td)->required();
  fields_cmd->add_option("--b-td", b_td)->required();
  auto* pair_cmd = dim->add_subcommand("af-pair", "dim of a tensor product of two AF-domains");
  pair_cmd->add_option("--a-td", a_td)->required();
  pair_cmd->add_option("--a-dim", a_dim)->required();
  pair_cmd->add_option("--b-td", b_td)->required();
  pair_cmd->add_option("--b-dim", b_dim)->required();
  auto* general_cmd = dim->add_subcommand("af-general", "dim of an AF-domain tensor a poset algebra");
  general_cmd->add_option("--a-td", a_td)->required();
  general_cmd->add_option("--a-dim", a_dim)->required();
  general_cmd->add_option("--poset", poset_file)->required();

  auto* corpus = app.add_subcommand("corpus", "Worked-example fixtures");
  corpus->require_subcommand(1);
  corpus->fallthrough();
  std::string fixture;
  auto* corpus_run = corpus->add_subcommand("run", "Run fixtures");
  corpus_run->add_option("name", fixture, "Single fixture");
  auto* corpus_list = corpus->add_subcommand("list", "List fixtures");

  auto* rules = app.add_subcommand("rules", "Rule catalog");
  rules->require_subcommand(1);
  auto* rules_list = rules->add_subcommand("list", "List rules");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  auto ext = [](const std::string& text) {
    auto v = parse_ext_nat(text);
    if (!v) throw InvalidArgument("not a natural or inf: '" + text + "'");
    return *v;
  };

  try {
    if (*analyze) return cmd_analyze(g, source);
    if (*check) return cmd_check_poset(g, poset_file, property, dot);
    if (*delta_cmd) return emit_value(g, "delta", delta(s, d, load_poset(poset_file, g.limits()), node));
    if (*bigd_cmd) return emit_value(g, "big_d", big_d(s, d, load_poset(poset_file, g.limits())));
    if (*fields_cmd) return emit_value(g, "dim_tensor_fields", dim_tensor_fields(ext(a_td), ext(b_td)));
    if (*pair_cmd) {
      return emit_value(g, "dim_tensor_af_pair",
                        dim_tensor_af_pair(AFSummary(ext(a_td), ext(a_dim)),
                                           AFSummary(ext(b_td), ext(b_dim))));
    }
    if (*general_cmd) {
      return emit_value(g, "dim_tensor_af_general",
                        dim_tensor_af_general(AFSummary(ext(a_td), ext(a_dim)),
                                              load_poset(poset_file, g.limits())));
    }
    if (*corpus_run) return cmd_corpus(g, fixture);
    if (*corpus_list) {
      for (const auto& n : list_fixtures(g.corpus())) {
        std::cout << n << "\n";
      }
      return kOk;
    }
    if (*rules_list) return cmd_rules(g);
  } catch (const ContradictionError& e) {
    if (g.json) {
      std::cout << contradiction_json(e).dump(2) << "\n";
    } else {
      std::cerr << "contradiction: " << e.what() << "\n"
                << "existing: " << e.existing().dump(2) << "\n"
                << "incoming: " << e.incoming().dump(2) << "\n";
    }
    return kContradiction;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
