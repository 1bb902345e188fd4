#include "spectra/report.hpp"

#include <sstream>

namespace spectra {

namespace {

std::string kind_name(const AlgebraExpr& e) {
  if (e.as_atom()) return "atom";
  if (e.as_field()) return "field";
  if (e.as_poly()) return "poly";
  if (e.as_loc()) return "loc";
  return "tensor";
}

nlohmann::json fact_entry(const Fact& f) {
  nlohmann::json j;
  if (const auto* t = std::get_if<TriState>(&f.value)) {
    j["value"] = *t;
  } else {
    j["value"] = std::get<NatInterval>(f.value);
  }
  j["rule_id"] = f.provenance.rule_id;
  j["citation"] = f.provenance.citation;
  return j;
}

nlohmann::json blocked_json(const BlockedRule& b) {
  return {{"rule_id", b.rule_id}, {"subject", b.subject}, {"conclusion", b.conclusion},
          {"missing", b.missing}};
}

}  // namespace

Analysis run_analysis(std::string_view text, const AnalyzeOptions& options) {
  ParsedInput input = parse_input(text, options.parse);
  std::vector<Axiom> axioms = assumptions_to_axioms(input);
  Analysis a{input, KnowledgeBase(input.expr, std::move(axioms), options.base_field), {}};
  a.summary = infer(a.kb);
  return a;
}

nlohmann::json report_json(const Analysis& analysis, const AnalyzeOptions& options) {
  const KnowledgeBase& kb = analysis.kb;
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < kb.node_count(); ++i) {
    const NodeId id{i};
    nlohmann::json props = nlohmann::json::object();
    nlohmann::json unknown = nlohmann::json::array();
    for (PropertyKind p : all_properties()) {
      if (auto f = kb.fact_for(id, p)) {
        props[to_string(p)] = fact_entry(kb.fact(*f));
      } else {
        unknown.push_back(to_string(p));
      }
    }
    nlohmann::json quantities = nlohmann::json::object();
    for (Quantity q : all_quantities()) {
      if (auto f = kb.fact_for(id, q)) {
        quantities[to_string(q)] = fact_entry(kb.fact(*f));
      } else {
        quantities[to_string(q)] = {{"value", NatInterval::unknown()}};
      }
    }
    nlohmann::json children = nlohmann::json::array();
    for (NodeId c : kb.children(id)) children.push_back(kb.label(c));
    nodes.push_back({{"id", kb.label(id)},
                     {"kind", kind_name(kb.node(id))},
                     {"expr", print_expr(kb.node(id))},
                     {"children", children},
                     {"properties", props},
                     {"unknown", unknown},
                     {"quantities", quantities}});
  }

  nlohmann::json dimension = {{"subject", kb.label(kb.root())},
                              {"value", kb.quantity(kb.root(), Quantity::Dim)},
                              {"exact", kb.quantity(kb.root(), Quantity::Dim).is_exact()}};
  if (auto f = kb.fact_for(kb.root(), Quantity::Dim)) {
    dimension["rule_id"] = kb.fact(*f).provenance.rule_id;
    dimension["citation"] = kb.fact(*f).provenance.citation;
  }

  nlohmann::json warnings = nlohmann::json::array();
  for (const BlockedRule& b : analysis.summary.blocked) warnings.push_back(blocked_json(b));

  nlohmann::json report = {
      {"schema", kReportSchema},
      {"input", print_input(analysis.input)},
      {"config",
       {{"base_field_alg_closed", options.base_field.algebraically_closed},
        {"trace", options.trace}}},
      {"nodes", nodes},
      {"dimension", dimension},
      {"inference", {{"passes", analysis.summary.passes}, {"facts", kb.fact_count()}}},
      {"warnings", warnings},
  };
  if (options.trace) {
    nlohmann::json traces = nlohmann::json::array();
    for (PropertyKind p : all_properties()) {
      if (auto f = kb.fact_for(kb.root(), p)) traces.push_back(explain_fact(kb, *f));
    }
    if (auto f = kb.fact_for(kb.root(), Quantity::Dim)) traces.push_back(explain_fact(kb, *f));
    report["traces"] = traces;
  }
  return report;
}

std::string report_text(const Analysis& analysis, const AnalyzeOptions& options) {
  const KnowledgeBase& kb = analysis.kb;
  std::ostringstream os;
  os << "input: " << print_input(analysis.input) << "\n";
  for (std::size_t i = 0; i < kb.node_count(); ++i) {
    const NodeId id{i};
    os << "\n" << kb.label(id) << "  " << print_expr(kb.node(id)) << "\n";
    for (PropertyKind p : all_properties()) {
      if (auto f = kb.fact_for(id, p)) {
        const Fact& fact = kb.fact(*f);
        os << "  " << to_string(p) << " = " << to_string(std::get<TriState>(fact.value)) << "  ["
           << fact.provenance.rule_id << "]\n";
      }
    }
    for (Quantity q : all_quantities()) {
      os << "  " << to_string(q) << " = " << kb.quantity(id, q).to_string() << "\n";
    }
  }
  os << "\ndimension of " << kb.label(kb.root()) << ": "
     << kb.quantity(kb.root(), Quantity::Dim).to_string() << "\n";
  if (!analysis.summary.blocked.empty()) {
    os << "\nblocked rules:\n";
    for (const BlockedRule& b : analysis.summary.blocked) {
      os << "  " << b.rule_id << " -> " << b.conclusion << " needs:";
      for (const auto& m : b.missing) os << " [" << m << "]";
      os << "\n";
    }
  }
  if (options.trace) {
    os << "\ntraces:\n";
    for (PropertyKind p : all_properties()) {
      if (auto f = kb.fact_for(kb.root(), p)) os << render(explain_fact(kb, *f));
    }
    if (auto f = kb.fact_for(kb.root(), Quantity::Dim)) os << render(explain_fact(kb, *f));
  }
  return os.str();
}

nlohmann::json contradiction_json(const ContradictionError& e) {
  return {{"schema", kReportSchema},
          {"error", "contradiction"},
          {"message", e.what()},
          {"existing", e.existing()},
          {"incoming", e.incoming()}};
}

}  // namespace spectra
