#pragma once

#include <string>

#include "json.hpp"
#include "spectra/dsl.hpp"
#include "spectra/rules.hpp"

namespace spectra {

inline constexpr const char* kReportSchema = "spectra-kit/1";

struct AnalyzeOptions {
  BaseField base_field;
  bool trace = false;
  ParseOptions parse;
};

/// A fully inferred knowledge base plus what the run produced.
struct Analysis {
  ParsedInput input;
  KnowledgeBase kb;
  InferenceSummary summary;
};

/// Parses `text`, seeds the knowledge base and runs inference.
/// Throws ParseError, UnknownSubject, ContradictionError.
Analysis run_analysis(std::string_view text, const AnalyzeOptions& options = {});

/// Deterministic JSON report. Key order is fixed by nlohmann's sorted maps
/// and array order follows node and property order.
nlohmann::json report_json(const Analysis& analysis, const AnalyzeOptions& options);
/// Human-readable report.
std::string report_text(const Analysis& analysis, const AnalyzeOptions& options);

/// JSON body describing a contradiction, used with exit status 2.
nlohmann::json contradiction_json(const ContradictionError& e);

}  // namespace spectra
