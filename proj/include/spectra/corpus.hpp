#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "spectra/algebra.hpp"
#include "spectra/poset.hpp"

namespace spectra {

enum class ExpectationLevel {
  Derivable,   // the engine must reproduce the value
  Documented,  // ground truth the engine may be unable to reach
};

struct Expectation {
  std::string id;
  std::string op;
  nlohmann::json args;
  nlohmann::json expected;
  ExpectationLevel level = ExpectationLevel::Derivable;
  std::string locator;
};

struct Fixture {
  std::string name;
  std::string title;
  std::map<std::string, std::shared_ptr<const SpectralPoset>> posets;
  std::map<std::string, std::string> exprs;  // DSL text by key
  BaseField base_field;
  std::vector<Expectation> expectations;
};

enum class ExpectationStatus { Pass, Fail, DocumentedUnderivable };
std::string to_string(ExpectationStatus s);  // "pass", "fail", "documented, underivable"

struct ExpectationResult {
  Expectation expectation;
  ExpectationStatus status;
  nlohmann::json actual;
  std::string detail;
};

struct FixtureReport {
  std::string name;
  std::vector<ExpectationResult> results;
  bool ok() const;  // no Fail
};

/// SPECTRA_CORPUS_DIR from the environment, else the directory baked in at build time.
std::filesystem::path default_corpus_dir();
/// Fixture names (file stems), sorted.
std::vector<std::string> list_fixtures(const std::filesystem::path& dir = default_corpus_dir());

/// Throws UnknownFixture, InvalidFixture.
Fixture load_fixture(const std::string& name,
                     const std::filesystem::path& dir = default_corpus_dir(),
                     const PosetLimits& limits = {});
/// Throws InvalidFixture.
Fixture fixture_from_json(const nlohmann::json& j, const PosetLimits& limits = {});

/// Evaluates every expectation. Mismatches and evaluation errors become
/// Fail results, never exceptions.
FixtureReport run_fixture(const Fixture& f);

nlohmann::json to_json(const FixtureReport& r);
std::string render_table(const std::vector<FixtureReport>& reports);

}  // namespace spectra
