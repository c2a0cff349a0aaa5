#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "msa/dsl.hpp"
#include "msa/generator.hpp"
#include "msa/isomorphism.hpp"
#include "msa/verdict.hpp"

namespace msa {

struct Report {
  std::vector<std::string> command;
  std::string digest;  // "sha256:<hex>" of the input bytes
  std::vector<Verdict> verdicts;
  std::vector<Diagnostic> diagnostics;
  nlohmann::json extra = nlohmann::json::object();
  std::vector<std::pair<std::string, double>> timings;  // seconds, per verdict

  bool passed() const;
};

std::string sha256_hex(std::string_view bytes);

// Timings appear only when asked for, so reports stay byte-stable.
nlohmann::json to_json(const Report& r, bool with_timings = false);
std::string to_text(const Report& r, bool with_timings = false);

Report cmd_validate(std::string_view text);

inline constexpr const char* kCheckNames[] = {"all",        "prop25",     "prop28",   "prop29",
                                              "retraction", "naturality", "cylinder", "composition"};

struct CheckOptions {
  std::string which = "all";
  std::size_t max_iso_search = kDefaultIsoNodeCap;
};

// Raises invalid_argument for an unknown check name.
Report cmd_check(std::string_view text, const CheckOptions& opts);

struct ConstructResult {
  Report report;
  std::string emitted;  // the input file plus the new declaration, when built
};

inline constexpr const char* kConstructNames[] = {"projlim", "indlim", "ultraproduct", "reducedproduct"};

// `filter` names the filter or ultrafilter for the product constructions;
// by default the first one declared on the family's preorder.
ConstructResult cmd_construct(std::string_view text, std::string_view what, std::string_view name,
                              const std::optional<std::string>& filter = std::nullopt);

std::string cmd_gen(const GeneratorConfig& cfg);

}  // namespace msa
