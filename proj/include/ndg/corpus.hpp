#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ndg/dsl.hpp"
#include "ndg/model.hpp"

namespace ndg {

struct InterventionCheck {
  Intervention clamp;
  bool expect_target_on = false;
};

struct GoldenCase {
  std::string case_id;
  bool verified = false;
  // Present only for verified cases.
  std::optional<Problem> problem;
  std::string target;
  bool expected_occurs = false;
  // Kept as text so unverified slots (no diagram to resolve against) still
  // carry their answer key.
  std::vector<std::string> expected_initial_causes_text;
  std::vector<Event> expected_initial_causes;
  std::vector<Event> expected_later_causes;
  std::vector<Event> disputed_later_causes;
  std::vector<InterventionCheck> interventions;
  std::string answer_key;
  std::string provenance;
  std::string note;

  // The target with its expected polarity.
  Event target_event() const;
};

// Reads `dir/gold.json` and the `.ndg` files it names. Throws
// Error(kCorpus) on missing or inconsistent data.
std::vector<GoldenCase> load_corpus(const std::filesystem::path& dir);

std::vector<GoldenCase> verified_cases(const std::vector<GoldenCase>& all);

const GoldenCase& find_case(const std::vector<GoldenCase>& cases,
                            std::string_view case_id);

// Corpus shipped with the source tree.
std::filesystem::path default_corpus_dir();

}  // namespace ndg
