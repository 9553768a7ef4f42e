#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ndg/corpus.hpp"
#include "ndg/transcriber.hpp"

namespace ndg {

struct TranscriptRecord {
  std::string case_id;
  std::string model;
  std::string prompt;
  std::string response;  // verbatim
  std::int64_t latency_ms = 0;
  std::string timestamp;  // ISO 8601, UTC
  int attempts = 0;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  // Set when no response could be obtained.
  std::optional<std::string> error;

  bool operator==(const TranscriptRecord&) const = default;
};

nlohmann::ordered_json to_json(const TranscriptRecord& record);
TranscriptRecord record_from_json(const nlohmann::ordered_json& j);

// One record per line, canonical field order.
std::string write_transcript(const std::vector<TranscriptRecord>& records);
std::vector<TranscriptRecord> read_transcript(std::string_view jsonl);

struct ParsedAnswer {
  std::optional<bool> occurrence;
  std::vector<Event> causes;  // display order
  bool unparsed = false;
};

// Never throws; anything that does not state whether the target occurs is
// unparsed.
ParsedAnswer parse_answer(std::string_view response, const Diagram& diagram,
                          std::string_view target);

enum class Verdict { kFull, kPartial, kWrong, kUnparsed };
std::string_view to_string(Verdict v);

struct GradedResult {
  std::string case_id;
  Verdict verdict = Verdict::kUnparsed;
  std::vector<Event> missing;
  std::vector<Event> extra;
  bool occurrence_correct = false;
};

// Throws Error(kUnverifiedCase) for cases without a checked diagram.
GradedResult grade(const std::string& case_id, const ParsedAnswer& parsed,
                   const GoldenCase& gold);

// A short answer stating the gold occurrence and initial causes, phrased
// the way the models in the fixtures answer.
std::string render_gold_answer(const GoldenCase& gold);

struct RetryPolicy {
  int max_attempts = 5;
  int initial_backoff_ms = 500;
  double multiplier = 2.0;
  int max_backoff_ms = 30000;
};

struct EvalConfig {
  std::string endpoint;
  std::string model;
  std::string credential_env = "NDG_API_KEY";
  int concurrency = 4;
  int timeout_seconds = 120;
  RetryPolicy retry;
  PromptStyle style{Template::kExplicit, true, true};
  // Passed through verbatim into the request body and the transcript.
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
};

// Throws Error(kConfig) on unknown or ill-typed fields.
EvalConfig config_from_json(const nlohmann::ordered_json& j);
EvalConfig load_config(const std::filesystem::path& path);

struct ModelReply {
  std::string text;
  int attempts = 1;
};

// Produces the model's answer to one prompt. Throwing an Error marks the
// case as errored; the run carries on.
using Responder =
    std::function<ModelReply(const GoldenCase& gold, const std::string& prompt)>;

// Replays recorded answers, keyed by case id.
Responder fixture_responder(std::map<std::string, std::string> answers);
// Answers every case with render_gold_answer.
Responder gold_responder();

struct Fixture {
  std::string model;
  std::map<std::string, std::string> answers;
  std::map<std::string, Verdict> expected_verdicts;
};
Fixture load_fixture(const std::filesystem::path& path);

// Prompts verified cases (unverified ones are skipped and listed in
// `skipped`), at most `concurrency` at a time. Records come back in case
// order whatever order the responses arrive in.
std::vector<TranscriptRecord> run_evaluation(
    const std::vector<GoldenCase>& cases, const Responder& responder,
    const std::string& model, const PromptStyle& style, int concurrency,
    const nlohmann::ordered_json& params = nlohmann::ordered_json::object(),
    std::vector<std::string>* skipped = nullptr);

struct CaseReport {
  TranscriptRecord record;
  ParsedAnswer parsed;
  std::optional<GradedResult> graded;  // empty when the record has an error
};

struct Report {
  std::vector<CaseReport> cases;
  int full = 0;
  int partial = 0;
  int wrong = 0;
  int unparsed = 0;
  int errors = 0;

  std::string markdown(const std::vector<GoldenCase>& corpus) const;
  std::string csv(const std::vector<GoldenCase>& corpus) const;
};

// Pure function of the transcript and the corpus.
Report grade_transcript(const std::vector<TranscriptRecord>& records,
                        const std::vector<GoldenCase>& corpus);

}  // namespace ndg
