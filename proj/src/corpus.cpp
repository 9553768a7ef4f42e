#include "ndg/corpus.hpp"

#include <json.hpp>

#include "ndg/error.hpp"

#ifndef NDG_CORPUS_DIR
#define NDG_CORPUS_DIR "corpus"
#endif

namespace ndg {

namespace {

using Json = nlohmann::json;

std::vector<Event> events_of(const Diagram& d, const Json& list,
                             const std::string& case_id) {
  std::vector<Event> out;
  for (const auto& item : list) {
    auto text = item.get<std::string>();
    try {
      out.push_back(parse_event(d, text));
    } catch (const Error& e) {
      throw Error(ErrorCode::kCorpus,
                  case_id + ": bad event '" + text + "': " + e.what());
    }
  }
  return display_order(d, std::move(out));
}

GoldenCase read_case(const std::filesystem::path& dir, const Json& j) {
  GoldenCase c;
  c.case_id = j.at("case_id").get<std::string>();
  c.verified = j.at("verified").get<bool>();
  c.target = j.at("target").get<std::string>();
  c.expected_occurs = j.at("expected_occurs").get<bool>();
  c.expected_initial_causes_text =
      j.at("expected_initial_causes").get<std::vector<std::string>>();
  c.answer_key = j.value("answer_key", "");
  c.provenance = j.value("provenance", "");
  c.note = j.value("note", "");
  if (!c.verified) return c;

  if (!j.contains("file")) {
    throw Error(ErrorCode::kCorpus, c.case_id + ": verified case without a file");
  }
  try {
    c.problem = load_problem(dir / j.at("file").get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorpus, c.case_id + ": " + e.what());
  }
  const auto& d = c.problem->diagram;
  if (c.problem->target != c.target) {
    throw Error(ErrorCode::kCorpus, c.case_id + ": gold target " + c.target +
                                        " but the diagram asks about " +
                                        c.problem->target);
  }
  c.expected_initial_causes =
      events_of(d, j.at("expected_initial_causes"), c.case_id);
  if (j.contains("expected_later_causes")) {
    const auto& later = j.at("expected_later_causes");
    c.expected_later_causes = events_of(d, later.at("events"), c.case_id);
    c.disputed_later_causes =
        events_of(d, later.value("disputed", Json::array()), c.case_id);
  }
  for (const auto& iv : j.value("interventions", Json::array())) {
    auto state = iv.at("state").get<std::string>();
    if (state != "on" && state != "off") {
      throw Error(ErrorCode::kCorpus, c.case_id + ": intervention state must be on or off");
    }
    try {
      c.interventions.push_back(
          {clamp(d, iv.at("neuron").get<std::string>(), state == "on"),
           iv.at("expect_target_on").get<bool>()});
    } catch (const Error& e) {
      throw Error(ErrorCode::kCorpus, c.case_id + ": " + e.what());
    }
  }
  return c;
}

}  // namespace

Event GoldenCase::target_event() const {
  return Event{target, expected_occurs ? Polarity::kPlus : Polarity::kMinus};
}

std::vector<GoldenCase> load_corpus(const std::filesystem::path& dir) {
  Json root;
  try {
    root = Json::parse(read_file(dir / "gold.json"));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kCorpus, std::string("gold.json: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorpus, e.what());
  }
  std::vector<GoldenCase> out;
  try {
    for (const auto& j : root.at("cases")) out.push_back(read_case(dir, j));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kCorpus, std::string("gold.json: ") + e.what());
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i - 1].case_id >= out[i].case_id) {
      throw Error(ErrorCode::kCorpus,
                  "gold.json: case ids must be unique and sorted (" +
                      out[i].case_id + ")");
    }
  }
  return out;
}

std::vector<GoldenCase> verified_cases(const std::vector<GoldenCase>& all) {
  std::vector<GoldenCase> out;
  for (const auto& c : all) {
    if (c.verified) out.push_back(c);
  }
  return out;
}

const GoldenCase& find_case(const std::vector<GoldenCase>& cases,
                            std::string_view case_id) {
  for (const auto& c : cases) {
    if (c.case_id == case_id) return c;
  }
  throw Error(ErrorCode::kCorpus, "no corpus case '" + std::string(case_id) + "'");
}

std::filesystem::path default_corpus_dir() { return NDG_CORPUS_DIR; }

}  // namespace ndg
