#include <doctest.h>

#include "helpers.hpp"
#include "ndg/cause.hpp"
#include "ndg/error.hpp"
#include "ndg/eval.hpp"

using namespace ndg;

namespace {

const std::vector<GoldenCase>& corpus_cases() {
  static const auto cases = load_corpus(testing::corpus_dir());
  return cases;
}

ParsedAnswer parse(const std::string& id, const std::string& text) {
  const auto& c = find_case(corpus_cases(), id);
  return parse_answer(text, c.problem->diagram, c.target);
}

Verdict verdict(const std::string& id, const std::string& text) {
  return grade(id, parse(id, text), find_case(corpus_cases(), id)).verdict;
}

}  // namespace

TEST_CASE("parse recorded answer shapes") {
  auto a = parse("d01", "Yes, E occurs at t3. The cause at t1 of E's occurring is C's occurrence at t1.");
  CHECK(a.occurrence == true);
  CHECK(a.causes == std::vector<Event>{{"C", Polarity::kPlus}});
  CHECK_FALSE(a.unparsed);

  auto b = parse("d03", "No, E does not occur at t3. The causes at t1 of E's not occurring are A and the absence of C.");
  CHECK(b.occurrence == false);
  CHECK(b.causes == std::vector<Event>{{"C", Polarity::kMinus}, {"A", Polarity::kPlus}});

  auto c = parse("d01", "The weather was lovely and nobody mentioned neurons.");
  CHECK(c.unparsed);
  CHECK(verdict("d01", "The weather was lovely.") == Verdict::kUnparsed);

  auto d = parse("d12", "E does occur at t3; the initial causes are A and C.");
  CHECK(d.occurrence == true);
  CHECK(d.causes.size() == 2);
}

TEST_CASE("grading rules") {
  CHECK(verdict("d01", "Yes, E occurs. The cause at t1 of E's occurring is C.") == Verdict::kFull);
  CHECK(verdict("d10", "Yes, E occurs at t3. The cause at t1 of E's occurring is A.") == Verdict::kPartial);
  CHECK(verdict("d02", "No, E does not occur at t3. The cause at t1 is A.") == Verdict::kWrong);
  CHECK(verdict("d01", "Yes, E occurs. The cause at t1 of E's occurring is A.") == Verdict::kWrong);
  CHECK(verdict("d01", "Yes, E occurs. The causes at t1 of E's occurring are C and A.") == Verdict::kPartial);

  auto g = grade("d10", parse("d10", "Yes, E occurs. The cause at t1 of E's occurring is A."),
                 find_case(corpus_cases(), "d10"));
  CHECK(g.missing == std::vector<Event>{{"C", Polarity::kPlus}});
  CHECK(g.extra.empty());
  CHECK(g.occurrence_correct);

  try {
    grade("d04", ParsedAnswer{}, find_case(corpus_cases(), "d04"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnverifiedCase);
  }
}

TEST_CASE("gold echo scores 10 Full") {
  std::vector<std::string> skipped;
  auto records = run_evaluation(corpus_cases(), gold_responder(), "gold", {}, 4, {}, &skipped);
  CHECK(skipped.size() == 15);
  auto rep = grade_transcript(records, corpus_cases());
  CHECK(rep.full == 10);
  CHECK(rep.partial == 0);
  CHECK(rep.wrong == 0);
  CHECK(rep.unparsed == 0);
  CHECK(rep.markdown(corpus_cases()).find("## Disagreements") == std::string::npos);
}

TEST_CASE("a model that always says No") {
  std::map<std::string, std::string> answers;
  for (const auto& c : verified_cases(corpus_cases())) {
    answers[c.case_id] = "No, " + c.target + " does not occur. The cause at t1 is A.";
  }
  auto rep = grade_transcript(
      run_evaluation(corpus_cases(), fixture_responder(answers), "no", {}, 2), corpus_cases());
  for (const auto& c : rep.cases) {
    if (find_case(corpus_cases(), c.record.case_id).expected_occurs) {
      CHECK(c.graded->verdict == Verdict::kWrong);
    }
  }
}

TEST_CASE("recorded fixtures grade to their expected vectors") {
  for (auto name : {"gemini-2.0-flash-thinking", "o3-mini", "deepseek-r1"}) {
    auto fx = load_fixture(testing::corpus_dir() / "fixtures" / (std::string(name) + ".json"));
    auto rep = grade_transcript(
        run_evaluation(corpus_cases(), fixture_responder(fx.answers), fx.model, {}, 1),
        corpus_cases());
    REQUIRE(rep.cases.size() == fx.expected_verdicts.size());
    for (const auto& c : rep.cases) {
      REQUIRE(c.graded);
      CHECK_MESSAGE(c.graded->verdict == fx.expected_verdicts.at(c.record.case_id),
                    name << " " << c.record.case_id);
    }
  }
}

TEST_CASE("Full verdicts agree with the engine") {
  auto fx = load_fixture(testing::corpus_dir() / "fixtures" / "gemini-2.0-flash-thinking.json");
  auto rep = grade_transcript(
      run_evaluation(corpus_cases(), fixture_responder(fx.answers), fx.model, {}, 1), corpus_cases());
  for (const auto& c : rep.cases) {
    if (c.graded->verdict != Verdict::kFull) continue;
    const auto& gold = find_case(corpus_cases(), c.record.case_id);
    const auto& p = *gold.problem;
    CHECK(c.parsed.causes == all_causes(p.diagram, p.stipulation, gold.target_event(), 1));
  }
}

TEST_CASE("transcripts round trip and replay identically") {
  auto fx = load_fixture(testing::corpus_dir() / "fixtures" / "o3-mini.json");
  auto records = run_evaluation(corpus_cases(), fixture_responder(fx.answers), fx.model, {}, 3,
                                {{"temperature", 0}});
  auto jsonl = write_transcript(records);
  auto back = read_transcript(jsonl);
  CHECK(back == records);
  auto a = grade_transcript(records, corpus_cases());
  auto b = grade_transcript(back, corpus_cases());
  CHECK(a.markdown(corpus_cases()) == b.markdown(corpus_cases()));
  CHECK(a.csv(corpus_cases()) == b.csv(corpus_cases()));
  CHECK_THROWS_AS(read_transcript("{not json}\n"), Error);
}

TEST_CASE("responder failures become error records") {
  std::map<std::string, std::string> answers{{"d01", "Yes, E occurs. The cause at t1 of E's occurring is C."}};
  auto records = run_evaluation(corpus_cases(), fixture_responder(answers), "partial", {}, 2);
  auto rep = grade_transcript(records, corpus_cases());
  CHECK(rep.full == 1);
  CHECK(rep.errors == 9);
  CHECK(rep.markdown(corpus_cases()).find("Error: ") != std::string::npos);
}

TEST_CASE("config parsing") {
  auto c = config_from_json({{"endpoint", "https://example.invalid/v1/chat"},
                             {"model", "m"},
                             {"concurrency", 2},
                             {"style", {{"template", "contracted"}}},
                             {"params", {{"temperature", 0}}}});
  CHECK(c.concurrency == 2);
  CHECK(c.style.templ == Template::kContracted);
  CHECK(c.credential_env == "NDG_API_KEY");
  auto bad = [](nlohmann::ordered_json j) {
    try {
      config_from_json(j);
    } catch (const Error& e) {
      return e.code() == ErrorCode::kConfig;
    }
    return false;
  };
  CHECK(bad({{"endpoint", "x"}}));
  CHECK(bad({{"endpoint", "x"}, {"model", "m"}, {"colour", "red"}}));
  CHECK(bad({{"endpoint", "x"}, {"model", "m"}, {"concurrency", 0}}));
  CHECK(bad({{"endpoint", "x"}, {"model", "m"}, {"style", {{"template", "fancy"}}}}));
}
