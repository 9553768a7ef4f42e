#include "ndg/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "ndg/cause.hpp"
#include "ndg/error.hpp"
#include "ndg/simulator.hpp"

namespace ndg {

using OJson = nlohmann::ordered_json;

// ---------------------------------------------------------------- transcript

OJson to_json(const TranscriptRecord& r) {
  return OJson{{"case_id", r.case_id},
               {"model", r.model},
               {"prompt", r.prompt},
               {"response", r.response},
               {"latency_ms", r.latency_ms},
               {"timestamp", r.timestamp},
               {"attempts", r.attempts},
               {"params", r.params},
               {"error", r.error ? OJson(*r.error) : OJson(nullptr)}};
}

TranscriptRecord record_from_json(const OJson& j) {
  try {
    TranscriptRecord r;
    r.case_id = j.at("case_id").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.prompt = j.at("prompt").get<std::string>();
    r.response = j.at("response").get<std::string>();
    r.latency_ms = j.value("latency_ms", std::int64_t{0});
    r.timestamp = j.value("timestamp", "");
    r.attempts = j.value("attempts", 0);
    r.params = j.value("params", OJson::object());
    if (j.contains("error") && !j.at("error").is_null()) {
      r.error = j.at("error").get<std::string>();
    }
    return r;
  } catch (const OJson::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad transcript record: ") + e.what());
  }
}

std::string write_transcript(const std::vector<TranscriptRecord>& records) {
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

std::vector<TranscriptRecord> read_transcript(std::string_view jsonl) {
  std::vector<TranscriptRecord> out;
  std::size_t start = 0;
  int line = 0;
  while (start < jsonl.size()) {
    auto end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    ++line;
    auto text = jsonl.substr(start, end - start);
    start = end + 1;
    if (text.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(record_from_json(OJson::parse(text)));
    } catch (const OJson::exception& e) {
      throw Error(ErrorCode::kParse,
                  "transcript line " + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

// ----------------------------------------------------------------- parsing

namespace {

std::string normalize(std::string_view in) {
  std::string s(in);
  for (auto [from, to] : {std::pair<std::string_view, std::string_view>{"’", "'"},
                          {"‘", "'"}, {"“", "\""}, {"”", "\""}, {"−", "-"},
                          {"*", ""}}) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos)) {
      s.replace(pos, from.size(), to);
      pos += to.size();
    }
  }
  return s;
}

std::vector<std::string> sentences(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    cur += c;
    bool end = (c == '.' || c == '?' || c == '!' || c == '\n') &&
               (i + 1 == text.size() || text[i + 1] == ' ' || text[i + 1] == '\n');
    if (end) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (cur.find_first_not_of(" \n") != std::string::npos) out.push_back(cur);
  return out;
}

std::string escape_regex(std::string_view s) {
  static const std::regex special(R"([.^$|()\[\]{}*+?\\])");
  return std::regex_replace(std::string(s), special, R"(\$&)");
}

std::optional<bool> find_occurrence(const std::string& text, std::string_view target) {
  const std::string t = escape_regex(target);
  const std::regex negative(
      "\\b" + t +
      "\\s+(?:still\\s+|now\\s+)?(?:does|did|will|would|can)\\s*(?:not|n't)\\s+(?:still\\s+)?(?:occur|fire|happen)");
  const std::regex positive("\\b" + t +
                            "\\s+(?:(?:does|did|will|still|now|indeed)\\s+)*(?:occurs|occur|fires|fire|happens)\\b");
  const std::regex lead(R"(^\s*(?:final answer\s*:\s*)?(yes|no)\b)", std::regex::icase);

  std::optional<std::pair<std::ptrdiff_t, bool>> best;
  auto consider = [&](const std::regex& re, std::optional<bool> fixed) {
    std::smatch m;
    if (!std::regex_search(text, m, re)) return;
    bool value = fixed ? *fixed : (m[1].str()[0] == 'y' || m[1].str()[0] == 'Y');
    if (!best || m.position(0) < best->first) best = {m.position(0), value};
  };
  consider(lead, std::nullopt);
  consider(negative, false);
  consider(positive, true);
  return best ? std::optional<bool>(best->second) : std::nullopt;
}

bool absence_cue(const std::string& item) {
  static const std::regex cue(
      R"(\b(?:absence|non-?occurrence|non-?firing|lack|failure)\s+of\b|\bnot\s+occurring\b|\bnot\s+firing\b|\bdid\s*n[o']t\s+occur)",
      std::regex::icase);
  return std::regex_search(item, cue);
}

std::vector<Event> find_causes(const std::string& text, const Diagram& d,
                               std::string_view target) {
  static const std::regex lead(R"(\bcauses?\b[^.]*?\b(?:is|are)\b\s*)", std::regex::icase);
  static const std::regex stop(
      R"(,?\s*\b(?:which|because|since|leading|resulting|due to|so that|as it)\b|;)",
      std::regex::icase);
  static const std::regex split(R"(\s*,\s*(?:and\s+)?|\s+and\s+|\s+as well as\s+)");
  static const std::regex word(R"([A-Za-z][A-Za-z0-9]*)");

  for (const auto& s : sentences(text)) {
    std::smatch m;
    if (!std::regex_search(s, m, lead)) continue;
    std::string span = m.suffix().str();
    std::smatch cut;
    if (std::regex_search(span, cut, stop)) span = span.substr(0, static_cast<std::size_t>(cut.position(0)));

    std::vector<Event> out;
    std::sregex_token_iterator it(span.begin(), span.end(), split, -1), end;
    for (; it != end; ++it) {
      std::string item = *it;
      bool minus = absence_cue(item);
      std::string prev;
      for (std::sregex_iterator w(item.begin(), item.end(), word), wend; w != wend; ++w) {
        std::string tok = (*w).str();
        bool is_time = prev == "at";
        prev = tok;
        if (is_time || !d.find(tok)) continue;
        Event e{tok, minus ? Polarity::kMinus : Polarity::kPlus};
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
      }
    }
    (void)target;
    return display_order(d, std::move(out));
  }
  return {};
}

}  // namespace

ParsedAnswer parse_answer(std::string_view response, const Diagram& diagram,
                          std::string_view target) {
  ParsedAnswer out;
  try {
    auto text = normalize(response);
    out.occurrence = find_occurrence(text, target);
    if (!out.occurrence) {
      out.unparsed = true;
      return out;
    }
    out.causes = find_causes(text, diagram, target);
  } catch (const std::exception&) {
    out = ParsedAnswer{};
    out.unparsed = true;
  }
  return out;
}

// ----------------------------------------------------------------- grading

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kFull: return "Full";
    case Verdict::kPartial: return "Partial";
    case Verdict::kWrong: return "Wrong";
    case Verdict::kUnparsed: return "Unparsed";
  }
  return "?";
}

GradedResult grade(const std::string& case_id, const ParsedAnswer& parsed,
                   const GoldenCase& gold) {
  if (!gold.verified || !gold.problem) {
    throw Error(ErrorCode::kUnverifiedCase,
                gold.case_id + " has no verified diagram and cannot be graded");
  }
  GradedResult r;
  r.case_id = case_id;
  const auto& expected = gold.expected_initial_causes;
  for (const auto& e : expected) {
    if (std::find(parsed.causes.begin(), parsed.causes.end(), e) == parsed.causes.end()) {
      r.missing.push_back(e);
    }
  }
  for (const auto& e : parsed.causes) {
    if (std::find(expected.begin(), expected.end(), e) == expected.end()) r.extra.push_back(e);
  }
  if (parsed.unparsed || !parsed.occurrence) {
    r.verdict = Verdict::kUnparsed;
    return r;
  }
  r.occurrence_correct = *parsed.occurrence == gold.expected_occurs;
  bool overlap = r.missing.size() < expected.size();
  if (!r.occurrence_correct || !overlap) {
    r.verdict = Verdict::kWrong;
  } else if (r.missing.empty() && r.extra.empty()) {
    r.verdict = Verdict::kFull;
  } else {
    r.verdict = Verdict::kPartial;
  }
  return r;
}

std::string render_gold_answer(const GoldenCase& gold) {
  const auto& y = gold.target;
  std::string t;
  if (gold.problem) t = " at t" + std::to_string(gold.problem->diagram.neuron(y).time);
  std::string out = gold.expected_occurs ? "Yes, " + y + " occurs" + t + "."
                                         : "No, " + y + " does not occur" + t + ".";
  std::vector<std::string> names;
  for (const auto& e : gold.expected_initial_causes) {
    names.push_back(e.polarity == Polarity::kPlus ? e.neuron : "the absence of " + e.neuron);
  }
  if (names.empty()) return out;
  std::string list;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) list += (i + 1 == names.size()) ? " and " : ", ";
    list += names[i];
  }
  out += names.size() == 1 ? " The cause at t1 of " : " The causes at t1 of ";
  out += y + (gold.expected_occurs ? "'s occurring " : "'s not occurring ");
  out += (names.size() == 1 ? "is " : "are ") + list + ".";
  return out;
}

// ------------------------------------------------------------------ config

EvalConfig config_from_json(const OJson& j) {
  EvalConfig c;
  try {
    if (!j.is_object()) throw Error(ErrorCode::kConfig, "config must be a JSON object");
    static const std::set<std::string> known = {
        "endpoint", "model", "credential_env", "concurrency", "timeout_seconds",
        "retry", "style", "params"};
    for (const auto& [key, _] : j.items()) {
      if (known.count(key) == 0) throw Error(ErrorCode::kConfig, "unknown config field '" + key + "'");
    }
    c.endpoint = j.at("endpoint").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.credential_env = j.value("credential_env", c.credential_env);
    c.concurrency = j.value("concurrency", c.concurrency);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    if (j.contains("retry")) {
      const auto& r = j.at("retry");
      c.retry.max_attempts = r.value("max_attempts", c.retry.max_attempts);
      c.retry.initial_backoff_ms = r.value("initial_backoff_ms", c.retry.initial_backoff_ms);
      c.retry.multiplier = r.value("multiplier", c.retry.multiplier);
      c.retry.max_backoff_ms = r.value("max_backoff_ms", c.retry.max_backoff_ms);
    }
    if (j.contains("style")) {
      const auto& s = j.at("style");
      auto templ = s.value("template", std::string("explicit"));
      if (templ != "explicit" && templ != "contracted") {
        throw Error(ErrorCode::kConfig, "style.template must be explicit or contracted");
      }
      c.style.templ = templ == "explicit" ? Template::kExplicit : Template::kContracted;
      c.style.short_answer = s.value("short_answer", c.style.short_answer);
      c.style.initial_causes_only = s.value("initial_causes_only", c.style.initial_causes_only);
    }
    c.params = j.value("params", OJson::object());
  } catch (const OJson::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad config: ") + e.what());
  }
  if (c.concurrency < 1) throw Error(ErrorCode::kConfig, "concurrency must be at least 1");
  if (c.retry.max_attempts < 1) throw Error(ErrorCode::kConfig, "retry.max_attempts must be at least 1");
  if (c.retry.initial_backoff_ms < 0 || c.retry.max_backoff_ms < 0 || c.retry.multiplier < 1.0) {
    throw Error(ErrorCode::kConfig, "retry backoff must be non-negative with multiplier >= 1");
  }
  if (c.timeout_seconds < 1) throw Error(ErrorCode::kConfig, "timeout_seconds must be positive");
  if (!c.params.is_object()) throw Error(ErrorCode::kConfig, "params must be an object");
  return c;
}

EvalConfig load_config(const std::filesystem::path& path) {
  try {
    return config_from_json(OJson::parse(read_file(path)));
  } catch (const OJson::exception& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
}

// --------------------------------------------------------------- responders

Responder fixture_responder(std::map<std::string, std::string> answers) {
  return [answers = std::move(answers)](const GoldenCase& gold, const std::string&) {
    auto it = answers.find(gold.case_id);
    if (it == answers.end()) {
      throw Error(ErrorCode::kMalformedResponse, "no recorded answer for " + gold.case_id);
    }
    return ModelReply{it->second, 1};
  };
}

Responder gold_responder() {
  return [](const GoldenCase& gold, const std::string&) {
    return ModelReply{render_gold_answer(gold), 1};
  };
}

Fixture load_fixture(const std::filesystem::path& path) {
  try {
    auto j = OJson::parse(read_file(path));
    Fixture f;
    f.model = j.at("model").get<std::string>();
    f.answers = j.at("answers").get<std::map<std::string, std::string>>();
    const auto expected = j.value("expected_verdicts", OJson::object());
    for (const auto& [id, v] : expected.items()) {
      auto s = v.get<std::string>();
      Verdict verdict = s == "Full" ? Verdict::kFull
                        : s == "Partial" ? Verdict::kPartial
                        : s == "Wrong" ? Verdict::kWrong
                        : s == "Unparsed" ? Verdict::kUnparsed
                        : throw Error(ErrorCode::kParse, "unknown verdict '" + s + "'");
      f.expected_verdicts[id] = verdict;
    }
    return f;
  } catch (const OJson::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

// --------------------------------------------------------------------- run

namespace {

std::string utc_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

std::vector<TranscriptRecord> run_evaluation(const std::vector<GoldenCase>& cases,
                                             const Responder& responder,
                                             const std::string& model,
                                             const PromptStyle& style, int concurrency,
                                             const OJson& params,
                                             std::vector<std::string>* skipped) {
  std::vector<const GoldenCase*> work;
  for (const auto& c : cases) {
    if (c.verified) {
      work.push_back(&c);
    } else if (skipped != nullptr) {
      skipped->push_back(c.case_id);
    }
  }
  std::vector<TranscriptRecord> out(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < work.size(); i = next++) {
      const auto& gold = *work[i];
      auto& r = out[i];
      r.case_id = gold.case_id;
      r.model = model;
      r.params = params;
      r.timestamp = utc_now();
      auto start = std::chrono::steady_clock::now();
      try {
        r.prompt = transcribe(*gold.problem, style);
        auto reply = responder(gold, r.prompt);
        r.response = std::move(reply.text);
        r.attempts = reply.attempts;
      } catch (const Error& e) {
        r.error = std::string(to_string(e.code())) + ": " + e.what();
        r.attempts = std::max(r.attempts, 1);
      } catch (const std::exception& e) {
        r.error = std::string("internal: ") + e.what();
      }
      r.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    }
  };
  auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max(concurrency, 1)), work.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

// ------------------------------------------------------------------ report

Report grade_transcript(const std::vector<TranscriptRecord>& records,
                        const std::vector<GoldenCase>& corpus) {
  Report rep;
  auto sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
  for (auto& r : sorted) {
    CaseReport c;
    const auto& gold = find_case(corpus, r.case_id);
    if (!r.error) {
      if (!gold.problem) {
        throw Error(ErrorCode::kUnverifiedCase, r.case_id + " is not a verified case");
      }
      c.parsed = parse_answer(r.response, gold.problem->diagram, gold.target);
      c.graded = grade(r.case_id, c.parsed, gold);
      switch (c.graded->verdict) {
        case Verdict::kFull: ++rep.full; break;
        case Verdict::kPartial: ++rep.partial; break;
        case Verdict::kWrong: ++rep.wrong; break;
        case Verdict::kUnparsed: ++rep.unparsed; break;
      }
    } else {
      ++rep.errors;
    }
    c.record = std::move(r);
    rep.cases.push_back(std::move(c));
  }
  return rep;
}

namespace {

std::string occurrence_text(const std::optional<bool>& o) {
  return !o ? "?" : *o ? "Yes" : "No";
}

std::string events_text(const Diagram& d, const std::vector<Event>& events) {
  return events.empty() ? "-" : format_events(d, events);
}

std::string md_cell(std::string s) {
  for (auto pos = s.find('|'); pos != std::string::npos; pos = s.find('|', pos + 2)) {
    s.replace(pos, 1, "\\|");
  }
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string path_text(const Path& p) {
  std::string out;
  for (const auto& n : p) out += (out.empty() ? "" : "-") + n;
  return out;
}

// One line per event explaining the engine's verdict on it.
std::string trace_line(const GoldenCase& gold, const Event& x) {
  const auto& p = *gold.problem;
  const auto& d = p.diagram;
  auto factual = simulate(d, p.stipulation);
  std::string head = "  - " + format_event(d, x) + ": ";
  if (factual_event(d, factual, d.index_of(x.neuron)) != x) {
    return head + "not an actual event (the neuron is " +
           (factual[d.index_of(x.neuron)] ? "on" : "off") + ")";
  }
  auto v = analyze_cause(d, p.stipulation, x, gold.target_event());
  if (v.reason == VerdictReason::kNoPath) return head + "not a cause (no path to " + gold.target + ")";
  std::string out = head + (v.is_cause ? "cause" : "not a cause") + " [" +
                    std::string(to_string(v.branch)) + "]";
  if (!v.direct_path.empty()) out += " direct path " + path_text(v.direct_path);
  if (!v.maintained_blockings.empty()) {
    out += ", held blockings";
    for (const auto& e : v.maintained_blockings) out += " " + e.src + "-o" + e.dst;
  }
  if (!v.unanimous()) out += ", shortest paths disagree";
  return out;
}

}  // namespace

std::string Report::markdown(const std::vector<GoldenCase>& corpus) const {
  std::ostringstream out;
  std::string model = cases.empty() ? "" : cases.front().record.model;
  out << "# Evaluation report\n\n";
  out << "Model: " << (model.empty() ? "-" : model) << "\n\n";
  out << "| Full | Partial | Wrong | Unparsed | Errors |\n";
  out << "|---:|---:|---:|---:|---:|\n";
  out << "| " << full << " | " << partial << " | " << wrong << " | " << unparsed << " | "
      << errors << " |\n\n";
  out << "| Case | Correct answer | Occurs | Causes at t1 | Verdict | Missing | Extra |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const auto& c : cases) {
    const auto& gold = find_case(corpus, c.record.case_id);
    const auto& d = gold.problem->diagram;
    std::string answer = std::string(gold.expected_occurs ? "Yes. " : "No. ") +
                         format_events(d, gold.expected_initial_causes);
    out << "| " << c.record.case_id << " | " << answer << " | ";
    if (!c.graded) {
      out << "- | - | Error | - | - |\n";
      continue;
    }
    out << occurrence_text(c.parsed.occurrence) << " | " << events_text(d, c.parsed.causes)
        << " | " << to_string(c.graded->verdict) << " | " << events_text(d, c.graded->missing)
        << " | " << events_text(d, c.graded->extra) << " |\n";
  }

  bool any = false;
  for (const auto& c : cases) {
    if (c.graded && c.graded->verdict == Verdict::kFull) continue;
    if (!any) out << "\n## Disagreements\n";
    any = true;
    const auto& gold = find_case(corpus, c.record.case_id);
    out << "\n### " << c.record.case_id << "\n\n";
    if (!c.graded) {
      out << "Error: " << md_cell(*c.record.error) << "\n";
      continue;
    }
    out << "Answer: " << md_cell(c.record.response) << "\n\n";
    out << "Verdict: " << to_string(c.graded->verdict) << "\n\n";
    for (const auto& e : gold.expected_initial_causes) out << trace_line(gold, e) << "\n";
    for (const auto& e : c.graded->extra) out << trace_line(gold, e) << "\n";
  }
  return out.str();
}

std::string Report::csv(const std::vector<GoldenCase>& corpus) const {
  std::ostringstream out;
  out << "case_id,model,verdict,occurrence_correct,parsed_occurrence,parsed_causes,missing,extra,error\n";
  for (const auto& c : cases) {
    const auto& d = find_case(corpus, c.record.case_id).problem->diagram;
    out << csv_cell(c.record.case_id) << "," << csv_cell(c.record.model) << ",";
    if (!c.graded) {
      out << "Error,,,,,," << csv_cell(*c.record.error) << "\n";
      continue;
    }
    auto list = [&](const std::vector<Event>& es) {
      std::string s;
      for (const auto& e : es) s += (s.empty() ? "" : " ") + format_event(d, e);
      return csv_cell(s);
    };
    out << to_string(c.graded->verdict) << ","
        << (c.graded->occurrence_correct ? "true" : "false") << ","
        << occurrence_text(c.parsed.occurrence) << "," << list(c.parsed.causes) << ","
        << list(c.graded->missing) << "," << list(c.graded->extra) << ",\n";
  }
  return out.str();
}

}  // namespace ndg
