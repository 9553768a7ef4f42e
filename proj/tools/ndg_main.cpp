// Command-line front end: ndg <subcommand> ...
#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>

#include "ndg/cause.hpp"
#include "ndg/client.hpp"
#include "ndg/corpus.hpp"
#include "ndg/dsl.hpp"
#include "ndg/error.hpp"
#include "ndg/eval.hpp"
#include "ndg/generator.hpp"
#include "ndg/json_io.hpp"
#include "ndg/simulator.hpp"
#include "ndg/transcriber.hpp"

namespace {

using ndg::Json;

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

ndg::Intervention parse_clamp(const ndg::Diagram& d, const std::string& spec) {
  static const std::regex re(R"(^([A-Za-z][A-Za-z0-9]*)=(on|off|1|0)$)");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) {
    throw CLI::ValidationError("--clamp", "expected ID=on or ID=off, got '" + spec + "'");
  }
  return ndg::clamp(d, m[1].str(), m[2] == "on" || m[2] == "1");
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_simulate(const std::string& file, const std::vector<std::string>& clamps, bool json) {
  auto p = ndg::load_problem(file);
  std::vector<ndg::Intervention> cs;
  for (const auto& c : clamps) cs.push_back(parse_clamp(p.diagram, c));
  auto states = ndg::simulate(p.diagram, p.stipulation, cs);
  if (json) {
    Json clamp_json = Json::array();
    for (const auto& c : cs) clamp_json.push_back({{"neuron", c.neuron}, {"state", c.state}});
    print_json({{"diagram", p.diagram.id()},
                {"clamps", clamp_json},
                {"states", ndg::to_json(p.diagram, states)}});
    return 0;
  }
  std::size_t width = 8;
  for (const auto& n : p.diagram.neurons()) width = std::max(width, n.id.size() + 2);
  std::cout << std::left << std::setw(static_cast<int>(width)) << "neuron" << "time  state\n";
  for (std::size_t n = 0; n < p.diagram.size(); ++n) {
    const auto& x = p.diagram.neurons()[n];
    std::cout << std::setw(static_cast<int>(width)) << x.id << std::setw(6)
              << ("t" + std::to_string(x.time)) << (states[n] ? "on" : "off") << "\n";
  }
  return 0;
}

int cmd_causes(const std::string& file, std::optional<int> at, const std::string& target,
               bool trace, bool json) {
  auto p = ndg::load_problem(file);
  if (!target.empty()) p.target = std::string(p.diagram.neuron(target).id);
  auto y = ndg::target_event(p);
  auto causes = ndg::all_causes(p.diagram, p.stipulation, y, at);

  std::vector<ndg::CauseVerdict> verdicts;
  if (trace || json) {
    auto factual = ndg::simulate(p.diagram, p.stipulation);
    auto ty = p.diagram.index_of(y.neuron);
    for (std::size_t n = 0; n < p.diagram.size(); ++n) {
      const auto& x = p.diagram.neurons()[n];
      if (x.time >= p.diagram.neurons()[ty].time) continue;
      if (at && x.time != *at) continue;
      verdicts.push_back(ndg::analyze_cause(p.diagram, p.stipulation,
                                            ndg::factual_event(p.diagram, factual, n), y));
    }
  }
  if (json) {
    Json list = Json::array();
    for (const auto& c : causes) list.push_back(ndg::format_event(p.diagram, c));
    Json j = {{"diagram", p.diagram.id()},
              {"effect", ndg::format_event(p.diagram, y)},
              {"time_filter", at ? Json(*at) : Json(nullptr)},
              {"causes", list}};
    if (trace) {
      Json tr = Json::array();
      for (const auto& v : verdicts) tr.push_back(ndg::to_json(p.diagram, v));
      j["traces"] = tr;
    }
    print_json(j);
    return 0;
  }
  std::cout << ndg::format_events(p.diagram, causes) << "\n";
  if (trace) {
    for (const auto& v : verdicts) {
      std::cout << "  " << ndg::format_event(p.diagram, v.cause) << " -> "
                << ndg::format_event(p.diagram, v.effect) << ": "
                << (v.reason == ndg::VerdictReason::kNoPath ? "no path"
                                                            : (v.is_cause ? "cause" : "not a cause"));
      if (v.reason == ndg::VerdictReason::kEvaluated) std::cout << " [" << ndg::to_string(v.branch) << "]";
      if (!v.direct_path.empty()) {
        std::cout << " path";
        for (const auto& n : v.direct_path) std::cout << " " << n;
      }
      for (const auto& e : v.maintained_blockings) std::cout << " hold " << e.src << "-o" << e.dst;
      if (!v.unanimous()) std::cout << " (shortest paths disagree)";
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_transcribe(const std::string& file, const std::string& style, bool short_answer,
                   bool initial_only, const std::string& intervene) {
  auto p = ndg::load_problem(file);
  ndg::PromptStyle s{style == "contracted" ? ndg::Template::kContracted : ndg::Template::kExplicit,
                     short_answer, initial_only};
  std::cout << ndg::transcribe(p, s) << "\n";
  if (!intervene.empty()) {
    std::cout << "\n"
              << ndg::transcribe_intervention(p.diagram, p.target,
                                              parse_clamp(p.diagram, intervene))
              << "\n";
  }
  return 0;
}

int cmd_generate(const ndg::GenParams& params, const std::string& out, bool json) {
  auto p = ndg::generate(params);
  auto profile = ndg::complexity(p.diagram, p.stipulation);
  Json pj = {{"neurons", profile.neurons},   {"columns", profile.columns},
             {"forks", profile.forks},       {"blocked", profile.blocked},
             {"crossings", profile.crossings}, {"threshold2", profile.threshold2}};
  Json sidecar = {{"seed", params.seed}, {"target", p.target}, {"complexity", pj}};
  if (out.empty() || out == "-") {
    std::cout << ndg::serialize_diagram(p);
    if (json) print_json(sidecar);
    return 0;
  }
  ndg::save_problem(out, p);
  auto side = std::filesystem::path(out).replace_extension(".json");
  ndg::write_file(side, sidecar.dump(2) + "\n");
  std::cout << "wrote " << out << " and " << side.string() << "\n";
  return 0;
}

void write_reports(const ndg::Report& rep, const std::vector<ndg::GoldenCase>& corpus,
                   const std::string& report_path) {
  if (report_path.empty()) {
    std::cout << rep.markdown(corpus);
    return;
  }
  ndg::write_file(report_path, rep.markdown(corpus));
  auto csv = std::filesystem::path(report_path).replace_extension(".csv");
  ndg::write_file(csv, rep.csv(corpus));
  std::cout << "wrote " << report_path << " and " << csv.string() << "\n";
}

int cmd_evaluate(const std::string& corpus_dir, const std::string& config_path,
                 const std::string& fixture, const std::string& out,
                 const std::string& report_path) {
  auto corpus = ndg::load_corpus(corpus_dir);
  std::vector<ndg::TranscriptRecord> records;
  std::vector<std::string> skipped;
  if (!fixture.empty()) {
    auto fx = ndg::load_fixture(fixture);
    ndg::EvalConfig cfg;
    if (!config_path.empty()) cfg = ndg::load_config(config_path);
    records = ndg::run_evaluation(corpus, ndg::fixture_responder(fx.answers), fx.model,
                                  cfg.style, 1, Json::object(), &skipped);
  } else {
    if (config_path.empty()) throw CLI::RequiredError("--config (or --fixture)");
    auto cfg = ndg::load_config(config_path);
    // Fail before any request when the credential is missing.
    if (std::getenv(cfg.credential_env.c_str()) == nullptr) {
      throw ndg::Error(ndg::ErrorCode::kConfig,
                       "credential environment variable '" + cfg.credential_env + "' is not set");
    }
    records = ndg::run_evaluation(corpus, ndg::http_responder(cfg), cfg.model, cfg.style,
                                  cfg.concurrency, cfg.params, &skipped);
  }
  if (!skipped.empty()) {
    std::cerr << "skipped " << skipped.size() << " unverified case(s):";
    for (const auto& s : skipped) std::cerr << " " << s;
    std::cerr << "\n";
  }
  ndg::write_file(out, ndg::write_transcript(records));
  auto rep = ndg::grade_transcript(records, corpus);
  write_reports(rep, corpus, report_path);
  std::cerr << rep.full << " full, " << rep.partial << " partial, " << rep.wrong << " wrong, "
            << rep.unparsed << " unparsed, " << rep.errors << " errors\n";
  return rep.errors > 0 ? kDataError : 0;
}

int cmd_grade(const std::string& transcript, const std::string& gold, const std::string& out) {
  auto corpus = ndg::load_corpus(gold);
  auto records = ndg::read_transcript(ndg::read_file(transcript));
  auto rep = ndg::grade_transcript(records, corpus);
  write_reports(rep, corpus, out);
  return rep.errors > 0 ? kDataError : 0;
}

int cmd_verify_corpus(const std::string& dir) {
  auto corpus = ndg::load_corpus(dir);
  int total = 0;
  int ok = 0;
  for (const auto& c : corpus) {
    if (!c.verified) continue;
    ++total;
    const auto& p = *c.problem;
    auto y = ndg::target_event(p);
    bool occurs = y.polarity == ndg::Polarity::kPlus;
    auto causes = ndg::all_causes(p.diagram, p.stipulation, y, 1);
    std::vector<std::string> problems;
    if (occurs != c.expected_occurs) {
      problems.push_back(std::string("occurrence: expected ") + (c.expected_occurs ? "Yes" : "No") +
                         ", got " + (occurs ? "Yes" : "No"));
    }
    if (causes != c.expected_initial_causes) {
      problems.push_back("causes at t1: expected {" +
                         ndg::format_events(p.diagram, c.expected_initial_causes) + "}, got {" +
                         ndg::format_events(p.diagram, causes) + "}");
    }
    for (const auto& iv : c.interventions) {
      std::vector<ndg::Intervention> cl{iv.clamp};
      bool on = ndg::simulate(p.diagram, p.stipulation, cl).state(p.diagram, p.target);
      if (on != iv.expect_target_on) {
        problems.push_back("clamp " + iv.clamp.neuron + (iv.clamp.state ? "=on" : "=off") +
                           ": expected " + p.target + (iv.expect_target_on ? " on" : " off"));
      }
    }
    if (problems.empty()) {
      ++ok;
      std::cout << c.case_id << "  ok    " << (occurs ? "Yes. " : "No. ")
                << ndg::format_events(p.diagram, causes) << "\n";
    } else {
      std::cout << c.case_id << "  FAIL\n";
      for (const auto& s : problems) std::cout << "      " << s << "\n";
    }
  }
  std::cout << ok << "/" << total << " verified cases match\n";
  return ok == total ? 0 : kDataError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neuron diagram engine: simulation, cause finding, prompts and grading"};
  app.require_subcommand(1);
  const std::string corpus_default = ndg::default_corpus_dir().string();

  std::string file;
  bool json = false;

  auto* sim = app.add_subcommand("simulate", "Print the firing state of every neuron");
  std::vector<std::string> clamps;
  sim->add_option("file", file, ".ndg file")->required()->check(CLI::ExistingFile);
  sim->add_option("--clamp", clamps, "Force a neuron, ID=on or ID=off (repeatable)");
  sim->add_flag("--json", json, "JSON output");

  auto* causes = app.add_subcommand("causes", "List the causes of the asked-about event");
  std::optional<int> at;
  std::string target;
  bool trace = false;
  causes->add_option("file", file, ".ndg file")->required()->check(CLI::ExistingFile);
  causes->add_option("--at", at, "Only causes in this column")->check(CLI::PositiveNumber);
  causes->add_option("--target", target, "Effect neuron (default: the 'ask' neuron)");
  causes->add_flag("--trace", trace, "Show the verdict for every candidate");
  causes->add_flag("--json", json, "JSON output");

  auto* tr = app.add_subcommand("transcribe", "Print the English prompt for a diagram");
  std::string style = "explicit";
  bool short_answer = false;
  bool initial_only = false;
  std::string intervene;
  tr->add_option("file", file, ".ndg file")->required()->check(CLI::ExistingFile);
  tr->add_option("--style", style, "explicit or contracted")
      ->check(CLI::IsMember({"explicit", "contracted"}));
  tr->add_flag("--short", short_answer, "Ask for a one- or two-sentence answer");
  tr->add_flag("--initial-only", initial_only, "Ask only for the causes at t1");
  tr->add_option("--intervene", intervene, "Also print the follow-up for ID=on|off");

  auto* gen = app.add_subcommand("generate", "Generate a random diagram");
  ndg::GenParams gp;
  std::string out;
  bool any_target = false;
  gen->add_option("--columns", gp.columns, "Number of columns")->required();
  gen->add_option("--rows", gp.rows, "Number of rows")->required();
  gen->add_option("--seed", gp.seed, "Seed")->required();
  gen->add_option("--stim-density", gp.stim_density, "Probability of a stimulatory edge")
      ->capture_default_str();
  gen->add_option("--inhib-probability", gp.inhib_probability,
                  "Probability of an inhibitory edge where no stimulatory one was drawn")
      ->capture_default_str();
  gen->add_option("--threshold2-probability", gp.threshold2_probability,
                  "Probability of a double threshold")
      ->capture_default_str();
  gen->add_option("--max-attempts", gp.max_attempts, "Retry budget for a reachable target")
      ->capture_default_str();
  gen->add_flag("--any-target", any_target, "Do not require a path to the target");
  gen->add_option("-o,--output", out, "Output .ndg file (a .json profile is written next to it)");
  gen->add_flag("--json", json, "With stdout output, also print the profile");

  auto* ev = app.add_subcommand("evaluate", "Prompt a model on the verified corpus and grade it");
  std::string corpus_dir = corpus_default;
  std::string config;
  std::string fixture;
  std::string report;
  ev->add_option("--corpus", corpus_dir, "Corpus directory")->check(CLI::ExistingDirectory)
      ->capture_default_str();
  ev->add_option("--config", config, "JSON config")->check(CLI::ExistingFile);
  ev->add_option("--fixture", fixture, "Replay recorded answers instead of calling an endpoint")
      ->check(CLI::ExistingFile);
  ev->add_option("-o,--output", out, "Transcript (JSONL)")->required();
  ev->add_option("--report", report, "Markdown report (a .csv twin is written next to it)");

  auto* gr = app.add_subcommand("grade", "Grade a transcript offline");
  std::string transcript;
  gr->add_option("transcript", transcript, "Transcript (JSONL)")->required()->check(CLI::ExistingFile);
  gr->add_option("--gold", corpus_dir, "Corpus directory")->check(CLI::ExistingDirectory)
      ->capture_default_str();
  gr->add_option("-o,--output", out, "Markdown report (a .csv twin is written next to it)");

  auto* vc = app.add_subcommand("verify-corpus", "Check the engine against every verified case");
  vc->add_option("--corpus", corpus_dir, "Corpus directory")->check(CLI::ExistingDirectory)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*sim) return cmd_simulate(file, clamps, json);
    if (*causes) return cmd_causes(file, at, target, trace, json);
    if (*tr) return cmd_transcribe(file, style, short_answer, initial_only, intervene);
    if (*gen) {
      gp.require_target_reachable = !any_target;
      return cmd_generate(gp, out, json);
    }
    if (*ev) return cmd_evaluate(corpus_dir, config, fixture, out, report);
    if (*gr) return cmd_grade(transcript, corpus_dir, out);
    if (*vc) return cmd_verify_corpus(corpus_dir);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ndg::Error& e) {
    std::cerr << "error [" << ndg::to_string(e.code()) << "]: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}
