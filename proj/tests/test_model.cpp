#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "ndg/error.hpp"
#include "ndg/model.hpp"
#include "ndg/simulator.hpp"
#include "oracles.hpp"

using namespace ndg;
using testing::corpus;

TEST_CASE("d01 validates cleanly") {
  auto p = corpus("d01");
  CHECK(validate(p.diagram, p.stipulation).empty());
}

TEST_CASE("backward edge is reported once, by name") {
  Diagram d("bad", 2, {{"A", 1, 1, 1}, {"B", 2, 1, 1}}, {{"B", "A", EdgeKind::kStimulatory}});
  auto v = validate(d);
  REQUIRE(v.size() == 1);
  CHECK(v[0].element == "B->A");
  CHECK(v[0].severity == Severity::kError);
  CHECK_THROWS_AS(require_valid(d), Error);
}

TEST_CASE("stipulating a non-source is a violation") {
  auto p = corpus("d01");
  Stipulation s{{"C", "D"}};
  auto v = validate(p.diagram, s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].element == "D");
}

TEST_CASE("duplicates, bad times and thresholds") {
  Diagram d("x", 2,
            {{"A", 1, 1, 1}, {"A", 2, 1, 1}, {"B", 3, 0, 1}},
            {{"A", "B", EdgeKind::kStimulatory}, {"A", "B", EdgeKind::kStimulatory}});
  auto v = validate(d);
  CHECK(v.size() >= 3);
  CHECK(has_errors(v));

  Diagram warn("w", 2, {{"A", 1, 1, 1}, {"B", 2, 3, 1}}, {{"A", "B", EdgeKind::kStimulatory}});
  auto w = validate(warn);
  REQUIRE(w.size() == 1);
  CHECK(w[0].severity == Severity::kWarning);
  CHECK_FALSE(has_errors(w));
}

TEST_CASE("validate is deterministic") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto p = oracle::random_problem(rng);
    CHECK(validate(p.diagram, p.stipulation) == validate(p.diagram, p.stipulation));
  }
}

TEST_CASE("events format with the minus sign and parse back") {
  auto p = corpus("d01");
  Event b{"B", Polarity::kMinus};
  CHECK(format_event(p.diagram, b) == "B−(t2)");
  CHECK(parse_event(p.diagram, "B-(t2)") == b);
  CHECK(parse_event(p.diagram, "B−") == b);
  CHECK(parse_event(p.diagram, "C+(t1)") == Event{"C", Polarity::kPlus});
  CHECK_THROWS_AS(parse_event(p.diagram, "C+(t2)"), Error);
  CHECK_THROWS_AS(parse_event(p.diagram, "C"), Error);
  CHECK_THROWS_AS(parse_event(p.diagram, "Z+"), Error);
  CHECK(format_events(p.diagram, {{"E", Polarity::kPlus}, {"C", Polarity::kPlus}}) ==
        "C+(t1), E+(t3)");
}

TEST_CASE("clamp rejects unknown neurons") {
  auto p = corpus("d12");
  CHECK(clamp(p.diagram, "D", true) == Intervention{"D", true});
  try {
    clamp(p.diagram, "Q", true);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownNeuron);
  }
}

TEST_CASE("clamp gold from the intervention follow-ups") {
  auto d12 = corpus("d12");
  std::vector<Intervention> c12{clamp(d12.diagram, "D", true)};
  CHECK_FALSE(simulate(d12.diagram, d12.stipulation, c12).state(d12.diagram, "E"));

  auto d17 = corpus("d17");
  std::vector<Intervention> c17{clamp(d17.diagram, "D", false)};
  CHECK(simulate(d17.diagram, d17.stipulation, c17).state(d17.diagram, "G"));
}

TEST_CASE("clamping to the factual state changes nothing") {
  for (auto id : {"d01", "d05", "d10", "d18"}) {
    auto p = corpus(id);
    auto f = simulate(p.diagram, p.stipulation);
    for (const auto& n : p.diagram.neurons()) {
      std::vector<Intervention> c{{n.id, f.state(p.diagram, n.id)}};
      CHECK(simulate(p.diagram, p.stipulation, c) == f);
    }
  }
}

TEST_CASE("clamp only affects the clamped neuron's forward cone") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto p = oracle::random_problem(rng);
    auto f = simulate(p.diagram, p.stipulation);
    for (std::size_t n = 0; n < p.diagram.size(); ++n) {
      std::vector<Intervention> c{{p.diagram.neurons()[n].id, !f[n]}};
      auto g = simulate(p.diagram, p.stipulation, c);
      auto cone = p.diagram.forward_reachable(n);
      for (std::size_t m = 0; m < p.diagram.size(); ++m) {
        if (m != n && !cone[m]) CHECK(g[m] == f[m]);
      }
      CHECK(g[n] == !f[n]);
    }
  }
}
