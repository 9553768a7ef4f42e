#include "ndg/json_io.hpp"

#include "ndg/error.hpp"

namespace ndg {

Json to_json(const Edge& edge) {
  return Json{{"src", edge.src},
              {"dst", edge.dst},
              {"kind", edge.kind == EdgeKind::kStimulatory ? "Stimulatory"
                                                           : "Inhibitory"}};
}

Json to_json(const Diagram& diagram) {
  Json neurons = Json::array();
  for (const auto& n : diagram.neurons()) {
    neurons.push_back(Json{{"id", n.id},
                           {"time", n.time},
                           {"threshold", n.threshold},
                           {"row", n.row}});
  }
  Json edges = Json::array();
  for (const auto& e : diagram.edges()) edges.push_back(to_json(e));
  return Json{{"id", diagram.id()},
              {"columns", diagram.columns()},
              {"neurons", std::move(neurons)},
              {"edges", std::move(edges)}};
}

Json to_json(const Diagram& diagram, const Stipulation& stipulation) {
  Json sources = Json::array();
  for (const auto& n : diagram.neurons()) {
    if (stipulation.firing_sources.count(n.id) != 0) sources.push_back(n.id);
  }
  return Json{{"firing_sources", std::move(sources)}};
}

Json to_json(const Problem& problem) {
  return Json{{"diagram", to_json(problem.diagram)},
              {"stipulation", to_json(problem.diagram, problem.stipulation)},
              {"target", problem.target}};
}

Json to_json(const Diagram& diagram, const FiringAssignment& states) {
  Json out = Json::object();
  for (std::size_t n = 0; n < diagram.size(); ++n) {
    out[diagram.neurons()[n].id] = static_cast<bool>(states[n]);
  }
  return out;
}

Json to_json(const Diagram& diagram, const CauseVerdict& verdict) {
  Json maintained = Json::array();
  for (const auto& e : verdict.maintained_blockings) {
    maintained.push_back(to_json(e));
  }
  Json ties = Json::array();
  for (const auto& t : verdict.per_tie_verdicts) {
    ties.push_back(Json{{"direct_path", t.direct_path}, {"flips", t.flips}});
  }
  Json direct = verdict.direct_path.empty() ? Json(nullptr)
                                            : Json(verdict.direct_path);
  return Json{
      {"cause", format_event(diagram, verdict.cause)},
      {"effect", format_event(diagram, verdict.effect)},
      {"is_cause", verdict.is_cause},
      {"branch", std::string(to_string(verdict.branch))},
      {"reason", verdict.reason == VerdictReason::kNoPath ? "no-path"
                                                          : "evaluated"},
      {"direct_path", std::move(direct)},
      {"maintained_blockings", std::move(maintained)},
      {"counterfactual", to_json(diagram, verdict.counterfactual)},
      {"per_tie_verdicts", std::move(ties)},
  };
}

Diagram diagram_from_json(const Json& j) {
  try {
    std::vector<Neuron> neurons;
    for (const auto& n : j.at("neurons")) {
      neurons.push_back(Neuron{n.at("id").get<std::string>(),
                               n.at("time").get<int>(),
                               n.value("threshold", 1), n.value("row", 1)});
    }
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      auto kind = e.at("kind").get<std::string>();
      if (kind != "Stimulatory" && kind != "Inhibitory") {
        throw Error(ErrorCode::kParse, "unknown edge kind '" + kind + "'");
      }
      edges.push_back(Edge{e.at("src").get<std::string>(),
                           e.at("dst").get<std::string>(),
                           kind == "Stimulatory" ? EdgeKind::kStimulatory
                                                 : EdgeKind::kInhibitory});
    }
    return Diagram(j.at("id").get<std::string>(), j.at("columns").get<int>(),
                   std::move(neurons), std::move(edges));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad diagram JSON: ") + e.what());
  }
}

}  // namespace ndg
