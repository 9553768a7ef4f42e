#include "ndg/cause.hpp"

#include <algorithm>

#include "ndg/error.hpp"

namespace ndg {

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::kSimpleCounterfactual: return "simple-counterfactual";
    case Branch::kOffBifurcating: return "off-bifurcating";
    case Branch::kOnBifurcatingMaxBlocking: return "on-bifurcating-max-blocking";
  }
  return "unknown";
}

bool is_bifurcating(const Diagram& diagram, std::string_view neuron) {
  return diagram.out_edges(diagram.index_of(neuron)).size() >= 2;
}

CollapsedGraph collapse_redundant(const Diagram& diagram,
                                  const FiringAssignment& factual) {
  CollapsedGraph out;
  out.representative.reserve(diagram.size());
  // Parents precede children in storage order, so one pass reaches the
  // fixpoint: a parent's representative is final before its child is seen.
  for (std::size_t n = 0; n < diagram.size(); ++n) {
    const auto& in = diagram.in_edges(n);
    if (in.size() == 1 && diagram.out_edges(n).size() == 1) {
      auto parent = diagram.edge_src(in.front());
      if (factual[parent] == factual[n]) {
        out.representative.push_back(out.representative[parent]);
        continue;
      }
    }
    out.representative.push_back(diagram.neurons()[n].id);
  }
  for (std::size_t e = 0; e < diagram.edges().size(); ++e) {
    const auto& s = out.representative[diagram.edge_src(e)];
    const auto& d = out.representative[diagram.edge_dst(e)];
    if (s != d) out.edges.push_back({s, d, diagram.edges()[e].kind});
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()),
                  out.edges.end());
  return out;
}

int collapsed_length(const Diagram& diagram, const CollapsedGraph& collapsed,
                     const Path& path) {
  int length = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (collapsed.representative_of(diagram, path[i - 1]) !=
        collapsed.representative_of(diagram, path[i])) {
      ++length;
    }
  }
  return length;
}

namespace {

// Neurons from which `to` can be reached (including `to`).
std::vector<bool> backward_reachable(const Diagram& diagram, std::size_t to) {
  std::vector<bool> seen(diagram.size(), false);
  std::vector<std::size_t> stack{to};
  seen[to] = true;
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    for (auto e : diagram.in_edges(n)) {
      auto s = diagram.edge_src(e);
      if (!seen[s]) {
        seen[s] = true;
        stack.push_back(s);
      }
    }
  }
  return seen;
}

bool has_path(const Diagram& diagram, std::size_t x, std::size_t y) {
  return x != y && diagram.forward_reachable(x)[y];
}

void enumerate_paths(const Diagram& diagram, std::size_t at, std::size_t to,
                     const std::vector<bool>& can_reach, Path& current,
                     std::vector<Path>& out, std::size_t limit) {
  if (at == to) {
    if (out.size() >= limit) {
      throw Error(ErrorCode::kPathLimit,
                  "more than " + std::to_string(limit) + " paths to " +
                      diagram.neurons()[to].id);
    }
    out.push_back(current);
    return;
  }
  std::vector<std::size_t> visited;
  for (auto e : diagram.out_edges(at)) {
    auto next = diagram.edge_dst(e);
    if (!can_reach[next]) continue;
    // Parallel stim/inhib edges between one pair give the same id sequence.
    if (std::find(visited.begin(), visited.end(), next) != visited.end()) {
      continue;
    }
    visited.push_back(next);
    current.push_back(diagram.neurons()[next].id);
    enumerate_paths(diagram, next, to, can_reach, current, out, limit);
    current.pop_back();
  }
}

void check_factual(const Diagram& diagram, const FiringAssignment& factual,
                   const Event& event) {
  bool on = factual[diagram.index_of(event.neuron)];
  if (on != (event.polarity == Polarity::kPlus)) {
    throw Error(ErrorCode::kPolarityMismatch,
                format_event(diagram, event) + " is not what happens: " +
                    event.neuron + " is " + (on ? "on" : "off"));
  }
}

std::vector<bool> held_edge_mask(const Diagram& diagram,
                                 const FiringAssignment& factual,
                                 const std::vector<bool>& downstream,
                                 const std::set<std::string>& maintenance) {
  std::vector<bool> held(diagram.edges().size(), false);
  for (std::size_t e = 0; e < diagram.edges().size(); ++e) {
    if (diagram.edges()[e].kind != EdgeKind::kInhibitory) continue;
    auto s = diagram.edge_src(e);
    auto d = diagram.edge_dst(e);
    if (factual[s] && downstream[d] &&
        maintenance.count(diagram.neurons()[d].id) != 0) {
      held[e] = true;
    }
  }
  return held;
}

CauseVerdict analyze_with_factual(const Diagram& diagram,
                                  const Stipulation& stipulation,
                                  const FiringAssignment& factual,
                                  const Event& x, const Event& y) {
  check_factual(diagram, factual, x);
  check_factual(diagram, factual, y);
  auto xi = diagram.index_of(x.neuron);
  auto yi = diagram.index_of(y.neuron);

  CauseVerdict verdict;
  verdict.cause = x;
  verdict.effect = y;
  bool bifurcating = diagram.out_edges(xi).size() >= 2;
  if (factual[xi] && bifurcating) {
    verdict.branch = Branch::kOnBifurcatingMaxBlocking;
  } else if (bifurcating) {
    verdict.branch = Branch::kOffBifurcating;
  } else {
    verdict.branch = Branch::kSimpleCounterfactual;
  }

  if (!has_path(diagram, xi, yi)) {
    verdict.reason = VerdictReason::kNoPath;
    verdict.counterfactual = factual;
    return verdict;
  }

  if (verdict.branch != Branch::kOnBifurcatingMaxBlocking) {
    verdict.counterfactual =
        counterfactual(diagram, stipulation, factual, x, std::nullopt);
    verdict.is_cause = verdict.counterfactual[yi] != factual[yi];
    return verdict;
  }

  auto paths = direct_paths(diagram, factual, x.neuron, y.neuron);
  for (const auto& path : paths.collapsed_shortest) {
    std::set<std::string> maintenance;
    for (const auto& n : diagram.neurons()) {
      if (std::find(path.begin(), path.end(), n.id) == path.end()) {
        maintenance.insert(n.id);
      }
    }
    auto cf = counterfactual(diagram, stipulation, factual, x, maintenance);
    bool flips = cf[yi] != factual[yi];
    verdict.per_tie_verdicts.push_back({path, flips});
    if (path == paths.chosen_direct) {
      verdict.direct_path = path;
      verdict.maintained_blockings =
          held_blockings(diagram, factual, x.neuron, maintenance);
      verdict.counterfactual = std::move(cf);
      verdict.is_cause = flips;
    }
  }
  return verdict;
}

}  // namespace

PathAnalysis direct_paths(const Diagram& diagram,
                          const FiringAssignment& factual, std::string_view x,
                          std::string_view y, std::size_t path_limit) {
  auto xi = diagram.index_of(x);
  auto yi = diagram.index_of(y);
  if (!has_path(diagram, xi, yi)) {
    throw Error(ErrorCode::kNoPath, "no path from " + std::string(x) +
                                        " to " + std::string(y));
  }
  PathAnalysis out;
  auto can_reach = backward_reachable(diagram, yi);
  Path current{std::string(x)};
  enumerate_paths(diagram, xi, yi, can_reach, current, out.all_paths,
                  path_limit);
  std::sort(out.all_paths.begin(), out.all_paths.end());

  auto collapsed = collapse_redundant(diagram, factual);
  out.shortest_length = -1;
  for (const auto& p : out.all_paths) {
    int len = collapsed_length(diagram, collapsed, p);
    if (out.shortest_length < 0 || len < out.shortest_length) {
      out.shortest_length = len;
      out.collapsed_shortest.clear();
    }
    if (len == out.shortest_length) out.collapsed_shortest.push_back(p);
  }
  out.chosen_direct = out.collapsed_shortest.front();
  for (const auto& n : diagram.neurons()) {
    if (std::find(out.chosen_direct.begin(), out.chosen_direct.end(), n.id) ==
        out.chosen_direct.end()) {
      out.off_path.push_back(n.id);
    }
  }
  return out;
}

std::vector<Edge> held_blockings(const Diagram& diagram,
                                 const FiringAssignment& factual,
                                 std::string_view from,
                                 const std::set<std::string>& maintenance) {
  auto downstream = diagram.forward_reachable(diagram.index_of(from));
  auto mask = held_edge_mask(diagram, factual, downstream, maintenance);
  std::vector<Edge> out;
  for (std::size_t e = 0; e < mask.size(); ++e) {
    if (mask[e]) out.push_back(diagram.edges()[e]);
  }
  return out;
}

FiringAssignment counterfactual(
    const Diagram& diagram, const Stipulation& stipulation,
    const FiringAssignment& factual, const Event& x,
    const std::optional<std::set<std::string>>& maintenance) {
  check_factual(diagram, factual, x);
  auto xi = diagram.index_of(x.neuron);
  auto downstream = diagram.forward_reachable(xi);

  std::vector<bool> held;
  if (maintenance) {
    held = held_edge_mask(diagram, factual, downstream, *maintenance);
  }

  FiringAssignment cf = factual;
  cf.set(xi, !factual[xi]);
  for (std::size_t n = xi + 1; n < diagram.size(); ++n) {
    if (!downstream[n]) continue;
    bool stipulated =
        stipulation.firing_sources.count(diagram.neurons()[n].id) != 0;
    cf.set(n, evaluate_neuron(diagram, n, cf, stipulated,
                              maintenance ? &held : nullptr));
  }
  return cf;
}

bool CauseVerdict::unanimous() const {
  return std::all_of(per_tie_verdicts.begin(), per_tie_verdicts.end(),
                     [&](const TieVerdict& t) { return t.flips == is_cause; });
}

CauseVerdict analyze_cause(const Diagram& diagram,
                           const Stipulation& stipulation, const Event& x,
                           const Event& y) {
  auto factual = simulate(diagram, stipulation);
  return analyze_with_factual(diagram, stipulation, factual, x, y);
}

namespace {

std::string describe_ties(const Diagram& diagram, const CauseVerdict& v) {
  std::string out = "shortest direct paths disagree for " +
                    format_event(diagram, v.cause) + " -> " +
                    format_event(diagram, v.effect) + ":";
  for (const auto& t : v.per_tie_verdicts) {
    out += " [";
    for (std::size_t i = 0; i < t.direct_path.size(); ++i) {
      if (i > 0) out += "-";
      out += t.direct_path[i];
    }
    out += t.flips ? ": cause]" : ": not a cause]";
  }
  return out;
}

}  // namespace

CauseVerdict is_cause(const Diagram& diagram, const Stipulation& stipulation,
                      const Event& x, const Event& y) {
  auto verdict = analyze_cause(diagram, stipulation, x, y);
  if (!verdict.unanimous()) {
    throw Error(ErrorCode::kTieDisagreement, describe_ties(diagram, verdict));
  }
  return verdict;
}

std::vector<Event> all_causes(const Diagram& diagram,
                              const Stipulation& stipulation, const Event& y,
                              std::optional<int> time_filter) {
  auto factual = simulate(diagram, stipulation);
  check_factual(diagram, factual, y);
  auto yi = diagram.index_of(y.neuron);
  auto upstream = backward_reachable(diagram, yi);
  const int y_time = diagram.neurons()[yi].time;

  std::vector<Event> out;
  for (std::size_t n = 0; n < diagram.size(); ++n) {
    const auto& neuron = diagram.neurons()[n];
    if (n == yi || !upstream[n] || neuron.time >= y_time) continue;
    if (time_filter && neuron.time != *time_filter) continue;
    auto x = factual_event(diagram, factual, n);
    auto verdict = analyze_with_factual(diagram, stipulation, factual, x, y);
    if (!verdict.unanimous()) {
      throw Error(ErrorCode::kTieDisagreement,
                  describe_ties(diagram, verdict));
    }
    if (verdict.is_cause) out.push_back(std::move(x));
  }
  return display_order(diagram, std::move(out));
}

}  // namespace ndg
