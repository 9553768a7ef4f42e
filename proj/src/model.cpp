#include "ndg/model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <tuple>

#include "ndg/error.hpp"

namespace ndg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDiagram: return "invalid-diagram";
    case ErrorCode::kInvalidStipulation: return "invalid-stipulation";
    case ErrorCode::kUnknownNeuron: return "unknown-neuron";
    case ErrorCode::kPolarityMismatch: return "polarity-mismatch";
    case ErrorCode::kNoPath: return "no-path";
    case ErrorCode::kPathLimit: return "path-limit";
    case ErrorCode::kTieDisagreement: return "tie-disagreement";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kCorpus: return "corpus";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kUnverifiedCase: return "unverified-case";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kAuth: return "auth";
    case ErrorCode::kTransport: return "transport";
    case ErrorCode::kMalformedResponse: return "malformed-response";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

std::string_view to_string(EdgeKind kind) {
  return kind == EdgeKind::kStimulatory ? "stim" : "inhib";
}

Diagram::Diagram(std::string id, int columns, std::vector<Neuron> neurons,
                 std::vector<Edge> edges)
    : id_(std::move(id)),
      columns_(columns),
      neurons_(std::move(neurons)),
      edges_(std::move(edges)) {
  std::stable_sort(neurons_.begin(), neurons_.end(),
                   [](const Neuron& a, const Neuron& b) {
                     return std::tie(a.time, a.id) < std::tie(b.time, b.id);
                   });
  auto time_of = [this](const std::string& id) {
    auto idx = find(id);
    return idx ? neurons_[*idx].time : 0;
  };
  std::stable_sort(edges_.begin(), edges_.end(),
                   [&](const Edge& a, const Edge& b) {
                     return std::make_tuple(time_of(a.src), std::cref(a.src),
                                            std::cref(a.dst), a.kind) <
                            std::make_tuple(time_of(b.src), std::cref(b.src),
                                            std::cref(b.dst), b.kind);
                   });

  in_edges_.resize(neurons_.size());
  out_edges_.resize(neurons_.size());
  edge_src_.reserve(edges_.size());
  edge_dst_.reserve(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto s = find(edges_[e].src);
    auto d = find(edges_[e].dst);
    edge_src_.push_back(s.value_or(kNoNeuron));
    edge_dst_.push_back(d.value_or(kNoNeuron));
    if (s && d) {
      out_edges_[*s].push_back(e);
      in_edges_[*d].push_back(e);
    }
  }
}

std::optional<std::size_t> Diagram::find(std::string_view id) const {
  for (std::size_t i = 0; i < neurons_.size(); ++i) {
    if (neurons_[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t Diagram::index_of(std::string_view id) const {
  if (auto idx = find(id)) return *idx;
  throw Error(ErrorCode::kUnknownNeuron,
              "unknown neuron '" + std::string(id) + "' in diagram " + id_);
}

std::size_t Diagram::stimulatory_in_degree(std::size_t n) const {
  return static_cast<std::size_t>(
      std::count_if(in_edges_[n].begin(), in_edges_[n].end(), [&](auto e) {
        return edges_[e].kind == EdgeKind::kStimulatory;
      }));
}

std::vector<bool> Diagram::forward_reachable(std::size_t from) const {
  std::vector<bool> seen(neurons_.size(), false);
  std::vector<std::size_t> stack{from};
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    for (auto e : out_edges_[n]) {
      auto d = edge_dst_[e];
      if (!seen[d]) {
        seen[d] = true;
        stack.push_back(d);
      }
    }
  }
  seen[from] = false;
  return seen;
}

bool Diagram::operator==(const Diagram& other) const {
  return id_ == other.id_ && columns_ == other.columns_ &&
         neurons_ == other.neurons_ && edges_ == other.edges_;
}

namespace {

constexpr std::string_view kMinusSign = "−";
constexpr std::string_view kEnDash = "–";

}  // namespace

std::string format_event(const Diagram& diagram, const Event& event) {
  const auto& n = diagram.neuron(event.neuron);
  std::string out = n.id;
  out += event.polarity == Polarity::kPlus ? std::string("+")
                                           : std::string(kMinusSign);
  out += "(t" + std::to_string(n.time) + ")";
  return out;
}

Event parse_event(const Diagram& diagram, std::string_view text) {
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::kParse,
                 "bad event '" + std::string(text) + "': " + why);
  };
  std::size_t i = 0;
  while (i < text.size() &&
         (std::isalnum(static_cast<unsigned char>(text[i])) != 0)) {
    ++i;
  }
  std::string id(text.substr(0, i));
  if (!is_valid_identifier(id)) throw fail("missing neuron id");
  auto rest = text.substr(i);
  Polarity polarity;
  if (rest.starts_with("+")) {
    polarity = Polarity::kPlus;
    rest.remove_prefix(1);
  } else if (rest.starts_with("-")) {
    polarity = Polarity::kMinus;
    rest.remove_prefix(1);
  } else if (rest.starts_with(kMinusSign)) {
    polarity = Polarity::kMinus;
    rest.remove_prefix(kMinusSign.size());
  } else if (rest.starts_with(kEnDash)) {
    polarity = Polarity::kMinus;
    rest.remove_prefix(kEnDash.size());
  } else {
    throw fail("missing polarity");
  }
  const auto& n = diagram.neuron(id);
  if (!rest.empty()) {
    std::string expected = "(t" + std::to_string(n.time) + ")";
    if (rest != expected) throw fail("time suffix does not match " + expected);
  }
  return Event{id, polarity};
}

std::vector<Event> display_order(const Diagram& diagram,
                                 std::vector<Event> events) {
  std::sort(events.begin(), events.end(), [&](const Event& a, const Event& b) {
    const auto& na = diagram.neuron(a.neuron);
    const auto& nb = diagram.neuron(b.neuron);
    return std::tie(na.time, na.row, na.id, a.polarity) <
           std::tie(nb.time, nb.row, nb.id, b.polarity);
  });
  return events;
}

std::string format_events(const Diagram& diagram,
                          const std::vector<Event>& events) {
  std::string out;
  for (const auto& e : display_order(diagram, events)) {
    if (!out.empty()) out += ", ";
    out += format_event(diagram, e);
  }
  return out;
}

Intervention clamp(const Diagram& diagram, std::string_view neuron,
                   bool state) {
  diagram.index_of(neuron);
  return Intervention{std::string(neuron), state};
}

bool is_valid_identifier(std::string_view id) {
  if (id.empty() || std::isalpha(static_cast<unsigned char>(id[0])) == 0) {
    return false;
  }
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  });
}

std::vector<Violation> validate(const Diagram& diagram) {
  std::vector<Violation> out;
  auto error = [&](std::string element, std::string message) {
    out.push_back({Severity::kError, std::move(element), std::move(message)});
  };

  if (!is_valid_identifier(diagram.id())) {
    error(diagram.id(), "diagram id '" + diagram.id() + "' is not an identifier");
  }
  if (diagram.columns() < 1) {
    error(diagram.id(), "column count must be positive");
  }

  std::map<std::string, int> seen;
  for (const auto& n : diagram.neurons()) {
    if (!is_valid_identifier(n.id)) {
      error(n.id, "neuron id '" + n.id + "' is not an identifier");
    }
    if (++seen[n.id] == 2) error(n.id, "duplicate neuron '" + n.id + "'");
    if (n.time < 1 || n.time > diagram.columns()) {
      error(n.id, "neuron " + n.id + " at t" + std::to_string(n.time) +
                      " lies outside columns 1.." +
                      std::to_string(diagram.columns()));
    }
    if (n.threshold < 1) {
      error(n.id, "neuron " + n.id + " has non-positive threshold");
    } else if (n.threshold > 2) {
      out.push_back({Severity::kWarning, n.id,
                     "neuron " + n.id + " has threshold " +
                         std::to_string(n.threshold) +
                         "; classic diagrams use 1 or 2"});
    }
    if (n.row < 1) error(n.id, "neuron " + n.id + " has non-positive row");
  }

  std::set<Edge> edges_seen;
  for (std::size_t e = 0; e < diagram.edges().size(); ++e) {
    const auto& edge = diagram.edges()[e];
    std::string name = edge.src + "->" + edge.dst;
    if (!edges_seen.insert(edge).second) {
      error(name, "duplicate " + std::string(to_string(edge.kind)) +
                      " edge " + name);
    }
    auto s = diagram.edge_src(e);
    auto d = diagram.edge_dst(e);
    if (s == kNoNeuron) error(name, "edge " + name + " names undeclared neuron " + edge.src);
    if (d == kNoNeuron) error(name, "edge " + name + " names undeclared neuron " + edge.dst);
    if (s != kNoNeuron && d != kNoNeuron &&
        diagram.neurons()[s].time >= diagram.neurons()[d].time) {
      error(name, "edge " + name + " does not point forward in time (t" +
                      std::to_string(diagram.neurons()[s].time) + " -> t" +
                      std::to_string(diagram.neurons()[d].time) + ")");
    }
  }
  return out;
}

std::vector<Violation> validate(const Diagram& diagram,
                                const Stipulation& stipulation) {
  auto out = validate(diagram);
  for (const auto& id : stipulation.firing_sources) {
    auto idx = diagram.find(id);
    if (!idx) {
      out.push_back({Severity::kError, id,
                     "stipulated neuron '" + id + "' is not declared"});
    } else if (!diagram.is_source(*idx)) {
      out.push_back({Severity::kError, id,
                     "stipulated neuron " + id +
                         " has a stimulatory parent and is not a source"});
    }
  }
  return out;
}

bool has_errors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(), [](const auto& v) {
    return v.severity == Severity::kError;
  });
}

namespace {

void throw_first(const std::vector<Violation>& violations, ErrorCode code) {
  for (const auto& v : violations) {
    if (v.severity == Severity::kError) throw Error(code, v.message);
  }
}

}  // namespace

void require_valid(const Diagram& diagram) {
  throw_first(validate(diagram), ErrorCode::kInvalidDiagram);
}

void require_valid(const Diagram& diagram, const Stipulation& stipulation) {
  require_valid(diagram);
  auto all = validate(diagram, stipulation);
  throw_first(all, ErrorCode::kInvalidStipulation);
}

}  // namespace ndg
