#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ndg {

// A neuron sits in column `time` (1-based) and fires once at least
// `threshold` stimulatory parents fire and no inhibitory parent does.
// `row` is the vertical position in the drawn diagram; it orders sentences
// in transcriptions and defines edge crossings, nothing else.
struct Neuron {
  std::string id;
  int time = 1;
  int threshold = 1;
  int row = 1;

  bool operator==(const Neuron&) const = default;
};

enum class EdgeKind { kStimulatory, kInhibitory };

std::string_view to_string(EdgeKind kind);

struct Edge {
  std::string src;
  std::string dst;
  EdgeKind kind = EdgeKind::kStimulatory;

  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

inline constexpr std::size_t kNoNeuron = static_cast<std::size_t>(-1);

// Immutable layered diagram. Neurons are stored sorted by (time, id) and
// edges by (time(src), src, dst, kind), so storage order is also a valid
// evaluation order. Construction never throws on structural problems;
// validate() reports them.
class Diagram {
 public:
  Diagram() = default;
  Diagram(std::string id, int columns, std::vector<Neuron> neurons,
          std::vector<Edge> edges);

  const std::string& id() const noexcept { return id_; }
  int columns() const noexcept { return columns_; }
  std::span<const Neuron> neurons() const noexcept { return neurons_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return neurons_.size(); }

  std::optional<std::size_t> find(std::string_view id) const;
  // Throws Error(kUnknownNeuron).
  std::size_t index_of(std::string_view id) const;
  const Neuron& neuron(std::string_view id) const {
    return neurons_[index_of(id)];
  }

  // Edge endpoints as neuron indices; kNoNeuron for undeclared ids.
  std::size_t edge_src(std::size_t edge) const { return edge_src_[edge]; }
  std::size_t edge_dst(std::size_t edge) const { return edge_dst_[edge]; }

  std::span<const std::size_t> in_edges(std::size_t n) const {
    return in_edges_[n];
  }
  std::span<const std::size_t> out_edges(std::size_t n) const {
    return out_edges_[n];
  }

  std::size_t stimulatory_in_degree(std::size_t n) const;
  // Sources have no stimulatory parents; they fire only when stipulated.
  bool is_source(std::size_t n) const { return stimulatory_in_degree(n) == 0; }

  // Neurons reachable from `from` along edges of either kind, excluding
  // `from` itself.
  std::vector<bool> forward_reachable(std::size_t from) const;

  bool operator==(const Diagram& other) const;

 private:
  std::string id_;
  int columns_ = 0;
  std::vector<Neuron> neurons_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> edge_src_;
  std::vector<std::size_t> edge_dst_;
  std::vector<std::vector<std::size_t>> in_edges_;
  std::vector<std::vector<std::size_t>> out_edges_;
};

struct Stipulation {
  std::set<std::string> firing_sources;

  bool operator==(const Stipulation&) const = default;
};

enum class Polarity { kPlus, kMinus };

struct Event {
  std::string neuron;
  Polarity polarity = Polarity::kPlus;

  bool operator==(const Event&) const = default;
  auto operator<=>(const Event&) const = default;
};

inline Event negate(Event e) {
  e.polarity =
      e.polarity == Polarity::kPlus ? Polarity::kMinus : Polarity::kPlus;
  return e;
}

// "C+(t1)" / "B−(t2)". The minus sign is U+2212.
std::string format_event(const Diagram& diagram, const Event& event);
// Accepts '+', '-', U+2212 and U+2013 as polarity marks; the time suffix is
// optional but must match the diagram when present.
Event parse_event(const Diagram& diagram, std::string_view text);

// Events sorted by (time, row, id) for display.
std::vector<Event> display_order(const Diagram& diagram,
                                 std::vector<Event> events);
std::string format_events(const Diagram& diagram,
                          const std::vector<Event>& events);

struct Intervention {
  std::string neuron;
  bool state = false;

  bool operator==(const Intervention&) const = default;
};

// Throws Error(kUnknownNeuron).
Intervention clamp(const Diagram& diagram, std::string_view neuron,
                   bool state);

enum class Severity { kError, kWarning };

struct Violation {
  Severity severity = Severity::kError;
  std::string element;  // offending neuron id or "src->dst"
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate(const Diagram& diagram);
std::vector<Violation> validate(const Diagram& diagram,
                                const Stipulation& stipulation);

bool has_errors(const std::vector<Violation>& violations);

// Throws Error(kInvalidDiagram / kInvalidStipulation) with the first
// error-severity violation.
void require_valid(const Diagram& diagram);
void require_valid(const Diagram& diagram, const Stipulation& stipulation);

bool is_valid_identifier(std::string_view id);

}  // namespace ndg
