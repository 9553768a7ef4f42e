#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ndg/model.hpp"
#include "ndg/simulator.hpp"

namespace ndg {

// Neuron ids from cause to effect along contiguous edges of either kind.
using Path = std::vector<std::string>;

inline constexpr std::size_t kDefaultPathLimit = 100000;

// True iff the neuron has two or more outgoing edges of any kind.
bool is_bifurcating(const Diagram& diagram, std::string_view neuron);

// Redundant neurons (exactly one incoming and one outgoing edge, same state
// as the unique parent) merged into their parent, to fixpoint.
struct CollapsedGraph {
  // representative[i] is the id that neuron i was merged into (itself when
  // not redundant).
  std::vector<std::string> representative;
  // Edges between distinct representatives, sorted, duplicates removed.
  std::vector<Edge> edges;

  const std::string& representative_of(const Diagram& diagram,
                                       std::string_view id) const {
    return representative[diagram.index_of(id)];
  }
};

CollapsedGraph collapse_redundant(const Diagram& diagram,
                                  const FiringAssignment& factual);

// Number of path edges whose endpoints have different representatives.
int collapsed_length(const Diagram& diagram, const CollapsedGraph& collapsed,
                     const Path& path);

struct PathAnalysis {
  std::vector<Path> all_paths;           // lexicographic order
  std::vector<Path> collapsed_shortest;  // every tie, lexicographic order
  int shortest_length = 0;               // measured on the collapsed graph
  Path chosen_direct;                    // least of collapsed_shortest
  std::vector<std::string> off_path;     // neurons not on chosen_direct
};

// Throws Error(kNoPath) when y is not reachable from x, and
// Error(kPathLimit) when more than `path_limit` paths exist.
PathAnalysis direct_paths(const Diagram& diagram,
                          const FiringAssignment& factual, std::string_view x,
                          std::string_view y,
                          std::size_t path_limit = kDefaultPathLimit);

// Inhibitory edges that are active in `factual`, target a neuron in
// `maintenance` and can be affected by flipping `from`.
std::vector<Edge> held_blockings(const Diagram& diagram,
                                 const FiringAssignment& factual,
                                 std::string_view from,
                                 const std::set<std::string>& maintenance);

// Flip x and propagate forward. Neurons not downstream of x keep their
// factual state; downstream neurons are re-evaluated, with the factually
// active inhibitions onto `maintenance` neurons held active.
// Throws Error(kPolarityMismatch) if x is not the factual event.
FiringAssignment counterfactual(
    const Diagram& diagram, const Stipulation& stipulation,
    const FiringAssignment& factual, const Event& x,
    const std::optional<std::set<std::string>>& maintenance = std::nullopt);

enum class Branch {
  kSimpleCounterfactual,
  kOffBifurcating,
  kOnBifurcatingMaxBlocking,
};

std::string_view to_string(Branch branch);

enum class VerdictReason { kEvaluated, kNoPath };

struct TieVerdict {
  Path direct_path;
  bool flips = false;
};

struct CauseVerdict {
  Event cause;
  Event effect;
  bool is_cause = false;
  Branch branch = Branch::kSimpleCounterfactual;
  VerdictReason reason = VerdictReason::kEvaluated;
  // Only set for kOnBifurcatingMaxBlocking; the counterfactual and
  // maintained blockings below belong to this representative path.
  Path direct_path;
  std::vector<Edge> maintained_blockings;
  FiringAssignment counterfactual;
  std::vector<TieVerdict> per_tie_verdicts;

  bool unanimous() const;
};

// Full evaluation, reporting disagreeing ties in per_tie_verdicts instead
// of failing.
CauseVerdict analyze_cause(const Diagram& diagram,
                           const Stipulation& stipulation, const Event& x,
                           const Event& y);

// As analyze_cause, but throws Error(kTieDisagreement) when the shortest
// direct paths do not agree.
CauseVerdict is_cause(const Diagram& diagram, const Stipulation& stipulation,
                      const Event& x, const Event& y);

// Every actual event upstream of y that is a cause of y, optionally only
// those in column `time_filter`. Display order.
std::vector<Event> all_causes(const Diagram& diagram,
                              const Stipulation& stipulation, const Event& y,
                              std::optional<int> time_filter = std::nullopt);

}  // namespace ndg
