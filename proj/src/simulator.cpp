#include "ndg/simulator.hpp"

#include "ndg/error.hpp"

namespace ndg {

bool evaluate_neuron(const Diagram& diagram, std::size_t n,
                     const FiringAssignment& states, bool stipulated,
                     const std::vector<bool>* held_inhibitions) {
  int stimulated = 0;
  int stim_parents = 0;
  for (auto e : diagram.in_edges(n)) {
    bool active = states[diagram.edge_src(e)];
    if (diagram.edges()[e].kind == EdgeKind::kInhibitory) {
      if (active || (held_inhibitions != nullptr && (*held_inhibitions)[e])) {
        return false;
      }
    } else {
      ++stim_parents;
      if (active) ++stimulated;
    }
  }
  if (stim_parents == 0) return stipulated;
  return stimulated >= diagram.neurons()[n].threshold;
}

FiringAssignment simulate(const Diagram& diagram,
                          const Stipulation& stipulation,
                          std::span<const Intervention> clamps) {
  require_valid(diagram, stipulation);

  // 0 = free, 1 = forced off, 2 = forced on
  std::vector<int> forced(diagram.size(), 0);
  for (const auto& c : clamps) forced[diagram.index_of(c.neuron)] = c.state ? 2 : 1;

  FiringAssignment states(std::vector<bool>(diagram.size(), false));
  for (std::size_t n = 0; n < diagram.size(); ++n) {
    if (forced[n] != 0) {
      states.set(n, forced[n] == 2);
      continue;
    }
    bool stipulated =
        stipulation.firing_sources.count(diagram.neurons()[n].id) != 0;
    states.set(n, evaluate_neuron(diagram, n, states, stipulated));
  }
  return states;
}

bool occurs(const Diagram& diagram, const Stipulation& stipulation,
            const Event& event) {
  auto n = diagram.index_of(event.neuron);
  bool on = simulate(diagram, stipulation)[n];
  return on == (event.polarity == Polarity::kPlus);
}

}  // namespace ndg
