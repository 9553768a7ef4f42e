#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "ndg/model.hpp"

namespace ndg {

// On/off state of every neuron, indexed like Diagram::neurons().
class FiringAssignment {
 public:
  FiringAssignment() = default;
  explicit FiringAssignment(std::vector<bool> states)
      : states_(std::move(states)) {}

  bool operator[](std::size_t n) const { return states_[n]; }
  void set(std::size_t n, bool on) { states_[n] = on; }
  std::size_t size() const noexcept { return states_.size(); }
  const std::vector<bool>& states() const noexcept { return states_; }

  bool state(const Diagram& diagram, std::string_view id) const {
    return states_[diagram.index_of(id)];
  }

  bool operator==(const FiringAssignment&) const = default;

 private:
  std::vector<bool> states_;
};

// The firing rule for one neuron given the states of its parents.
// `held_inhibitions`, when given, is indexed by edge and marks
// inhibitory edges that count as active whatever their source's state.
bool evaluate_neuron(const Diagram& diagram, std::size_t n,
                     const FiringAssignment& states, bool stipulated,
                     const std::vector<bool>* held_inhibitions = nullptr);

// Single pass in column order. Clamps override everything; a stipulated
// source fires unless an inhibitory parent fires; any other neuron fires
// when enough stimulatory parents fire and no inhibitory parent does.
FiringAssignment simulate(const Diagram& diagram,
                          const Stipulation& stipulation,
                          std::span<const Intervention> clamps = {});

bool occurs(const Diagram& diagram, const Stipulation& stipulation,
            const Event& event);

// Event describing a neuron's actual state in `factual`.
inline Event factual_event(const Diagram& diagram,
                           const FiringAssignment& factual, std::size_t n) {
  return Event{diagram.neurons()[n].id,
               factual[n] ? Polarity::kPlus : Polarity::kMinus};
}

}  // namespace ndg
