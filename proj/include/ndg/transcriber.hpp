#pragma once

#include <string>

#include "ndg/dsl.hpp"
#include "ndg/model.hpp"

namespace ndg {

enum class Template { kExplicit, kContracted };

struct PromptStyle {
  Template templ = Template::kExplicit;
  // Append the request for a one- or two-sentence answer.
  bool short_answer = false;
  // Ask only for the causes at t1.
  bool initial_causes_only = false;

  bool operator==(const PromptStyle&) const = default;
};

std::string_view to_string(Template t);

// Throws Error(kInvalidDiagram) or Error(kUnknownNeuron).
std::string transcribe(const Diagram& diagram, const Stipulation& stipulation,
                       std::string_view target, const PromptStyle& style = {});
std::string transcribe(const Problem& problem, const PromptStyle& style = {});

// Follow-up question asked after the main prompt: the neuron is forced into
// `intervention.state` and the model is asked whether `target` occurs now.
std::string transcribe_intervention(const Diagram& diagram,
                                    std::string_view target,
                                    const Intervention& intervention);

}  // namespace ndg
