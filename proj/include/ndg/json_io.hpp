#pragma once

#include <json.hpp>

#include "ndg/cause.hpp"
#include "ndg/dsl.hpp"
#include "ndg/model.hpp"
#include "ndg/simulator.hpp"

namespace ndg {

using Json = nlohmann::ordered_json;

// Canonical shapes: field order fixed, arrays in storage order
// ((time, id) for neurons and stipulated sources).
Json to_json(const Diagram& diagram);
Json to_json(const Diagram& diagram, const Stipulation& stipulation);
Json to_json(const Problem& problem);
Json to_json(const Diagram& diagram, const FiringAssignment& states);
Json to_json(const Diagram& diagram, const CauseVerdict& verdict);
Json to_json(const Edge& edge);

Diagram diagram_from_json(const Json& j);

}  // namespace ndg
