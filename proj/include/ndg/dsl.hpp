#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ndg/model.hpp"

namespace ndg {

// A diagram together with what fires spontaneously and the neuron asked
// about.
struct Problem {
  Diagram diagram;
  Stipulation stipulation;
  std::string target;

  bool operator==(const Problem&) const = default;
};

// Line-oriented `.ndg` format, one statement per line, `#` starts a comment:
//
//   diagram d01
//   times 3
//   neuron C @ 1 row 1
//   neuron E @ 3 row 1 threshold 2
//   stim C -> D
//   inhib C -> B
//   fire C A
//   ask E
//
// `diagram` and `times` must come first; neurons must be declared before
// they are referenced. Throws ParseError with the first problem found.
Problem parse_diagram(std::string_view text);

// Canonical, byte-deterministic text. Throws Error(kInvalidDiagram).
std::string serialize_diagram(const Problem& problem);

Problem load_problem(const std::filesystem::path& path);
void save_problem(const std::filesystem::path& path, const Problem& problem);

// The asked-about neuron with its factual polarity.
Event target_event(const Problem& problem);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace ndg
