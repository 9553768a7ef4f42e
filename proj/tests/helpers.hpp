#pragma once

#include <filesystem>
#include <string>

#include "ndg/corpus.hpp"
#include "ndg/dsl.hpp"

namespace testing {

inline std::filesystem::path corpus_dir() { return NDG_TEST_CORPUS; }
inline std::filesystem::path data_dir() { return NDG_TEST_DATA; }

inline ndg::Problem corpus(const std::string& id) {
  return ndg::load_problem(corpus_dir() / (id + ".ndg"));
}

inline ndg::Event ev(const ndg::Problem& p, const std::string& text) {
  return ndg::parse_event(p.diagram, text);
}

}  // namespace testing
