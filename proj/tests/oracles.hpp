#pragma once

// Reference implementations used only by the tests. They work from the raw
// neuron and edge lists by id and share no evaluation code with the engine.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ndg/dsl.hpp"
#include "ndg/model.hpp"

namespace oracle {

using States = std::map<std::string, bool>;

// Whole-diagram rule sweeps from all-off until nothing changes.
States fixpoint(const ndg::Diagram& d, const ndg::Stipulation& s,
                const std::vector<ndg::Intervention>& clamps = {});

// Flip x, keep everything not downstream of x, re-settle the rest.
// `held` lists inhibitory edges (src, dst) that count as active regardless
// of the source.
States flip(const ndg::Diagram& d, const ndg::Stipulation& s, const States& factual,
            const std::string& x,
            const std::set<std::pair<std::string, std::string>>& held = {});

std::set<std::string> downstream(const ndg::Diagram& d, const std::string& x);

// Neurons with exactly one in-edge and one out-edge whose state equals
// their parent's.
std::set<std::string> redundant(const ndg::Diagram& d, const States& factual);

// Every x -> y path by plain DFS, duplicates (parallel edges) removed.
std::vector<std::vector<std::string>> all_paths(const ndg::Diagram& d,
                                                const std::string& x,
                                                const std::string& y);

// Edges of the path not absorbed into a redundant neuron's parent.
int collapsed_length(const std::set<std::string>& redundant,
                     const std::vector<std::string>& path);

struct TieResult {
  std::vector<std::string> path;
  bool flips = false;
};

// DEF-1 from the glossary, evaluated directly. Empty result: no path.
// For the plain branch the single entry has an empty path.
std::vector<TieResult> def1(const ndg::Diagram& d, const ndg::Stipulation& s,
                            const std::string& x, const std::string& y);

// Random diagrams wider than the generator's: arbitrary forward gaps,
// parallel stim/inhib edges, thresholds up to 3, stipulated sources in any
// column.
ndg::Problem random_problem(std::mt19937_64& rng, int max_neurons = 12);

}  // namespace oracle
