#include "ndg/generator.hpp"

#include <limits>
#include <optional>
#include <random>
#include <string>

#include "ndg/error.hpp"
#include "ndg/simulator.hpp"

namespace ndg {

namespace {

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) from the top 53 bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  // Uniform in [0, n), by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    for (;;) {
      auto x = engine_();
      if (x < limit) return x % n;
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::string cell_id(int row, int column) {
  return std::string(1, static_cast<char>('A' + row)) + std::to_string(column);
}

void check(const GenParams& p) {
  auto bad = [](const std::string& what) {
    throw Error(ErrorCode::kInfeasible, "generator: " + what);
  };
  if (p.columns < 2) bad("columns must be at least 2");
  if (p.rows < 1) bad("rows must be at least 1");
  if (p.rows > 26) bad("rows must be at most 26 (one letter per row)");
  for (double x : {p.stim_density, p.inhib_probability, p.threshold2_probability}) {
    if (!(x >= 0.0 && x <= 1.0)) bad("probabilities must lie in [0, 1]");
  }
  if (p.max_attempts < 1) bad("max_attempts must be positive");
}

std::optional<Problem> attempt(const GenParams& p, Stream& rng) {
  std::vector<Neuron> neurons;
  for (int c = 1; c <= p.columns; ++c) {
    for (int r = 0; r < p.rows; ++r) neurons.push_back({cell_id(r, c), c, 1, r + 1});
  }
  std::vector<Edge> edges;
  std::vector<int> stim_parents(neurons.size(), 0);
  for (int c = 1; c < p.columns; ++c) {
    for (int r = 0; r < p.rows; ++r) {
      for (int s = 0; s < p.rows; ++s) {
        auto src = cell_id(r, c);
        auto dst = cell_id(s, c + 1);
        if (rng.chance(p.stim_density)) {
          edges.push_back({src, dst, EdgeKind::kStimulatory});
          ++stim_parents[static_cast<std::size_t>(c * p.rows + s)];
        } else if (rng.chance(p.inhib_probability)) {
          edges.push_back({src, dst, EdgeKind::kInhibitory});
        }
      }
    }
  }
  for (std::size_t n = 0; n < neurons.size(); ++n) {
    if (stim_parents[n] >= 2 && rng.chance(p.threshold2_probability)) {
      neurons[n].threshold = 2;
    }
  }

  Problem out;
  out.diagram = Diagram("g" + std::to_string(p.seed), p.columns,
                        std::move(neurons), std::move(edges));
  const auto& d = out.diagram;
  for (int r = 0; r < p.rows; ++r) {
    if (rng.chance(0.5)) out.stipulation.firing_sources.insert(cell_id(r, 1));
  }
  if (out.stipulation.firing_sources.empty()) {
    out.stipulation.firing_sources.insert(
        cell_id(static_cast<int>(rng.below(static_cast<std::uint64_t>(p.rows))), 1));
  }

  std::vector<std::string> candidates;
  std::vector<bool> reached(d.size(), false);
  for (const auto& id : out.stipulation.firing_sources) {
    auto cone = d.forward_reachable(d.index_of(id));
    for (std::size_t n = 0; n < d.size(); ++n) reached[n] = reached[n] || cone[n];
  }
  for (int r = 0; r < p.rows; ++r) {
    auto id = cell_id(r, p.columns);
    if (!p.require_target_reachable || reached[d.index_of(id)]) candidates.push_back(id);
  }
  if (candidates.empty()) return std::nullopt;
  out.target = candidates[rng.below(candidates.size())];
  return out;
}

}  // namespace

Problem generate(const GenParams& params) {
  check(params);
  Stream rng(params.seed);
  for (int i = 0; i < params.max_attempts; ++i) {
    if (auto p = attempt(params, rng)) return std::move(*p);
  }
  throw Error(ErrorCode::kInfeasible,
              "generator: no reachable target after " +
                  std::to_string(params.max_attempts) + " attempts (seed " +
                  std::to_string(params.seed) + ")");
}

ComplexityProfile complexity(const Diagram& diagram,
                             const Stipulation& stipulation) {
  auto factual = simulate(diagram, stipulation);
  ComplexityProfile out;
  out.neurons = static_cast<int>(diagram.size());
  out.columns = diagram.columns();
  for (std::size_t n = 0; n < diagram.size(); ++n) {
    if (diagram.out_edges(n).size() >= 2) ++out.forks;
    if (diagram.neurons()[n].threshold >= 2) ++out.threshold2;
    if (factual[n]) continue;
    for (auto e : diagram.in_edges(n)) {
      if (diagram.edges()[e].kind == EdgeKind::kInhibitory &&
          factual[diagram.edge_src(e)]) {
        ++out.blocked;
        break;
      }
    }
  }
  const auto& ns = diagram.neurons();
  const auto edges = diagram.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& a_src = ns[diagram.edge_src(i)];
    const auto& a_dst = ns[diagram.edge_dst(i)];
    if (a_dst.time != a_src.time + 1) continue;
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const auto& b_src = ns[diagram.edge_src(j)];
      const auto& b_dst = ns[diagram.edge_dst(j)];
      if (b_src.time != a_src.time || b_dst.time != a_dst.time) continue;
      if ((a_src.row - b_src.row) * (a_dst.row - b_dst.row) < 0) ++out.crossings;
    }
  }
  return out;
}

}  // namespace ndg
