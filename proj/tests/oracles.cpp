#include "oracles.hpp"

#include <algorithm>
#include <climits>

namespace oracle {

namespace {

struct Raw {
  std::map<std::string, int> time;
  std::map<std::string, int> threshold;
  std::vector<std::tuple<std::string, std::string, bool>> edges;  // src, dst, inhibitory
};

Raw raw(const ndg::Diagram& d) {
  Raw r;
  for (const auto& n : d.neurons()) {
    r.time[n.id] = n.time;
    r.threshold[n.id] = n.threshold;
  }
  for (const auto& e : d.edges()) {
    r.edges.emplace_back(e.src, e.dst, e.kind == ndg::EdgeKind::kInhibitory);
  }
  return r;
}

bool rule(const Raw& r, const std::string& n, const States& st, const ndg::Stipulation& s,
          const std::set<std::pair<std::string, std::string>>& held) {
  int stim_parents = 0;
  int firing = 0;
  for (const auto& [src, dst, inhib] : r.edges) {
    if (dst != n) continue;
    if (inhib) {
      if (st.at(src) || held.count({src, dst}) != 0) return false;
    } else {
      ++stim_parents;
      if (st.at(src)) ++firing;
    }
  }
  if (stim_parents == 0) return s.firing_sources.count(n) != 0;
  return firing >= r.threshold.at(n);
}

}  // namespace

States fixpoint(const ndg::Diagram& d, const ndg::Stipulation& s,
                const std::vector<ndg::Intervention>& clamps) {
  auto r = raw(d);
  States st;
  for (const auto& [id, _] : r.time) st[id] = false;
  std::map<std::string, bool> forced;
  for (const auto& c : clamps) forced[c.neuron] = c.state;
  for (bool changed = true; changed;) {
    changed = false;
    // Reverse id order, so a single sweep is generally not enough.
    for (auto it = st.rbegin(); it != st.rend(); ++it) {
      auto f = forced.find(it->first);
      bool next = f != forced.end() ? f->second : rule(r, it->first, st, s, {});
      if (next != it->second) {
        it->second = next;
        changed = true;
      }
    }
  }
  return st;
}

std::set<std::string> downstream(const ndg::Diagram& d, const std::string& x) {
  auto r = raw(d);
  std::set<std::string> seen;
  std::vector<std::string> todo{x};
  while (!todo.empty()) {
    auto cur = todo.back();
    todo.pop_back();
    for (const auto& [src, dst, _] : r.edges) {
      if (src == cur && seen.insert(dst).second) todo.push_back(dst);
    }
  }
  return seen;
}

States flip(const ndg::Diagram& d, const ndg::Stipulation& s, const States& factual,
            const std::string& x, const std::set<std::pair<std::string, std::string>>& held) {
  auto r = raw(d);
  auto down = downstream(d, x);
  States st = factual;
  st[x] = !factual.at(x);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& n : down) {
      bool next = rule(r, n, st, s, held);
      if (next != st[n]) {
        st[n] = next;
        changed = true;
      }
    }
  }
  return st;
}

std::set<std::string> redundant(const ndg::Diagram& d, const States& factual) {
  auto r = raw(d);
  std::set<std::string> out;
  for (const auto& [id, _] : r.time) {
    std::vector<std::string> in;
    int outs = 0;
    for (const auto& [src, dst, inhib] : r.edges) {
      if (dst == id) in.push_back(src);
      if (src == id) ++outs;
    }
    if (in.size() == 1 && outs == 1 && factual.at(in[0]) == factual.at(id)) out.insert(id);
  }
  return out;
}

std::vector<std::vector<std::string>> all_paths(const ndg::Diagram& d, const std::string& x,
                                                const std::string& y) {
  auto r = raw(d);
  std::set<std::vector<std::string>> found;
  std::vector<std::string> cur{x};
  auto dfs = [&](auto&& self) -> void {
    if (cur.back() == y) {
      found.insert(cur);
      return;
    }
    for (const auto& [src, dst, _] : r.edges) {
      if (src != cur.back()) continue;
      cur.push_back(dst);
      self(self);
      cur.pop_back();
    }
  };
  if (x != y) dfs(dfs);
  return {found.begin(), found.end()};
}

int collapsed_length(const std::set<std::string>& red, const std::vector<std::string>& path) {
  int n = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (red.count(path[i]) == 0) ++n;
  }
  return n;
}

std::vector<TieResult> def1(const ndg::Diagram& d, const ndg::Stipulation& s,
                            const std::string& x, const std::string& y) {
  auto paths = all_paths(d, x, y);
  if (paths.empty()) return {};
  auto factual = fixpoint(d, s);
  int outs = 0;
  for (const auto& e : d.edges()) {
    if (e.src == x) ++outs;
  }
  if (!factual.at(x) || outs < 2) {
    auto cf = flip(d, s, factual, x);
    return {TieResult{{}, cf.at(y) != factual.at(y)}};
  }
  auto red = redundant(d, factual);
  int best = INT_MAX;
  for (const auto& p : paths) best = std::min(best, collapsed_length(red, p));
  std::vector<TieResult> out;
  for (const auto& p : paths) {
    if (collapsed_length(red, p) != best) continue;
    std::set<std::string> on_path(p.begin(), p.end());
    std::set<std::pair<std::string, std::string>> held;
    for (const auto& e : d.edges()) {
      if (e.kind == ndg::EdgeKind::kInhibitory && factual.at(e.src) &&
          on_path.count(e.dst) == 0) {
        held.insert({e.src, e.dst});
      }
    }
    auto cf = flip(d, s, factual, x, held);
    out.push_back({p, cf.at(y) != factual.at(y)});
  }
  return out;
}

ndg::Problem random_problem(std::mt19937_64& rng, int max_neurons) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
  int columns = pick(2, 5);
  int count = pick(columns, std::max(columns, max_neurons));
  std::vector<ndg::Neuron> neurons;
  for (int i = 0; i < count; ++i) {
    int t = i < columns ? i + 1 : pick(1, columns);
    int threshold = coin(0.15) ? pick(2, 3) : 1;
    neurons.push_back({"N" + std::to_string(i), t, threshold, pick(1, 4)});
  }
  double density = std::uniform_real_distribution<double>(0.1, 0.6)(rng);
  std::vector<ndg::Edge> edges;
  for (const auto& a : neurons) {
    for (const auto& b : neurons) {
      if (a.time >= b.time) continue;
      if (coin(density)) edges.push_back({a.id, b.id, ndg::EdgeKind::kStimulatory});
      if (coin(density * 0.4)) edges.push_back({a.id, b.id, ndg::EdgeKind::kInhibitory});
    }
  }
  ndg::Problem p;
  p.diagram = ndg::Diagram("r", columns, std::move(neurons), std::move(edges));
  for (std::size_t n = 0; n < p.diagram.size(); ++n) {
    if (p.diagram.is_source(n) && coin(0.6)) p.stipulation.firing_sources.insert(p.diagram.neurons()[n].id);
  }
  p.target = p.diagram.neurons().back().id;
  return p;
}

}  // namespace oracle
