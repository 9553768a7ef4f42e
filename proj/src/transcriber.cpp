#include "ndg/transcriber.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "ndg/error.hpp"

namespace ndg {

namespace {

constexpr std::string_view kApostrophe = "’";

std::string at(const Diagram& d, std::size_t n) {
  return "t" + std::to_string(d.neurons()[n].time);
}

std::string occurs_at(const Diagram& d, std::size_t n) {
  return d.neurons()[n].id + " would occur at " + at(d, n);
}

// "A", "A and B", "A, B and C"
std::string join_and(const std::vector<std::string>& items,
                     std::string_view last = " and ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? std::string(last) : ", ";
    out += items[i];
  }
  return out;
}

// Layout order used for clauses: row first, then time, then id.
auto layout_key(const Diagram& d, std::size_t n) {
  const auto& x = d.neurons()[n];
  return std::make_tuple(x.row, x.time, x.id);
}

std::vector<std::size_t> parents(const Diagram& d, std::size_t n,
                                 EdgeKind kind) {
  std::vector<std::size_t> out;
  for (auto e : d.in_edges(n)) {
    if (d.edges()[e].kind == kind) out.push_back(d.edge_src(e));
  }
  std::sort(out.begin(), out.end(), [&](auto a, auto b) {
    return std::make_tuple(d.neurons()[a].time, d.neurons()[a].id) <
           std::make_tuple(d.neurons()[b].time, d.neurons()[b].id);
  });
  return out;
}

// A stimulatory clause target needs nothing beyond its one parent.
bool plain_target(const Diagram& d, std::size_t n) {
  return d.neurons()[n].threshold == 1 &&
         parents(d, n, EdgeKind::kInhibitory).empty();
}

struct Clause {
  std::size_t src;
  std::vector<std::size_t> dsts;  // several only for grouped plain targets
  bool inhibits = false;          // "T would not occur" (inhibited source)
};

std::vector<Clause> clauses(const Diagram& d) {
  std::vector<Clause> raw;
  for (std::size_t e = 0; e < d.edges().size(); ++e) {
    auto src = d.edge_src(e);
    auto dst = d.edge_dst(e);
    if (d.edges()[e].kind == EdgeKind::kStimulatory) {
      raw.push_back({src, {dst}, false});
    } else if (d.is_source(dst)) {
      raw.push_back({src, {dst}, true});
    }
  }
  std::sort(raw.begin(), raw.end(), [&](const Clause& a, const Clause& b) {
    auto ka = std::tuple_cat(layout_key(d, a.src),
                             std::make_tuple(d.neurons()[a.dsts[0]].time,
                                             d.neurons()[a.dsts[0]].row,
                                             d.neurons()[a.dsts[0]].id, a.inhibits));
    auto kb = std::tuple_cat(layout_key(d, b.src),
                             std::make_tuple(d.neurons()[b.dsts[0]].time,
                                             d.neurons()[b.dsts[0]].row,
                                             d.neurons()[b.dsts[0]].id, b.inhibits));
    return ka < kb;
  });
  // Merge runs like "If C would occur at t1, B and D would occur at t2."
  std::vector<Clause> out;
  for (auto& c : raw) {
    if (!out.empty() && !c.inhibits && !out.back().inhibits &&
        out.back().src == c.src && plain_target(d, c.dsts[0]) &&
        plain_target(d, out.back().dsts[0]) &&
        d.neurons()[out.back().dsts[0]].time == d.neurons()[c.dsts[0]].time) {
      out.back().dsts.push_back(c.dsts[0]);
    } else {
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::string unless_suffix(const Diagram& d, std::size_t target,
                          bool contracted) {
  auto inhibitors = parents(d, target, EdgeKind::kInhibitory);
  std::sort(inhibitors.begin(), inhibitors.end(), [&](auto a, auto b) {
    return d.neurons()[a].id < d.neurons()[b].id;
  });
  std::string out;
  for (std::size_t i = 0; i < inhibitors.size(); ++i) {
    out += i == 0 ? ", unless " : " or unless ";
    out += contracted ? d.neurons()[inhibitors[i]].id + " occurs"
                      : occurs_at(d, inhibitors[i]);
  }
  return out;
}

// ", if also either D at t2 or F at t2 (or both) would occur"
std::string also_suffix(const Diagram& d, std::size_t src, std::size_t dst) {
  int needed = d.neurons()[dst].threshold - 1;
  if (needed <= 0) return "";
  std::vector<std::size_t> others;
  for (auto p : parents(d, dst, EdgeKind::kStimulatory)) {
    if (p != src) others.push_back(p);
  }
  if (others.empty()) return ", if also another stimulating event would occur";
  if (others.size() == 1) return ", if also " + occurs_at(d, others[0]);
  std::vector<std::string> named;
  for (auto p : others) named.push_back(d.neurons()[p].id + " at " + at(d, p));
  if (needed == 1 && named.size() == 2) {
    return ", if also either " + named[0] + " or " + named[1] +
           " (or both) would occur";
  }
  if (needed == 1) {
    return ", if also at least one of " + join_and(named, " or ") + " would occur";
  }
  return ", if also at least " + std::to_string(needed) + " of " +
         join_and(named) + " would occur";
}

std::string number_word(std::size_t k) {
  static constexpr std::string_view kWords[] = {"zero", "one", "two", "three", "four",
                                                "five", "six", "seven", "eight", "nine"};
  return k < std::size(kWords) ? std::string(kWords[k]) : std::to_string(k);
}

std::string time_sentence(const Diagram& d) {
  if (d.columns() == 1) return "Suppose all events take place at time t1.";
  std::string out = "Suppose time t1 is earlier than time t2";
  for (int t = 3; t <= d.columns(); ++t) {
    out += ", which is earlier than time t" + std::to_string(t);
  }
  return out + ".";
}

// Stipulated sources grouped by column, (row, id) within a column.
std::vector<std::pair<int, std::vector<std::string>>> stipulated_by_time(
    const Diagram& d, const Stipulation& s) {
  std::vector<std::size_t> fired;
  for (std::size_t n = 0; n < d.size(); ++n) {
    if (s.firing_sources.count(d.neurons()[n].id) != 0) fired.push_back(n);
  }
  std::sort(fired.begin(), fired.end(), [&](auto a, auto b) {
    const auto& x = d.neurons()[a];
    const auto& y = d.neurons()[b];
    return std::tie(x.time, x.row, x.id) < std::tie(y.time, y.row, y.id);
  });
  std::vector<std::pair<int, std::vector<std::string>>> out;
  for (auto n : fired) {
    int t = d.neurons()[n].time;
    if (out.empty() || out.back().first != t) out.push_back({t, {}});
    out.back().second.push_back(d.neurons()[n].id);
  }
  return out;
}

std::string stipulation_sentence(const Diagram& d, const Stipulation& s) {
  auto groups = stipulated_by_time(d, s);
  if (groups.empty()) return "Suppose none of the events occurs spontaneously.";
  std::vector<std::string> parts;
  for (const auto& [t, ids] : groups) {
    parts.push_back(join_and(ids) + (ids.size() == 1 ? " occurs" : " occur") +
                    " at t" + std::to_string(t));
  }
  return "Suppose " + join_and(parts) + ".";
}

std::string explicit_body(const Diagram& d) {
  std::string out;
  for (const auto& c : clauses(d)) {
    out += " If " + occurs_at(d, c.src) + ", ";
    if (c.inhibits) {
      auto t = c.dsts[0];
      out += d.neurons()[t].id + " would not occur at " + at(d, t) + ".";
      continue;
    }
    std::vector<std::string> names;
    for (auto t : c.dsts) names.push_back(d.neurons()[t].id);
    auto t = c.dsts[0];
    out += join_and(names) + " would occur at " + at(d, t);
    if (c.dsts.size() == 1) {
      out += also_suffix(d, c.src, t) + unless_suffix(d, t, false);
    }
    out += ".";
  }
  return out;
}

std::string contracted_body(const Diagram& d, const Stipulation& s) {
  std::string out;
  auto groups = stipulated_by_time(d, s);
  std::vector<std::string> fired;
  for (const auto& g : groups) fired.insert(fired.end(), g.second.begin(), g.second.end());
  out += fired.empty() ? "Suppose a scenario in which no event occurs spontaneously."
                       : "Suppose a scenario in which " + join_and(fired) +
                             (fired.size() == 1 ? " occurs." : " occur.");

  // Threshold targets are described once, as a whole.
  std::vector<bool> described(d.size(), false);
  auto cls = clauses(d);
  std::vector<bool> used(cls.size(), false);
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const auto& c = cls[i];
    const auto& src = d.neurons()[c.src].id;
    if (c.inhibits) {
      out += " " + src + " prevents " + d.neurons()[c.dsts[0]].id + " from occurring.";
      continue;
    }
    auto t = c.dsts[0];
    if (d.neurons()[t].threshold > 1) {
      if (described[t]) continue;
      described[t] = true;
      std::vector<std::string> ps;
      for (auto p : parents(d, t, EdgeKind::kStimulatory)) ps.push_back(d.neurons()[p].id);
      auto k = static_cast<std::size_t>(d.neurons()[t].threshold);
      std::string need =
          k == ps.size() && k == 2 ? "both " + join_and(ps)
          : k == ps.size()         ? "all of " + join_and(ps)
                                   : "at least " + number_word(k) + " of " + join_and(ps);
      out += " " + d.neurons()[t].id + " occurs only if " + need + " occur" +
             unless_suffix(d, t, true) + ".";
      continue;
    }
    std::vector<std::string> names;
    for (auto n : c.dsts) names.push_back(d.neurons()[n].id);
    auto inhibited = !parents(d, t, EdgeKind::kInhibitory).empty();
    out += " " + src + (inhibited ? " normally causes " : " causes ") +
           join_and(names) + " to occur";
    if (c.dsts.size() == 1) {
      out += unless_suffix(d, t, true);
      // Follow a plain chain: ", which subsequently causes E to occur".
      auto cur = t;
      while (!inhibited) {
        std::size_t next = cls.size();
        for (std::size_t j = 0; j < cls.size(); ++j) {
          if (!used[j] && !cls[j].inhibits && cls[j].src == cur &&
              cls[j].dsts.size() == 1 && plain_target(d, cls[j].dsts[0])) {
            next = j;
            break;
          }
        }
        if (next == cls.size()) break;
        used[next] = true;
        cur = cls[next].dsts[0];
        out += ", which subsequently causes " + d.neurons()[cur].id + " to occur";
      }
    }
    out += ".";
  }
  return out;
}

}  // namespace

std::string_view to_string(Template t) {
  return t == Template::kExplicit ? "explicit" : "contracted";
}

std::string transcribe(const Diagram& diagram, const Stipulation& stipulation,
                       std::string_view target, const PromptStyle& style) {
  require_valid(diagram, stipulation);
  auto y = diagram.index_of(target);
  const auto& id = diagram.neurons()[y].id;
  bool contracted = style.templ == Template::kContracted;
  const std::string apostrophe = contracted ? "'" : std::string(kApostrophe);

  std::string out;
  if (contracted) {
    out = contracted_body(diagram, stipulation);
    out += " Does " + id + " occur in this scenario?";
  } else {
    out = time_sentence(diagram) + explicit_body(diagram) + " " +
          stipulation_sentence(diagram, stipulation);
    out += " Does " + id + " occur at " + at(diagram, y) + "?";
  }
  out += " What is/are the cause(s)";
  if (style.initial_causes_only) out += " at t1";
  out += " of " + id + apostrophe + "s occurring or not occurring?";
  if (style.short_answer) {
    out += " Answer without stating your reasoning steps. So simply state in one "
           "or two sentences whether " + id + " occurs or not, and what the ";
    out += style.initial_causes_only
               ? "initial cause(s) (so the cause(s) at t1) of this event are."
               : "cause(s) of this event are.";
  }
  return out;
}

std::string transcribe(const Problem& problem, const PromptStyle& style) {
  return transcribe(problem.diagram, problem.stipulation, problem.target, style);
}

std::string transcribe_intervention(const Diagram& diagram,
                                    std::string_view target,
                                    const Intervention& intervention) {
  const auto& y = diagram.neuron(target).id;
  const auto& n = diagram.neuron(intervention.neuron).id;
  return "Suppose now that in the situation just sketched, event " + n +
         (intervention.state ? " does occur" : " does not occur") +
         ", because of an external intervention. Does " + y +
         " occur now in this new situation? Why?";
}

}  // namespace ndg
