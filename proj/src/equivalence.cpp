#include "bnsl/equivalence.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <unordered_set>

#include "bnsl/errors.hpp"

namespace bnsl {

void rcar_in_place(Dag& g, int tau, Rng& rng) {
  if (tau < 0) throw ConfigError("tau must be non-negative");
  if (tau == 0) return;
  const int repetitions = static_cast<int>(std::uniform_int_distribution<int>(0, tau)(rng));
  for (int i = 0; i < repetitions; ++i) {
    const std::vector<Arc> covered = covered_arcs(g);
    if (covered.empty()) break;
    g.reverse_arc(covered[uniform_index(rng, covered.size())]);
  }
}

Dag rcar(const Dag& g, const RcarConfig& cfg, Rng& rng) {
  Dag out = g;
  rcar_in_place(out, cfg.tau, rng);
  return out;
}

Dag rcar(const Dag& g, const RcarConfig& cfg) {
  Rng rng(cfg.seed);
  return rcar(g, cfg, rng);
}

VertexPriorities VertexPriorities::from(std::vector<double> values) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("vertex priorities must be distinct");
  }
  return VertexPriorities{std::move(values)};
}

VertexPriorities VertexPriorities::random(int n, Rng& rng) {
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) {
    while (true) {
      const double candidate = uniform01(rng);
      if (std::find(r.begin(), r.begin() + i, candidate) == r.begin() + i) {
        r[i] = candidate;
        break;
      }
    }
  }
  return VertexPriorities{std::move(r)};
}

std::vector<Dag> reds(const Dag& g, const VertexPriorities& priorities, Rng& rng) {
  if (static_cast<int>(priorities.r.size()) != g.size()) {
    throw DimensionMismatch("one priority per vertex is required");
  }
  std::vector<Dag> printed;
  Dag current = g;
  while (true) {
    std::vector<Arc> candidates;
    for (const Arc& a : covered_arcs(current)) {
      if (priorities.r[a.tail] < priorities.r[a.head]) candidates.push_back(a);
    }
    if (candidates.empty()) break;
    current.reverse_arc(candidates[uniform_index(rng, candidates.size())]);
    printed.push_back(current);
  }
  return printed;
}

std::vector<Dag> enumerate_class(const Dag& g) {
  if (g.size() > kEnumerateClassMaxNodes) {
    throw SizeGuardError("class enumeration is limited to " + std::to_string(kEnumerateClassMaxNodes) + " nodes");
  }
  std::unordered_set<Dag> seen{g};
  std::deque<Dag> queue{g};
  while (!queue.empty()) {
    const Dag current = std::move(queue.front());
    queue.pop_front();
    for (const Arc& a : covered_arcs(current)) {
      Dag next = current;
      next.reverse_arc(a);
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  std::vector<Dag> members(seen.begin(), seen.end());
  std::sort(members.begin(), members.end(), dag_less);
  return members;
}

std::uint64_t class_size_lower_bound(const Cpdag& p) {
  std::uint64_t bound = 1;
  NodeSet visited;
  for (int start = 0; start < p.size(); ++start) {
    if (visited.contains(start)) continue;
    // Each undirected edge is seen from both endpoints.
    int twice_edges = 0;
    NodeSet frontier = NodeSet::single(start);
    visited.insert(start);
    while (!frontier.empty()) {
      NodeSet next;
      for (int v : frontier) {
        twice_edges += p.undirected_neighbours(v).size();
        next |= p.undirected_neighbours(v);
      }
      frontier = next - visited;
      visited |= frontier;
    }
    bound *= static_cast<std::uint64_t>(twice_edges / 2) + 1;
  }
  return bound;
}

namespace {

struct Pair {
  int u;
  int v;
};

void extend(Dag& g, const std::vector<Pair>& pairs, std::size_t index, const std::function<void(const Dag&)>& visit) {
  if (index == pairs.size()) {
    visit(g);
    return;
  }
  const Pair p = pairs[index];
  extend(g, pairs, index + 1, visit);
  for (Arc a : {Arc{p.u, p.v}, Arc{p.v, p.u}}) {
    if (!g.has_path(a.head, a.tail)) {
      g.add_arc(a);
      extend(g, pairs, index + 1, visit);
      g.remove_arc(a);
    }
  }
}

}  // namespace

void for_each_dag(int n, const std::function<void(const Dag&)>& visit) {
  if (n < 0 || n > kCensusMaxNodes) {
    throw SizeGuardError("DAG enumeration is limited to " + std::to_string(kCensusMaxNodes) + " nodes");
  }
  std::vector<Pair> pairs;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
  }
  Dag g(n);
  extend(g, pairs, 0, visit);
}

CensusResult census(int n) {
  CensusResult result;
  result.n = n;
  std::unordered_set<std::string> classes;
  for_each_dag(n, [&](const Dag& g) {
    ++result.dags;
    classes.insert(dag_to_cpdag(g).key());
  });
  result.classes = classes.size();
  result.ratio = static_cast<double>(result.dags) / static_cast<double>(result.classes);
  return result;
}

std::string census_csv_header() { return "n,dags,classes,ratio"; }

std::string census_csv_row(const CensusResult& c) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), c.ratio);
  return std::to_string(c.n) + "," + std::to_string(c.dags) + "," + std::to_string(c.classes) + "," +
         std::string(buf, end);
}

}  // namespace bnsl
