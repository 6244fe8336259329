#include "bnsl/dag.hpp"

#include <algorithm>
#include <utility>

#include "bnsl/errors.hpp"

namespace bnsl {

std::string to_string(const Arc& arc) { return std::to_string(arc.tail) + "->" + std::to_string(arc.head); }

namespace {

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  return labels;
}

}  // namespace

Dag::Dag(int n) : Dag(default_labels(n)) {}

Dag::Dag(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() > static_cast<std::size_t>(kMaxNodes)) {
    throw SizeGuardError("graphs are limited to " + std::to_string(kMaxNodes) + " nodes");
  }
  parents_.assign(labels_.size(), NodeSet{});
  children_.assign(labels_.size(), NodeSet{});
}

Dag Dag::from_arcs(int n, const std::vector<Arc>& arcs) {
  Dag g(n);
  for (const Arc& a : arcs) g.add_arc(a);
  return g;
}

int Dag::arc_count() const {
  int count = 0;
  for (NodeSet p : parents_) count += p.size();
  return count;
}

void Dag::set_labels(std::vector<std::string> labels) {
  if (labels.size() != parents_.size()) throw DimensionMismatch("label count does not match node count");
  labels_ = std::move(labels);
}

void Dag::check_node(int v) const {
  if (v < 0 || v >= size()) {
    throw IndexError("node " + std::to_string(v) + " out of range [0, " + std::to_string(size()) + ")");
  }
}

void Dag::check_arc(Arc a) const {
  check_node(a.tail);
  check_node(a.head);
  if (a.tail == a.head) throw IndexError("self-loop " + to_string(a));
}

bool Dag::has_arc(Arc a) const {
  check_arc(a);
  return parents_[a.head].contains(a.tail);
}

bool Dag::adjacent(int u, int v) const {
  check_node(u);
  check_node(v);
  return neighbours(u).contains(v);
}

std::vector<Arc> Dag::arcs() const {
  std::vector<Arc> out;
  for (int t = 0; t < size(); ++t) {
    for (int h : children_[t]) out.push_back({t, h});
  }
  return out;
}

void Dag::add_arc(Arc a) {
  check_arc(a);
  if (adjacent(a.tail, a.head)) throw DuplicateArcError("pair of " + to_string(a) + " is already adjacent");
  if (has_path(a.head, a.tail)) throw CycleError("adding " + to_string(a) + " closes a directed cycle");
  parents_[a.head].insert(a.tail);
  children_[a.tail].insert(a.head);
}

void Dag::remove_arc(Arc a) {
  if (!has_arc(a)) throw MissingArcError("arc " + to_string(a) + " is not present");
  parents_[a.head].erase(a.tail);
  children_[a.tail].erase(a.head);
}

void Dag::reverse_arc(Arc a) {
  if (!has_arc(a)) throw MissingArcError("arc " + to_string(a) + " is not present");
  if (!can_reverse(a)) throw CycleError("reversing " + to_string(a) + " closes a directed cycle");
  parents_[a.head].erase(a.tail);
  children_[a.tail].erase(a.head);
  parents_[a.tail].insert(a.head);
  children_[a.head].insert(a.tail);
}

NodeSet Dag::descendants(int v) const {
  check_node(v);
  NodeSet seen;
  NodeSet frontier = children_[v];
  while (!frontier.empty()) {
    seen |= frontier;
    NodeSet next;
    for (int w : frontier) next |= children_[w];
    frontier = next - seen;
  }
  return seen;
}

bool Dag::has_path(int from, int to) const {
  check_node(to);
  return descendants(from).contains(to);
}

NodeSet Dag::ancestors_of(NodeSet nodes) const {
  NodeSet seen = nodes;
  NodeSet frontier = nodes;
  while (!frontier.empty()) {
    NodeSet next;
    for (int w : frontier) next |= parents_[w];
    frontier = next - seen;
    seen |= frontier;
  }
  return seen;
}

std::vector<int> Dag::topological_order() const {
  std::vector<int> order;
  order.reserve(size());
  NodeSet placed;
  // Kahn's algorithm, always taking the smallest ready index.
  while (static_cast<int>(order.size()) < size()) {
    bool progressed = false;
    for (int v = 0; v < size(); ++v) {
      if (!placed.contains(v) && parents_[v].is_subset_of(placed)) {
        placed.insert(v);
        order.push_back(v);
        progressed = true;
        break;
      }
    }
    if (!progressed) throw CycleError("graph contains a directed cycle");
  }
  return order;
}

bool Dag::can_add(Arc a) const {
  check_arc(a);
  return !adjacent(a.tail, a.head) && !has_path(a.head, a.tail);
}

bool Dag::can_reverse(Arc a) const {
  if (!has_arc(a)) throw MissingArcError("arc " + to_string(a) + " is not present");
  // A second route tail -> c -> ... -> head would close a cycle.
  for (int c : children_[a.tail] - NodeSet::single(a.head)) {
    if (descendants(c).contains(a.head)) return false;
  }
  return true;
}

std::size_t Dag::hash() const {
  std::size_t h = parents_.size();
  for (NodeSet p : parents_) h = h * 0x9E3779B97F4A7C15ULL ^ (p.bits() + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2));
  return h;
}

bool dag_less(const Dag& a, const Dag& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (int v = 0; v < a.size(); ++v) {
    if (a.parents(v) != b.parents(v)) return a.parents(v) < b.parents(v);
  }
  return false;
}

// --- Covered arcs --------------------------------------------------------

bool is_covered(const Dag& g, Arc a) {
  if (!g.has_arc(a)) throw MissingArcError("arc " + to_string(a) + " is not present");
  return g.parents(a.head) == (g.parents(a.tail) | NodeSet::single(a.tail));
}

std::vector<Arc> covered_arcs(const Dag& g) {
  std::vector<Arc> out;
  for (int h = 0; h < g.size(); ++h) {
    const NodeSet ph = g.parents(h);
    for (int t : ph) {
      if (ph == (g.parents(t) | NodeSet::single(t))) out.push_back({t, h});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- Equivalence ---------------------------------------------------------

std::vector<NodeSet> skeleton(const Dag& g) {
  std::vector<NodeSet> nb(g.size());
  for (int v = 0; v < g.size(); ++v) nb[v] = g.neighbours(v);
  return nb;
}

std::vector<Immorality> immoralities(const Dag& g) {
  std::vector<Immorality> out;
  for (int c = 0; c < g.size(); ++c) {
    const NodeSet pa = g.parents(c);
    for (int a : pa) {
      for (int b : pa) {
        if (a < b && !g.neighbours(a).contains(b)) out.push_back({a, b, c});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool equivalent(const Dag& g, const Dag& h) {
  if (g.size() != h.size()) throw DimensionMismatch("graphs have different node counts");
  return skeleton(g) == skeleton(h) && immoralities(g) == immoralities(h);
}

// --- Essential graphs ----------------------------------------------------

Cpdag::Cpdag(int n) : n_(n), in_(n), undirected_(n) {}

PairMark Cpdag::mark(int u, int v) const {
  if (undirected_[u].contains(v)) return PairMark::undirected;
  if (in_[v].contains(u)) return PairMark::forward;
  if (in_[u].contains(v)) return PairMark::backward;
  return PairMark::absent;
}

void Cpdag::set_directed(int tail, int head) {
  undirected_[tail].erase(head);
  undirected_[head].erase(tail);
  in_[tail].erase(head);
  in_[head].insert(tail);
}

void Cpdag::set_undirected(int u, int v) {
  in_[u].erase(v);
  in_[v].erase(u);
  undirected_[u].insert(v);
  undirected_[v].insert(u);
}

int Cpdag::undirected_edge_count() const {
  int twice = 0;
  for (NodeSet s : undirected_) twice += s.size();
  return twice / 2;
}

int Cpdag::directed_edge_count() const {
  int count = 0;
  for (NodeSet s : in_) count += s.size();
  return count;
}

std::string Cpdag::key() const {
  std::string key;
  key.reserve(static_cast<std::size_t>(n_) * (n_ - 1) / 2 + 4);
  key += std::to_string(n_);
  key += ':';
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      switch (mark(u, v)) {
        case PairMark::absent: key += '.'; break;
        case PairMark::forward: key += '>'; break;
        case PairMark::backward: key += '<'; break;
        case PairMark::undirected: key += '-'; break;
      }
    }
  }
  return key;
}

// Chickering's edge ordering followed by the compelled/reversible labelling.
Cpdag dag_to_cpdag(const Dag& g) {
  const int n = g.size();
  const std::vector<int> topo = g.topological_order();
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[topo[i]] = i;

  // Heads ascending in topological order; for each head, tails descending.
  std::vector<Arc> ordered;
  ordered.reserve(g.arc_count());
  for (int y : topo) {
    std::vector<int> tails = g.parents(y).to_vector();
    std::sort(tails.begin(), tails.end(), [&](int a, int b) { return pos[a] > pos[b]; });
    for (int x : tails) ordered.push_back({x, y});
  }

  enum class Label : std::uint8_t { unknown, compelled, reversible };
  std::vector<Label> label(static_cast<std::size_t>(n) * n, Label::unknown);
  auto at = [&](int t, int h) -> Label& { return label[static_cast<std::size_t>(t) * n + h]; };
  auto label_into = [&](int y, Label value, bool only_unknown) {
    for (int z : g.parents(y)) {
      if (!only_unknown || at(z, y) == Label::unknown) at(z, y) = value;
    }
  };

  for (const Arc& e : ordered) {
    const int x = e.tail;
    const int y = e.head;
    if (at(x, y) != Label::unknown) continue;
    bool done = false;
    for (int w : g.parents(x)) {
      if (at(w, x) != Label::compelled) continue;
      if (!g.parents(y).contains(w)) {
        label_into(y, Label::compelled, false);
        done = true;
        break;
      }
      at(w, y) = Label::compelled;
    }
    if (done) continue;
    bool other_parent = false;
    for (int z : g.parents(y)) {
      if (z != x && !g.parents(x).contains(z)) {
        other_parent = true;
        break;
      }
    }
    label_into(y, other_parent ? Label::compelled : Label::reversible, true);
  }

  Cpdag out(n);
  for (const Arc& e : ordered) {
    if (at(e.tail, e.head) == Label::compelled) {
      out.set_directed(e.tail, e.head);
    } else {
      out.set_undirected(e.tail, e.head);
    }
  }
  return out;
}

int structural_difference(const Cpdag& p, const Cpdag& q) {
  if (p.size() != q.size()) throw DimensionMismatch("essential graphs have different node counts");
  int diff = 0;
  for (int u = 0; u < p.size(); ++u) {
    for (int v = u + 1; v < p.size(); ++v) {
      if (p.mark(u, v) != q.mark(u, v)) ++diff;
    }
  }
  return diff;
}

// --- Independence models -------------------------------------------------

// Moralised ancestral graph criterion.
bool d_separated(const Dag& g, int u, int v, NodeSet conditioning) {
  const int n = g.size();
  if (u < 0 || u >= n || v < 0 || v >= n || u == v) throw IndexError("invalid node pair for d-separation");
  if (!conditioning.is_subset_of(NodeSet::range(n))) throw IndexError("conditioning set out of range");
  if (conditioning.contains(u) || conditioning.contains(v)) {
    throw IndexError("conditioning set contains an endpoint");
  }

  const NodeSet relevant = g.ancestors_of(conditioning | NodeSet{u, v});
  const NodeSet open = relevant - conditioning;

  NodeSet seen = NodeSet::single(u);
  NodeSet frontier = seen;
  while (!frontier.empty()) {
    NodeSet next;
    for (int x : frontier) {
      NodeSet nb = g.neighbours(x);
      // Co-parents become adjacent after moralisation.
      for (int c : g.children(x) & relevant) nb |= g.parents(c);
      next |= nb;
    }
    next &= open;
    frontier = next - seen;
    seen |= frontier;
    if (seen.contains(v)) return false;
  }
  return true;
}

ElementaryTriplet::ElementaryTriplet(int a, int b, NodeSet cond) : u(a), v(b), s(cond) {
  if (a == b || cond.contains(a) || cond.contains(b)) throw IndexError("triplet arguments overlap");
  if (u > v) std::swap(u, v);
}

bool IndependenceModel::contains(const ElementaryTriplet& t) const {
  return std::binary_search(triplets.begin(), triplets.end(), t);
}

IndependenceModel independence_model(const Dag& g) {
  const int n = g.size();
  if (n > kIndependenceModelMaxNodes) {
    throw SizeGuardError("independence model enumeration is limited to " +
                         std::to_string(kIndependenceModelMaxNodes) + " nodes");
  }
  IndependenceModel model{n, {}};
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const std::uint64_t others = (NodeSet::range(n) - NodeSet{u, v}).bits();
      // Every subset of `others`, in increasing mask order.
      std::uint64_t sub = 0;
      while (true) {
        if (d_separated(g, u, v, NodeSet(sub))) model.triplets.emplace_back(u, v, NodeSet(sub));
        if (sub == others) break;
        sub = (sub - others) & others;
      }
    }
  }
  std::sort(model.triplets.begin(), model.triplets.end());
  return model;
}

bool model_included(const Dag& g, const Dag& h) {
  if (g.size() != h.size()) throw DimensionMismatch("graphs have different node counts");
  const IndependenceModel a = independence_model(g);
  const IndependenceModel b = independence_model(h);
  return std::includes(b.triplets.begin(), b.triplets.end(), a.triplets.begin(), a.triplets.end());
}

}  // namespace bnsl
