#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bnsl/node_set.hpp"

namespace bnsl {

// A directed arc tail -> head between two distinct node indices.
struct Arc {
  int tail = 0;
  int head = 0;

  constexpr Arc reversed() const { return {head, tail}; }
  constexpr auto operator<=>(const Arc&) const = default;
};

std::string to_string(const Arc& arc);

// Node-labelled acyclic digraph stored as per-node parent (and child) sets.
//
// Node identity is positional; labels are metadata and do not take part in
// equality. Every mutator keeps the graph acyclic and offers the strong
// exception guarantee: on failure the graph is left untouched.
class Dag {
 public:
  Dag() = default;
  // Empty graph on n nodes labelled x0..x{n-1}.
  explicit Dag(int n);
  explicit Dag(std::vector<std::string> labels);

  // Builds a graph from an arc list; throws CycleError/DuplicateArcError.
  static Dag from_arcs(int n, const std::vector<Arc>& arcs);

  int size() const { return static_cast<int>(parents_.size()); }
  int arc_count() const;

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int v) const { return labels_.at(v); }
  void set_labels(std::vector<std::string> labels);

  NodeSet parents(int v) const { return parents_[v]; }
  NodeSet children(int v) const { return children_[v]; }
  NodeSet neighbours(int v) const { return parents_[v] | children_[v]; }
  bool has_arc(Arc a) const;
  bool adjacent(int u, int v) const;

  // Arcs in (tail, head) lexicographic order.
  std::vector<Arc> arcs() const;

  void add_arc(Arc a);
  void remove_arc(Arc a);
  void reverse_arc(Arc a);

  // Directed path from -> ... -> to of length >= 1.
  bool has_path(int from, int to) const;
  // All nodes reachable from v by a directed path of length >= 1.
  NodeSet descendants(int v) const;
  // v together with every node that has a directed path into v.
  NodeSet ancestors_of(NodeSet nodes) const;
  std::vector<int> topological_order() const;

  // Whether add_arc(a) would succeed (a absent in both directions, no cycle).
  bool can_add(Arc a) const;
  // Whether reverse_arc(a) would succeed; `a` must be present.
  bool can_reverse(Arc a) const;

  bool operator==(const Dag& other) const { return parents_ == other.parents_; }

  std::size_t hash() const;

 private:
  void check_node(int v) const;
  void check_arc(Arc a) const;

  std::vector<std::string> labels_;
  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
};

// Strict total order on graphs of any size (by size, then parent sets).
bool dag_less(const Dag& a, const Dag& b);

// --- Covered arcs --------------------------------------------------------

// a = x -> y is covered iff parents(y) == parents(x) + {x}.
bool is_covered(const Dag& g, Arc a);
std::vector<Arc> covered_arcs(const Dag& g);

// --- Equivalence ---------------------------------------------------------

// Undirected neighbour sets.
std::vector<NodeSet> skeleton(const Dag& g);

// a -> c <- b with a < b and a, b non-adjacent.
struct Immorality {
  int a = 0;
  int b = 0;
  int c = 0;
  constexpr auto operator<=>(const Immorality&) const = default;
};

std::vector<Immorality> immoralities(const Dag& g);

// Same skeleton and same immoralities.
bool equivalent(const Dag& g, const Dag& h);

// --- Essential graphs ----------------------------------------------------

// Mark of an unordered pair {u, v} with u < v.
enum class PairMark : std::uint8_t { absent, forward, backward, undirected };

// Essential graph: compelled arcs directed, reversible ones undirected.
class Cpdag {
 public:
  Cpdag() = default;
  explicit Cpdag(int n);

  int size() const { return n_; }
  // Mark of {u, v} seen from u: forward means u -> v.
  PairMark mark(int u, int v) const;
  void set_directed(int tail, int head);
  void set_undirected(int u, int v);

  // Compelled parents of v.
  NodeSet directed_parents(int v) const { return in_[v]; }
  NodeSet undirected_neighbours(int v) const { return undirected_[v]; }
  int undirected_edge_count() const;
  int directed_edge_count() const;

  // One character per pair (u < v, lexicographic): '.', '>', '<', '-'.
  std::string key() const;

  bool operator==(const Cpdag& other) const = default;

 private:
  int n_ = 0;
  std::vector<NodeSet> in_;
  std::vector<NodeSet> undirected_;
};

Cpdag dag_to_cpdag(const Dag& g);

// Number of unordered pairs whose marks differ.
int structural_difference(const Cpdag& p, const Cpdag& q);

// --- Independence models -------------------------------------------------

bool d_separated(const Dag& g, int u, int v, NodeSet conditioning);

// <u, v | S> with u < v and u, v not in S.
struct ElementaryTriplet {
  int u = 0;
  int v = 0;
  NodeSet s;

  ElementaryTriplet() = default;
  // Throws IndexError on overlapping arguments; swaps so that u < v.
  ElementaryTriplet(int u, int v, NodeSet s);
  constexpr auto operator<=>(const ElementaryTriplet&) const = default;
};

struct IndependenceModel {
  int n = 0;
  // Sorted, without duplicates.
  std::vector<ElementaryTriplet> triplets;

  bool contains(const ElementaryTriplet& t) const;
  bool operator==(const IndependenceModel&) const = default;
};

inline constexpr int kIndependenceModelMaxNodes = 12;

// Every elementary triplet that holds under d-separation in g.
IndependenceModel independence_model(const Dag& g);

// I(g) is a subset of I(h).
bool model_included(const Dag& g, const Dag& h);

}  // namespace bnsl

template <>
struct std::hash<bnsl::Dag> {
  std::size_t operator()(const bnsl::Dag& g) const noexcept { return g.hash(); }
};
