#include "bnsl/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "bnsl/errors.hpp"

namespace bnsl {

std::uint64_t FamilyStats::total() const {
  std::uint64_t sum = 0;
  for (std::uint32_t c : counts) sum += c;
  return sum;
}

namespace {

void check_family(const Dataset& data, int child, NodeSet parents) {
  const int n = data.variable_count();
  if (child < 0 || child >= n) throw IndexError("child " + std::to_string(child) + " out of range");
  if (!parents.is_subset_of(NodeSet::range(n))) throw IndexError("parent set out of range");
  if (parents.contains(child)) throw IndexError("child cannot be its own parent");
}

// Number of parent configurations, saturating at UINT64_MAX.
std::uint64_t config_count(const Dataset& data, NodeSet parents) {
  std::uint64_t q = 1;
  for (int p : parents) {
    const auto r = static_cast<std::uint64_t>(data.arity(p));
    if (q > UINT64_MAX / r) return UINT64_MAX;
    q *= r;
  }
  return q;
}

std::uint64_t config_of_row(const Dataset& data, const std::vector<int>& parents, int row) {
  std::uint64_t j = 0;
  for (int p : parents) j = j * static_cast<std::uint64_t>(data.arity(p)) + static_cast<std::uint64_t>(data.value(row, p));
  return j;
}

// One parent configuration's contribution. Zero counts contribute exactly 0,
// so dense and sparse evaluation agree bit for bit.
struct RowAccumulator {
  double alpha_j;
  double alpha_jk;
  double total = 0.0;

  template <typename Counts>
  void add_row(std::uint64_t n_j, const Counts& nonzero) {
    double inner = 0.0;
    for (std::uint64_t n_jk : nonzero) inner += std::lgamma(alpha_jk + static_cast<double>(n_jk)) - std::lgamma(alpha_jk);
    total += std::lgamma(alpha_j) - std::lgamma(alpha_j + static_cast<double>(n_j)) + inner;
  }
};

}  // namespace

FamilyStats family_counts(const Dataset& data, int child, NodeSet parents) {
  check_family(data, child, parents);
  FamilyStats stats;
  stats.child = child;
  stats.parents = parents.to_vector();
  stats.child_arity = data.arity(child);
  stats.config_count = config_count(data, parents);
  if (stats.config_count > kMaxDenseCells / static_cast<std::uint64_t>(stats.child_arity)) {
    throw SizeGuardError("family table of variable " + std::to_string(child) + " is too large to materialise");
  }
  stats.counts.assign(stats.config_count * stats.child_arity, 0);
  for (int row = 0; row < data.rows(); ++row) {
    const std::uint64_t j = config_of_row(data, stats.parents, row);
    ++stats.counts[j * stats.child_arity + data.value(row, child)];
  }
  return stats;
}

double local_bdeu(const FamilyStats& stats, double ess) {
  if (!(ess > 0.0)) throw ConfigError("equivalent sample size must be positive");
  const double q = static_cast<double>(stats.config_count);
  const double r = static_cast<double>(stats.child_arity);
  RowAccumulator acc{ess / q, ess / (q * r)};
  std::vector<std::uint64_t> nonzero;
  for (std::uint64_t j = 0; j < stats.config_count; ++j) {
    nonzero.clear();
    std::uint64_t n_j = 0;
    for (int k = 0; k < stats.child_arity; ++k) {
      const std::uint32_t c = stats.count(j, k);
      if (c > 0) nonzero.push_back(c);
      n_j += c;
    }
    if (n_j > 0) acc.add_row(n_j, nonzero);
  }
  return acc.total;
}

double family_score(const Dataset& data, int child, NodeSet parents, double ess) {
  check_family(data, child, parents);
  if (!(ess > 0.0)) throw ConfigError("equivalent sample size must be positive");
  const std::uint64_t q = config_count(data, parents);
  const auto r = static_cast<std::uint64_t>(data.arity(child));
  const auto rows = static_cast<std::uint64_t>(data.rows());
  // Dense tables only pay off while they are not much larger than the data.
  if (q <= kMaxDenseCells / r && q * r <= std::max<std::uint64_t>(4096, 4 * rows)) {
    return local_bdeu(family_counts(data, child, parents), ess);
  }

  // Sparse path: sort cell indices j * r + k and walk the runs.
  const std::vector<int> pa = parents.to_vector();
  const double qd = static_cast<double>(q);
  RowAccumulator acc{ess / qd, ess / (qd * static_cast<double>(r))};
  if (q > UINT64_MAX / r) {
    // Saturated configuration count; key rows by their parent tuple directly.
    std::vector<std::pair<std::vector<int>, int>> keyed;
    keyed.reserve(rows);
    for (int row = 0; row < data.rows(); ++row) {
      std::vector<int> tuple;
      tuple.reserve(pa.size());
      for (int p : pa) tuple.push_back(data.value(row, p));
      keyed.emplace_back(std::move(tuple), data.value(row, child));
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::uint64_t> nonzero;
    for (std::size_t i = 0; i < keyed.size();) {
      std::size_t end_j = i;
      while (end_j < keyed.size() && keyed[end_j].first == keyed[i].first) ++end_j;
      nonzero.clear();
      for (std::size_t a = i; a < end_j;) {
        std::size_t b = a;
        while (b < end_j && keyed[b].second == keyed[a].second) ++b;
        nonzero.push_back(b - a);
        a = b;
      }
      acc.add_row(end_j - i, nonzero);
      i = end_j;
    }
    return acc.total;
  }
  std::vector<std::uint64_t> cells;
  cells.reserve(rows);
  for (int row = 0; row < data.rows(); ++row) {
    cells.push_back(config_of_row(data, pa, row) * r + static_cast<std::uint64_t>(data.value(row, child)));
  }
  std::sort(cells.begin(), cells.end());
  std::vector<std::uint64_t> nonzero;
  for (std::size_t i = 0; i < cells.size();) {
    const std::uint64_t j = cells[i] / r;
    nonzero.clear();
    std::uint64_t n_j = 0;
    std::size_t a = i;
    while (a < cells.size() && cells[a] / r == j) {
      std::size_t b = a;
      while (b < cells.size() && cells[b] == cells[a]) ++b;
      nonzero.push_back(b - a);
      n_j += b - a;
      a = b;
    }
    acc.add_row(n_j, nonzero);
    i = a;
  }
  return acc.total;
}

ScoreCache::ScoreCache(double ess) : ess_(ess) {
  if (!(ess > 0.0)) throw ConfigError("equivalent sample size must be positive");
}

std::optional<double> ScoreCache::lookup(int child, NodeSet parents) const {
  std::shared_lock lock(mutex_);
  const auto it = values_.find(Key{child, parents});
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void ScoreCache::store(int child, NodeSet parents, double value) {
  std::unique_lock lock(mutex_);
  values_.try_emplace(Key{child, parents}, value);
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

void ScoreCache::clear() {
  std::unique_lock lock(mutex_);
  values_.clear();
}

double local_score(const Dataset& data, int child, NodeSet parents, ScoreCache& cache) {
  if (auto hit = cache.lookup(child, parents)) return *hit;
  const double value = family_score(data, child, parents, cache.ess());
  cache.store(child, parents, value);
  return value;
}

namespace {

void check_dimensions(const Dag& g, const Dataset& data) {
  if (g.size() != data.variable_count()) {
    throw DimensionMismatch("graph has " + std::to_string(g.size()) + " nodes but the dataset has " +
                            std::to_string(data.variable_count()) + " variables");
  }
}

}  // namespace

double score(const Dag& g, const Dataset& data, ScoreCache& cache) {
  check_dimensions(g, data);
  double total = 0.0;
  for (int v = 0; v < g.size(); ++v) total += local_score(data, v, g.parents(v), cache);
  return total;
}

double score(const Dag& g, const Dataset& data, double ess) {
  check_dimensions(g, data);
  double total = 0.0;
  for (int v = 0; v < g.size(); ++v) total += family_score(data, v, g.parents(v), ess);
  return total;
}

double score_delta(const Dag& g, const Move& m, const Dataset& data, ScoreCache& cache) {
  check_dimensions(g, data);
  const int t = m.arc.tail;
  const int h = m.arc.head;
  const NodeSet tail_bit = NodeSet::single(t);
  const NodeSet head_bit = NodeSet::single(h);
  switch (m.kind) {
    case MoveKind::add: {
      if (!g.can_add(m.arc)) throw CycleError("stale move " + to_string(m));
      return local_score(data, h, g.parents(h) | tail_bit, cache) - local_score(data, h, g.parents(h), cache);
    }
    case MoveKind::remove: {
      if (!g.has_arc(m.arc)) throw MissingArcError("stale move " + to_string(m));
      return local_score(data, h, g.parents(h) - tail_bit, cache) - local_score(data, h, g.parents(h), cache);
    }
    case MoveKind::reverse: {
      if (!g.can_reverse(m.arc)) throw CycleError("stale move " + to_string(m));
      return (local_score(data, t, g.parents(t) | head_bit, cache) - local_score(data, t, g.parents(t), cache)) +
             (local_score(data, h, g.parents(h) - tail_bit, cache) - local_score(data, h, g.parents(h), cache));
    }
  }
  return 0.0;
}

}  // namespace bnsl
