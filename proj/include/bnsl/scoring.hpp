#pragma once

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "bnsl/dag.hpp"
#include "bnsl/dataset.hpp"
#include "bnsl/neighbourhood.hpp"

namespace bnsl {

inline constexpr double kDefaultEss = 1.0;

// Contingency counts N_jk of a (child, parents) family. Parent
// configurations are mixed-radix over `parents` (ascending), last parent
// fastest; counts are laid out as counts[j * child_arity + k].
struct FamilyStats {
  int child = 0;
  std::vector<int> parents;
  int child_arity = 2;
  std::uint64_t config_count = 1;
  std::vector<std::uint32_t> counts;

  std::uint32_t count(std::uint64_t config, int state) const { return counts[config * child_arity + state]; }
  std::uint64_t total() const;
};

// Largest dense table family_counts will allocate.
inline constexpr std::uint64_t kMaxDenseCells = std::uint64_t{1} << 26;

FamilyStats family_counts(const Dataset& data, int child, NodeSet parents);

// Log BDeu marginal likelihood of one family with equivalent sample size
// `ess`: with q parent configurations and r child states, alpha_j = ess / q
// and alpha_jk = ess / (q r).
double local_bdeu(const FamilyStats& stats, double ess = kDefaultEss);

// Thread-safe store of local scores keyed by (child, parent set). A cache is
// tied to one dataset and one ess.
class ScoreCache {
 public:
  explicit ScoreCache(double ess = kDefaultEss);

  double ess() const { return ess_; }
  std::optional<double> lookup(int child, NodeSet parents) const;
  // Idempotent: a key keeps its first value.
  void store(int child, NodeSet parents, double value);
  std::size_t size() const;
  void clear();

 private:
  struct Key {
    int child;
    NodeSet parents;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.parents.bits() * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(k.child));
    }
  };

  double ess_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, double, KeyHash> values_;
};

// Local score of one family, uncached.
double family_score(const Dataset& data, int child, NodeSet parents, double ess = kDefaultEss);
double local_score(const Dataset& data, int child, NodeSet parents, ScoreCache& cache);

// log p(D | G) + log p(G), with the uniform structure prior taken as 0.
double score(const Dag& g, const Dataset& data, ScoreCache& cache);
double score(const Dag& g, const Dataset& data, double ess = kDefaultEss);

// score(apply_move(g, m)) - score(g) from the touched families only.
double score_delta(const Dag& g, const Move& m, const Dataset& data, ScoreCache& cache);

}  // namespace bnsl
