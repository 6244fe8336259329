#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bnsl/dag.hpp"
#include "bnsl/dataset.hpp"
#include "bnsl/neighbourhood.hpp"
#include "bnsl/random.hpp"
#include "bnsl/scoring.hpp"

namespace bnsl {

inline constexpr int kDefaultMaxTrials = 50;

// Score differences within this bound count as ties.
inline constexpr double kScoreTieTolerance = 1e-9;

struct HcmcConfig {
  // Local operator; rcarr / rcarnr act as ncr / nr after the loop's own RCAR.
  NeighbourhoodKind kind;
  // Bound of both RCAR calls in the loop; 0 turns them into no-ops.
  int tau = kDefaultTau;
  int max_trials = kDefaultMaxTrials;
  // Cap on accepted moves; defaults to 10 n^2.
  std::optional<int> max_steps;
  std::uint64_t seed = 0;
  // Defaults to the empty graph over the dataset's variables.
  std::optional<Dag> start;
};

struct StepRecord {
  int iteration = 0;
  double log_score = 0.0;
  // Set for accepted moves, empty for escape attempts.
  std::optional<Move> move;
  int trials = 0;
};

struct SearchTrace {
  std::vector<StepRecord> records;
  int steps = 0;
  double seconds = 0.0;
  double seconds_per_step = 0.0;
  double final_score = 0.0;
};

struct SearchResult {
  Dag dag;
  SearchTrace trace;
};

struct PickResult {
  Move move;
  double delta = 0.0;
};

// A move of maximal score delta; moves within kScoreTieTolerance of the best
// are tied and one of them is chosen uniformly. Throws EmptyNeighbourhoodError.
PickResult pick_best(const Dag& g, const std::vector<Move>& moves, const Dataset& data, ScoreCache& cache, Rng& rng);

// Hill-Climber Monte Carlo. Each round randomises g inside its class, moves to
// the best neighbour unless every neighbour scores lower, and otherwise spends
// one of max_trials escape attempts on another RCAR walk.
SearchResult hcmc(const Dataset& data, const HcmcConfig& cfg, ScoreCache& cache);
SearchResult hcmc(const Dataset& data, const HcmcConfig& cfg);

struct RunReportRow {
  int run = 0;
  int steps = 0;
  double sec_per_step = 0.0;
  double score = 0.0;
  std::optional<int> struct_diff;
};

struct MeanInterval {
  double mean = 0.0;
  // Half width of the 95% Student-t interval; 0 for fewer than two values.
  double half_width = 0.0;
};

MeanInterval mean_ci95(const std::vector<double>& values);

// `run,steps,sec_per_step,score,struct_diff` rows followed by `mean` and
// `ci95` summary rows.
void write_search_report(std::ostream& out, const std::vector<RunReportRow>& rows);

}  // namespace bnsl
