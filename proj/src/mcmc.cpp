#include "bnsl/mcmc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "bnsl/equivalence.hpp"
#include "bnsl/errors.hpp"

namespace bnsl {

void ChainConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (thin < 1) throw ConfigError("thin must be at least 1");
  if (top_k < 1) throw ConfigError("top_k must be at least 1");
  if (kind.uses_rcar() && kind.rcar.tau < 0) throw ConfigError("tau must be non-negative");
  if (hastings_correction && kind.uses_rcar()) {
    throw ConfigError("the Hastings correction is only available for nr, ar, cr and ncr");
  }
}

double acceptance_probability(double log_ratio, double hastings) {
  if (!(hastings > 0.0)) return 0.0;
  const double total = log_ratio + std::log(hastings);
  return total >= 0.0 ? 1.0 : std::exp(total);
}

ChainState initial_state(const Dataset& data, const ChainConfig& cfg, ScoreCache& cache) {
  std::vector<std::string> labels;
  for (const Variable& v : data.variables()) labels.push_back(v.label);
  ChainState state;
  state.current = cfg.start.value_or(Dag(labels));
  if (state.current.size() != data.variable_count()) throw DimensionMismatch("start graph does not match the dataset");
  state.log_score = score(state.current, data, cache);
  return state;
}

bool mc3_step_in_place(ChainState& state, const ChainConfig& cfg, const Dataset& data, ScoreCache& cache, Rng& rng) {
  ++state.iteration;
  if (state.current.size() < 2) {
    // Nothing to propose on a single variable; the chain stays put.
    ++state.rejects;
    return false;
  }
  ProposedMove proposal = random_move(state.current, cfg.kind, rng);
  Dag candidate = apply_move(proposal.base, proposal.move);
  const double candidate_score = score(candidate, data, cache);
  double hastings = 1.0;
  if (cfg.hastings_correction) {
    const NeighbourhoodTag tag = cfg.kind.local_tag();
    hastings = static_cast<double>(neighbourhood_size(state.current, tag)) /
               static_cast<double>(neighbourhood_size(candidate, tag));
  }
  const double p = acceptance_probability(candidate_score - state.log_score, hastings);
  const bool accept = p >= 1.0 || uniform01(rng) < p;
  if (accept) {
    state.current = std::move(candidate);
    state.log_score = candidate_score;
    ++state.accepts;
  } else {
    if (cfg.rebase_on_reject && cfg.kind.uses_rcar()) {
      state.current = std::move(proposal.base);
      state.log_score = score(state.current, data, cache);
    }
    ++state.rejects;
  }
  return accept;
}

ChainState mc3_step(const ChainState& state, const ChainConfig& cfg, const Dataset& data, ScoreCache& cache, Rng& rng) {
  ChainState next = state;
  mc3_step_in_place(next, cfg, data, cache, rng);
  return next;
}

double marginal_data_estimate(std::span<const DagTally> tallies, int top_k) {
  if (top_k < 1) throw ConfigError("top_k must be at least 1");
  std::uint64_t total = 0;
  for (const DagTally& t : tallies) total += t.visits;
  if (total == 0) throw ConfigError("marginal estimate needs at least one visited state");

  std::vector<std::size_t> order(tallies.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tallies[a].visits > tallies[b].visits; });
  std::vector<double> estimates;
  for (std::size_t i : order) {
    if (static_cast<int>(estimates.size()) == top_k || tallies[i].visits == 0) break;
    const double frequency = static_cast<double>(tallies[i].visits) / static_cast<double>(total);
    estimates.push_back(tallies[i].log_joint - std::log(frequency));
  }
  const double top = *std::max_element(estimates.begin(), estimates.end());
  double sum = 0.0;
  for (double e : estimates) sum += std::exp(e - top);
  return top + std::log(sum / static_cast<double>(estimates.size()));
}

int VisitLog::record(const Dag& g, double log_score, long iteration) {
  auto it = dag_index_.find(g);
  if (it == dag_index_.end()) {
    const Cpdag cpdag = dag_to_cpdag(g);
    auto [cls, inserted] = class_index_.try_emplace(cpdag.key(), static_cast<int>(classes_.size()));
    if (inserted) classes_.push_back(ClassEntry{cpdag, iteration, 0, 0});
    ++classes_[cls->second].members;
    it = dag_index_.emplace(g, static_cast<int>(dags_.size())).first;
    dags_.push_back(DagEntry{g, log_score, 0, cls->second});
  }
  DagEntry& entry = dags_[it->second];
  ++entry.visits;
  ++classes_[entry.cpdag_id].visits;
  return entry.cpdag_id;
}

std::vector<DagTally> VisitLog::tallies() const {
  std::vector<DagTally> out;
  out.reserve(dags_.size());
  for (const DagEntry& e : dags_) out.push_back({e.visits, e.log_score});
  return out;
}

ChainRun run_chain(const Dataset& data, const ChainConfig& cfg, ScoreCache& cache) {
  cfg.validate();
  ChainRun run;
  ChainState state = initial_state(data, cfg, cache);
  Rng rng(cfg.seed);
  const int n = data.variable_count();
  std::vector<std::uint64_t> histogram(static_cast<std::size_t>(n) * (n - 1) / 2 + 1, 0);
  run.records.reserve(static_cast<std::size_t>(cfg.iterations / cfg.thin));

  const auto started = std::chrono::steady_clock::now();
  std::uint64_t edge_sum = 0;
  for (long it = 1; it <= cfg.iterations; ++it) {
    const bool accepted = mc3_step_in_place(state, cfg, data, cache, rng);
    if (it % cfg.thin != 0) continue;
    const int edges = state.current.arc_count();
    const int id = run.visits.record(state.current, state.log_score, it);
    run.records.push_back({it, edges, state.log_score, accepted, id});
    ++histogram[edges];
    edge_sum += static_cast<std::uint64_t>(edges);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  ChainSummary& s = run.summary;
  s.iterations = state.iteration;
  s.accepts = state.accepts;
  s.rejects = state.rejects;
  s.acc_rej_ratio = state.rejects > 0 ? static_cast<double>(state.accepts) / static_cast<double>(state.rejects)
                                      : std::numeric_limits<double>::infinity();
  s.seconds = seconds;
  s.iter_per_sec = seconds > 0.0 ? static_cast<double>(state.iteration) / seconds : 0.0;
  s.distinct_cpdags = run.visits.classes().size();
  s.distinct_dags = run.visits.dags().size();
  s.edge_histogram = std::move(histogram);
  if (!run.records.empty()) {
    s.mean_edges = static_cast<double>(edge_sum) / static_cast<double>(run.records.size());
    const std::vector<DagTally> tallies = run.visits.tallies();
    s.phat_log = marginal_data_estimate(tallies, cfg.top_k);
  }
  run.final_state = std::move(state);
  return run;
}

ChainRun run_chain(const Dataset& data, const ChainConfig& cfg) {
  ScoreCache cache;
  return run_chain(data, cfg, cache);
}

std::vector<ClassBound> class_bound_report(const VisitLog& visits) {
  std::vector<ClassBound> rows;
  rows.reserve(visits.classes().size());
  int id = 0;
  for (const VisitLog::ClassEntry& c : visits.classes()) {
    rows.push_back({id++, c.first_iteration, class_size_lower_bound(c.cpdag), c.members});
  }
  return rows;
}

namespace {

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

}  // namespace

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
  out << "iter,edges,logscore,accepted,cpdag_id\n";
  for (const DiagnosticsRecord& r : records) {
    out << r.iteration << ',' << r.edges << ',' << fmt("%.17g", r.log_score) << ',' << (r.accepted ? 1 : 0) << ','
        << r.cpdag_id << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ChainSummary& s) {
  out << "distinct_cpdags,acc_rej_ratio,iter_per_sec,phatD_log\n";
  out << s.distinct_cpdags << ',' << fmt("%.6g", s.acc_rej_ratio) << ',' << fmt("%.6g", s.iter_per_sec) << ','
      << fmt("%.17g", s.phat_log) << '\n';
}

void write_class_bounds_csv(std::ostream& out, const std::vector<ClassBound>& rows) {
  out << "cpdag_id,first_iter,lower_bound,observed_members\n";
  for (const ClassBound& r : rows) {
    out << r.cpdag_id << ',' << r.first_iteration << ',' << r.lower_bound << ',' << r.observed_members << '\n';
  }
}

void write_edge_histogram_csv(std::ostream& out, const ChainSummary& summary) {
  out << "edges,count\n";
  for (std::size_t e = 0; e < summary.edge_histogram.size(); ++e) out << e << ',' << summary.edge_histogram[e] << '\n';
}

}  // namespace bnsl
