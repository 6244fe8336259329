#include "bnsl/search.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "bnsl/errors.hpp"

namespace bnsl {

PickResult pick_best(const Dag& g, const std::vector<Move>& moves, const Dataset& data, ScoreCache& cache, Rng& rng) {
  if (moves.empty()) throw EmptyNeighbourhoodError("cannot pick from an empty neighbourhood");
  std::vector<double> deltas;
  deltas.reserve(moves.size());
  double best = -HUGE_VAL;
  for (const Move& m : moves) {
    deltas.push_back(score_delta(g, m, data, cache));
    best = std::max(best, deltas.back());
  }
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (deltas[i] >= best - kScoreTieTolerance) tied.push_back(i);
  }
  const std::size_t chosen = tied.size() == 1 ? tied.front() : tied[uniform_index(rng, tied.size())];
  return {moves[chosen], deltas[chosen]};
}

SearchResult hcmc(const Dataset& data, const HcmcConfig& cfg, ScoreCache& cache) {
  const int n = data.variable_count();
  if (n < 1) throw ConfigError("dataset has no variables");
  if (cfg.tau < 0) throw ConfigError("tau must be non-negative");
  if (cfg.max_trials < 0) throw ConfigError("max_trials must be non-negative");
  if (cfg.kind.uses_rcar() && cfg.kind.rcar.tau != cfg.tau) {
    throw ConfigError("neighbourhood " + cfg.kind.name() + " carries tau=" + std::to_string(cfg.kind.rcar.tau) +
                      " but the search uses tau=" + std::to_string(cfg.tau));
  }
  const int max_steps = cfg.max_steps.value_or(10 * n * n);
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");

  std::vector<std::string> labels;
  for (const Variable& v : data.variables()) labels.push_back(v.label);
  Dag g = cfg.start.value_or(Dag(labels));
  if (g.size() != n) throw DimensionMismatch("start graph does not match the dataset");

  Rng rng(cfg.seed);
  const NeighbourhoodTag local = cfg.kind.local_tag();
  const auto started = std::chrono::steady_clock::now();

  SearchResult result;
  SearchTrace& trace = result.trace;
  double current = score(g, data, cache);
  int trials = 0;
  int iteration = 0;
  while (true) {
    ++iteration;
    rcar_in_place(g, cfg.tau, rng);
    const std::vector<Move> moves = local_moves(g, local);
    if (moves.empty()) break;
    const PickResult best = pick_best(g, moves, data, cache, rng);
    if (best.delta >= -kScoreTieTolerance) {
      apply_move_in_place(g, best.move);
      current = score(g, data, cache);
      trials = 0;
      ++trace.steps;
      trace.records.push_back({iteration, current, best.move, trials});
      if (trace.steps >= max_steps) break;
    } else if (trials < cfg.max_trials) {
      rcar_in_place(g, cfg.tau, rng);
      ++trials;
      trace.records.push_back({iteration, current, std::nullopt, trials});
    } else {
      break;
    }
  }

  trace.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  trace.seconds_per_step = trace.seconds / std::max(trace.steps, 1);
  trace.final_score = score(g, data, cache);
  result.dag = std::move(g);
  return result;
}

SearchResult hcmc(const Dataset& data, const HcmcConfig& cfg) {
  ScoreCache cache;
  return hcmc(data, cfg, cache);
}

MeanInterval mean_ci95(const std::vector<double>& values) {
  MeanInterval out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double dof = static_cast<double>(values.size() - 1);
  const double sd = std::sqrt(ss / dof);
  const boost::math::students_t dist(dof);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  out.half_width = t * sd / std::sqrt(static_cast<double>(values.size()));
  return out;
}

namespace {

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

}  // namespace

void write_search_report(std::ostream& out, const std::vector<RunReportRow>& rows) {
  out << "run,steps,sec_per_step,score,struct_diff\n";
  std::vector<double> steps;
  std::vector<double> secs;
  std::vector<double> scores;
  std::vector<double> diffs;
  bool all_diffs = !rows.empty();
  for (const RunReportRow& r : rows) {
    out << r.run << ',' << r.steps << ',' << fmt("%.6g", r.sec_per_step) << ',' << fmt("%.6f", r.score) << ',';
    if (r.struct_diff) out << *r.struct_diff;
    out << '\n';
    steps.push_back(r.steps);
    secs.push_back(r.sec_per_step);
    scores.push_back(r.score);
    if (r.struct_diff) {
      diffs.push_back(*r.struct_diff);
    } else {
      all_diffs = false;
    }
  }
  const MeanInterval s = mean_ci95(steps);
  const MeanInterval t = mean_ci95(secs);
  const MeanInterval sc = mean_ci95(scores);
  const MeanInterval d = mean_ci95(diffs);
  out << "mean," << fmt("%.2f", s.mean) << ',' << fmt("%.6g", t.mean) << ',' << fmt("%.6f", sc.mean) << ','
      << (all_diffs ? fmt("%.2f", d.mean) : "") << '\n';
  out << "ci95," << fmt("%.2f", s.half_width) << ',' << fmt("%.6g", t.half_width) << ',' << fmt("%.6f", sc.half_width)
      << ',' << (all_diffs ? fmt("%.2f", d.half_width) : "") << '\n';
}

}  // namespace bnsl
