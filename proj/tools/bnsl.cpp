// bnsl: command-line front end for sampling, structure search, MC3 chains and
// small utilities. Exit codes: 0 success, 1 internal error, 2 bad input.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bnsl/dag.hpp"
#include "bnsl/dataset.hpp"
#include "bnsl/equivalence.hpp"
#include "bnsl/errors.hpp"
#include "bnsl/mcmc.hpp"
#include "bnsl/net_io.hpp"
#include "bnsl/scoring.hpp"
#include "bnsl/search.hpp"

#ifndef BNSL_VERSION
#define BNSL_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace bnsl;

namespace {

struct InputError : Error {
  using Error::Error;
};

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

// Writes next to the target and renames, so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
    if (!out) throw InputError("failed writing '" + path + "'");
  }
  fs::rename(tmp, target);
}

class Manifest {
 public:
  Manifest(std::string command, int argc, char** argv) : command_(std::move(command)) {
    for (int i = 1; i < argc; ++i) flags_ += (i > 1 ? " " : "") + std::string(argv[i]);
    started_ = std::chrono::steady_clock::now();
  }

  void seed(std::uint64_t s) { seed_ = s; }
  void input(const std::string& role, const std::string& path) { inputs_.emplace_back(role, path); }
  void setting(const std::string& key, const std::string& value) { settings_.emplace_back(key, value); }

  void write(const std::string& path) const {
    std::ostringstream out;
    out << "command: " << command_ << '\n';
    out << "flags: " << flags_ << '\n';
    out << "seed: " << (seed_ ? std::to_string(*seed_) : "none") << '\n';
    for (const auto& [k, v] : settings_) out << k << ": " << v << '\n';
    for (const auto& [role, file] : inputs_) out << "input " << role << ": " << file << " sha256=" << sha256_file(file) << '\n';
    out << "version: " << BNSL_VERSION << '\n';
    char secs[32];
    std::snprintf(secs, sizeof(secs), "%.3f",
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count());
    out << "wall_seconds: " << secs << '\n';
    write_atomic(path, out.str());
  }

 private:
  std::string command_;
  std::string flags_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> settings_;
  std::chrono::steady_clock::time_point started_;
};

struct DataFlags {
  std::string path;
  std::string arities;
  bool integer_states = false;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--data", f.path, "Dataset CSV (header of labels)")->required();
  cmd->add_option("--arities", f.arities, "Sidecar of label:arity lines");
  cmd->add_flag("--integer-states", f.integer_states, "Cells are integer state indices");
}

Dataset load_data(const DataFlags& f, Manifest& m) {
  CsvOptions opts;
  opts.integer_states = f.integer_states;
  if (!f.arities.empty()) {
    opts.arities = read_arity_sidecar_file(f.arities);
    m.input("arities", f.arities);
  }
  m.input("data", f.path);
  return read_dataset_csv_file(f.path, opts);
}

// Reorders g so node i carries labels[i].
Dag align_to(const Dag& g, const std::vector<std::string>& labels) {
  if (g.size() != static_cast<int>(labels.size())) {
    throw DimensionMismatch("graph has " + std::to_string(g.size()) + " nodes, expected " + std::to_string(labels.size()));
  }
  std::map<std::string, int> where;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) where[labels[i]] = i;
  std::vector<int> map(g.size());
  for (int v = 0; v < g.size(); ++v) {
    const auto it = where.find(g.label(v));
    if (it == where.end()) throw DimensionMismatch("node '" + g.label(v) + "' does not appear in the reference");
    map[v] = it->second;
  }
  Dag out(labels);
  for (const Arc& a : g.arcs()) out.add_arc({map[a.tail], map[a.head]});
  return out;
}

std::vector<std::string> labels_of(const Dataset& d) {
  std::vector<std::string> out;
  for (const Variable& v : d.variables()) out.push_back(v.label);
  return out;
}

// A reference structure from either a network file or a .dag file.
Dag load_structure(const std::string& path) {
  if (fs::path(path).extension() == ".dag") return load_dag(path);
  return load_network(path).structure;
}

NeighbourhoodKind parse_kind(const std::string& name, std::optional<int> tau, Manifest& m) {
  NeighbourhoodKind probe = NeighbourhoodKind::parse(name, 0);
  if (!probe.uses_rcar()) {
    m.setting("tau", "0 (unused by " + name + ")");
    return probe;
  }
  const int t = tau.value_or(kDefaultTau);
  m.setting("tau", std::to_string(t) + (tau ? "" : " (default)"));
  return NeighbourhoodKind::parse(name, t);
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

int run_app(int argc, char** argv) {
  CLI::App app{"Bayesian network structure learning over equivalence-aware neighbourhoods"};
  app.set_version_flag("--version", BNSL_VERSION);
  app.require_subcommand(1);

  // sample
  std::string net_path;
  std::string out_csv;
  int sample_rows = 0;
  std::uint64_t seed = 0;
  auto* sample = app.add_subcommand("sample", "Forward-sample a dataset from a network file");
  sample->add_option("--network", net_path, "Network file")->required();
  sample->add_option("--n", sample_rows, "Number of records")->required()->check(CLI::NonNegativeNumber);
  sample->add_option("--seed", seed, "Random seed")->required();
  sample->add_option("--out", out_csv, "Output CSV")->required();

  // generate
  RandomNetworkOptions gen_opts;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a random network with random CPTs");
  generate->add_option("--nodes", gen_opts.nodes, "Node count")->check(CLI::Range(1, kMaxNodes));
  generate->add_option("--expected-arcs", gen_opts.expected_arcs, "Expected number of arcs");
  generate->add_option("--max-parents", gen_opts.max_parents, "Parent cap per node");
  generate->add_option("--min-arity", gen_opts.min_arity, "Smallest state count");
  generate->add_option("--max-arity", gen_opts.max_arity, "Largest state count");
  generate->add_option("--alpha", gen_opts.dirichlet_alpha, "Dirichlet concentration of CPT rows");
  generate->add_option("--seed", seed, "Random seed")->required();
  generate->add_option("--out", gen_out, "Output network file")->required();

  // learn
  DataFlags learn_data;
  std::string kind_name = "ar";
  std::optional<int> tau;
  int max_trials = kDefaultMaxTrials;
  std::optional<int> max_steps;
  int runs = 1;
  std::string true_net;
  std::string prefix;
  auto* learn = app.add_subcommand("learn", "Run seeded HCMC searches and write a report");
  add_data_flags(learn, learn_data);
  learn->add_option("--neighbourhood", kind_name, "nr|ar|cr|ncr|rcarr|rcarnr");
  learn->add_option("--tau", tau, "RCAR bound (RCAR kinds; default 10)");
  learn->add_option("--max-trials", max_trials, "Escape attempts at a local maximum");
  learn->add_option("--max-steps", max_steps, "Cap on accepted moves (default 10 n^2)");
  learn->add_option("--runs", runs, "Number of seeded runs")->check(CLI::PositiveNumber);
  learn->add_option("--seed", seed, "Base seed; run r uses seed + r - 1")->required();
  learn->add_option("--true-net", true_net, "Reference network or .dag for structural difference");
  learn->add_option("--out-prefix", prefix, "Prefix of output files")->required();

  // mcmc
  DataFlags mcmc_data;
  long iterations = 0;
  bool hastings = false;
  bool rebase = false;
  int thin = 1;
  int top_k = 5;
  auto* mcmc = app.add_subcommand("mcmc", "Run an MC3 chain and write diagnostics");
  add_data_flags(mcmc, mcmc_data);
  mcmc->add_option("--neighbourhood", kind_name, "nr|ar|cr|ncr|rcarr|rcarnr");
  mcmc->add_option("--tau", tau, "RCAR bound (RCAR kinds; default 10)");
  mcmc->add_option("--iterations", iterations, "Chain length")->required();
  mcmc->add_option("--seed", seed, "Random seed")->required();
  mcmc->add_flag("--hastings", hastings, "Correct for unequal neighbourhood sizes");
  mcmc->add_flag("--rebase-on-reject", rebase, "Keep the RCAR walk on rejected proposals");
  mcmc->add_option("--thin", thin, "Record every k-th iteration");
  mcmc->add_option("--top-k", top_k, "DAGs averaged in the evidence estimate");
  mcmc->add_option("--out-prefix", prefix, "Prefix of output files")->required();

  // census
  int census_nodes = 0;
  auto* census_cmd = app.add_subcommand("census", "Count DAGs and equivalence classes");
  census_cmd->add_option("--nodes", census_nodes, "Node count")->required();

  // diff
  std::string dag_a;
  std::string dag_b;
  auto* diff = app.add_subcommand("diff", "Structural difference of two graphs' essential graphs");
  diff->add_option("--a", dag_a, "First .dag or network file")->required();
  diff->add_option("--b", dag_b, "Second .dag or network file")->required();

  // score
  DataFlags score_data;
  std::string score_dag;
  double ess = kDefaultEss;
  auto* score_cmd = app.add_subcommand("score", "BDeu log score of a graph");
  add_data_flags(score_cmd, score_data);
  score_cmd->add_option("--dag", score_dag, "Graph (.dag or network file)")->required();
  score_cmd->add_option("--ess", ess, "Equivalent sample size")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*sample) {
    Manifest m("sample", argc, argv);
    m.seed(seed);
    m.input("network", net_path);
    const BayesNet net = load_network(net_path);
    Rng rng(seed);
    const Dataset d = forward_sample(net, sample_rows, rng);
    std::ostringstream csv;
    write_dataset_csv(csv, d);
    write_atomic(out_csv, csv.str());
    std::ostringstream sidecar;
    write_arity_sidecar(sidecar, d);
    write_atomic(out_csv + ".arities", sidecar.str());
    m.write(out_csv + ".manifest.txt");
    return 0;
  }

  if (*generate) {
    Manifest m("generate", argc, argv);
    m.seed(seed);
    Rng rng(seed);
    const BayesNet net = random_network(gen_opts, rng);
    std::ostringstream text;
    write_network(text, net);
    write_atomic(gen_out, text.str());
    m.write(gen_out + ".manifest.txt");
    return 0;
  }

  if (*learn) {
    Manifest m("learn", argc, argv);
    m.seed(seed);
    const Dataset d = load_data(learn_data, m);
    const NeighbourhoodKind kind = parse_kind(kind_name, tau, m);
    std::optional<Cpdag> target;
    if (!true_net.empty()) {
      m.input("true-net", true_net);
      target = dag_to_cpdag(align_to(load_structure(true_net), labels_of(d)));
    }
    ScoreCache cache;
    std::vector<RunReportRow> rows;
    for (int run = 1; run <= runs; ++run) {
      HcmcConfig cfg;
      cfg.kind = kind;
      cfg.tau = kind.uses_rcar() ? kind.rcar.tau : 0;
      cfg.max_trials = max_trials;
      cfg.max_steps = max_steps;
      cfg.seed = seed + static_cast<std::uint64_t>(run - 1);
      const SearchResult r = hcmc(d, cfg, cache);
      std::ostringstream dag_text;
      write_dag(dag_text, r.dag);
      write_atomic(prefix + ".run" + std::to_string(run) + ".dag", dag_text.str());
      RunReportRow row{run, r.trace.steps, r.trace.seconds_per_step, r.trace.final_score, std::nullopt};
      if (target) row.struct_diff = structural_difference(dag_to_cpdag(r.dag), *target);
      rows.push_back(row);
    }
    std::ostringstream report;
    write_search_report(report, rows);
    write_atomic(prefix + ".report.csv", report.str());
    std::cout << report.str();
    m.write(prefix + ".manifest.txt");
    return 0;
  }

  if (*mcmc) {
    Manifest m("mcmc", argc, argv);
    m.seed(seed);
    const Dataset d = load_data(mcmc_data, m);
    ChainConfig cfg;
    cfg.kind = parse_kind(kind_name, tau, m);
    cfg.iterations = iterations;
    cfg.seed = seed;
    cfg.hastings_correction = hastings;
    cfg.rebase_on_reject = rebase;
    cfg.thin = thin;
    cfg.top_k = top_k;
    const ChainRun run = run_chain(d, cfg);
    std::ostringstream diag;
    write_diagnostics_csv(diag, run.records);
    write_atomic(prefix + ".diagnostics.csv", diag.str());
    std::ostringstream summary;
    write_summary_csv(summary, run.summary);
    write_atomic(prefix + ".summary.csv", summary.str());
    std::ostringstream bounds;
    write_class_bounds_csv(bounds, class_bound_report(run.visits));
    write_atomic(prefix + ".class_bounds.csv", bounds.str());
    std::ostringstream hist;
    write_edge_histogram_csv(hist, run.summary);
    write_atomic(prefix + ".edge_histogram.csv", hist.str());
    std::cout << summary.str();
    m.write(prefix + ".manifest.txt");
    return 0;
  }

  if (*census_cmd) {
    const CensusResult c = census(census_nodes);
    std::cout << census_csv_header() << '\n' << census_csv_row(c) << '\n';
    return 0;
  }

  if (*diff) {
    const Dag a = load_structure(dag_a);
    const Dag b = align_to(load_structure(dag_b), a.labels());
    std::cout << structural_difference(dag_to_cpdag(a), dag_to_cpdag(b)) << '\n';
    return 0;
  }

  if (*score_cmd) {
    Manifest m("score", argc, argv);
    const Dataset d = load_data(score_data, m);
    const Dag g = align_to(load_structure(score_dag), labels_of(d));
    std::cout << fmt("%.10f", score(g, d, ess)) << '\n';
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const Error& e) {
    // Library errors all stem from inputs or flags.
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
