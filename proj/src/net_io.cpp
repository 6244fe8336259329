#include "bnsl/net_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>

#include "bnsl/errors.hpp"
#include "text_util.hpp"

namespace bnsl {

std::size_t BayesNet::row_count(int v) const {
  std::size_t rows = 1;
  for (int p : structure.parents(v)) rows *= states[p].size();
  return rows;
}

void BayesNet::validate() const {
  const int n = size();
  if (static_cast<int>(states.size()) != n || static_cast<int>(cpts.size()) != n) {
    throw ValidationError("network tables do not match the node count");
  }
  for (int v = 0; v < n; ++v) {
    const std::string& name = structure.label(v);
    if (states[v].size() < 2) throw ValidationError("node '" + name + "' needs at least two states");
    if (cpts[v].size() != row_count(v)) {
      throw ValidationError("node '" + name + "' has " + std::to_string(cpts[v].size()) + " CPT rows, expected " +
                            std::to_string(row_count(v)));
    }
    for (const std::vector<double>& row : cpts[v]) {
      if (row.size() != states[v].size()) throw ValidationError("node '" + name + "' has a CPT row of wrong length");
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("node '" + name + "' has a negative probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kCptRowTolerance) throw ValidationError("node '" + name + "' has a CPT row not summing to 1");
    }
  }
}

namespace {

struct NodeBlock {
  std::string name;
  std::size_t line = 0;
  std::optional<std::vector<std::string>> states;
  std::vector<std::string> parents;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;
};

[[noreturn]] void fail_validation(const std::string& what, std::size_t line) {
  throw ValidationError("line " + std::to_string(line) + ": " + what);
}

double parse_probability(const std::string& word, std::size_t line) {
  double p = 0.0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), p);
  if (ec != std::errc() || ptr != word.data() + word.size()) throw ParseError("'" + word + "' is not a number", line);
  return p;
}

std::string format_probability(double p) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", p);
  return buf;
}

}  // namespace

BayesNet read_network(std::istream& in) {
  std::vector<NodeBlock> blocks;
  std::optional<NodeBlock> current;
  bool in_cpt = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::vector<std::string> w = detail::words(detail::strip_comment(raw));
    if (w.empty()) continue;
    const std::string& head = w.front();
    if (!current) {
      if (head != "node" || w.size() != 2) throw ParseError("expected 'node <name>'", line_no);
      current = NodeBlock{w[1], line_no, std::nullopt, {}, {}, {}};
      in_cpt = false;
      continue;
    }
    if (head == "end") {
      if (w.size() != 1) throw ParseError("unexpected tokens after 'end'", line_no);
      if (!current->states) throw ParseError("node '" + current->name + "' has no 'states' line", line_no);
      blocks.push_back(std::move(*current));
      current.reset();
      continue;
    }
    if (in_cpt) {
      std::vector<double> row;
      row.reserve(w.size());
      for (const std::string& word : w) row.push_back(parse_probability(word, line_no));
      current->rows.push_back(std::move(row));
      current->row_lines.push_back(line_no);
    } else if (head == "states") {
      current->states = std::vector<std::string>(w.begin() + 1, w.end());
    } else if (head == "parents") {
      current->parents.assign(w.begin() + 1, w.end());
    } else if (head == "cpt") {
      if (w.size() != 1) throw ParseError("unexpected tokens after 'cpt'", line_no);
      in_cpt = true;
    } else {
      throw ParseError("unexpected '" + head + "' inside node '" + current->name + "'", line_no);
    }
  }
  if (current) throw ParseError("node '" + current->name + "' is missing 'end'", line_no);

  std::map<std::string, int> index;
  std::vector<std::string> names;
  for (const NodeBlock& b : blocks) {
    if (!index.try_emplace(b.name, static_cast<int>(names.size())).second) {
      fail_validation("duplicate node '" + b.name + "'", b.line);
    }
    names.push_back(b.name);
  }
  if (names.size() > static_cast<std::size_t>(kMaxNodes)) throw ValidationError("too many nodes");

  BayesNet net;
  net.structure = Dag(names);
  for (const NodeBlock& b : blocks) {
    const int child = index.at(b.name);
    std::set<std::string> seen;
    for (const std::string& p : b.parents) {
      const auto it = index.find(p);
      if (it == index.end()) fail_validation("unknown parent '" + p + "' of '" + b.name + "'", b.line);
      if (!seen.insert(p).second) fail_validation("parent '" + p + "' listed twice", b.line);
      try {
        net.structure.add_arc({it->second, child});
      } catch (const CycleError&) {
        fail_validation("parent '" + p + "' of '" + b.name + "' creates a directed cycle", b.line);
      } catch (const Error& e) {
        fail_validation(e.what(), b.line);
      }
    }
  }

  for (const NodeBlock& b : blocks) {
    net.states.push_back(*b.states);
    if (b.states->size() < 2) fail_validation("node '" + b.name + "' needs at least two states", b.line);
  }

  for (const NodeBlock& b : blocks) {
    const std::size_t arity = b.states->size();
    std::vector<int> listed;
    for (const std::string& p : b.parents) listed.push_back(index.at(p));
    std::size_t expected_rows = 1;
    for (int p : listed) expected_rows *= net.states[p].size();
    if (b.rows.size() != expected_rows) {
      fail_validation("node '" + b.name + "' has " + std::to_string(b.rows.size()) + " CPT rows, expected " +
                          std::to_string(expected_rows),
                      b.line);
    }
    for (std::size_t r = 0; r < b.rows.size(); ++r) {
      const std::vector<double>& row = b.rows[r];
      if (row.size() != arity) {
        fail_validation("CPT row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(arity),
                        b.row_lines[r]);
      }
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0) || !std::isfinite(p)) fail_validation("negative or non-finite probability", b.row_lines[r]);
        sum += p;
      }
      if (std::abs(sum - 1.0) > kCptRowTolerance) fail_validation("CPT row sums to " + format_probability(sum), b.row_lines[r]);
    }

    // Reorder rows from the listed parent order to ascending node index.
    std::vector<int> canonical = listed;
    std::sort(canonical.begin(), canonical.end());
    std::vector<std::vector<double>> rows(expected_rows);
    std::vector<int> values(net.size(), 0);
    for (std::size_t jc = 0; jc < expected_rows; ++jc) {
      std::size_t rest = jc;
      for (auto it = canonical.rbegin(); it != canonical.rend(); ++it) {
        const std::size_t r = net.states[*it].size();
        values[*it] = static_cast<int>(rest % r);
        rest /= r;
      }
      std::size_t jl = 0;
      for (int p : listed) jl = jl * net.states[p].size() + static_cast<std::size_t>(values[p]);
      rows[jc] = b.rows[jl];
    }
    net.cpts.push_back(std::move(rows));
  }
  net.validate();
  return net;
}

BayesNet load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open network '" + path + "'");
  return read_network(in);
}

void write_network(std::ostream& out, const BayesNet& net) {
  net.validate();
  for (int v = 0; v < net.size(); ++v) {
    out << "node " << net.structure.label(v) << '\n';
    out << "states";
    for (const std::string& s : net.states[v]) out << ' ' << s;
    out << "\nparents";
    for (int p : net.structure.parents(v)) out << ' ' << net.structure.label(p);
    out << "\ncpt\n";
    for (const std::vector<double>& row : net.cpts[v]) {
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? " " : "") << format_probability(row[k]);
      out << '\n';
    }
    out << "end\n\n";
  }
}

void save_network(const BayesNet& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write network '" + path + "'");
  write_network(out, net);
}

Dataset forward_sample(const BayesNet& net, int n, Rng& rng) {
  if (n < 0) throw ConfigError("sample size must be non-negative");
  const int nodes = net.size();
  const std::vector<int> order = net.structure.topological_order();
  std::vector<std::vector<int>> parent_lists(nodes);
  for (int v = 0; v < nodes; ++v) parent_lists[v] = net.structure.parents(v).to_vector();

  std::vector<std::vector<int>> columns(nodes, std::vector<int>(n));
  std::vector<int> record(nodes);
  for (int row = 0; row < n; ++row) {
    for (int v : order) {
      std::size_t j = 0;
      for (int p : parent_lists[v]) j = j * net.states[p].size() + static_cast<std::size_t>(record[p]);
      const std::vector<double>& dist = net.cpts[v][j];
      const double u = uniform01(rng);
      double cumulative = 0.0;
      int state = -1;
      int last_positive = 0;
      for (std::size_t k = 0; k < dist.size(); ++k) {
        if (dist[k] > 0.0) last_positive = static_cast<int>(k);
        cumulative += dist[k];
        if (u < cumulative) {
          state = static_cast<int>(k);
          break;
        }
      }
      // Rounding can leave the cumulative sum just below u.
      record[v] = state >= 0 ? state : last_positive;
      columns[v][row] = record[v];
    }
  }

  std::vector<Variable> variables(nodes);
  for (int v = 0; v < nodes; ++v) variables[v] = Variable{net.structure.label(v), net.arity(v), net.states[v]};
  return Dataset(std::move(variables), std::move(columns));
}

BayesNet random_network(const RandomNetworkOptions& options, Rng& rng) {
  const int n = options.nodes;
  if (n < 1 || n > kMaxNodes) throw ConfigError("node count out of range");
  if (options.min_arity < 2 || options.max_arity < options.min_arity) throw ConfigError("invalid arity range");
  if (!(options.dirichlet_alpha > 0.0)) throw ConfigError("Dirichlet concentration must be positive");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::string> names;
  for (int v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
  BayesNet net;
  net.structure = Dag(names);

  const double pairs = n * (n - 1) / 2.0;
  const double p_arc = pairs > 0 ? std::min(1.0, options.expected_arcs / pairs) : 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p_arc && net.structure.parents(order[j]).size() < options.max_parents) {
        net.structure.add_arc({order[i], order[j]});
      }
    }
  }

  std::uniform_int_distribution<int> arity(options.min_arity, options.max_arity);
  for (int v = 0; v < n; ++v) {
    const int r = arity(rng);
    std::vector<std::string> states;
    for (int k = 0; k < r; ++k) states.push_back("s" + std::to_string(k));
    net.states.push_back(std::move(states));
  }

  std::gamma_distribution<double> gamma(options.dirichlet_alpha, 1.0);
  for (int v = 0; v < n; ++v) {
    std::vector<std::vector<double>> rows(net.row_count(v));
    for (std::vector<double>& row : rows) {
      row.resize(net.states[v].size());
      double sum = 0.0;
      for (double& p : row) {
        p = gamma(rng);
        sum += p;
      }
      if (sum <= 0.0) {
        std::fill(row.begin(), row.end(), 0.0);
        row[uniform_index(rng, row.size())] = 1.0;
        continue;
      }
      for (double& p : row) p /= sum;
    }
    net.cpts.push_back(std::move(rows));
  }
  net.validate();
  return net;
}

Dag read_dag(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::optional<Dag> g;
  std::map<std::string, int> index;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string body = detail::trim(detail::strip_comment(raw));
    if (body.empty()) continue;
    if (!g) {
      if (body.rfind("nodes:", 0) != 0) throw ParseError("expected 'nodes: a,b,...'", line_no);
      const std::string list = detail::trim(body.substr(6));
      std::vector<std::string> labels;
      if (!list.empty()) labels = detail::split(list, ',');
      for (const std::string& label : labels) {
        if (label.empty()) throw ParseError("empty node label", line_no);
        if (!index.try_emplace(label, static_cast<int>(index.size())).second) {
          throw ParseError("duplicate node label '" + label + "'", line_no);
        }
      }
      if (labels.size() > static_cast<std::size_t>(kMaxNodes)) throw ParseError("too many nodes", line_no);
      g = Dag(labels);
      continue;
    }
    const auto arrow = body.find("->");
    if (arrow == std::string::npos) throw ParseError("expected 'tail -> head'", line_no);
    const std::string tail = detail::trim(body.substr(0, arrow));
    const std::string head = detail::trim(body.substr(arrow + 2));
    const auto t = index.find(tail);
    const auto h = index.find(head);
    if (t == index.end()) throw ParseError("unknown node '" + tail + "'", line_no);
    if (h == index.end()) throw ParseError("unknown node '" + head + "'", line_no);
    try {
      g->add_arc({t->second, h->second});
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!g) throw ParseError("missing 'nodes:' line", line_no);
  return *g;
}

Dag load_dag(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open DAG file '" + path + "'");
  return read_dag(in);
}

void write_dag(std::ostream& out, const Dag& g) {
  out << "nodes: ";
  for (int v = 0; v < g.size(); ++v) out << (v ? "," : "") << g.label(v);
  out << '\n';
  for (const Arc& a : g.arcs()) out << g.label(a.tail) << " -> " << g.label(a.head) << '\n';
}

void save_dag(const Dag& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write DAG file '" + path + "'");
  write_dag(out, g);
}

}  // namespace bnsl
