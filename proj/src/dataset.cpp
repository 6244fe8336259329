#include "bnsl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "bnsl/errors.hpp"
#include "text_util.hpp"

namespace bnsl {

Dataset::Dataset(std::vector<Variable> variables, std::vector<std::vector<int>> columns)
    : variables_(std::move(variables)), columns_(std::move(columns)) {
  if (variables_.size() != columns_.size()) throw ValidationError("one column per variable is required");
  rows_ = columns_.empty() ? 0 : static_cast<int>(columns_.front().size());
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    const Variable& var = variables_[v];
    if (var.arity < 2) throw ValidationError("variable '" + var.label + "' must have arity >= 2");
    if (!var.states.empty() && static_cast<int>(var.states.size()) != var.arity) {
      throw ValidationError("variable '" + var.label + "' state names do not match its arity");
    }
    if (static_cast<int>(columns_[v].size()) != rows_) throw ValidationError("columns differ in length");
    for (int x : columns_[v]) {
      if (x < 0 || x >= var.arity) {
        throw ValidationError("value " + std::to_string(x) + " out of range for variable '" + var.label + "'");
      }
    }
  }
}

std::vector<int> Dataset::arities() const {
  std::vector<int> out;
  out.reserve(variables_.size());
  for (const Variable& v : variables_) out.push_back(v.arity);
  return out;
}

Dataset read_dataset_csv(std::istream& in, const CsvOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::trim(line).empty()) {
      header = detail::split(line, ',');
      break;
    }
  }
  if (header.empty()) throw ParseError("missing header row", line_no);
  const std::size_t width = header.size();
  for (const std::string& label : header) {
    if (label.empty()) throw ParseError("empty variable label in header", line_no);
  }

  std::vector<std::vector<int>> columns(width);
  std::vector<std::vector<std::string>> states(width);
  std::vector<std::unordered_map<std::string, int>> index(width);
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::vector<std::string> cells = detail::split(line, ',');
    if (cells.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " cells, found " + std::to_string(cells.size()), line_no);
    }
    for (std::size_t v = 0; v < width; ++v) {
      const std::string& cell = cells[v];
      if (cell.empty() || cell == "?" || cell == "NA") throw ParseError("missing values are not supported", line_no);
      if (options.integer_states) {
        int x = -1;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
        if (ec != std::errc() || ptr != cell.data() + cell.size() || x < 0) {
          throw ParseError("'" + cell + "' is not a non-negative integer state", line_no);
        }
        columns[v].push_back(x);
      } else {
        const auto [it, inserted] = index[v].try_emplace(cell, static_cast<int>(states[v].size()));
        if (inserted) states[v].push_back(cell);
        columns[v].push_back(it->second);
      }
    }
  }

  std::vector<Variable> variables(width);
  for (std::size_t v = 0; v < width; ++v) {
    Variable& var = variables[v];
    var.label = header[v];
    int observed = 0;
    for (int x : columns[v]) observed = std::max(observed, x + 1);
    var.arity = std::max(2, observed);
    if (auto it = options.arities.find(var.label); it != options.arities.end()) {
      if (it->second < observed) {
        throw ValidationError("declared arity " + std::to_string(it->second) + " of '" + var.label +
                              "' is below the observed " + std::to_string(observed));
      }
      var.arity = it->second;
    }
    if (!options.integer_states) {
      var.states = std::move(states[v]);
      for (int extra = static_cast<int>(var.states.size()); extra < var.arity; ++extra) {
        var.states.push_back("s" + std::to_string(extra));
      }
    }
  }
  return Dataset(std::move(variables), std::move(columns));
}

Dataset read_dataset_csv_file(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset '" + path + "'");
  return read_dataset_csv(in, options);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  const int n = data.variable_count();
  bool named = true;
  for (int v = 0; v < n; ++v) named = named && !data.variable(v).states.empty();
  for (int v = 0; v < n; ++v) out << (v ? "," : "") << data.variable(v).label;
  out << '\n';
  for (int r = 0; r < data.rows(); ++r) {
    for (int v = 0; v < n; ++v) {
      if (v) out << ',';
      if (named) {
        out << data.variable(v).states[data.value(r, v)];
      } else {
        out << data.value(r, v);
      }
    }
    out << '\n';
  }
}

std::map<std::string, int> read_arity_sidecar(std::istream& in) {
  std::map<std::string, int> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = detail::trim(detail::strip_comment(line));
    if (body.empty()) continue;
    const auto colon = body.rfind(':');
    if (colon == std::string::npos) throw ParseError("expected 'label:arity'", line_no);
    const std::string label = detail::trim(body.substr(0, colon));
    const std::string value = detail::trim(body.substr(colon + 1));
    int arity = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), arity);
    if (label.empty() || ec != std::errc() || ptr != value.data() + value.size() || arity < 2) {
      throw ParseError("expected 'label:arity' with arity >= 2", line_no);
    }
    out[label] = arity;
  }
  return out;
}

std::map<std::string, int> read_arity_sidecar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open arity file '" + path + "'");
  return read_arity_sidecar(in);
}

void write_arity_sidecar(std::ostream& out, const Dataset& data) {
  for (const Variable& v : data.variables()) out << v.label << ':' << v.arity << '\n';
}

}  // namespace bnsl
