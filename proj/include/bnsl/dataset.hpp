#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace bnsl {

struct Variable {
  std::string label;
  int arity = 2;
  // Optional state names; when present there are exactly `arity` of them.
  std::vector<std::string> states;
};

// Complete discrete data table, stored column by column.
class Dataset {
 public:
  Dataset() = default;
  // columns[v][row]; throws ValidationError on inconsistent input.
  Dataset(std::vector<Variable> variables, std::vector<std::vector<int>> columns);

  int variable_count() const { return static_cast<int>(variables_.size()); }
  int rows() const { return rows_; }
  const Variable& variable(int v) const { return variables_.at(v); }
  const std::vector<Variable>& variables() const { return variables_; }
  int arity(int v) const { return variables_[v].arity; }
  int value(int row, int v) const { return columns_[v][row]; }
  std::span<const int> column(int v) const { return columns_[v]; }
  std::vector<int> arities() const;

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<int>> columns_;
  int rows_ = 0;
};

struct CsvOptions {
  // Cells are non-negative integers instead of state labels.
  bool integer_states = false;
  // Declared arities by variable label (sidecar `label:arity` lines).
  std::map<std::string, int> arities;
};

// Header row of labels, then one record per line. Label cells map to indices
// in order of first appearance. Empty, `?` and `NA` cells are rejected.
Dataset read_dataset_csv(std::istream& in, const CsvOptions& options = {});
Dataset read_dataset_csv_file(const std::string& path, const CsvOptions& options = {});

// Writes state names when every variable carries them, integers otherwise.
void write_dataset_csv(std::ostream& out, const Dataset& data);

// `label:arity` per line; blank lines and `#` comments ignored.
std::map<std::string, int> read_arity_sidecar(std::istream& in);
std::map<std::string, int> read_arity_sidecar_file(const std::string& path);
void write_arity_sidecar(std::ostream& out, const Dataset& data);

}  // namespace bnsl
