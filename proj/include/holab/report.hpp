#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "holab/graded.hpp"

namespace holab {

// One named check. Informational entries carry a value without a verdict and
// never affect the overall outcome.
struct CheckEntry {
  std::string name;
  std::string method;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool informational = false;
  std::string note;
};

// A graded map emitted blockwise, row-major.
struct MatrixEntry {
  std::string name;
  int source_degree = 0;
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
};

struct Report {
  std::string command;
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<CheckEntry> checks;
  std::vector<MatrixEntry> matrices;
  std::vector<std::pair<std::string, double>> timings;  // only with --timings

  bool pass() const;
  void add_check(std::string name, double residual, double tolerance,
                 std::string method = "", std::string note = "");
  void add_info(std::string name, double value, std::string method = "",
                std::string note = "");
  void add_matrices(const std::string& name, const GradedLinearMap& m);
};

// Deterministic serialization: fixed key order, no timestamps, trailing
// newline. Identical reports produce identical bytes.
std::string report_to_text(const Report& r);
void write_report_file(const Report& r, const std::string& path);

}  // namespace holab
