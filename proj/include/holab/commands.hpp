#pragma once

#include <string>

#include "holab/report.hpp"
#include "holab/scenario.hpp"

namespace holab {

struct CommandOptions {
  std::string object;  // path or simplex id; empty selects the first one
  std::string method;  // empty selects the default for the object kind
  bool timings = false;
};

// Flatness of every chart, then cocycle and differential-compatibility
// residuals when transitions are present, then per-chart curvature residuals.
Report cmd_validate(const Scenario& sc, const CommandOptions& opt = {});

// Transport along one named path (methods: ode, series) or over one named
// 2-simplex (methods: soe, closedform, chen). Emits the value blockwise; all
// numeric entries are informational.
Report cmd_holonomy(const Scenario& sc, const CommandOptions& opt = {});

// Cross-method agreement on one 2-simplex: the three surface evaluations
// pairwise modulo exact terms, the boundary compatibility identity, and the
// simplicial structure equation. Requires every chart to be flat; throws
// PreconditionError otherwise.
Report cmd_compare(const Scenario& sc, const CommandOptions& opt = {});

// Randomized identity suite seeded by the scenario: crossed-module laws on
// the scenario's complex, groupoid composition associativity, and homotopy
// invariance for each registered simplex pair.
Report cmd_check(const Scenario& sc, const CommandOptions& opt = {});

}  // namespace holab
