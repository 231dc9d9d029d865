#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "holab/bundle.hpp"
#include "holab/holonomy.hpp"

namespace holab {

// Tolerance knobs carried by every scenario. Defaults apply when the file
// omits an entry.
struct ScenarioTolerances {
  double algebraic = 1e-10;   // exact identities (group laws, cocycle algebra)
  double comparison = 1e-5;   // cross-method transport comparisons
  double flatness = 1e-8;     // flatness and differential-cocycle residuals
};

struct ScenarioNumerics {
  int ode_steps = 2000;       // path transport steps
  int surface_s_steps = 96;   // surface ODE resolution in s
  int surface_t_points = 24;  // fiber quadrature points
  int series_order = 12;      // iterated-integral truncation
  int chen_panels = 3;        // quadrature panels per fiber for the 2-chain
  std::uint64_t seed = 1;     // seeds the randomized invariant suites
};

struct NamedPath {
  std::string id;
  int chart = 0;
  PLPath path;
};

struct NamedSimplex {
  std::string id;
  int chart = 0;
  Simplex2 simplex;
};

// In-memory form of a scenario file: a complex, a cover carrying one local
// system per chart, optional transition data, and named probe objects.
struct Scenario {
  std::string name;
  int schema_version = 1;
  CochainComplex complex;
  Cover cover;
  std::vector<Superconnection> systems;  // parallel to cover.charts()
  GammaCocycle cocycle;
  bool has_transitions = false;
  std::map<std::pair<int, int>, EndValuedForm> phi;
  std::vector<NamedPath> paths;
  std::vector<NamedSimplex> simplices;
  std::vector<std::pair<std::string, std::string>> homotopy_pairs;
  ScenarioTolerances tol;
  ScenarioNumerics num;

  int chart_index(const std::string& id) const;  // -1 when absent
  const NamedPath* find_path(const std::string& id) const;
  const NamedSimplex* find_simplex(const std::string& id) const;

  // Differential-cocycle view of the per-chart data: A = omega1, B = omega2,
  // together with the stored transition forms.
  DifferentialCocycle differential() const;
};

// Parse a scenario from a file or from raw JSON text. All structural and
// reference problems surface as ParseError with a field path in the message.
Scenario load_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text,
                             const std::string& name_hint = "");

// Deterministic generator for flat single-chart scenarios: a random complex
// of the given dimensions, a random polynomial gauge (invertible constant
// part, nilpotent variable part) with a random degree -1 gauge 1-form, plus
// one two-segment path, one curved 2-simplex, a boundary-fixing
// reparametrization of it (registered as a homotopy pair), and a degenerate
// simplex. chart_dim is 2 or 3; coefficient degree is capped by poly_degree.
Scenario make_gauge_scenario(std::uint64_t seed, const std::map<int, int>& dims,
                             int chart_dim, int poly_degree = 2);

}  // namespace holab
