#include "holab/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace holab {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::vector<int> parse_index_key(const std::string& key, const std::string& where) {
  std::vector<int> out;
  std::istringstream is(key);
  int v;
  while (is >> v) out.push_back(v);
  if (!is.eof()) fail(where, "malformed index key '" + key + "'");
  return out;
}

Polynomial parse_polynomial(const json& j, int nvars, const std::string& where) {
  if (!j.is_object()) fail(where, "polynomial must be an object of {\"exponents\": coefficient}");
  Polynomial p(nvars);
  for (const auto& [key, val] : j.items()) {
    std::vector<int> m = parse_index_key(key, where);
    if (static_cast<int>(m.size()) != nvars)
      fail(where, "exponent key '" + key + "' has " + std::to_string(m.size()) +
                      " entries, expected " + std::to_string(nvars));
    for (int e : m)
      if (e < 0) fail(where, "negative exponent in key '" + key + "'");
    p.add_term(m, as_number(val, where + "[\"" + key + "\"]"));
  }
  return p;
}

PolyMatrix parse_polymatrix(const json& j, int rows, int cols, int nvars,
                            const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    fail(where, "expected " + std::to_string(rows) + " rows");
  PolyMatrix m(rows, cols, nvars);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      fail(where + "[" + std::to_string(r) + "]",
           "expected " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c)
      m(r, c) = parse_polynomial(row[c], nvars,
                                 where + "[" + std::to_string(r) + "][" +
                                     std::to_string(c) + "]");
  }
  return m;
}

GradedPolyMap parse_polymap(const json& j, const GradedVectorSpace& V,
                            int degree, int nvars, const std::string& where) {
  if (!j.is_object()) fail(where, "graded map must be an object keyed by source degree");
  GradedPolyMap out(V, V, degree, nvars);
  for (const auto& [key, val] : j.items()) {
    std::vector<int> k = parse_index_key(key, where);
    if (k.size() != 1) fail(where, "source degree key '" + key + "' must be a single integer");
    const int src = k[0];
    const int rows = V.dim(src + degree), cols = V.dim(src);
    if (rows == 0 || cols == 0)
      fail(where, "block for source degree " + key + " maps between zero-dimensional pieces");
    out.set_block(src, parse_polymatrix(val, rows, cols, nvars,
                                        where + "[\"" + key + "\"]"));
  }
  return out;
}

EndValuedForm parse_form(const json& j, const GradedVectorSpace& V, int nvars,
                         int form_degree, int inner_degree,
                         const std::string& where) {
  if (!j.is_object()) fail(where, "form must be an object keyed by coordinate index tuples");
  EndValuedForm f(V, nvars, form_degree, inner_degree);
  for (const auto& [key, val] : j.items()) {
    std::vector<int> idx = parse_index_key(key, where);
    if (static_cast<int>(idx.size()) != form_degree)
      fail(where, "component key '" + key + "' must list " +
                      std::to_string(form_degree) + " coordinate indices");
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (idx[a] < 0 || idx[a] >= nvars)
        fail(where, "coordinate index out of range in key '" + key + "'");
      if (a + 1 < idx.size() && idx[a] >= idx[a + 1])
        fail(where, "component key '" + key + "' must be strictly increasing");
    }
    f.set_component(idx, parse_polymap(val, V, inner_degree, nvars,
                                       where + "[\"" + key + "\"]"));
  }
  return f;
}

Matrix parse_matrix_flat(const json& j, int rows, int cols,
                         const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
    fail(where, "expected a flat row-major array of " +
                    std::to_string(rows * cols) + " numbers");
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      m(r, c) = as_number(j[r * cols + c],
                          where + "[" + std::to_string(r * cols + c) + "]");
  return m;
}

CochainComplex parse_complex(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const json& jd = need(j, "dims", where);
  if (!jd.is_object() || jd.empty()) fail(where + ".dims", "expected a nonempty object");
  std::map<int, int> dims;
  for (const auto& [key, val] : jd.items()) {
    std::vector<int> k = parse_index_key(key, where + ".dims");
    if (k.size() != 1) fail(where + ".dims", "degree key '" + key + "' must be an integer");
    const int dim = as_int(val, where + ".dims[\"" + key + "\"]");
    if (dim <= 0) fail(where + ".dims", "dimension for degree " + key + " must be positive");
    dims[k[0]] = dim;
  }
  GradedVectorSpace V(dims);
  GradedLinearMap d = GradedLinearMap::zero(V, V, 1);
  if (j.contains("differential")) {
    const json& jdiff = j.at("differential");
    if (!jdiff.is_object()) fail(where + ".differential", "expected an object keyed by source degree");
    for (const auto& [key, val] : jdiff.items()) {
      std::vector<int> k = parse_index_key(key, where + ".differential");
      if (k.size() != 1) fail(where + ".differential", "source degree key '" + key + "' must be an integer");
      const int src = k[0];
      const int rows = V.dim(src + 1), cols = V.dim(src);
      if (rows == 0 || cols == 0)
        fail(where + ".differential", "block for source degree " + key +
                                          " maps between zero-dimensional pieces");
      d.set_block(src, parse_matrix_flat(val, rows, cols,
                                         where + ".differential[\"" + key + "\"]"));
    }
  }
  try {
    return CochainComplex(V, d);
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

Chart parse_chart_box(const json& j, const std::string& where) {
  const std::string id = as_string(need(j, "id", where), where + ".id");
  const json& jlo = need(j, "lo", where);
  const json& jhi = need(j, "hi", where);
  if (!jlo.is_array() || !jhi.is_array() || jlo.size() != jhi.size() || jlo.empty())
    fail(where, "lo/hi must be nonempty arrays of equal length");
  std::vector<double> lo, hi;
  for (std::size_t a = 0; a < jlo.size(); ++a) {
    lo.push_back(as_number(jlo[a], where + ".lo"));
    hi.push_back(as_number(jhi[a], where + ".hi"));
    if (!(lo.back() < hi.back()))
      fail(where, "chart box is empty along axis " + std::to_string(a));
  }
  return Chart(id, lo, hi);
}

Superconnection parse_chart_system(const json& j, const Chart& chart,
                                   const CochainComplex& complex,
                                   const std::string& where) {
  const GradedVectorSpace& V = complex.space();
  const int n = chart.dim();
  const bool has_gauge = j.contains("gauge");
  const bool has_forms = j.contains("omega1") || j.contains("omega2") || j.contains("omega3");
  if (has_gauge && has_forms)
    fail(where, "chart carries both a gauge and explicit forms; use one");
  if (has_gauge) {
    const json& jg = j.at("gauge");
    GradedPolyMap phi0 = parse_polymap(need(jg, "phi0", where + ".gauge"), V, 0,
                                       n, where + ".gauge.phi0");
    EndValuedForm phi1(V, n, 1, -1);
    if (jg.contains("phi1"))
      phi1 = parse_form(jg.at("phi1"), V, n, 1, -1, where + ".gauge.phi1");
    try {
      return gauge_flat(chart, complex, phi0, phi1);
    } catch (const std::exception& e) {
      fail(where + ".gauge", e.what());
    }
  }
  EndValuedForm w1(V, n, 1, 0), w2(V, n, 2, -1);
  std::optional<EndValuedForm> w3;
  if (j.contains("omega1")) w1 = parse_form(j.at("omega1"), V, n, 1, 0, where + ".omega1");
  if (j.contains("omega2")) w2 = parse_form(j.at("omega2"), V, n, 2, -1, where + ".omega2");
  if (j.contains("omega3")) w3 = parse_form(j.at("omega3"), V, n, 3, -2, where + ".omega3");
  return Superconnection{chart, complex, w1, w2, w3};
}

}  // namespace

int Scenario::chart_index(const std::string& id) const {
  for (int i = 0; i < cover.size(); ++i)
    if (cover.chart(i).id() == id) return i;
  return -1;
}

const NamedPath* Scenario::find_path(const std::string& id) const {
  for (const NamedPath& p : paths)
    if (p.id == id) return &p;
  return nullptr;
}

const NamedSimplex* Scenario::find_simplex(const std::string& id) const {
  for (const NamedSimplex& s : simplices)
    if (s.id == id) return &s;
  return nullptr;
}

DifferentialCocycle Scenario::differential() const {
  DifferentialCocycle D;
  D.cover = cover;
  D.cocycle = cocycle;
  D.complex = complex;
  for (int i = 0; i < cover.size(); ++i) {
    D.A.emplace(i, systems[static_cast<std::size_t>(i)].omega1);
    D.B.emplace(i, systems[static_cast<std::size_t>(i)].omega2);
  }
  D.phi = phi;
  return D;
}

Scenario parse_scenario_text(const std::string& text, const std::string& name_hint) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
  if (!root.is_object()) fail("scenario", "top level must be an object");

  Scenario sc;
  sc.schema_version = as_int(need(root, "schema_version", "scenario"), "scenario.schema_version");
  if (sc.schema_version != 1)
    fail("scenario.schema_version", "unsupported version " + std::to_string(sc.schema_version));
  sc.name = root.contains("name") ? as_string(root.at("name"), "scenario.name") : name_hint;

  sc.complex = parse_complex(need(root, "complex", "scenario"), "scenario.complex");
  const GradedVectorSpace& V = sc.complex.space();

  if (root.contains("tolerances")) {
    const json& jt = root.at("tolerances");
    if (!jt.is_object()) fail("scenario.tolerances", "expected an object");
    if (jt.contains("algebraic")) sc.tol.algebraic = as_number(jt.at("algebraic"), "scenario.tolerances.algebraic");
    if (jt.contains("comparison")) sc.tol.comparison = as_number(jt.at("comparison"), "scenario.tolerances.comparison");
    if (jt.contains("flatness")) sc.tol.flatness = as_number(jt.at("flatness"), "scenario.tolerances.flatness");
    for (double t : {sc.tol.algebraic, sc.tol.comparison, sc.tol.flatness})
      if (!(t > 0)) fail("scenario.tolerances", "tolerances must be positive");
  }
  if (root.contains("numerics")) {
    const json& jn = root.at("numerics");
    if (!jn.is_object()) fail("scenario.numerics", "expected an object");
    if (jn.contains("ode_steps")) sc.num.ode_steps = as_int(jn.at("ode_steps"), "scenario.numerics.ode_steps");
    if (jn.contains("surface_s_steps")) sc.num.surface_s_steps = as_int(jn.at("surface_s_steps"), "scenario.numerics.surface_s_steps");
    if (jn.contains("surface_t_points")) sc.num.surface_t_points = as_int(jn.at("surface_t_points"), "scenario.numerics.surface_t_points");
    if (jn.contains("series_order")) sc.num.series_order = as_int(jn.at("series_order"), "scenario.numerics.series_order");
    if (jn.contains("chen_panels")) sc.num.chen_panels = as_int(jn.at("chen_panels"), "scenario.numerics.chen_panels");
    if (jn.contains("seed")) {
      const json& js = jn.at("seed");
      if (!js.is_number_integer() || js.get<long long>() < 0)
        fail("scenario.numerics.seed", "expected a nonnegative integer");
      sc.num.seed = js.get<std::uint64_t>();
    }
    for (int v : {sc.num.ode_steps, sc.num.surface_s_steps, sc.num.surface_t_points,
                  sc.num.series_order, sc.num.chen_panels})
      if (v <= 0) fail("scenario.numerics", "numeric parameters must be positive");
  }

  const json& jcharts = need(root, "charts", "scenario");
  if (!jcharts.is_array() || jcharts.empty()) fail("scenario.charts", "no charts");
  std::vector<Chart> charts;
  for (std::size_t a = 0; a < jcharts.size(); ++a) {
    const std::string where = "scenario.charts[" + std::to_string(a) + "]";
    if (!jcharts[a].is_object()) fail(where, "expected an object");
    Chart c = parse_chart_box(jcharts[a], where);
    for (const Chart& prev : charts)
      if (prev.id() == c.id()) fail(where, "duplicate chart id '" + c.id() + "'");
    if (!charts.empty() && charts.front().dim() != c.dim())
      fail(where, "all charts must share the ambient dimension");
    charts.push_back(std::move(c));
  }
  try {
    sc.cover = Cover(charts);
  } catch (const std::exception& e) {
    fail("scenario.charts", e.what());
  }
  for (std::size_t a = 0; a < jcharts.size(); ++a)
    sc.systems.push_back(parse_chart_system(jcharts[a], sc.cover.chart(static_cast<int>(a)),
                                            sc.complex,
                                            "scenario.charts[" + std::to_string(a) + "]"));

  const int n = sc.cover.dim();
  sc.cocycle = GammaCocycle(V, n);
  auto resolve = [&](const json& j, const char* key, const std::string& where) {
    const std::string id = as_string(need(j, key, where), where + "." + key);
    const int idx = sc.chart_index(id);
    if (idx < 0) fail(where + "." + key, "unknown chart id '" + id + "'");
    return idx;
  };
  if (root.contains("transitions")) {
    const json& jt = root.at("transitions");
    if (!jt.is_array()) fail("scenario.transitions", "expected an array");
    for (std::size_t a = 0; a < jt.size(); ++a) {
      const std::string where = "scenario.transitions[" + std::to_string(a) + "]";
      const int i = resolve(jt[a], "i", where), j = resolve(jt[a], "j", where);
      if (i == j) fail(where, "transition requires two distinct charts");
      sc.cocycle.set_transition(i, j,
                                parse_polymap(need(jt[a], "map", where), V, 0, n,
                                              where + ".map"));
      sc.has_transitions = true;
    }
  }
  if (root.contains("triples")) {
    const json& jt = root.at("triples");
    if (!jt.is_array()) fail("scenario.triples", "expected an array");
    for (std::size_t a = 0; a < jt.size(); ++a) {
      const std::string where = "scenario.triples[" + std::to_string(a) + "]";
      const int i = resolve(jt[a], "i", where), j = resolve(jt[a], "j", where),
                k = resolve(jt[a], "k", where);
      if (!(i < j && j < k)) fail(where, "triple indices must be in cover order");
      sc.cocycle.set_a(i, j, k,
                       parse_polymap(need(jt[a], "a", where), V, -1, n, where + ".a"));
    }
  }
  if (root.contains("phi")) {
    const json& jt = root.at("phi");
    if (!jt.is_array()) fail("scenario.phi", "expected an array");
    for (std::size_t a = 0; a < jt.size(); ++a) {
      const std::string where = "scenario.phi[" + std::to_string(a) + "]";
      const int i = resolve(jt[a], "i", where), j = resolve(jt[a], "j", where);
      if (!(i < j)) fail(where, "phi entries must name the chart pair in cover order");
      sc.phi.emplace(std::make_pair(i, j),
                     parse_form(need(jt[a], "form", where), V, n, 1, -1,
                                where + ".form"));
    }
  }

  if (root.contains("paths")) {
    const json& jp = root.at("paths");
    if (!jp.is_array()) fail("scenario.paths", "expected an array");
    for (std::size_t a = 0; a < jp.size(); ++a) {
      const std::string where = "scenario.paths[" + std::to_string(a) + "]";
      NamedPath np;
      np.id = as_string(need(jp[a], "id", where), where + ".id");
      np.chart = resolve(jp[a], "chart", where);
      const json& jsegs = need(jp[a], "segments", where);
      if (!jsegs.is_array() || jsegs.empty()) fail(where + ".segments", "expected a nonempty array");
      std::vector<PathSegment> segs;
      for (std::size_t s = 0; s < jsegs.size(); ++s) {
        const json& jseg = jsegs[s];
        const std::string ws = where + ".segments[" + std::to_string(s) + "]";
        if (!jseg.is_array() || static_cast<int>(jseg.size()) != n)
          fail(ws, "expected " + std::to_string(n) + " coordinate polynomials");
        PathSegment seg;
        for (int c = 0; c < n; ++c)
          seg.coords.push_back(parse_polynomial(jseg[c], 1, ws + "[" + std::to_string(c) + "]"));
        segs.push_back(std::move(seg));
      }
      try {
        np.path = PLPath(segs);
      } catch (const std::exception& e) {
        fail(where, e.what());
      }
      sc.paths.push_back(std::move(np));
    }
  }
  if (root.contains("simplices")) {
    const json& js = root.at("simplices");
    if (!js.is_array()) fail("scenario.simplices", "expected an array");
    for (std::size_t a = 0; a < js.size(); ++a) {
      const std::string where = "scenario.simplices[" + std::to_string(a) + "]";
      NamedSimplex ns;
      ns.id = as_string(need(js[a], "id", where), where + ".id");
      ns.chart = resolve(js[a], "chart", where);
      const json& jc = need(js[a], "coords", where);
      if (!jc.is_array() || static_cast<int>(jc.size()) != n)
        fail(where + ".coords", "expected " + std::to_string(n) + " coordinate polynomials");
      std::vector<Polynomial> coords;
      for (int c = 0; c < n; ++c)
        coords.push_back(parse_polynomial(jc[c], 2, where + ".coords[" + std::to_string(c) + "]"));
      ns.simplex = Simplex2(coords);
      sc.simplices.push_back(std::move(ns));
    }
  }
  if (root.contains("homotopy_pairs")) {
    const json& jh = root.at("homotopy_pairs");
    if (!jh.is_array()) fail("scenario.homotopy_pairs", "expected an array");
    for (std::size_t a = 0; a < jh.size(); ++a) {
      const std::string where = "scenario.homotopy_pairs[" + std::to_string(a) + "]";
      const json& pr = jh[a];
      if (!pr.is_array() || pr.size() != 2) fail(where, "expected a pair of simplex ids");
      const std::string s0 = as_string(pr[0], where), s1 = as_string(pr[1], where);
      for (const std::string& id : {s0, s1})
        if (!sc.find_simplex(id)) fail(where, "unknown simplex id '" + id + "'");
      sc.homotopy_pairs.emplace_back(s0, s1);
    }
  }

  for (const NamedPath& p : sc.paths)
    for (const NamedSimplex& s : sc.simplices)
      if (p.id == s.id)
        fail("scenario", "path and simplex share the id '" + p.id + "'");
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  const std::size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const std::size_t dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_scenario_text(buf.str(), name);
}

namespace {

Polynomial random_poly(Rng& rng, int nvars, int degree, double scale) {
  Polynomial p(nvars);
  std::vector<int> m(nvars, 0);
  // iterate all exponent tuples with total degree <= degree
  while (true) {
    int total = 0;
    for (int e : m) total += e;
    if (total <= degree)
      p.add_term(m, scale * rng.signed_unit() / (1.0 + total));
    int axis = 0;
    while (axis < nvars) {
      if (++m[axis] > degree) {
        m[axis] = 0;
        ++axis;
      } else {
        break;
      }
    }
    if (axis == nvars) break;
  }
  return p;
}

GradedLinearMap random_invertible(Rng& rng, const GradedVectorSpace& V) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    GradedLinearMap C = GradedLinearMap::identity(V);
    for (int pass = 0; pass < 2; ++pass) {
      GradedLinearMap F = GradedLinearMap::identity(V);
      for (int deg : V.degrees()) {
        Matrix blk = Matrix::Identity(V.dim(deg), V.dim(deg));
        for (int r = 0; r < blk.rows(); ++r)
          for (int c = 0; c < blk.cols(); ++c) blk(r, c) += 0.3 * rng.signed_unit();
        F.set_block(deg, blk);
      }
      C = compose(C, F);
    }
    if (max_condition_number(C) < 50.0) return C;
  }
  return GradedLinearMap::identity(V);
}

}  // namespace

Scenario make_gauge_scenario(std::uint64_t seed, const std::map<int, int>& dims,
                             int chart_dim, int poly_degree) {
  if (chart_dim != 2 && chart_dim != 3)
    throw DomainError("make_gauge_scenario: chart_dim must be 2 or 3");
  Rng rng(seed);
  GradedVectorSpace V(dims);
  const std::vector<int> degs = V.degrees();

  // Canonical square-zero differential (last basis vector of each degree to
  // the first of the next, skipping a step whenever that would break d^2 = 0),
  // conjugated by a random invertible degree-0 map.
  GradedLinearMap d0 = GradedLinearMap::zero(V, V, 1);
  bool prev_nonzero = false;
  for (std::size_t a = 0; a + 1 < degs.size(); ++a) {
    if (degs[a] + 1 != degs[a + 1]) {
      prev_nonzero = false;
      continue;
    }
    const int rows = V.dim(degs[a + 1]), cols = V.dim(degs[a]);
    if (prev_nonzero && cols < 2) {
      prev_nonzero = false;
      continue;
    }
    Matrix blk = Matrix::Zero(rows, cols);
    blk(0, cols - 1) = 1.0;
    d0.set_block(degs[a], blk);
    prev_nonzero = true;
  }
  GradedLinearMap U = random_invertible(rng, V);
  GradedLinearMap Uinv = inverse(U);
  GradedLinearMap d = compose(U, compose(d0, Uinv));
  CochainComplex complex(V, d, 1e-9);

  const int n = chart_dim;
  Chart chart("u0", std::vector<double>(n, 0.0), std::vector<double>(n, 1.0));

  // Gauge frame, built in the canonical basis where chain maps are cheap and
  // conjugated by U afterwards. The constant part is a product of two maps of
  // the form id + d0 h + h d0, which commute with d0 for any h; the variable
  // part is d0 K(x) with the first column of K zeroed, so K d0 = 0 and
  // (d0 K)^2 vanishes identically.
  auto rand_tau = [&](double scale) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      GradedLinearMap h = GradedLinearMap::zero(V, V, -1);
      for (int deg : degs) {
        const int rows = V.dim(deg - 1), cols = V.dim(deg);
        if (rows == 0 || cols == 0) continue;
        Matrix blk(rows, cols);
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < cols; ++c) blk(r, c) = scale * rng.normal();
        h.set_block(deg, blk);
      }
      GradedLinearMap t =
          GradedLinearMap::identity(V) + compose(d0, h) + compose(h, d0);
      try {
        inverse(t);
        return t;
      } catch (const DomainError&) {
        scale *= 0.6;
      }
    }
    return GradedLinearMap::identity(V);
  };
  GradedLinearMap C0 =
      compose(rand_tau(0.4), rand_tau(0.4)) * (0.7 + 0.6 * rng.uniform01());
  GradedPolyMap phi0 = GradedPolyMap::constant(C0, n);
  {
    GradedPolyMap K(V, V, -1, n);
    bool any = false;
    for (int deg : degs) {
      const int rows = V.dim(deg - 1), cols = V.dim(deg);
      if (rows == 0 || cols == 0) continue;
      PolyMatrix blk(rows, cols, n);
      for (int r = 0; r < rows; ++r)
        for (int c = 1; c < cols; ++c) {
          Polynomial p = random_poly(rng, n, poly_degree, 0.45);
          p.add_term(std::vector<int>(n, 0), -p.coeff(std::vector<int>(n, 0)));
          blk(r, c) = p;  // no constant term: variable part only
        }
      K.set_block(deg, blk);
      any = true;
    }
    if (any) phi0 += compose(C0, compose(d0, K));
  }
  phi0 = compose(U, compose(phi0, Uinv));
  EndValuedForm phi1(V, n, 1, -1);
  for (int v = 0; v < n; ++v) {
    GradedPolyMap comp(V, V, -1, n);
    bool any = false;
    for (int deg : degs) {
      const int rows = V.dim(deg - 1), cols = V.dim(deg);
      if (rows == 0 || cols == 0) continue;
      PolyMatrix blk(rows, cols, n);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
          blk(r, c) = random_poly(rng, n, poly_degree, 0.4);
      comp.set_block(deg, blk);
      any = true;
    }
    if (any) phi1.set_component({v}, comp);
  }

  Scenario sc;
  sc.name = "gauge-" + std::to_string(seed);
  sc.complex = complex;
  sc.cover = Cover({chart});
  sc.systems.push_back(gauge_flat(chart, complex, phi0, phi1));
  sc.cocycle = GammaCocycle(V, n);
  sc.num.seed = seed;
  // Generated data is smooth and low-degree, so the default resolutions are
  // overkill; these keep multi-seed sweeps affordable with residuals still
  // orders of magnitude inside the comparison tolerance.
  sc.num.ode_steps = 1000;
  sc.num.surface_s_steps = 48;
  sc.num.surface_t_points = 16;
  sc.num.chen_panels = 2;

  auto affine01 = [&](double from, double to, double bump) {
    Polynomial p = Polynomial::constant(1, from);
    p += Polynomial::variable(1, 0) * (to - from);
    // bump * u(1-u)
    Polynomial u = Polynomial::variable(1, 0);
    p += (u - u * u) * bump;
    return p;
  };
  std::vector<double> a(n), mid(n), b(n);
  for (int c = 0; c < n; ++c) {
    a[c] = rng.uniform(0.15, 0.3);
    mid[c] = rng.uniform(0.4, 0.6);
    b[c] = rng.uniform(0.7, 0.85);
  }
  PathSegment s1, s2;
  for (int c = 0; c < n; ++c) {
    s1.coords.push_back(affine01(a[c], mid[c], 0.1 * rng.signed_unit()));
    s2.coords.push_back(affine01(mid[c], b[c], 0.1 * rng.signed_unit()));
  }
  sc.paths.push_back(NamedPath{"p0", 0, PLPath({s1, s2})});

  // Simplex: affine in (t1, t2) with small curvature, its boundary-fixing
  // reparametrization, and a degenerate companion factoring through t1.
  std::vector<Polynomial> coords;
  const Polynomial t1 = Polynomial::variable(2, 0), t2 = Polynomial::variable(2, 1);
  for (int c = 0; c < n; ++c) {
    const double v0 = rng.uniform(0.15, 0.25);
    Polynomial p = Polynomial::constant(2, v0);
    p += t1 * rng.uniform(0.2, 0.3);
    p += t2 * rng.uniform(0.1, 0.25);
    p += t1 * t2 * (0.05 * rng.signed_unit());
    p += t1 * t1 * (0.05 * rng.signed_unit());
    coords.push_back(p);
  }
  sc.simplices.push_back(NamedSimplex{"s0", 0, Simplex2(coords)});
  {
    // (t1, t2 + c t2 (t1 - t2)(1 - t1)) fixes all three edges
    Polynomial w = t2 * (t1 - t2) * (Polynomial::constant(2, 1.0) - t1);
    std::vector<Polynomial> images = {t1, t2 + w * (0.4 + 0.4 * rng.uniform01())};
    std::vector<Polynomial> re;
    for (const Polynomial& p : coords) re.push_back(p.compose(images));
    sc.simplices.push_back(NamedSimplex{"s1", 0, Simplex2(re)});
  }
  {
    std::vector<Polynomial> dg;
    for (int c = 0; c < n; ++c) {
      Polynomial p = Polynomial::constant(2, a[c]);
      p += t1 * (b[c] - a[c]);
      p += t1 * t1 * (0.1 * rng.signed_unit());
      dg.push_back(p);
    }
    sc.simplices.push_back(NamedSimplex{"sdeg", 0, Simplex2(dg)});
  }
  sc.homotopy_pairs.emplace_back("s0", "s1");
  return sc;
}

}  // namespace holab
