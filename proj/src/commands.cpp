#include "holab/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "holab/bundle.hpp"
#include "holab/crossed.hpp"
#include "holab/holonomy.hpp"

namespace holab {

namespace {

constexpr int kFlatnessSamples = 40;
constexpr int kOverlapSamples = 8;
constexpr int kDifferentialSamples = 6;
constexpr int kCurvatureSamples = 24;
constexpr int kCheckInstances = 24;
constexpr int kGroupoidInstances = 8;

class Stopwatch {
 public:
  Stopwatch(Report& r, bool enabled) : r_(r), enabled_(enabled) {}

  template <typename F>
  auto phase(const std::string& name, F&& f) {
    if (!enabled_) return f();
    auto t0 = std::chrono::steady_clock::now();
    auto result = f();
    auto t1 = std::chrono::steady_clock::now();
    r_.timings.emplace_back(name,
                            std::chrono::duration<double>(t1 - t0).count());
    return result;
  }

 private:
  Report& r_;
  bool enabled_;
};

Report make_report(const char* command, const Scenario& sc) {
  Report r;
  r.command = command;
  r.scenario = sc.name;
  r.seed = sc.num.seed;
  return r;
}

void echo_tolerances(Report& r, const Scenario& sc) {
  r.parameters.emplace_back("tol_algebraic", sc.tol.algebraic);
  r.parameters.emplace_back("tol_comparison", sc.tol.comparison);
  r.parameters.emplace_back("tol_flatness", sc.tol.flatness);
}

std::string chart_tag(const char* prefix, const Chart& chart,
                      const char* suffix) {
  return std::string(prefix) + "[" + chart.id() + "]." + suffix;
}

// Random homogeneous map with normal(0, scale) entries in every stored block.
GradedLinearMap random_map(Rng& rng, const GradedVectorSpace& space, int degree,
                           double scale) {
  GradedLinearMap m(space, space, degree);
  for (int k : space.degrees()) {
    int rows = space.dim(k + degree);
    int cols = space.dim(k);
    if (rows == 0 || cols == 0) continue;
    Matrix blk(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) blk(r, c) = scale * rng.normal();
    m.set_block(k, blk);
  }
  return m;
}

// Degree -1 element with invertible tau, shrinking until the inverse exists.
GradedLinearMap random_h(Rng& rng, const CrossedModule& cm, double scale) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    GradedLinearMap h = random_map(rng, cm.space(), -1, scale);
    try {
      inverse(cm.tau(h));
      return h;
    } catch (const DomainError&) {
      scale *= 0.6;
    }
  }
  return GradedLinearMap::zero(cm.space(), cm.space(), -1);
}

// Invertible chain map built from the image of tau, which always commutes
// with the differential.
GradedLinearMap random_g(Rng& rng, const CrossedModule& cm) {
  GradedLinearMap g = compose(cm.tau(random_h(rng, cm, 0.4)),
                              cm.tau(random_h(rng, cm, 0.4)));
  return g * (0.5 + rng.uniform01());
}

}  // namespace

Report cmd_validate(const Scenario& sc, const CommandOptions& opt) {
  Report r = make_report("validate", sc);
  Stopwatch watch(r, opt.timings);
  echo_tolerances(r, sc);
  r.parameters.emplace_back("flatness_samples", kFlatnessSamples);
  if (sc.has_transitions) {
    r.parameters.emplace_back("overlap_samples", kOverlapSamples);
    r.parameters.emplace_back("differential_samples", kDifferentialSamples);
  }
  r.parameters.emplace_back("curvature_samples", kCurvatureSamples);

  watch.phase("flatness", [&] {
    for (std::size_t i = 0; i < sc.systems.size(); ++i) {
      const Superconnection& S = sc.systems[i];
      FlatnessResiduals fr =
          flatness_residuals(S, chart_samples(S.chart, kFlatnessSamples));
      r.add_check(chart_tag("flatness", S.chart, "degree1"), fr.degree1,
                  sc.tol.flatness, "sampled");
      r.add_check(chart_tag("flatness", S.chart, "degree2"), fr.degree2,
                  sc.tol.flatness, "sampled");
      r.add_check(chart_tag("flatness", S.chart, "degree3"), fr.degree3,
                  sc.tol.flatness, "sampled");
    }
    return 0;
  });

  DifferentialCocycle D = sc.differential();
  if (sc.has_transitions) {
    watch.phase("cocycle", [&] {
      CocycleReport cr =
          validate_cocycle(sc.cover, sc.cocycle, sc.complex, kOverlapSamples);
      r.add_check("cocycle.group", cr.g_residual, sc.tol.algebraic, "sampled");
      r.add_check("cocycle.degree_minus1", cr.a_residual, sc.tol.algebraic,
                  "sampled", "measured modulo exact terms");
      return 0;
    });
    watch.phase("differential", [&] {
      DifferentialReport dr = validate_differential(D, kDifferentialSamples);
      r.add_check("differential.form1", dr.dc1, sc.tol.flatness, "sampled");
      r.add_check("differential.form2", dr.dc2, sc.tol.flatness, "sampled",
                  "measured modulo exact terms");
      r.add_check("differential.form3", dr.dc3, sc.tol.flatness, "sampled",
                  "measured modulo exact terms");
      return 0;
    });
  }

  watch.phase("curvature", [&] {
    for (int i = 0; i < sc.cover.size(); ++i) {
      CurvatureReport cr = curvatures(D, i, kCurvatureSamples);
      r.add_check(chart_tag("curvature", sc.cover.chart(i), "fake"), cr.fake,
                  sc.tol.flatness, "sampled");
      r.add_check(chart_tag("curvature", sc.cover.chart(i), "threeform"),
                  cr.threeform, sc.tol.flatness, "sampled",
                  "measured modulo exact terms");
    }
    return 0;
  });

  return r;
}

Report cmd_holonomy(const Scenario& sc, const CommandOptions& opt) {
  Report r = make_report("holonomy", sc);
  Stopwatch watch(r, opt.timings);

  const NamedPath* np = nullptr;
  const NamedSimplex* ns = nullptr;
  if (opt.object.empty()) {
    if (!sc.paths.empty())
      np = &sc.paths.front();
    else if (!sc.simplices.empty())
      ns = &sc.simplices.front();
    else
      throw DomainError("scenario has no paths or simplices");
  } else {
    np = sc.find_path(opt.object);
    if (!np) ns = sc.find_simplex(opt.object);
    if (!np && !ns)
      throw DomainError("unknown object '" + opt.object + "'");
  }

  if (np) {
    std::string method = opt.method.empty() ? "ode" : opt.method;
    if (method != "ode" && method != "series")
      throw DomainError("unknown path method '" + method +
                        "' (expected ode or series)");
    const Superconnection& S = sc.systems[static_cast<std::size_t>(np->chart)];
    TransportResult res =
        method == "ode"
            ? watch.phase("transport", [&] {
                return transport_ode(S, np->path, sc.num.ode_steps);
              })
            : watch.phase("transport", [&] {
                return transport_series(S, np->path, sc.num.series_order);
              });
    r.parameters.emplace_back(
        method == "ode" ? "ode_steps" : "series_order",
        static_cast<double>(res.steps));
    std::string tag = "transport[" + np->id + "]";
    std::string note;
    if (res.tail_warning) {
      std::ostringstream os;
      os << "series truncation may be insufficient; tail bound "
         << res.est_error;
      note = os.str();
    }
    r.add_info(tag + ".estimated_error", res.est_error, res.method, note);
    r.add_info(tag + ".value_norm", norm(res.value), res.method);
    r.add_matrices("transport_value", res.value);
    return r;
  }

  std::string method = opt.method.empty() ? "soe" : opt.method;
  const Superconnection& S = sc.systems[static_cast<std::size_t>(ns->chart)];
  SurfaceResult res = watch.phase("surface", [&]() -> SurfaceResult {
    if (method == "soe")
      return surface_ode(S, ns->simplex, sc.num.surface_s_steps,
                         sc.num.surface_t_points);
    if (method == "closedform")
      return surface_closed_form(S, ns->simplex, sc.num.chen_panels,
                                 sc.num.surface_t_points);
    if (method == "chen")
      return surface_chen(S, ns->simplex, sc.num.chen_panels,
                          sc.num.surface_t_points);
    throw DomainError("unknown surface method '" + method +
                      "' (expected soe, closedform or chen)");
  });
  if (method == "soe") {
    r.parameters.emplace_back("surface_s_steps", sc.num.surface_s_steps);
  } else {
    r.parameters.emplace_back("surface_panels", sc.num.chen_panels);
  }
  r.parameters.emplace_back("surface_t_points", sc.num.surface_t_points);
  std::string tag = "surface[" + ns->id + "]";
  r.add_info(tag + ".value_norm", norm(res.value), res.method);
  r.add_matrices("surface_value", res.value);
  r.add_matrices("edge_transport_gamma0", res.g_gamma0);
  r.add_matrices("edge_transport_gamma1", res.g_gamma1);
  return r;
}

Report cmd_compare(const Scenario& sc, const CommandOptions& opt) {
  Report r = make_report("compare", sc);
  Stopwatch watch(r, opt.timings);
  echo_tolerances(r, sc);
  r.parameters.emplace_back("surface_s_steps", sc.num.surface_s_steps);
  r.parameters.emplace_back("surface_t_points", sc.num.surface_t_points);
  r.parameters.emplace_back("surface_panels", sc.num.chen_panels);

  watch.phase("flatness", [&] {
    for (const Superconnection& S : sc.systems) {
      FlatnessResiduals fr =
          flatness_residuals(S, chart_samples(S.chart, kFlatnessSamples));
      if (fr.max() > sc.tol.flatness) {
        std::ostringstream os;
        os << "flatness precondition failed: chart '" << S.chart.id()
           << "' residual " << fr.max();
        throw PreconditionError(os.str());
      }
    }
    return 0;
  });

  const NamedSimplex* ns = nullptr;
  if (opt.object.empty()) {
    if (sc.simplices.empty()) throw DomainError("scenario has no simplices");
    ns = &sc.simplices.front();
  } else {
    ns = sc.find_simplex(opt.object);
    if (!ns) {
      if (sc.find_path(opt.object))
        throw DomainError("object '" + opt.object +
                          "' is a path; comparison needs a 2-simplex");
      throw DomainError("unknown object '" + opt.object + "'");
    }
  }
  const Superconnection& S = sc.systems[static_cast<std::size_t>(ns->chart)];
  CrossedModule cm(sc.complex);

  SurfaceResult soe = watch.phase("surface_soe", [&] {
    return surface_ode(S, ns->simplex, sc.num.surface_s_steps,
                       sc.num.surface_t_points);
  });
  SurfaceResult cf = watch.phase("surface_closedform", [&] {
    return surface_closed_form(S, ns->simplex, sc.num.chen_panels,
                               sc.num.surface_t_points);
  });
  SurfaceResult ch = watch.phase("surface_chen", [&] {
    return surface_chen(S, ns->simplex, sc.num.chen_panels,
                        sc.num.surface_t_points);
  });
  // The two-sided integral omits the final edge transport; restore it before
  // comparing against the other methods.
  GradedLinearMap chen_glued = compose(ch.value, ch.g_gamma1);

  std::string tag = "compare[" + ns->id + "]";
  r.add_check(tag + ".soe_vs_closedform",
              cm.distance_mod_exact(soe.value, cf.value), sc.tol.comparison,
              "mod_exact");
  r.add_check(tag + ".soe_vs_chen", cm.distance_mod_exact(soe.value, chen_glued),
              sc.tol.comparison, "mod_exact");
  r.add_check(tag + ".closedform_vs_chen",
              cm.distance_mod_exact(cf.value, chen_glued), sc.tol.comparison,
              "mod_exact");

  TauRelationResult tr = watch.phase("tau_relation", [&] {
    return tau_relation(S, ns->simplex, sc.num.surface_s_steps);
  });
  r.add_check(tag + ".boundary_compatibility", tr.residual, sc.tol.comparison,
              "soe");
  r.add_info(tag + ".boundary_compatibility_swapped", tr.residual_swapped,
             "soe", "opposite operator order, for diagnostics");

  double se = watch.phase("structure_equation", [&] {
    return structure_equation_check(S, ns->simplex);
  });
  r.add_check(tag + ".structure_equation", se, sc.tol.comparison, "chen");

  r.add_matrices("surface_value_soe", soe.value);
  r.add_matrices("surface_value_closedform", cf.value);
  r.add_matrices("surface_value_chen", ch.value);
  r.add_matrices("edge_transport_gamma0", soe.g_gamma0);
  r.add_matrices("edge_transport_gamma1", soe.g_gamma1);
  return r;
}

Report cmd_check(const Scenario& sc, const CommandOptions& opt) {
  Report r = make_report("check", sc);
  Stopwatch watch(r, opt.timings);
  echo_tolerances(r, sc);
  r.parameters.emplace_back("instances", kCheckInstances);

  CrossedModule cm(sc.complex);
  Rng rng(sc.num.seed);

  watch.phase("crossed_module", [&] {
    double tau_hom = 0.0, tau_inv = 0.0, grp_inv = 0.0, assoc = 0.0;
    double equiv = 0.0, peiffer = 0.0, prod_wd = 0.0, act_wd = 0.0;
    for (int n = 0; n < kCheckInstances; ++n) {
      GradedLinearMap h1 = random_h(rng, cm, 0.5);
      GradedLinearMap h2 = random_h(rng, cm, 0.5);
      GradedLinearMap h3 = random_h(rng, cm, 0.5);
      GradedLinearMap g = random_g(rng, cm);
      GradedLinearMap k = random_map(rng, cm.space(), -2, 0.5);
      GradedLinearMap e = compose(cm.d(), k) - compose(k, cm.d());

      tau_hom = std::max(tau_hom, norm(cm.tau(cm.h_mul(h1, h2)) -
                                       compose(cm.tau(h1), cm.tau(h2))));
      tau_inv = std::max(
          tau_inv, norm(cm.tau(cm.h_inv(h1)) - inverse(cm.tau(h1))));
      grp_inv = std::max(grp_inv, norm(cm.h_mul(h1, cm.h_inv(h1))));
      assoc = std::max(assoc, norm(cm.h_mul(cm.h_mul(h1, h2), h3) -
                                   cm.h_mul(h1, cm.h_mul(h2, h3))));
      equiv = std::max(
          equiv, norm(cm.tau(cm.alpha(g, h1)) -
                      compose(g, compose(cm.tau(h1), inverse(g)))));
      peiffer = std::max(
          peiffer,
          cm.distance_mod_exact(
              cm.alpha(cm.tau(h1), h2),
              cm.h_mul(cm.h_mul(h1, h2), cm.h_inv(h1))));
      prod_wd = std::max(prod_wd, cm.distance_mod_exact(cm.h_mul(h1 + e, h2),
                                                        cm.h_mul(h1, h2)));
      act_wd = std::max(
          act_wd, cm.distance_mod_exact(cm.alpha(g, h1 + e), cm.alpha(g, h1)));
    }
    r.add_check("crossed.tau_homomorphism", tau_hom, sc.tol.algebraic,
                "randomized");
    r.add_check("crossed.tau_inverse", tau_inv, sc.tol.algebraic, "randomized");
    r.add_check("crossed.group_inverse", grp_inv, sc.tol.algebraic,
                "randomized");
    r.add_check("crossed.associativity", assoc, sc.tol.algebraic, "randomized");
    r.add_check("crossed.action_equivariance", equiv, sc.tol.algebraic,
                "randomized");
    r.add_check("crossed.peiffer", peiffer, sc.tol.algebraic, "randomized",
                "measured modulo exact terms");
    r.add_check("crossed.product_well_defined", prod_wd, sc.tol.algebraic,
                "randomized", "measured modulo exact terms");
    r.add_check("crossed.action_well_defined", act_wd, sc.tol.algebraic,
                "randomized", "measured modulo exact terms");
    return 0;
  });

  watch.phase("groupoid", [&] {
    LocalGroupoid G(sc.cover, sc.cocycle, sc.complex);
    Vector x = chart_samples(sc.cover.chart(0), 1).front();
    double assoc = 0.0;
    for (int n = 0; n < kGroupoidInstances; ++n) {
      LocalGroupoidElement m1{0, 0, x, random_h(rng, cm, 0.4), random_g(rng, cm)};
      LocalGroupoidElement m2{0, 0, x, random_h(rng, cm, 0.4),
                              compose(cm.tau(m1.h), m1.g)};
      LocalGroupoidElement m3{0, 0, x, random_h(rng, cm, 0.4),
                              compose(cm.tau(m2.h), m2.g)};
      LocalGroupoidElement lhs = G.compose(m3, G.compose(m2, m1));
      LocalGroupoidElement rhs = G.compose(G.compose(m3, m2), m1);
      assoc = std::max(assoc,
                       std::max(norm(lhs.h - rhs.h), norm(lhs.g - rhs.g)));
    }
    r.add_check("groupoid.associativity", assoc, sc.tol.algebraic,
                "randomized");
    return 0;
  });

  watch.phase("homotopy", [&] {
    for (const auto& [id1, id2] : sc.homotopy_pairs) {
      const NamedSimplex* s1 = sc.find_simplex(id1);
      const NamedSimplex* s2 = sc.find_simplex(id2);
      std::string tag = "homotopy[" + id1 + "~" + id2 + "]";
      if (s1->chart != s2->chart) {
        r.add_info(tag, 0.0, "",
                   "skipped: simplices live on different charts");
        continue;
      }
      const Superconnection& S =
          sc.systems[static_cast<std::size_t>(s1->chart)];
      FlatnessResiduals fr =
          flatness_residuals(S, chart_samples(S.chart, kFlatnessSamples));
      if (fr.max() > sc.tol.flatness) {
        std::ostringstream os;
        os << "skipped: local system not flat (residual " << fr.max() << ")";
        r.add_info(tag, fr.max(), "", os.str());
        continue;
      }
      ExactnessResult er =
          homotopy_invariance_check(S, s1->simplex, s2->simplex);
      r.add_check(tag, er.residual, sc.tol.comparison, "mod_exact");
    }
    return 0;
  });

  return r;
}

}  // namespace holab
