#pragma once
//
// Subcommand workflows. Each sub-check catches its own module errors so one
// failure does not abort the rest of the report.
//
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "kornlab/cli/config.hpp"
#include "kornlab/cli/report.hpp"
#include "kornlab/finite_difference.hpp"
#include "kornlab/growth.hpp"
#include "kornlab/identities.hpp"
#include "kornlab/kernels.hpp"
#include "kornlab/korn.hpp"
#include "kornlab/symbol.hpp"

namespace kornlab::cli {

namespace detail {

inline Json vec_json(const Vec3d& v) { return Json::array({v(0), v(1), v(2)}); }
inline Json vec_json(const Vec3i& v) { return Json::array({v(0), v(1), v(2)}); }

inline bool timings_enabled() {
  const char* env = std::getenv("KORNLAB_TIMINGS");
  return env && std::string(env) == "1";
}

/// Runs `body` and records module errors under `where`; timings only when
/// KORNLAB_TIMINGS=1 so default reports stay byte-stable.
inline void phase(Report& r, const std::string& where, const std::function<void()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const Error& e) {
    r.add_error(e.code(), where, e.what());
  } catch (const std::exception& e) {
    r.add_error(ErrorCode::InvariantViolation, where, e.what());
  }
  if (timings_enabled()) {
    r.timings_ms[where] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
}

inline Json config_json(const RunConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["kmax"] = c.kmax;
  j["grid_n"] = c.grid_n;
  j["p"] = c.p;
  j["box"] = Json::array();
  for (double v : c.box) j["box"].push_back(v);
  j["format"] = c.format;
  j["threads_env"] = "KORNLAB_THREADS";
  return j;
}

inline void run_identities(const RunConfig& cfg, Report& r) {
  r.csv_header = {"name", "kind", "samples", "max_residual", "tolerance", "passed"};
  phase(r, "identities", [&] {
    SuiteConfig sc;
    sc.seed = cfg.seed;
    sc.samples = cfg.samples;
    sc.grid_n = cfg.grid_n;
    sc.kmax = cfg.kmax_explicit ? cfg.kmax : -1;
    sc.box = cfg.box_domain();
    const auto results = run_identity_suite(sc);

    Json tol = Json::object();
    for (IdentityKind k : {IdentityKind::Pointwise, IdentityKind::Spectral, IdentityKind::Box})
      tol[to_string(k)] = default_tolerance(k);
    r.results["tolerances"] = tol;
    r.results["band"] = sc.band();

    Json list = Json::array();
    int passed = 0;
    for (const auto& res : results) {
      Json e;
      e["name"] = res.name;
      e["reference"] = res.reference;
      e["kind"] = to_string(res.kind);
      e["samples"] = res.samples;
      e["max_residual"] = res.max_residual;
      e["tolerance"] = res.tolerance;
      e["passed"] = res.passed;
      if (!res.error.empty()) e["error"] = res.error;
      list.push_back(e);
      r.csv_rows.push_back({res.name, to_string(res.kind), res.samples, res.max_residual, res.tolerance, res.passed});
      if (res.passed) {
        ++passed;
      } else {
        r.violation(res.name, res.error.empty() ? "residual above tolerance: " + res.reference
                                                : res.reference + " (" + res.error + ")");
      }
    }
    r.results["identities"] = list;
    r.results["passed"] = passed;
    r.results["failed"] = static_cast<int>(results.size()) - passed;
  });
}

inline void run_symbol(const RunConfig& cfg, Report& r) {
  r.csv_header = {"quantity", "value"};
  const double bound = 1.0 + std::sqrt(3.0);

  phase(r, "kernel_dimension", [&] {
    Sampler s(cfg.seed, 0);
    int dmin = 9, dmax = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.samples; ++i) {
      Vec3d xi = s.vec();
      while (xi.norm() < 1e-3) xi = s.vec();
      const KernelBasis kb = kernel_basis(curl_symbol(xi, CurlPart::DevSym));
      dmin = std::min(dmin, kb.dimension);
      dmax = std::max(dmax, kb.dimension);
      gap = std::min(gap, kb.gap_ratio);
    }
    r.results["kernel_dimension"] = Json{{"min", dmin}, {"max", dmax}, {"min_gap_ratio", gap}};
    r.csv_rows.push_back({"kernel_dimension_min", dmin});
    r.csv_rows.push_back({"kernel_dimension_max", dmax});
    r.csv_rows.push_back({"min_gap_ratio", gap});
    if (dmin != 4 || dmax != 4) r.violation("kernel_dimension", "dim ker dev sym(P x xi) = 4 for xi != 0");
    if (!(gap > 1e6)) r.violation("kernel_dimension", "singular value gap ratio above 1e6");
  });

  phase(r, "multiplier", [&] {
    Sampler s(cfg.seed, 1);
    double identity = 0.0, homogeneity = 0.0;
    for (int i = 0; i < cfg.samples; ++i) {
      const Vec3d xi = s.unit();
      const Mat9c M = build_multiplier(xi).matrix();
      const Mat9c A = curl_symbol(xi, CurlPart::DevSym).matrix();
      const Mat9c At = curl_symbol(xi, CurlPart::Sym).matrix();
      identity = std::max(identity, (M * A - At).norm());
      homogeneity = std::max(homogeneity, (build_multiplier(Vec3d(2.0 * xi)).matrix() - M).norm());
    }
    r.results["multiplier"] = Json{{"identity_residual", identity}, {"homogeneity_residual", homogeneity}};
    r.csv_rows.push_back({"multiplier_identity_residual", identity});
    r.csv_rows.push_back({"multiplier_homogeneity_residual", homogeneity});
    if (!(identity < 1e-10)) r.violation("multiplier", "M(xi) A(xi) = A~(xi)");
    if (!(homogeneity < 1e-10)) r.violation("multiplier", "M(2 xi) = M(xi)");
  });

  phase(r, "equivalence_constant", [&] {
    const EquivalenceConstant ec = equivalence_constant(cfg.samples);
    r.results["equivalence_constant"] =
        Json{{"value", ec.value}, {"spread", ec.spread}, {"samples", ec.samples}, {"bound", bound}};
    r.csv_rows.push_back({"equivalence_constant", ec.value});
    r.csv_rows.push_back({"equivalence_spread", ec.spread});
    if (!(ec.value <= bound)) r.violation("equivalence_constant", "|sym Curl P| <= (1 + sqrt 3) |dev sym Curl P|");
    if (!(ec.spread < 1e-9)) r.violation("equivalence_constant", "ratio independent of the direction of xi");
  });

  phase(r, "complex_witness", [&] {
    const KernelWitness w = complex_kernel_witness();
    const Mat3c X = cross(w.p_hat, w.xi, Side::Right);
    const double dev_norm = devsym(X).norm();
    const double sym_defect = (sym(X) - cplx(0.0, 1.0) * Mat3c::Identity()).norm();
    const double isotropy = std::abs(pair(w.xi, w.xi));
    r.results["complex_witness"] =
        Json{{"devsym_norm", dev_norm}, {"sym_minus_i_id_norm", sym_defect}, {"isotropy", isotropy}};
    r.csv_rows.push_back({"witness_devsym_norm", dev_norm});
    r.csv_rows.push_back({"witness_sym_defect", sym_defect});
    if (!(dev_norm < 1e-15) || !(sym_defect < 1e-15)) r.violation("complex_witness", "sym(P x xi) = i id, dev sym = 0");
  });

  phase(r, "skew_product_bounds", [&] {
    Sampler s(cfg.seed, 2);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    const int n = 100 * cfg.samples;
    for (int i = 0; i < n; ++i) {
      const Vec3d a = s.vec();
      const Vec3d b = s.vec();
      const double q = devsym(cross(anti(a), b, Side::Right)).squaredNorm() / (a.squaredNorm() * b.squaredNorm());
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    r.results["skew_product_bounds"] =
        Json{{"samples", n}, {"min", lo}, {"max", hi}, {"lower_bound", 0.5}, {"upper_bound", 2.0 / 3.0}};
    r.csv_rows.push_back({"skew_product_min", lo});
    r.csv_rows.push_back({"skew_product_max", hi});
    if (lo < 0.5 - 1e-12 || hi > 2.0 / 3.0 + 1e-12)
      r.violation("skew_product_bounds", "1/2 |a|^2 |b|^2 <= |dev sym(anti(a) x b)|^2 <= 2/3 |a|^2 |b|^2");
  });
}

inline void run_korn(const RunConfig& cfg, Report& r) {
  r.csv_header = {"k1", "k2", "k3", "lambda_min"};
  phase(r, "korn_constant", [&] {
    const KornReport k = korn_constant(cfg.kmax);
    r.results["kmax"] = k.kmax;
    r.results["c_estimate"] = k.c_estimate;
    r.results["lambda_min"] = k.lambda_global;
    r.results["argmin"] = vec_json(k.argmin);
    r.results["shell_min"] = k.shell_min;
    r.results["non_monotone_tail"] = k.non_monotone_tail;
    r.results["convention"] = k.convention;
    Json table = Json::array();
    bool in_range = true;
    for (const auto& fv : k.per_frequency) {
      table.push_back(Json::array({fv.k(0), fv.k(1), fv.k(2), fv.lambda}));
      r.csv_rows.push_back({fv.k(0), fv.k(1), fv.k(2), fv.lambda});
      in_range = in_range && fv.lambda > 0.0 && fv.lambda <= 1.0 + 1e-12;
    }
    r.results["per_frequency"] = table;
    if (!in_range) r.violation("korn_constant", "lambda_min(k) in (0, 1]");
  });
  phase(r, "crosscheck", [&] {
    const CrosscheckResult c = grid_crosscheck(cfg.grid_n, cfg.seed);
    r.results["crosscheck"] = Json{{"grid_n", cfg.grid_n},
                                   {"lambda_grid", c.lambda_grid},
                                   {"lambda_spectral", c.lambda_spectral},
                                   {"residual", c.residual},
                                   {"dominant_k", vec_json(c.dominant_k)},
                                   {"iterations", c.iterations}};
    if (!(c.residual < 1e-6)) r.violation("crosscheck", "grid minimum matches the per-frequency minimum");
  });
}

inline void run_counterexample(const RunConfig& cfg, Report& r) {
  r.csv_header = {"family", "k", "ratio", "numerator", "denominator", "points", "drift"};
  auto row = [&](const char* family, int k, const RatioResult& g) {
    r.csv_rows.push_back({family, k, g.ratio, g.numerator, g.denominator, g.points, g.drift});
    return Json{{"k", k}, {"ratio", g.ratio}, {"numerator", g.numerator}, {"denominator", g.denominator},
                {"points", g.points}, {"drift", g.drift}};
  };

  phase(r, "growth", [&] {
    const int kmax = cfg.kmax_explicit ? cfg.kmax : 50;
    const BoxDomain box = cfg.box_domain();
    std::vector<RatioResult> g(static_cast<std::size_t>(kmax));
    for (int k = 1; k <= kmax; ++k) g[k - 1] = growth_ratio(k, cfg.p, box);
    Json table = Json::array();
    for (int k = 1; k <= kmax; ++k) table.push_back(row("growth", k, g[k - 1]));
    // first k from which the table increases strictly to the end
    int from = kmax;
    while (from > 1 && g[from - 1].ratio > g[from - 2].ratio) --from;
    r.results["growth"] = Json{{"p", cfg.p}, {"k_range", Json::array({1, kmax})}, {"table", table},
                               {"strictly_increasing_from", from}};
    if (kmax >= 5 && from > 5) r.violation("growth", "ratio strictly increasing in k from k = 5");
  });

  phase(r, "halfspace", [&] {
    Json table = Json::array();
    std::vector<double> ratios;
    for (int k : {2, 4, 8, 16, 32}) {
      const RatioResult h = halfspace_ratio(k, cfg.p);
      table.push_back(row("halfspace", k, h));
      ratios.push_back(h.ratio);
    }
    double min_factor = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < ratios.size(); ++i) min_factor = std::min(min_factor, ratios[i] / ratios[i - 1]);
    r.results["halfspace"] = Json{{"p", cfg.p}, {"table", table}, {"min_doubling_factor", min_factor}};
    if (!(min_factor > 1.5)) r.violation("halfspace", "ratio grows by more than 1.5 from k to 2k");
  });
}

inline void run_kernel(const RunConfig& cfg, Report& r) {
  r.csv_header = {"check", "value"};

  phase(r, "projection", [&] {
    Sampler s(cfg.seed, 0);
    double param_err = 0.0, residual = 0.0;
    const int trials = std::max(1, cfg.samples / 100);
    for (int t = 0; t < trials; ++t) {
      KernelElement e;
      e.a_tilde = s.vec();
      e.beta = s.scalar();
      e.b = s.vec();
      e.d = s.vec();
      std::vector<std::pair<Vec3d, Mat3d>> samples;
      for (int i = 0; i < 20; ++i) {
        const Vec3d x = s.vec();
        samples.emplace_back(x, eval_kernel(e, x));
      }
      const KernelFit fit = project_kernel(samples, KernelSpace::SdSC);
      param_err = std::max(param_err, (fit.element.parameters() - e.parameters()).norm());
      residual = std::max(residual, fit.residual);
    }
    r.results["projection"] = Json{{"trials", trials}, {"parameter_error", param_err}, {"residual", residual}};
    r.csv_rows.push_back({"projection_parameter_error", param_err});
    r.csv_rows.push_back({"projection_residual", residual});
    if (!(param_err < 1e-10) || !(residual < 1e-10)) r.violation("projection", "exact kernel samples are recovered");
  });

  phase(r, "conformal_killing", [&] {
    Sampler s(cfg.seed, 1);
    double axial = 0.0, devsym_jac = 0.0, devsym_curl = 0.0;
    for (int i = 0; i < cfg.samples; ++i) {
      KernelElement e;
      e.a_tilde = s.vec();
      e.beta = s.scalar();
      e.b = s.vec();
      e.d = s.vec();
      const Vec3d x = s.vec();
      const ConformalKilling phi = axial_field(e);
      axial = std::max(axial, (axl(eval_kernel(e, x)) - phi(x)).norm());
      devsym_jac = std::max(devsym_jac, devsym(fd::jacobian(phi, x)).norm());
      devsym_curl = std::max(devsym_curl, devsym(curl_kernel_closed_form(e, x)).norm());
    }
    r.results["conformal_killing"] =
        Json{{"samples", cfg.samples}, {"axial_mismatch", axial}, {"devsym_jacobian_fd", devsym_jac},
             {"devsym_curl", devsym_curl}};
    r.csv_rows.push_back({"axial_mismatch", axial});
    r.csv_rows.push_back({"devsym_jacobian_fd", devsym_jac});
    r.csv_rows.push_back({"devsym_curl", devsym_curl});
    if (!(axial < 1e-12)) r.violation("conformal_killing", "axl of a kernel element is a conformal Killing field");
    if (!(devsym_jac < 1e-7)) r.violation("conformal_killing", "dev sym D phi = 0");
    if (!(devsym_curl < 1e-14)) r.violation("conformal_killing", "dev sym Curl T = 0");
  });

  phase(r, "boundary_rank", [&] {
    Sampler s(cfg.seed, 2);
    int min_rank = 10, max_rank = 0;
    for (int c = 0; c < 20; ++c) {
      std::vector<Vec3d> pts;
      for (int i = 0; i < 12; ++i) pts.push_back(s.unit());
      const int rk = boundary_rank(PointCloud(pts));
      min_rank = std::min(min_rank, rk);
      max_rank = std::max(max_rank, rk);
    }
    std::vector<Vec3d> circle, line;
    const double radius = 1.0;
    for (int i = 0; i < 12; ++i) {
      const double t = 2.0 * std::numbers::pi * i / 12.0;
      circle.emplace_back(radius * std::sin(t), radius - radius * std::cos(t), 0.0);
    }
    for (int i = 0; i < 5; ++i) line.push_back(double(i - 2) * Vec3d(1.0, 2.0, 3.0));
    const int circle_rank = boundary_rank(PointCloud(circle));
    const int line_rank = boundary_rank(PointCloud(line));
    r.results["boundary_rank"] = Json{{"sphere_clouds", 20},      {"sphere_min", min_rank},
                                      {"sphere_max", max_rank},   {"circle", circle_rank},
                                      {"line", line_rank}};
    r.csv_rows.push_back({"sphere_min_rank", min_rank});
    r.csv_rows.push_back({"circle_rank", circle_rank});
    r.csv_rows.push_back({"line_rank", line_rank});
    if (min_rank != 10) r.violation("boundary_rank", "vanishing on a generic sphere cloud forces the kernel to zero");
    if (circle_rank >= 10 || line_rank >= 10)
      r.violation("boundary_rank", "circles and lines do not determine the kernel");
  });
}

}  // namespace detail

inline Report dispatch(const RunConfig& cfg) {
  Report r;
  r.command = cfg.command;
  r.config = detail::config_json(cfg);
  if (cfg.command == "identities") {
    detail::run_identities(cfg, r);
  } else if (cfg.command == "symbol") {
    detail::run_symbol(cfg, r);
  } else if (cfg.command == "korn") {
    detail::run_korn(cfg, r);
  } else if (cfg.command == "counterexample") {
    detail::run_counterexample(cfg, r);
  } else if (cfg.command == "kernel") {
    detail::run_kernel(cfg, r);
  } else {
    throw Error(ErrorCode::UsageError, "unknown command '" + cfg.command + "'");
  }
  return r;
}

}  // namespace kornlab::cli
