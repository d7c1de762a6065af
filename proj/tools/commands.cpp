#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "landau/suite.hpp"

namespace landau::cli {

namespace {

double jbound(double x, double a) {
  if (a == 0.0) return 1.0;
  if (a <= 1.0) return std::pow(x, a) + M_alpha(a);
  if (a < 2.0) return std::pow(x, a) + std::pow(kM2, a / 2);
  if (a == 2.0) return x * x + kM2;
  return std::pow(x, a) + std::pow(10.0, a / 4) * std::pow(x, a / 2) + std::pow(kM4, a / 4);
}

Json suite_json(const CriterionResult& c) {
  Json m = Json::object();
  for (const auto& [k, v] : c.metrics) m[k] = num(v);
  Json j = {{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"metrics", m}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

SuiteOptions suite_options(const Context& ctx) {
  SuiteOptions o;
  o.quick = ctx.quick;
  o.seed = ctx.cfg.seed;
  return o;
}

bool nonincreasing(const std::vector<double>& h) {
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] > h[i - 1] + 1e-8 * std::abs(h[i - 1]) + 1e-12) return false;
  return true;
}

}  // namespace

Report kernel_check(const Context& ctx) {
  Report r;
  r.type = "kernel_check";
  const CollisionKernel k = ctx.cfg.kernel();
  const double g = k.gamma;

  Csv jt(ctx.dir / "j_alpha.csv", {"v", "alpha", "J", "bound", "rel_excess"});
  double j_excess = -std::numeric_limits<double>::infinity(), j_ident = 0.0;
  for (double x : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0})
    for (double a : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
      const double J = J_alpha(Vec3(x, 0.0, 0.0), a), b = jbound(x, a);
      const double e = (J - b) / b;
      if (a == 0.0 || a == 2.0)
        j_ident = std::max(j_ident, std::abs(e));
      else
        j_excess = std::max(j_excess, e);
      jt << x << a << J << b << e;
      jt.end_row();
    }
  r.files.push_back("j_alpha.csv");

  Csv bt(ctx.dir / "bar_fields.csv", {"v", "ell1", "ell2", "abar_trace", "two_J_gamma_plus_2", "bbar_err",
                                      "cbar", "cbar_ref", "split_err"});
  const Vec3 dir = Vec3(1.0, 2.0, 2.0) / 3.0;
  const Vec3 xi = Vec3(0.3, -0.5, 0.8).normalized();
  double a_err = 0.0, b_err = 0.0, c_err = 0.0, s_err = 0.0, ell0 = std::numeric_limits<double>::infinity();
  for (double x : {0.0, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const Vec3 v = x * dir;
    const BarFields bf = bar_fields(v, k);
    const Ell l = ell(v, k);
    const double two_j = 2.0 * J_alpha(v, g + 2.0);
    const double cref = -2.0 * (g + 3.0) * J_alpha(v, g);
    const double berr = (bf.bbar + l.ell1 * v).norm();
    const double xp = xi.dot(dir);
    const double split = xi.dot(bf.abar * xi) - l.ell1 * xp * xp - l.ell2 * (xi - xp * dir).squaredNorm();
    a_err = std::max(a_err, std::abs(bf.abar.trace() - two_j) / std::pow(1.0 + x, g + 2.0));
    b_err = std::max(b_err, berr / std::pow(1.0 + x, g + 1.0));
    c_err = std::max(c_err, std::abs(bf.cbar - cref) / std::pow(1.0 + x, g));
    if (x > 0.0) s_err = std::max(s_err, std::abs(split) / std::pow(1.0 + x, g + 2.0));
    ell0 = std::min(ell0, std::min(l.ell1, l.ell2) / std::pow(japanese(v), g));
    bt << x << l.ell1 << l.ell2 << bf.abar.trace() << two_j << berr << bf.cbar << cref << split;
    bt.end_row();
  }
  r.files.push_back("bar_fields.csv");

  struct Case {
    std::string name;
    Weight w;
    PhiParams pp;
  };
  const Weight p1 = Weight::polynomial(5.0, 1.0, k), p2 = Weight::polynomial(6.0, 2.0, k);
  std::vector<Case> cases = {{"poly_p1", p1, default_phi_params(p1)},
                             {"poly_p2", p2, default_phi_params(p2)},
                             {"sexp_s1", Weight::stretched_exp(1.0, 1.0, 2.0), PhiParams::make(0.0, 2.0)},
                             {"sexp_s2", Weight::stretched_exp(0.2, 2.0, 2.0), PhiParams::make(0.0, 2.0)}};
  for (const auto& w : ctx.cfg.weights()) cases.push_back({"config_" + w.tag(), w, default_phi_params(w)});
  Csv pt(ctx.dir / "phi_asymptotics.csv", {"case", "weight", "coeff", "power", "r", "ratio"});
  Json asym = Json::array();
  bool asym_ok = true;
  for (const auto& c : cases) {
    const PhiAsymptote a = phi_asymptote(c.w, c.pp, k);
    const AsymptoteScan s = scan_phi_asymptote(c.w, c.pp, k);
    for (std::size_t i = 0; i < s.radii.size(); ++i) {
      pt << c.name << c.w.tag() << a.coeff << a.power << s.radii[i] << s.ratios[i];
      pt.end_row();
    }
    const bool ok = s.v_star && *s.v_star <= 100.0;
    asym_ok = asym_ok && ok;
    asym.push_back({{"case", c.name},
                    {"weight", c.w.tag()},
                    {"coeff", num(a.coeff)},
                    {"power", num(a.power)},
                    {"v_star", s.v_star ? num(*s.v_star) : Json(nullptr)},
                    {"ratio_at_max", num(s.ratios.back())},
                    {"pass", ok}});
  }
  r.files.push_back("phi_asymptotics.csv");

  const CriterionResult c1 = run_criterion(1, suite_options(ctx));
  const CriterionResult c2 = run_criterion(2, suite_options(ctx));
  const bool tables_ok = j_ident <= 1e-8 && j_excess <= 1e-8 && a_err <= 1e-6 && b_err <= 1e-6 && c_err <= 1e-6 &&
                         s_err <= 1e-6;
  r.metrics = {{"gamma", g},
               {"j_alpha_identity_max_rel_err", num(j_ident)},
               {"j_alpha_bound_max_rel_excess", num(j_excess)},
               {"abar_trace_max_scaled_err", num(a_err)},
               {"bbar_max_scaled_err", num(b_err)},
               {"cbar_max_scaled_err", num(c_err)},
               {"quadratic_split_max_scaled_err", num(s_err)},
               {"ell0_empirical", num(ell0)},
               {"phi_asymptotics", asym},
               {"random_probes", Json::array({suite_json(c1), suite_json(c2)})}};
  r.pass = tables_ok && asym_ok && c1.pass && c2.pass;
  return r;
}

Report spectrum(const Context& ctx) {
  Report r;
  r.type = "spectral_report";
  const VelocityGrid g = ctx.cfg.grid();
  if (g.size() > kDenseMaxSize) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "spectrum: dense eigensolve infeasible for n = %d (n^3 = %zu > %zu)", g.n, g.size(),
                  kDenseMaxSize);
    throw FeasibilityError(buf);
  }
  const LinearisedOperator op(g, ctx.cfg.kernel());
  const SpectralReport s = spectral_gap(op, ctx.cfg.top_k);
  Csv ev(ctx.dir / "eigenvalues.csv", {"index", "eigenvalue", "residual"});
  Json lead = Json::array();
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(ctx.cfg.leading), s.eigenvalues.size());
  for (std::size_t i = 0; i < m; ++i) {
    ev << static_cast<double>(i) << s.eigenvalues[i] << s.residuals[i];
    ev.end_row();
    lead.push_back(num(s.eigenvalues[i]));
  }
  r.files.push_back("eigenvalues.csv");
  double max_res = 0.0;
  for (double x : s.residuals) max_res = std::max(max_res, x);
  r.metrics = {{"n", g.n},
               {"vmax", g.vmax},
               {"gamma", ctx.cfg.gamma},
               {"null_count", s.null_count},
               {"lambda0", num(s.lambda0)},
               {"asymmetry", num(s.asymmetry)},
               {"full_spectrum", s.full_spectrum},
               {"min_eigenvalue", s.full_spectrum ? num(s.min_eigenvalue) : Json(nullptr)},
               {"nonpositive", s.nonpositive},
               {"max_residual", num(max_res)},
               {"leading_eigenvalues", lead}};
  r.pass = s.null_count == 5 && s.lambda0 > 0.0 && (!s.full_spectrum || s.nonpositive);
  return r;
}

Report evolve_run(const Context& ctx) {
  Report r;
  r.type = "evolution";
  const RunConfig& c = ctx.cfg;
  const VelocityGrid g = c.grid();
  const CollisionOperator col(g, c.kernel());
  const GridField f0 = c.initial_state(g);
  EvolveConfig e = c.evolve;
  e.norms = {NormSpec::plain(1.0)};
  for (const auto& w : c.weights()) e.norms.push_back(NormSpec::weighted(w, w.p));
  e.keep_snapshots = c.gamma > 0.0;
  const EvolutionTrace tr = evolve(col, f0, e);
  tr.write_csv((ctx.dir / "trace.csv").string());
  write_field_binary((ctx.dir / "final_state.bin").string(), tr.final_state);
  r.files = {"trace.csv", "final_state.bin"};

  const auto m0 = moments(f0), m1 = moments(tr.final_state);
  const double mass_drift = std::abs(m1[0] - m0[0]) / std::abs(m0[0]);
  const double mom_drift = (m1.segment<3>(1) - m0.segment<3>(1)).norm() / std::abs(m0[0]);
  const double energy_drift = std::abs(m1[4] - m0[4]) / std::abs(m0[4]);
  const bool mono = nonincreasing(tr.entropy);
  double dmin = std::numeric_limits<double>::infinity();
  for (double d : tr.dissipation) dmin = std::min(dmin, d);
  r.metrics = {{"n", g.n},
               {"vmax", g.vmax},
               {"gamma", c.gamma},
               {"dt", tr.dt},
               {"t_end", tr.times.back()},
               {"outputs", tr.times.size()},
               {"reference_velocity", {tr.reference_velocity[0], tr.reference_velocity[1], tr.reference_velocity[2]}},
               {"reference_temperature", tr.reference_temperature},
               {"mass_drift", num(mass_drift)},
               {"momentum_drift", num(mom_drift)},
               {"energy_drift", num(energy_drift)},
               {"H_initial", num(tr.entropy.front())},
               {"H_final", num(tr.entropy.back())},
               {"Hrel_final", num(tr.relative_entropy.back())},
               {"H_monotone", mono},
               {"min_dissipation", num(dmin)},
               {"L1_distance_final", num(tr.norms[0].back())},
               {"boundary_mass_final", num(boundary_mass(tr.final_state))},
               {"negativity_flagged", tr.negativity_flagged},
               {"min_ratio", num(tr.min_ratio)},
               {"max_solver_iterations", tr.max_solver_iterations}};
  if (c.gamma > 0.0 && tr.times.size() >= 4) {
    const double t0 = std::min(0.1, tr.times.back() / 2);
    const PhaseReport ph = polynomial_phase_check(tr, c.gamma, 2.0, t0);
    r.metrics["phase"] = {{"t0", t0},
                          {"empirical_C", num(ph.empirical_C)},
                          {"sup_moment_theta2", num(ph.sup_moment)},
                          {"moment_bounded", ph.moment_bounded},
                          {"entropy_bounded", ph.entropy_bounded},
                          {"verdict", to_string(ph.verdict)}};
  }
  const bool conserved = !e.conserve_project || (mass_drift <= 1e-10 && mom_drift <= 1e-10 && energy_drift <= 1e-10);
  r.pass = tr.final_state.finite() && mono && conserved;
  return r;
}

Report dissipativity(const Context& ctx) {
  Report r;
  r.type = "dissipativity";
  const RunConfig& c = ctx.cfg;
  const double a = c.split_target();
  LinearisedOperator op(c.grid(), c.kernel());
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Json per = Json::array();
  bool all = true;
  for (const auto& w : c.weights()) {
    const Abscissa ab = abscissa(w, c.kernel());
    if (ab.value && !(a > *ab.value)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "dissipativity: a = %g is not above the abscissa %g of %s", a, *ab.value,
                    w.tag().c_str());
      throw FeasibilityError(buf);
    }
    const CertifyResult cr = certify_split(op, w, default_phi_params(w), a);
    Json j = {{"weight", w.tag()}, {"a", a}, {"abscissa", ab.value ? num(*ab.value) : Json("-inf")}};
    if (!cr.suggested) {
      j["certified"] = false;
      per.push_back(j);
      all = false;
      continue;
    }
    op.set_split(*cr.suggested);
    SemigroupOptions o;
    o.t_end = c.semigroup.t_end;
    o.dt = c.semigroup.dt;
    o.output_every = c.semigroup.output_every;
    o.norms = {NormSpec::weighted(w, w.p)};
    Csv env(ctx.dir / ("envelope_" + w.tag() + ".csv"), {"sample", "t", "norm", "envelope"});
    double worst = 0.0;
    for (int s = 0; s < c.semigroup.samples; ++s) {
      GridField f(op.grid());
      for (Eigen::Index q = 0; q < f.data.size(); ++q)
        f.data[q] = u(rng) * std::exp(-op.grid().node(static_cast<std::size_t>(q)).squaredNorm() / 4.0);
      const auto tr = evolve_semigroup(op, Generator::B, f, o);
      const double n0 = tr.norms[0].front();
      for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double bound = std::exp(a * tr.times[i]) * n0;
        worst = std::max(worst, tr.norms[0][i] / bound);
        env << static_cast<double>(s) << tr.times[i] << tr.norms[0][i] << bound;
        env.end_row();
      }
    }
    r.files.push_back("envelope_" + w.tag() + ".csv");
    const bool ok = worst <= 1.02;
    all = all && ok;
    j["certified"] = true;
    j["M"] = cr.suggested->M;
    j["R"] = cr.suggested->R;
    j["certified_margin"] = num(cr.suggested_margin);
    j["samples"] = c.semigroup.samples;
    j["max_norm_over_envelope"] = num(worst);
    j["envelope_pass"] = ok;
    per.push_back(j);
  }
  r.metrics = {{"n", op.grid().n}, {"vmax", op.grid().vmax}, {"gamma", c.gamma}, {"weights", per}};
  r.pass = all;
  return r;
}

Report decay_fit(const Context& ctx) {
  Report r;
  r.type = "decay_fit";
  const RunConfig& c = ctx.cfg;
  const VelocityGrid g = c.decay_grid();
  const double l0 = c.decay.lambda0 ? *c.decay.lambda0 : reference_lambda0(g.h, c.gamma);
  const LinearisedOperator op(g, c.kernel());
  const GridField f0 = c.initial_state(g);
  EvolveConfig e = c.evolve;
  e.t_end = c.decay.t_end;
  e.dt = c.decay.dt;
  e.output_every = c.decay.output_every;
  e.norms = {NormSpec::plain(1.0)};

  EvolutionTrace tr;
  Json boot = nullptr;
  bool boot_ok = true;
  if (c.gamma > 0.0) {
    BootstrapParams bp = c.bootstrap;
    bp.lambda0 = l0;
    bp.fit = c.decay.fit;
    BootstrapReport br = bootstrap_demo(op, f0, e, bp);
    boot = {{"ell", bp.ell},
            {"k", bp.k},
            {"threshold", bp.threshold},
            {"reached", br.reached},
            {"vacuous", br.vacuous},
            {"t0", br.t0},
            {"h_t0", num(br.h_t0)},
            {"C_prime", num(br.C_prime)},
            {"fitted_rate", num(br.fit.fitted_rate)},
            {"r_squared", num(br.fit.r_squared)},
            {"verdict", to_string(br.verdict)}};
    boot_ok = br.verdict == Verdict::Pass;
    tr = std::move(br.trace);
  } else {
    tr = evolve(op.collision(), f0, e);
    boot = {{"skipped", "gamma = 0"}};
  }
  tr.write_csv((ctx.dir / "trace.csv").string());
  r.files.push_back("trace.csv");
  const DecayReport d = fit_decay(tr.times, tr.norms[0], l0, c.decay.fit);
  r.metrics = {{"n", g.n},
               {"vmax", g.vmax},
               {"gamma", c.gamma},
               {"lambda0", num(l0)},
               {"lambda0_source", c.decay.lambda0 ? "config" : "dense solve at the same spacing"},
               {"norm", NormSpec::plain(1.0).tag()},
               {"fitted_rate", num(d.fitted_rate)},
               {"rate_over_lambda0", num(d.fitted_rate / l0)},
               {"prefactor", num(d.prefactor)},
               {"t_lo", d.t_lo},
               {"t_hi", d.t_hi},
               {"points", d.points},
               {"r_squared", num(d.r_squared)},
               {"fit_verdict", to_string(d.verdict)},
               {"bootstrap", boot}};
  r.pass = d.verdict == Verdict::Pass && boot_ok;
  return r;
}

Report verify_all(const Context& ctx) {
  Report r;
  r.type = "acceptance";
  SuiteOptions o = suite_options(ctx);
  o.trace_dir = (ctx.dir / "traces").string();
  Json list = Json::array();
  int passed = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    const CriterionResult c = run_criterion(id, o);
    std::printf("[%s] criterion %2d: %s (%.1fs)%s%s\n", c.pass ? "pass" : "fail", id, c.title.c_str(), c.seconds,
                c.note.empty() ? "" : " ", c.note.c_str());
    std::fflush(stdout);
    passed += c.pass;
    list.push_back(suite_json(c));
  }
  r.metrics = {{"quick", ctx.quick}, {"passed", passed}, {"total", kCriterionCount}, {"criteria", list}};
  r.pass = passed == kCriterionCount;
  return r;
}

}  // namespace landau::cli
