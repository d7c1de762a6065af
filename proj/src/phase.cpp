#include "landau/phase.hpp"

#include <algorithm>
#include <cmath>

namespace landau {

namespace {

// max over the second half of the window does not exceed the max over the first half
bool not_growing(const std::vector<double>& t, const std::vector<double>& y, double lo, double hi,
                 double abs_tol) {
  const double mid = 0.5 * (lo + hi);
  double a = 0.0, b = 0.0;
  bool any_a = false, any_b = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < lo - 1e-12) continue;
    if (t[i] <= mid) {
      a = std::max(a, y[i]);
      any_a = true;
    } else {
      b = std::max(b, y[i]);
      any_b = true;
    }
  }
  return any_a && any_b && b <= a * (1.0 + 1e-3) + abs_tol;
}

}  // namespace

PhaseReport polynomial_phase_check(const EvolutionTrace& tr, double gamma, double theta, double t0) {
  if (!(gamma > 0.0)) throw DomainError("polynomial_phase_check: gamma must be > 0");
  if (tr.snapshots.size() != tr.times.size() || tr.times.empty())
    throw DomainError("polynomial_phase_check: trace needs snapshots at every output time");
  const NormSpec mom = NormSpec::japanese_pow(theta, 1.0);
  PhaseReport r;
  std::vector<double> prod(tr.times.size()), moment(tr.times.size());
  r.entropy_monotone = true;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double H = tr.relative_entropy[i];
    prod[i] = std::max(H, 0.0) * std::pow(1.0 + tr.times[i], 2.0 / gamma);
    r.empirical_C = std::max(r.empirical_C, prod[i]);
    moment[i] = norm(tr.snapshots[i], mom);
    if (tr.times[i] >= t0 - 1e-12) {
      if (r.moment_at_t0 == 0.0) r.moment_at_t0 = moment[i];
      r.sup_moment = std::max(r.sup_moment, moment[i]);
    }
    if (i > 0 && H > tr.relative_entropy[i - 1] + 1e-8 * std::abs(tr.relative_entropy[i - 1]) + 1e-14)
      r.entropy_monotone = false;
  }
  const double t1 = tr.times.back();
  r.moment_bounded = std::isfinite(r.sup_moment) && not_growing(tr.times, moment, t0, t1, 0.0);
  // H at equilibrium is rounding noise of order 1e-16
  r.entropy_bounded = std::isfinite(r.empirical_C) && not_growing(tr.times, prod, t0, t1, 1e-12);
  r.verdict = r.entropy_monotone && r.moment_bounded && r.entropy_bounded ? Verdict::Pass : Verdict::Fail;
  return r;
}

BootstrapReport bootstrap_demo(const LinearisedOperator& op, const GridField& f0, const EvolveConfig& cfg,
                               const BootstrapParams& bp, double floor_rel) {
  const double gam = op.kernel().gamma;
  if (!(gam > 0.0 && gam <= 1.0)) throw DomainError("bootstrap_demo: gamma must be in (0, 1]");
  if (!(bp.lambda0 > 0.0)) throw DomainError("bootstrap_demo: reference lambda0 must be > 0");
  EvolveConfig c = cfg;
  const std::size_t j = c.norms.size();
  c.norms.push_back(NormSpec::japanese_pow(bp.ell, 1.0));
  c.norms.push_back(NormSpec::japanese_pow(bp.k, 1.0));
  BootstrapReport r;
  r.trace = evolve(op.collision(), f0, c);
  const auto& t = r.trace.times;
  const auto& nl = r.trace.norms[j];
  const auto& nk = r.trace.norms[j + 1];

  if (nk.front() <= 1e-14) {
    r.vacuous = true;
    r.reached = true;
    r.verdict = Verdict::Pass;
    return r;
  }
  std::size_t i0 = t.size();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (nl[i] <= bp.threshold) {
      i0 = i;
      break;
    }
  if (i0 == t.size()) return r;  // threshold never reached: inconclusive
  r.reached = true;
  r.t0 = t[i0];
  r.h_t0 = nk[i0];

  std::vector<double> ts, ys;
  for (std::size_t i = i0; i < t.size(); ++i) {
    r.C_prime = std::max(r.C_prime, nk[i] / (std::exp(-bp.lambda0 * (t[i] - r.t0)) * r.h_t0));
    if (nk[i] < floor_rel * nk.front()) break;
    ts.push_back(t[i]);
    ys.push_back(nk[i]);
  }
  FitOptions fo = bp.fit;
  if (!fo.t_lo) fo.t_lo = ts.front();
  try {
    r.fit = fit_decay(ts, ys, bp.lambda0, fo);
  } catch (const FitError&) {
    return r;
  }
  r.verdict = std::isfinite(r.C_prime) ? r.fit.verdict : Verdict::Fail;
  return r;
}

}  // namespace landau
