#include "landau/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace landau {

namespace {
const double kLogBig = std::log(1e300);
}

NormSpec NormSpec::plain(double p) {
  if (!(p >= 1.0)) throw DomainError("norm: p must be >= 1");
  NormSpec s;
  s.p = p;
  return s;
}

NormSpec NormSpec::mu_inv_half(double p) {
  NormSpec s = plain(p);
  s.kind = Kind::MuInvHalf;
  return s;
}

NormSpec NormSpec::weighted(const Weight& w, double p) {
  NormSpec s = plain(p);
  s.kind = Kind::Weighted;
  s.weight = w;
  return s;
}

NormSpec NormSpec::japanese_pow(double k, double p) {
  Weight w;
  w.kind = Weight::Kind::Polynomial;
  w.k = k;
  w.p = p;
  return weighted(w, p);
}

NormSpec NormSpec::times_japanese(double k) const {
  NormSpec s = *this;
  s.extra_k += k;
  return s;
}

double NormSpec::log_weight(const Vec3& v) const {
  const double x = extra_k == 0.0 ? 0.0 : extra_k * std::log(japanese(v));
  switch (kind) {
    case Kind::Plain: return x;
    case Kind::MuInvHalf: return x - 0.5 * std::log(maxwellian(v));
    case Kind::Weighted: return x + landau::log_weight(weight, v);
  }
  return x;
}

std::string NormSpec::tag() const {
  char buf[128];
  const std::string ps = std::isinf(p) ? "inf" : [&] {
    char b[32];
    std::snprintf(b, sizeof b, "%g", p);
    return std::string(b);
  }();
  switch (kind) {
    case Kind::Plain: std::snprintf(buf, sizeof buf, "L%s", ps.c_str()); break;
    case Kind::MuInvHalf: std::snprintf(buf, sizeof buf, "L%s_mu_inv_half", ps.c_str()); break;
    case Kind::Weighted:
      if (weight.kind == Weight::Kind::Polynomial)
        std::snprintf(buf, sizeof buf, "L%s_vk%g", ps.c_str(), weight.k);
      else
        std::snprintf(buf, sizeof buf, "L%s_exp_r%g_s%g", ps.c_str(), weight.r, weight.s);
      break;
  }
  std::string out = buf;
  if (extra_k != 0.0) {
    std::snprintf(buf, sizeof buf, "_x%g", extra_k);
    out += buf;
  }
  return out;
}

double log_norm(const GridField& f, const NormSpec& spec) {
  const auto& g = f.grid;
  const double lh3 = std::log(g.cell_volume());
  const bool sup = std::isinf(spec.p);
  // log-sum-exp over p (log m + log|f|)
  double lmax = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(g.size());
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double a = std::abs(f.data[q]);
    if (a == 0.0) continue;
    const double t = (sup ? 1.0 : spec.p) * (spec.log_weight(g.node(q)) + std::log(a));
    terms.push_back(t);
    lmax = std::max(lmax, t);
  }
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  if (sup) return lmax;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - lmax);
  return (lmax + std::log(s) + lh3) / spec.p;
}

double norm(const GridField& f, const NormSpec& spec) {
  const auto& g = f.grid;
  const bool sup = std::isinf(spec.p);
  double acc = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double lw = spec.log_weight(g.node(q));
    if (lw > kLogBig) return std::exp(log_norm(f, spec));
    const double x = std::abs(std::exp(lw) * f.data[q]);
    if (sup)
      acc = std::max(acc, x);
    else if (spec.p == 1.0)
      acc += x;
    else if (spec.p == 2.0)
      acc += x * x;
    else
      acc += std::pow(x, spec.p);
  }
  if (sup) return acc;
  acc *= g.cell_volume();
  if (spec.p == 1.0) return acc;
  if (spec.p == 2.0) return std::sqrt(acc);
  return std::pow(acc, 1.0 / spec.p);
}

double sobolev_norm(const GridField& f, const NormSpec& spec, int order) {
  if (order < 0 || order > 2) throw DomainError("sobolev_norm: order must be 0, 1 or 2");
  double s = norm(f, spec);
  if (order >= 1)
    for (int i = 0; i < 3; ++i) s += norm(first_derivative(f, i), spec);
  if (order >= 2) s += hessian_norm(f, spec);
  return s;
}

double hessian_norm(const GridField& f, const NormSpec& spec) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) s += norm(second_derivative(f, i, j), spec);
  return s;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw FitError("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("fit_line: degenerate abscissae");
  const double b = sxy / sxx;
  const double a = my - b * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - a - b * x[i];
    ssr += r * r;
  }
  const double r2 = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  return {a, b, r2};
}

DecayReport fit_decay(const std::vector<double>& t, const std::vector<double>& y,
                      double reference_rate, const FitOptions& opt) {
  if (t.size() != y.size() || t.empty()) throw FitError("fit_decay: empty or ragged trace");
  const double t0 = t.front(), t1 = t.back();
  const double lo = opt.t_lo.value_or(t1 - opt.window_fraction * (t1 - t0));
  const double hi = opt.t_hi.value_or(t1);
  std::vector<double> xs, ls;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < lo - 1e-12 || t[i] > hi + 1e-12) continue;
    if (!(y[i] > 0.0)) throw FitError("fit_decay: nonpositive norm in window");
    xs.push_back(t[i]);
    ls.push_back(std::log(y[i]));
  }
  if (xs.size() < opt.min_points) throw FitError("fit_decay: too few points in window");
  const LineFit lf = fit_line(xs, ls);
  DecayReport r;
  r.fitted_rate = -lf.slope;
  r.prefactor = std::exp(lf.intercept);
  r.t_lo = xs.front();
  r.t_hi = xs.back();
  r.r_squared = lf.r_squared;
  r.reference_rate = reference_rate;
  r.points = xs.size();
  if (r.r_squared < opt.r2_min)
    r.verdict = Verdict::Inconclusive;
  else if (std::abs(r.fitted_rate - reference_rate) <= opt.rel_tol * std::abs(reference_rate))
    r.verdict = Verdict::Pass;
  else
    r.verdict = Verdict::Fail;
  return r;
}

}  // namespace landau
