#include "landau/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace landau {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

// Angular moments of e^{y t} on [-1, 1], multiplied by e^{-y}.
// s0 = int e^{yt}, s1 = int t e^{yt}, s2 = int t^2 e^{yt}
struct AngularMoments {
  double s0, s1, s2;
};

AngularMoments angular(double y) {
  AngularMoments m{};
  if (y < 1.0) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    double term = 1.0;  // y^k / k!
    for (int k = 0; k < 40; ++k) {
      if (k % 2 == 0) {
        s0 += term * 2.0 / (k + 1);
        s2 += term * 2.0 / (k + 3);
      } else {
        s1 += term * 2.0 / (k + 2);
      }
      term *= y / (k + 1);
      if (term < 1e-18) break;
    }
    const double e = std::exp(-y);
    m.s0 = s0 * e;
    m.s1 = s1 * e;
    m.s2 = s2 * e;
    return m;
  }
  const double q = std::exp(-2.0 * y);
  const double iy = 1.0 / y, iy2 = iy * iy, iy3 = iy2 * iy;
  m.s0 = (1.0 - q) * iy;
  m.s1 = (iy - iy2) + q * (iy + iy2);
  m.s2 = (iy - 2.0 * iy2 + 2.0 * iy3) - q * (iy + 2.0 * iy2 + 2.0 * iy3);
  return m;
}

// (2pi)^{-1/2} int_0^{x+12} r^{power} e^{-(r-x)^2/2} G(moments at y = x r) dr
template <class G>
double radial(double x, double power, G g) {
  auto f = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double e = std::exp(-0.5 * (r - x) * (r - x));
    if (e == 0.0) return 0.0;
    return std::pow(r, power) * e * g(angular(x * r));
  };
  using boost::math::quadrature::gauss_kronrod;
  const double hi = x + 12.0;
  double val = 0.0;
  // put the Gaussian peak on a panel boundary
  if (x > 1.0) {
    val = gauss_kronrod<double, 31>::integrate(f, 0.0, x, 15, 1e-13) +
          gauss_kronrod<double, 31>::integrate(f, x, hi, 15, 1e-13);
  } else {
    val = gauss_kronrod<double, 31>::integrate(f, 0.0, hi, 15, 1e-13);
  }
  return kInvSqrt2Pi * val;
}

}  // namespace

CollisionKernel::CollisionKernel(double g) : gamma(g) {
  if (!(g >= 0.0 && g <= 1.0)) throw DomainError("gamma must lie in [0,1]");
}

double pow_abs(double r, double gamma) {
  if (gamma == 0.0) return 1.0;
  return std::pow(r, gamma);
}

Mat3 eval_a(const Vec3& z, const CollisionKernel& k) {
  const double r2 = z.squaredNorm();
  if (r2 == 0.0) return Mat3::Zero();
  // |z|^{g+2} (I - zz/|z|^2) = |z|^g (|z|^2 I - z z^T)
  return pow_abs(std::sqrt(r2), k.gamma) * (r2 * Mat3::Identity() - z * z.transpose());
}

Vec3 eval_b(const Vec3& z, const CollisionKernel& k) {
  const double r = z.norm();
  if (r == 0.0) return Vec3::Zero();
  return -2.0 * pow_abs(r, k.gamma) * z;
}

double eval_c(const Vec3& z, const CollisionKernel& k) {
  return -2.0 * (k.gamma + 3.0) * pow_abs(z.norm(), k.gamma);
}

double maxwellian(const Vec3& v) {
  return std::pow(2.0 * kPi, -1.5) * std::exp(-0.5 * v.squaredNorm());
}

double M_alpha(double alpha) {
  // (2/pi)^{1/2} 2^{(alpha+1)/2} Gamma((alpha+3)/2)
  return std::sqrt(2.0 / kPi) * std::pow(2.0, 0.5 * (alpha + 1.0)) *
         std::tgamma(0.5 * (alpha + 3.0));
}

double J_alpha(const Vec3& v, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 3.0)) throw DomainError("J_alpha: alpha outside [0,3]");
  return radial(v.norm(), alpha + 2.0, [](const AngularMoments& m) { return m.s0; });
}

Ell ell(const Vec3& v, const CollisionKernel& k) {
  const double x = v.norm();
  const double pw = k.gamma + 4.0;
  Ell e{};
  e.ell1 = radial(x, pw, [](const AngularMoments& m) { return m.s0 - m.s2; });
  e.ell2 = radial(x, pw, [](const AngularMoments& m) { return 0.5 * (m.s0 + m.s2); });
  return e;
}

BarFields bar_fields(const Vec3& v, const CollisionKernel& k) {
  BarFields bf{};
  const double x = v.norm();
  const Ell e = ell(v, k);
  if (x == 0.0) {
    bf.abar = e.ell1 * Mat3::Identity();
    bf.bbar = Vec3::Zero();
  } else {
    const Vec3 u = v / x;
    const Mat3 P = u * u.transpose();
    bf.abar = e.ell1 * P + e.ell2 * (Mat3::Identity() - P);
    const double bn = radial(x, k.gamma + 3.0, [](const AngularMoments& m) { return m.s1; });
    bf.bbar = -2.0 * bn * u;
  }
  bf.cbar = -2.0 * (k.gamma + 3.0) * J_alpha(v, k.gamma);
  return bf;
}

double japanese(const Vec3& v) { return std::sqrt(1.0 + v.squaredNorm()); }

Weight Weight::polynomial(double k, double p, const CollisionKernel& ker) {
  if (!(p >= 1.0)) throw DomainError("weight: p must be >= 1");
  const double kmin = ker.gamma + 2.0 + 3.0 * (1.0 - 1.0 / p);
  if (!(k > kmin)) throw DomainError("polynomial weight: need k > gamma + 2 + 3(1 - 1/p)");
  Weight w;
  w.kind = Kind::Polynomial;
  w.k = k;
  w.p = p;
  return w;
}

Weight Weight::stretched_exp(double r, double s, double p) {
  if (!(p >= 1.0)) throw DomainError("weight: p must be >= 1");
  if (!(s > 0.0 && s <= 2.0)) throw DomainError("stretched exponential weight: need s in (0,2]");
  if (!(r > 0.0)) throw DomainError("stretched exponential weight: need r > 0");
  if (s == 2.0 && !(r < 1.0 / (2.0 * p)))
    throw DomainError("stretched exponential weight: s = 2 needs r < 1/(2p)");
  Weight w;
  w.kind = Kind::StretchedExp;
  w.r = r;
  w.s = s;
  w.p = p;
  return w;
}

Weight Weight::m0(double r) {
  if (!(r > 0.0 && r < 0.25)) throw DomainError("m0 weight: need r in (0, 1/4)");
  return stretched_exp(r, 2.0, 1.0);
}

std::string Weight::tag() const {
  char buf[96];
  if (kind == Kind::Polynomial)
    std::snprintf(buf, sizeof buf, "poly_k%g_p%g", k, p);
  else
    std::snprintf(buf, sizeof buf, "sexp_r%g_s%g_p%g", r, s, p);
  return buf;
}

double log_weight(const Weight& w, const Vec3& v) {
  const double jv = japanese(v);
  if (w.kind == Weight::Kind::Polynomial) return w.k * std::log(jv);
  return w.r * std::pow(jv, w.s);
}

double weight_value(const Weight& w, const Vec3& v) { return std::exp(log_weight(w, v)); }

Vec3 weight_dlog(const Weight& w, const Vec3& v) {
  const double j2 = 1.0 + v.squaredNorm();
  if (w.kind == Weight::Kind::Polynomial) return w.k / j2 * v;
  return w.r * w.s * std::pow(j2, 0.5 * w.s - 1.0) * v;
}

Mat3 weight_d2_over_m(const Weight& w, const Vec3& v) {
  const double j2 = 1.0 + v.squaredNorm();
  const Mat3 vv = v * v.transpose();
  if (w.kind == Weight::Kind::Polynomial)
    return w.k / j2 * Mat3::Identity() + w.k * (w.k - 2.0) / (j2 * j2) * vv;
  const double rs = w.r * w.s, s = w.s;
  return rs * std::pow(j2, 0.5 * s - 1.0) * Mat3::Identity() +
         rs * (s - 2.0) * std::pow(j2, 0.5 * s - 2.0) * vv +
         rs * rs * std::pow(j2, s - 2.0) * vv;
}

Abscissa abscissa(const Weight& w, const CollisionKernel& k) {
  if (w.kind == Weight::Kind::Polynomial && k.gamma == 0.0)
    return Abscissa{2.0 * (3.0 * (1.0 - 1.0 / w.p) - w.k)};
  return Abscissa{};
}

PhiParams PhiParams::make(double theta, double p) {
  PhiParams pp;
  pp.theta = theta;
  pp.delta1 = 1.0 - 2.0 * theta * (1.0 - 1.0 / p);
  pp.delta2 = pp.delta1 * (p * (1.0 - theta) - 1.0) + theta * (p - theta * (p - 1.0));
  return pp;
}

double phi(const Weight& w, const PhiParams& pp, const Vec3& v, const BarFields& bf) {
  const Vec3 g = weight_dlog(w, v);
  const Mat3 h = weight_d2_over_m(w, v);
  const double t1 = (bf.abar.array() * h.array()).sum();
  const double t2 = g.dot(bf.abar * g);
  const double t3 = bf.bbar.dot(g);
  return pp.delta1 * t1 + pp.delta2 * t2 + (1.0 + pp.delta1) * t3 + (1.0 / w.p - 1.0) * bf.cbar;
}

double phi(const Weight& w, const PhiParams& pp, const Vec3& v, const CollisionKernel& k) {
  return phi(w, pp, v, bar_fields(v, k));
}

PhiAsymptote phi_asymptote(const Weight& w, const PhiParams& pp, const CollisionKernel& k) {
  const double g = k.gamma;
  const double c_term = 2.0 * (g + 3.0) * (1.0 - 1.0 / w.p);
  if (w.kind == Weight::Kind::Polynomial) return {-2.0 * w.k + c_term, g};
  const double rs = w.r * w.s;
  if (w.s < 2.0) return {-2.0 * rs, g + w.s};
  return {-4.0 * w.r + 8.0 * w.r * w.r * (pp.delta1 + pp.delta2), g + 2.0};
}

AsymptoteScan scan_phi_asymptote(const Weight& w, const PhiParams& pp, const CollisionKernel& k, double tol,
                                 double r_max, int points) {
  if (!(r_max > 1.0) || points < 2) throw DomainError("scan_phi_asymptote: need r_max > 1 and points >= 2");
  const PhiAsymptote a = phi_asymptote(w, pp, k);
  if (a.coeff == 0.0) throw DomainError("scan_phi_asymptote: vanishing leading coefficient");
  AsymptoteScan s;
  for (int i = 0; i < points; ++i) {
    const double r = std::pow(r_max, static_cast<double>(i) / (points - 1));
    const Vec3 v(r, 0.0, 0.0);
    s.radii.push_back(r);
    s.ratios.push_back(phi(w, pp, v, k) / (a.coeff * std::pow(japanese(v), a.power)));
  }
  for (int i = points - 1; i >= 0; --i) {
    if (std::abs(s.ratios[static_cast<std::size_t>(i)] - 1.0) > tol) break;
    s.v_star = s.radii[static_cast<std::size_t>(i)];
  }
  return s;
}

double chi(double u) {
  const double a = std::abs(u);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double d = a - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - d * d));
}

}  // namespace landau
