#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "doctest.h"
#include "landau/kernel.hpp"
#include "landau/linop.hpp"

using namespace landau;

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1]
std::vector<std::pair<double, double>> gl_rule() {
  using G = boost::math::quadrature::gauss<double, 20>;
  std::vector<std::pair<double, double>> r;
  for (std::size_t i = 0; i < G::abscissa().size(); ++i) {
    r.emplace_back(G::abscissa()[i], G::weights()[i]);
    if (G::abscissa()[i] != 0.0) r.emplace_back(-G::abscissa()[i], G::weights()[i]);
  }
  return r;
}

// Brute-force oracle: integrate F(u) mu(v - u) over u = r * omega with a product
// Gauss-Legendre rule in (r, cos theta) and a trapezoid rule in the azimuth.
template <class F>
auto sphere_quad(const Vec3& v, F fn, double rmax = 14.0) {
  using R = decltype(fn(Vec3::UnitX()));
  const auto rule = gl_rule();
  R acc = fn(Vec3::UnitX()) * 0.0;
  const int nphi = 48;
  const int npanel = 14;
  for (int pr = 0; pr < npanel; ++pr) {
    const double r0 = rmax * pr / npanel, r1 = rmax * (pr + 1) / npanel;
    for (const auto& [xr, wr] : rule) {
      const double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * xr;
      const double wrr = 0.5 * (r1 - r0) * wr * r * r;
      for (const auto& [t, wt] : rule) {
        const double st = std::sqrt(1.0 - t * t);
        for (int k = 0; k < nphi; ++k) {
          const double ph = 2.0 * kPi * k / nphi;
          const Vec3 u = r * Vec3(st * std::cos(ph), st * std::sin(ph), t);
          acc += (wrr * wt * (2.0 * kPi / nphi) * maxwellian(v - u)) * fn(u);
        }
      }
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("kernel pointwise values") {
  const CollisionKernel k(1.0);
  const Vec3 z(1.0, 2.0, -2.0);
  const Mat3 a = eval_a(z, k);
  // |z| = 3: a = 3^3 (I - zz/9)
  CHECK(a(0, 0) == doctest::Approx(27.0 * (1.0 - 1.0 / 9.0)));
  CHECK(a(1, 2) == doctest::Approx(27.0 * (4.0 / 9.0)));
  CHECK((a * z).norm() < 1e-12);
  CHECK(eval_b(z, k)[0] == doctest::Approx(-6.0));
  CHECK(eval_c(z, k) == doctest::Approx(-24.0));
  CHECK(eval_c(Vec3::Zero(), CollisionKernel(0.0)) == doctest::Approx(-6.0));
  CHECK(eval_a(Vec3::Zero(), k).norm() == 0.0);
  CHECK_THROWS_AS(CollisionKernel(1.5), DomainError);
  CHECK_THROWS_AS(CollisionKernel(-0.1), DomainError);
}

TEST_CASE("Maxwellian moments") {
  CHECK(M_alpha(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(M_alpha(2.0) == doctest::Approx(kM2).epsilon(1e-14));
  CHECK(M_alpha(4.0) == doctest::Approx(kM4).epsilon(1e-14));
  // independent radial Simpson rule for int |v|^3 mu
  const int n = 20000;
  const double R = 16.0, hr = R / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * hr;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * 4.0 * kPi * r * r * r * r * r * std::pow(2.0 * kPi, -1.5) * std::exp(-0.5 * r * r);
  }
  s *= hr / 3.0;
  CHECK(s == doctest::Approx(6.383076486).epsilon(1e-9));
  CHECK(M_alpha(3.0) == doctest::Approx(6.383076486).epsilon(1e-9));
  CHECK(J_alpha(Vec3::Zero(), 3.0) == doctest::Approx(6.383076486).epsilon(1e-9));
  CHECK(M_alpha(3.0) <= std::pow(15.0, 0.75));
}

TEST_CASE("J_alpha closed forms") {
  for (double x : {0.0, 0.3, 1.0, 2.5, 7.0, 15.0}) {
    const Vec3 v(x, 0.0, 0.0);
    CHECK(J_alpha(v, 0.0) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(J_alpha(v, 2.0) == doctest::Approx(x * x + 3.0).epsilon(1e-11));
  }
  CHECK_THROWS_AS(J_alpha(Vec3::Zero(), 3.5), DomainError);
  CHECK_THROWS_AS(J_alpha(Vec3::Zero(), -0.5), DomainError);
}

TEST_CASE("J_alpha against brute-force quadrature") {
  const Vec3 v(0.7, -1.1, 0.4);
  for (double a : {0.5, 1.0, 2.5, 3.0}) {
    const double ref = sphere_quad(v, [a](const Vec3& u) { return std::pow(u.norm(), a); });
    CHECK(J_alpha(v, a) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("J_alpha moment bounds") {
  for (double x : {0.0, 0.5, 1.0, 2.0, 4.0, 9.0}) {
    const Vec3 v(0.0, x, 0.0);
    for (double a : {0.25, 0.5, 1.0})
      CHECK(J_alpha(v, a) <= std::pow(x, a) + M_alpha(a) + 1e-12);
    for (double a : {1.25, 1.5, 1.9})
      CHECK(J_alpha(v, a) <= std::pow(x, a) + std::pow(kM2, a / 2) + 1e-12);
    for (double a : {2.25, 2.5, 3.0})
      CHECK(J_alpha(v, a) <= std::pow(x, a) + std::pow(10.0, a / 4) * std::pow(x, a / 2) +
                                 std::pow(kM4, a / 4) + 1e-12);
  }
}

TEST_CASE("averaged coefficients against brute-force quadrature") {
  const Vec3 v(0.7, -1.1, 0.4);
  for (double g : {0.0, 1.0}) {
    const CollisionKernel k(g);
    const BarFields bf = bar_fields(v, k);
    const Mat3 aref = sphere_quad(v, [&](const Vec3& u) { return Mat3(eval_a(u, k)); });
    const Vec3 bref = sphere_quad(v, [&](const Vec3& u) { return Vec3(eval_b(u, k)); });
    const double cref = sphere_quad(v, [&](const Vec3& u) { return eval_c(u, k); });
    CHECK((bf.abar - aref).norm() < 1e-8 * aref.norm());
    CHECK((bf.bbar - bref).norm() < 1e-8 * bref.norm());
    CHECK(bf.cbar == doctest::Approx(cref).epsilon(1e-8));
  }
}

TEST_CASE("averaged coefficient identities") {
  const CollisionKernel k(1.0);
  // abar(0) = (2/3) M_{gamma+2} I
  const BarFields b0 = bar_fields(Vec3::Zero(), k);
  CHECK(b0.abar(0, 0) == doctest::Approx(2.0 / 3.0 * M_alpha(3.0)).epsilon(1e-10));
  CHECK(b0.abar(0, 1) == 0.0);
  for (double x : {0.2, 1.5, 6.0}) {
    const Vec3 v = x * Vec3(1.0, 2.0, 2.0) / 3.0;
    const BarFields bf = bar_fields(v, k);
    // trace abar = 2 J_{gamma+2}, bbar = -ell1 v
    CHECK(bf.abar.trace() == doctest::Approx(2.0 * J_alpha(v, 3.0)).epsilon(1e-10));
    const Ell e = ell(v, k);
    CHECK((bf.bbar + e.ell1 * v).norm() < 1e-10 * bf.bbar.norm());
    CHECK(bf.cbar == doctest::Approx(-8.0 * J_alpha(v, 1.0)).epsilon(1e-12));
  }
  // large |v|: ell1 ~ 2 |v|^gamma, ell2 ~ |v|^{gamma+2}
  const Ell e = ell(Vec3(10.0, 0.0, 0.0), k);
  CHECK(e.ell1 / 20.0 == doctest::Approx(1.0).epsilon(0.05));
  CHECK(e.ell2 / 1000.0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("weight validation and abscissa") {
  const CollisionKernel k1(1.0), k0(0.0);
  CHECK_NOTHROW(Weight::polynomial(5.0, 2.0, k1));
  CHECK_THROWS_AS(Weight::polynomial(4.5, 2.0, k1), DomainError);
  CHECK_THROWS_AS(Weight::polynomial(3.0, 1.0, k1), DomainError);
  CHECK_NOTHROW(Weight::stretched_exp(0.2, 2.0, 2.0));
  CHECK_THROWS_AS(Weight::stretched_exp(0.3, 2.0, 2.0), DomainError);
  CHECK_THROWS_AS(Weight::stretched_exp(0.25, 2.0, 2.0), DomainError);
  CHECK_THROWS_AS(Weight::stretched_exp(-0.1, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(Weight::stretched_exp(0.1, 2.5, 1.0), DomainError);
  CHECK_THROWS_AS(Weight::m0(0.25), DomainError);
  CHECK(abscissa(Weight::polynomial(5.0, 2.0, k0), k0).value.value() == doctest::Approx(-7.0));
  CHECK(abscissa(Weight::polynomial(5.0, 2.0, k1), k1).unbounded_below());
  CHECK(abscissa(Weight::stretched_exp(0.1, 1.0, 1.0), k0).unbounded_below());
}

TEST_CASE("weight derivatives match finite differences") {
  const CollisionKernel k(1.0);
  const Vec3 v(0.8, -0.3, 1.7);
  for (const Weight& w : {Weight::polynomial(6.0, 2.0, k), Weight::stretched_exp(0.3, 1.2, 1.0),
                          Weight::m0(0.1)}) {
    const double e = 1e-4;
    const Vec3 g = weight_dlog(w, v);
    const Mat3 H = weight_d2_over_m(w, v);
    const double m = weight_value(w, v);
    for (int i = 0; i < 3; ++i) {
      const Vec3 d = e * Vec3::Unit(i);
      CHECK((weight_value(w, v + d) - weight_value(w, v - d)) / (2 * e * m) ==
            doctest::Approx(g[i]).epsilon(1e-6));
      for (int j = 0; j < 3; ++j) {
        const Vec3 d2 = e * Vec3::Unit(j);
        const double fd = (weight_value(w, v + d + d2) - weight_value(w, v + d - d2) -
                           weight_value(w, v - d + d2) + weight_value(w, v - d - d2)) /
                          (4 * e * e * m);
        CHECK(fd == doctest::Approx(H(i, j)).epsilon(1e-5).scale(1.0));
      }
    }
  }
}

TEST_CASE("phi parameters") {
  const PhiParams p1 = PhiParams::make(0.3, 1.0);
  CHECK(p1.delta1 == 1.0);
  CHECK(p1.delta2 == doctest::Approx(0.0).scale(1.0));
  const PhiParams p2 = PhiParams::make(1.0, 2.0);  // theta = p / (2(p-1))
  CHECK(p2.delta1 == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("cutoff") {
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(-1.0) == 1.0);
  CHECK(chi(2.0) == 0.0);
  CHECK(chi(3.0) == 0.0);
  double prev = 1.0;
  for (double u = 1.0; u <= 2.0; u += 0.01) {
    const double c = chi(u);
    CHECK(c <= prev + 1e-15);
    CHECK(c >= 0.0);
    prev = c;
  }
  CHECK(chi(1.999) < 1e-100);
}

TEST_CASE("phi approaches its leading term") {
  for (double g : {0.0, 0.5, 1.0}) {
    const CollisionKernel k(g);
    const Weight poly1 = Weight::polynomial(5.0, 1.0, k), poly2 = Weight::polynomial(6.0, 2.0, k);
    const Weight exp1 = Weight::stretched_exp(1.0, 1.0, 2.0), exp2 = Weight::stretched_exp(0.2, 2.0, 2.0);
    const PhiParams theta0 = PhiParams::make(0.0, 2.0);
    // closed-form envelopes for the polynomial cases and s = 2
    CHECK(phi_asymptote(poly1, default_phi_params(poly1), k).coeff == doctest::Approx(-10.0));
    CHECK(phi_asymptote(poly2, default_phi_params(poly2), k).coeff == doctest::Approx(-2.0 * (6.0 - (g + 3.0) * 0.5)));
    CHECK(phi_asymptote(exp2, theta0, k).coeff == doctest::Approx(4 * 0.2 * (2 * 2 * 0.2 - 1)));
    CHECK(phi_asymptote(exp2, theta0, k).power == g + 2.0);
    for (const auto& [w, pp] : {std::pair{poly1, default_phi_params(poly1)}, std::pair{poly2, default_phi_params(poly2)},
                                std::pair{exp1, theta0}, std::pair{exp2, theta0}}) {
      const AsymptoteScan s = scan_phi_asymptote(w, pp, k);
      REQUIRE(s.v_star.has_value());
      CHECK(*s.v_star <= 100.0);
      CHECK(s.ratios.back() == doctest::Approx(1.0).epsilon(0.03));
    }
    // for s < 2 the limit is -2 r s, twice the naive bound -4 r s
    const Vec3 v(400.0, 0.0, 0.0);
    CHECK(phi(exp1, theta0, v, k) / (-4.0 * std::pow(japanese(v), 1.0 + g)) == doctest::Approx(0.5).epsilon(0.03));
  }
  // p = 1, gamma = 1: phi <= -2k <v> (1 - 0.2) at |v| = 20
  const CollisionKernel k1(1.0);
  const Weight w = Weight::polynomial(5.0, 1.0, k1);
  CHECK(phi(w, default_phi_params(w), Vec3(20.0, 0.0, 0.0), k1) <= -8.0 * japanese(Vec3(20.0, 0.0, 0.0)));
}
