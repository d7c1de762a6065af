#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace landau {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CollisionKernel {
  double gamma = 1.0;

  explicit CollisionKernel(double g = 1.0);
};

// pointwise kernel quantities
Mat3 eval_a(const Vec3& z, const CollisionKernel& k);
Vec3 eval_b(const Vec3& z, const CollisionKernel& k);
double eval_c(const Vec3& z, const CollisionKernel& k);
double maxwellian(const Vec3& v);

// |z|^gamma with the convention 0^0 = 1
double pow_abs(double r, double gamma);

// moments of mu, M_alpha = \int |v|^alpha mu
double M_alpha(double alpha);
constexpr double kM2 = 3.0;
constexpr double kM4 = 15.0;

double J_alpha(const Vec3& v, double alpha);

struct Ell {
  double ell1;
  double ell2;
};
Ell ell(const Vec3& v, const CollisionKernel& k);

struct BarFields {
  Mat3 abar;
  Vec3 bbar;
  double cbar;
};
// abar from (ell1, ell2), bbar from its own radial quadrature, cbar from J_gamma
BarFields bar_fields(const Vec3& v, const CollisionKernel& k);

// <v> = sqrt(1 + |v|^2)
double japanese(const Vec3& v);

struct Weight {
  enum class Kind { Polynomial, StretchedExp };
  Kind kind = Kind::Polynomial;
  double k = 0.0;  // Polynomial exponent
  double r = 0.0;  // StretchedExp rate
  double s = 0.0;  // StretchedExp power
  double p = 1.0;

  static Weight polynomial(double k, double p, const CollisionKernel& ker);
  static Weight stretched_exp(double r, double s, double p);
  // m0 = exp(r <v>^2), r in (0, 1/4)
  static Weight m0(double r);

  std::string tag() const;
};

double weight_value(const Weight& w, const Vec3& v);
double log_weight(const Weight& w, const Vec3& v);
// grad m / m and hess m / m
Vec3 weight_dlog(const Weight& w, const Vec3& v);
Mat3 weight_d2_over_m(const Weight& w, const Vec3& v);

// extended real: nullopt means "unbounded below"
struct Abscissa {
  std::optional<double> value;
  bool unbounded_below() const { return !value.has_value(); }
};
Abscissa abscissa(const Weight& w, const CollisionKernel& k);

struct PhiParams {
  double theta = 0.0;
  double delta1 = 1.0;
  double delta2 = 0.0;

  static PhiParams make(double theta, double p);
};

double phi(const Weight& w, const PhiParams& pp, const Vec3& v, const CollisionKernel& k);
// same, with precomputed bar fields (for scans)
double phi(const Weight& w, const PhiParams& pp, const Vec3& v, const BarFields& bf);

// leading term coeff <v>^power of phi as |v| -> infinity, from l1 ~ 2 <v>^gamma and
// J_alpha ~ <v>^alpha. For s < 2 the J_{gamma+2} part of the first term has the order of the
// drift term, so the coefficient is -2 r s.
struct PhiAsymptote {
  double coeff = 0.0;
  double power = 0.0;
};
PhiAsymptote phi_asymptote(const Weight& w, const PhiParams& pp, const CollisionKernel& k);

struct AsymptoteScan {
  std::vector<double> radii;
  std::vector<double> ratios;  // phi(r e1) / (coeff <v>^power)
  std::optional<double> v_star;  // smallest scanned radius beyond which every ratio is within tol of 1
};
// geometric radii on [1, r_max]; phi is radial, so one direction suffices
AsymptoteScan scan_phi_asymptote(const Weight& w, const PhiParams& pp, const CollisionKernel& k,
                                 double tol = 0.25, double r_max = 400.0, int points = 60);

// smooth cutoff: 1 on |u| <= 1, 0 on |u| >= 2
double chi(double u);

}  // namespace landau
