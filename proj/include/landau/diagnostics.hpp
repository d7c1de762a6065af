#pragma once

#include <optional>
#include <string>
#include <vector>

#include "landau/vgrid.hpp"

namespace landau {

struct NormSpec {
  enum class Kind { Plain, MuInvHalf, Weighted };
  Kind kind = Kind::Plain;
  double p = 1.0;  // +inf for the sup norm
  Weight weight{};
  double extra_k = 0.0;  // additional <v>^extra_k factor on the weight

  static NormSpec plain(double p);
  static NormSpec mu_inv_half(double p = 2.0);
  static NormSpec weighted(const Weight& w, double p);
  // <v>^k weight outside the admissible classes (moment norms)
  static NormSpec japanese_pow(double k, double p = 1.0);

  NormSpec times_japanese(double k) const;

  double log_weight(const Vec3& v) const;
  std::string tag() const;
};

// (h^3 sum |m f|^p)^{1/p}; falls back to log-space when a weight exceeds 1e300
double norm(const GridField& f, const NormSpec& spec);
double log_norm(const GridField& f, const NormSpec& spec);
// sum over |beta| <= order of ||m d^beta f|| with fourth-order differences
double sobolev_norm(const GridField& f, const NormSpec& spec, int order);
// || m d^2 f || summed over the six second derivatives
double hessian_norm(const GridField& f, const NormSpec& spec);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct DecayReport {
  double fitted_rate = 0.0;  // -slope of log(norm)
  double prefactor = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  double r_squared = 0.0;
  double reference_rate = 0.0;
  std::size_t points = 0;
  Verdict verdict = Verdict::Inconclusive;
};

struct FitOptions {
  double window_fraction = 0.6;  // fit on the last fraction of the time span
  std::optional<double> t_lo, t_hi;  // explicit window overrides the fraction
  double rel_tol = 0.2;
  double r2_min = 0.98;
  std::size_t min_points = 8;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DecayReport fit_decay(const std::vector<double>& t, const std::vector<double>& y,
                      double reference_rate, const FitOptions& opt = {});

// least squares y = a + b x; returns (a, b, r^2)
struct LineFit {
  double intercept, slope, r_squared;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace landau
