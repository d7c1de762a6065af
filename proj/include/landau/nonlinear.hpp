#pragma once

#include <optional>
#include <string>
#include <vector>

#include "landau/linop.hpp"

namespace landau {

// Q(g, h) in the conservative flux discretisation; bilinear
GridField apply_Q(const CollisionOperator& col, const GridField& g, const GridField& h);

// step used when EvolveConfig::dt is unset
constexpr double kAutoDt = 2.5e-3;

struct EvolveConfig {
  double t_end = 1.0;
  std::optional<double> dt;  // unset: kAutoDt, shrunk to divide output_every
  double output_every = 0.05;
  double eps = 0.0;  // perturbation amplitude for f0 = mu + eps g set-ups
  bool conserve_project = true;
  double floor = 1e-30;  // relative to max f, used inside logarithms only
  std::vector<NormSpec> norms;  // of f - mu
  bool keep_snapshots = false;
  double blowup_factor = 1e6;
  double solver_tol = 1e-12;

  void validate() const;
  double step() const;
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<Vec3> velocity;  // momentum / mass
  std::vector<double> energy;  // integral of f |v|^2
  std::vector<double> entropy, relative_entropy, dissipation;
  std::vector<std::string> norm_tags;
  std::vector<std::vector<double>> norms;  // [norm][time]
  std::vector<GridField> snapshots;
  GridField final_state;
  double dt = 0.0;
  Vec3 reference_velocity = Vec3::Zero();  // Maxwellian the discretisation is built on
  double reference_temperature = 1.0;
  double min_ratio = 0.0;  // min f / max f over all steps
  bool negativity_flagged = false;
  int max_solver_iterations = 0;

  void write_csv(const std::string& path) const;
};

// semi-implicit BDF2: the coefficient fields of Q are frozen at 2 f^n - f^{n-1} and the
// linear system for f^{n+1} is solved by BiCGSTAB, preconditioned with the sparse LU of
// the linearisation around the equilibrium. When f0 does not relax to the reference
// Maxwellian of col, an operator with the matching reference is used instead.
EvolutionTrace evolve(const CollisionOperator& col, const GridField& f0, const EvolveConfig& cfg);

// centred Gaussian with covariance diag(s T), scaled and with s chosen so that its lattice
// mass equals that of the sampled Maxwellian and its lattice energy is (T1 + T2 + T3)/3 times
// the Maxwellian's (so mass 1 and energy 3 up to quadrature error when T sums to 3)
GridField anisotropic_gaussian(const VelocityGrid& g, const Vec3& T);

// (u, T) of the Maxwellian with the moments of f; T is measured against the lattice second
// moment of the sampled standard Maxwellian, so that lattice-matched data gives exactly T = 1
std::pair<Vec3, double> equilibrium_parameters(const GridField& f);

// moments of the five collision invariants 1, v, |v|^2
Eigen::Matrix<double, 5, 1> moments(const GridField& f);
// adds a combination of mu, v mu, |v|^2 mu so that f has the target moments
void conserve_project(const GridField& mu, GridField& f, const Eigen::Matrix<double, 5, 1>& target);

// floor is relative to max f and only enters the logarithms; relative_entropy is
// int f log(f/mu) - f + mu, which is H(f|mu) for equal masses
double entropy(const GridField& f, double floor = 1e-30);
double relative_entropy(const GridField& f, double floor = 1e-30);
double dissipation(const CollisionOperator& col, const GridField& f, double floor = 1e-30);

struct CkpResult {
  double lhs = 0.0;  // ||f - mu||_1
  double rhs = 0.0;  // sqrt(2 H(f|mu))
  bool ok = false;
};
// f must have unit mass to within 1e-6
CkpResult ckp_check(const GridField& f, double floor = 1e-30);

// ||Q(g,h)||_{L^p(m)} over the bilinear bound built from <v>^gamma and <v>^{gamma+2} moments
double bilinear_estimate_check(const CollisionOperator& col, const GridField& g, const GridField& h,
                               const NormSpec& m);

// || h_t - S_L(t) h_0 - int_0^t S_L(t-s) Q(h_s, h_s) ds ||_{L^1(<v>^k)} with h = f - mu, the
// integral by the trapezoid rule over the stored snapshots (uniform spacing)
double duhamel_residual(const LinearisedOperator& op, const EvolutionTrace& tr, double k,
                        double semigroup_dt);

// inf over the trace of D / min{H(f|mu), H(f|mu)^{1 + gamma/2}} where H(f|mu) > h_min
double entropy_dissipation_ratio(const EvolutionTrace& tr, double gamma, double h_min = 1e-10);

}  // namespace landau
