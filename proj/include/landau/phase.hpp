#pragma once

#include "landau/nonlinear.hpp"

namespace landau {

struct PhaseReport {
  double empirical_C = 0.0;       // sup_t H(f_t|mu) (1+t)^{2/gamma}
  double sup_moment = 0.0;        // sup_{t >= t0} ||f_t||_{L^1(<v>^theta)}
  double moment_at_t0 = 0.0;
  bool entropy_monotone = false;  // H(f_t|mu) nonincreasing up to 1e-8 |H| + 1e-14
  bool moment_bounded = false;    // no growth of the moment over the second half of [t0, t_end]
  bool entropy_bounded = false;   // same for H (1+t)^{2/gamma}
  Verdict verdict = Verdict::Inconclusive;
};

// needs a trace with snapshots; gamma > 0
PhaseReport polynomial_phase_check(const EvolutionTrace& tr, double gamma, double theta, double t0);

struct BootstrapParams {
  double ell = 3.0;        // threshold norm L^1(<v>^ell)
  double k = 5.0;          // decay norm L^1(<v>^k)
  double threshold = 1e-2; // epsilon
  double lambda0 = 0.0;    // reference rate from the spectrum
  FitOptions fit{};
};

struct BootstrapReport {
  bool reached = false;
  double t0 = 0.0;
  double h_t0 = 0.0;      // ||h_{t0}||_{L^1(<v>^k)}
  double C_prime = 0.0;   // sup_{t >= t0} ||h_t|| / (e^{-lambda0 (t - t0)} ||h_{t0}||)
  DecayReport fit;
  bool vacuous = false;   // h_0 = 0
  Verdict verdict = Verdict::Inconclusive;
  EvolutionTrace trace;
};

// nonlinear run from f0 (the two norms are appended to cfg.norms); first phase until ||h||_{L^1(<v>^ell)} <= threshold, then the
// exponential bound on [t0, t_end]; the fit stops where ||h|| reaches floor_rel * ||h_0||
BootstrapReport bootstrap_demo(const LinearisedOperator& op, const GridField& f0, const EvolveConfig& cfg,
                               const BootstrapParams& bp, double floor_rel = 1e-9);

}  // namespace landau
