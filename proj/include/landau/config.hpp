#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "landau/phase.hpp"

namespace landau {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitialData { Anisotropic, Maxwellian, Bimodal, Perturbed };

struct SemigroupSettings {
  double t_end = 2.0;
  double dt = 5e-3;
  double output_every = 0.05;
  int samples = 10;
};

struct DecaySettings {
  int n = 24;  // the fitted rate needs spacing 0.5 to sit within 20% of lambda0
  double vmax = 6.0;
  double t_end = 0.6;
  double dt = 2.5e-3;
  double output_every = 0.02;
  std::optional<double> lambda0;  // unset: dense solve at the same spacing
  FitOptions fit{};
};

struct RunConfig {
  double gamma = 1.0;
  int n = 16;
  double vmax = 6.0;
  std::vector<std::string> weight_specs{"poly:5:1"};  // poly:k:p or sexp:r:s:p
  std::optional<double> split_a;                      // unset: kDefaultSplitTarget
  EvolveConfig evolve{};
  InitialData initial = InitialData::Anisotropic;
  Vec3 anisotropy = Vec3(1.5, 1.0, 0.5);
  SemigroupSettings semigroup{};
  DecaySettings decay{};
  BootstrapParams bootstrap{};
  int top_k = 0;  // 0: full spectrum
  int leading = 20;
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  CollisionKernel kernel() const { return CollisionKernel(gamma); }
  VelocityGrid grid() const { return VelocityGrid(n, vmax); }
  VelocityGrid decay_grid() const { return VelocityGrid(decay.n, decay.vmax); }
  std::vector<Weight> weights() const;
  double split_target() const;
  GridField initial_state(const VelocityGrid& g) const;

  // throws ConfigError naming the offending key
  void validate() const;
};

constexpr double kDefaultSplitTarget = -1.0;

Weight parse_weight(const std::string& spec, const CollisionKernel& k);

// INI text with the sections of dump_config; unknown sections or keys are rejected
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// every key in a fixed order, reals in shortest round-trip form
std::string dump_config(const RunConfig& c);

// n = 12 for the grids
void apply_quick(RunConfig& c);

}  // namespace landau
