#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "landau/collision.hpp"
#include "landau/diagnostics.hpp"

namespace landau {

struct SplitParams {
  double M = 0.0;
  double R = 1.0;

  SplitParams() = default;
  SplitParams(double M_, double R_);
  double chi_R(const Vec3& v) const { return chi(v.norm() / R); }
};

class LinearisedOperator {
 public:
  LinearisedOperator(const VelocityGrid& g, const CollisionKernel& k, SplitParams split = {});

  const VelocityGrid& grid() const { return col_.grid(); }
  const CollisionKernel& kernel() const { return col_.kernel(); }
  const CollisionOperator& collision() const { return col_; }
  const GridField& mu() const { return mu_; }
  const SplitParams& split() const { return split_; }
  void set_split(SplitParams s);
  const Eigen::VectorXd& chi_field() const { return chi_; }

  // a_ij * mu (packed 11,12,13,22,23,33), b_i * mu, c * mu on the lattice
  const std::array<GridField, 6>& abar() const { return abar_; }
  const std::array<GridField, 3>& bbar() const { return bbar_; }
  const GridField& cbar() const { return cbar_; }
  const CollisionOperator::Coeffs& mu_coeffs() const { return mu_cf_; }

  GridField apply_A0(const GridField& h) const;
  GridField apply_B0(const GridField& h) const;
  GridField apply_L(const GridField& h) const;
  GridField apply_A(const GridField& h) const;
  GridField apply_B(const GridField& h) const;

  // sparse matrices of B0 and B = B0 - M chi_R
  Eigen::SparseMatrix<double> B0_matrix() const;
  Eigen::SparseMatrix<double> B_matrix() const;

 private:
  void check(const GridField& h) const;

  CollisionOperator col_;
  GridField mu_;
  SplitParams split_;
  Eigen::VectorXd chi_;
  std::array<GridField, 6> abar_;
  std::array<GridField, 3> bbar_;
  GridField cbar_;
  CollisionOperator::Coeffs mu_cf_;
};

class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// orthogonal projection onto span{mu, v mu, |v|^2 mu} in L^2(mu^{-1/2})
GridField projection_Pi(const LinearisedOperator& op, const GridField& h);
// coefficients of the projection in the basis order (mu, v1 mu, v2 mu, v3 mu, |v|^2 mu)
Eigen::Matrix<double, 5, 1> projection_coefficients(const VelocityGrid& g, const GridField& h);
double gram_condition(const VelocityGrid& g);
// <f, g> = h^3 sum f g / mu
double inner_mu_inv(const GridField& f, const GridField& g);

double dirichlet_form(const LinearisedOperator& op, const GridField& h);

class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kDenseMaxSize = 20000;

struct SymmetrizedMatrix {
  Eigen::MatrixXd T;
  double asymmetry = 0.0;  // ||T - T^T||_F / ||T||_F before symmetrisation
};
// matrix of g -> mu^{-1/2} L (mu^{1/2} g); assembled directly from the lattice kernel
SymmetrizedMatrix assemble_symmetrized(const LinearisedOperator& op);
void dump_triplets(const std::string& path, const Eigen::MatrixXd& T, double drop_tol = 0.0);

struct SpectralReport {
  std::vector<double> eigenvalues;  // descending
  std::vector<double> residuals;    // ||T x - lambda x|| per eigenpair
  int null_count = 0;
  double lambda0 = 0.0;
  double asymmetry = 0.0;
  bool full_spectrum = false;
  double min_eigenvalue = 0.0;  // only with full_spectrum
  bool nonpositive = false;     // non-null eigenvalues strictly negative
  Eigen::MatrixXd eigenvectors;  // columns, same order as eigenvalues (conjugated frame)
};

constexpr double kGapTol = 0.1;

// top_k = 0 computes the full spectrum
SpectralReport spectral_gap(const LinearisedOperator& op, int top_k = 0,
                            bool keep_vectors = false);
SpectralReport spectral_gap(SymmetrizedMatrix&& sm, int top_k, bool keep_vectors);

enum class Generator { B, L };

struct SemigroupOptions {
  double t_end = 1.0;
  double dt = 1e-3;
  double output_every = 0.05;  // multiple of dt
  std::vector<NormSpec> norms;
  bool keep_snapshots = false;
  double blowup_factor = 1e6;
};

struct SemigroupTrace {
  std::vector<double> times;
  std::vector<std::string> norm_tags;
  std::vector<std::vector<double>> norms;  // [norm][time]
  std::vector<GridField> snapshots;
  GridField final_state;
};

class BlowUpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kSemigroupSolveTol = 1e-12;

// fully implicit BDF2 with a Richardson-extrapolated Euler start
SemigroupTrace evolve_semigroup(const LinearisedOperator& op, Generator which,
                                const GridField& h0, const SemigroupOptions& opt);

struct CertifyResult {
  bool ok = false;
  double worst_margin = 0.0;  // max [phi - M chi_R] - a at the given split
  double worst_radius = 0.0;
  std::optional<SplitParams> suggested;
  double suggested_margin = 0.0;
};

// default theta: p/(2(p-1)) for polynomial weights with p > 1, 0 otherwise
PhiParams default_phi_params(const Weight& w);

// scans the lattice radii and a radial far-field probe to 4 vmax
CertifyResult certify_split(const LinearisedOperator& op, const Weight& w, const PhiParams& pp,
                            double a);

}  // namespace landau
