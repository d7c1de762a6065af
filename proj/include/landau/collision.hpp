#pragma once

#include <array>

#include <Eigen/Sparse>

#include "landau/vgrid.hpp"

namespace landau {

// Conservative flux discretisation of Q(g, f) = div_v{ (a*g) grad f - f (a * grad g) }.
//
// With psi = f/mu, the one-sided weighted gradients are
//   P^s_j f(v) = s mu(v) (psi(v + s e_j) - psi(v)) / h,   s = +1, -1,
// (zero when the neighbour is outside the box), and
//   Q(g, f) = 1/2 sum_s  -(D^s_i)^T [ (a_ij * g) P^s_j f - f (a_ij * P^s_j g) ],
// where D^s is the plain one-sided difference with no-flux faces at the box boundary.
// P^s mu = 0 exactly, so Q(mu, mu) = 0 and the linearisation is symmetric in L^2(mu^{-1}).
// Any reference Maxwellian mu_{u,T} gives a consistent scheme (the v f part of P cancels
// against a(z) z = 0); it is the exact discrete equilibrium.
class CollisionOperator {
 public:
  CollisionOperator(const VelocityGrid& g, const CollisionKernel& k, const Vec3& u = Vec3::Zero(),
                    double T = 1.0);

  const VelocityGrid& grid() const { return conv_.grid(); }
  const CollisionKernel& kernel() const { return conv_.kernel(); }
  const Convolver& convolver() const { return conv_; }
  const Eigen::VectorXd& mu() const { return mu_; }
  const Vec3& reference_velocity() const { return u_; }
  double reference_temperature() const { return T_; }
  // ratio mu(v) / mu(v + s e_j), indexed [s == -1][j][cell]; 0 without a neighbour
  double ratio(int s, int j, std::size_t q) const { return ratio_[s < 0][j][q]; }
  bool has_face(int s, int j, std::size_t q) const { return ratio_[s < 0][j][q] != 0.0; }

  struct Coeffs {
    std::array<Eigen::VectorXd, 6> A;                  // a_ij * g, packed (11,12,13,22,23,33)
    std::array<std::array<Eigen::VectorXd, 3>, 2> c;   // [s == -1][i] sum_j a_ij * P^s_j g
  };
  Coeffs coeffs(const Eigen::VectorXd& g) const;
  // a_ij * g only (c fields left empty)
  std::array<Eigen::VectorXd, 6> diffusion(const Eigen::VectorXd& g) const;

  // P^s_j f
  void weighted_grad(const Eigen::VectorXd& f, int s, int j, Eigen::VectorXd& out) const;

  Eigen::VectorXd apply(const Coeffs& cf, const Eigen::VectorXd& f) const;
  Eigen::VectorXd Q(const Eigen::VectorXd& g, const Eigen::VectorXd& f) const;
  // sparse matrix of f -> Q(g, f) for given coefficient fields (27-point pattern)
  Eigen::SparseMatrix<double> matrix(const Coeffs& cf) const;

  static int packed(int i, int j) {
    static const int t[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return t[i][j];
  }

 private:
  Convolver conv_;
  Vec3 u_;
  double T_;
  Eigen::VectorXd mu_;
  std::array<std::array<Eigen::VectorXd, 3>, 2> ratio_;
};

}  // namespace landau
