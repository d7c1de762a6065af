#include "landau/collision.hpp"

#include <cmath>
#include <vector>

namespace landau {

CollisionOperator::CollisionOperator(const VelocityGrid& g, const CollisionKernel& k, const Vec3& u, double T)
    : conv_(g, k), u_(u), T_(T) {
  if (!(T > 0.0)) throw DomainError("collision operator: reference temperature must be > 0");
  const std::size_t N = g.size();
  mu_.resize(N);
  const double norm = std::pow(2.0 * M_PI * T, -1.5);
  for (std::size_t q = 0; q < N; ++q) mu_[q] = norm * std::exp(-(g.node(q) - u).squaredNorm() / (2.0 * T));
  for (int si = 0; si < 2; ++si) {
    const int s = si == 0 ? 1 : -1;
    for (int j = 0; j < 3; ++j) {
      auto& r = ratio_[si][j];
      r = Eigen::VectorXd::Zero(N);
      const std::size_t st = g.stride(j);
      for (std::size_t q = 0; q < N; ++q) {
        const int c = g.ijk(q)[j] + s;
        if (c < 0 || c >= g.n) continue;
        const std::size_t nb = s > 0 ? q + st : q - st;
        r[q] = mu_[q] / mu_[nb];
      }
    }
  }
}

void CollisionOperator::weighted_grad(const Eigen::VectorXd& f, int s, int j,
                                      Eigen::VectorXd& out) const {
  const auto& g = grid();
  const std::size_t N = g.size();
  const std::size_t st = g.stride(j);
  const double inv_h = 1.0 / g.h;
  const auto& r = ratio_[s < 0][j];
  out.resize(N);
  for (std::size_t q = 0; q < N; ++q) {
    if (r[q] == 0.0) {
      out[q] = 0.0;
      continue;
    }
    const std::size_t nb = s > 0 ? q + st : q - st;
    out[q] = s * mu_[q] * (f[nb] / mu_[nb] - f[q] / mu_[q]) * inv_h;
  }
}

std::array<Eigen::VectorXd, 6> CollisionOperator::diffusion(const Eigen::VectorXd& g) const {
  const std::size_t N = grid().size();
  std::array<Eigen::VectorXd, 6> A;
  const auto G = conv_.forward(g.data());
  static const KernelComponent comps[6] = {KernelComponent::A11, KernelComponent::A12,
                                           KernelComponent::A13, KernelComponent::A22,
                                           KernelComponent::A23, KernelComponent::A33};
  for (int p = 0; p < 6; ++p) {
    A[p].resize(N);
    conv_.apply(comps[p], G, A[p].data());
  }
  return A;
}

CollisionOperator::Coeffs CollisionOperator::coeffs(const Eigen::VectorXd& g) const {
  const std::size_t N = grid().size();
  Coeffs cf;
  cf.A = diffusion(g);
  Eigen::VectorXd P;
  for (int si = 0; si < 2; ++si) {
    const int s = si == 0 ? 1 : -1;
    std::array<Convolver::Spectrum, 3> F;
    for (int j = 0; j < 3; ++j) {
      weighted_grad(g, s, j, P);
      F[j] = conv_.forward(P.data());
    }
    for (int i = 0; i < 3; ++i) {
      cf.c[si][i].resize(N);
      conv_.inverse_sum({{a_component(i, 0), &F[0]},
                         {a_component(i, 1), &F[1]},
                         {a_component(i, 2), &F[2]}},
                        cf.c[si][i].data());
    }
  }
  return cf;
}

Eigen::VectorXd CollisionOperator::apply(const Coeffs& cf, const Eigen::VectorXd& f) const {
  const auto& g = grid();
  const std::size_t N = g.size();
  const double half_inv_h = 0.5 / g.h;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(N);
  std::array<Eigen::VectorXd, 3> P;
  for (int si = 0; si < 2; ++si) {
    const int s = si == 0 ? 1 : -1;
    for (int j = 0; j < 3; ++j) weighted_grad(f, s, j, P[j]);
    for (int i = 0; i < 3; ++i) {
      const std::size_t st = g.stride(i);
      const auto& r = ratio_[si][i];
      const auto& A0 = cf.A[packed(i, 0)];
      const auto& A1 = cf.A[packed(i, 1)];
      const auto& A2 = cf.A[packed(i, 2)];
      const auto& c = cf.c[si][i];
      for (std::size_t q = 0; q < N; ++q) {
        if (r[q] == 0.0) continue;
        const double J = A0[q] * P[0][q] + A1[q] * P[1][q] + A2[q] * P[2][q] - c[q] * f[q];
        const double t = s * J * half_inv_h;
        out[q] += t;
        out[s > 0 ? q + st : q - st] -= t;
      }
    }
  }
  return out;
}

Eigen::VectorXd CollisionOperator::Q(const Eigen::VectorXd& g, const Eigen::VectorXd& f) const {
  return apply(coeffs(g), f);
}

Eigen::SparseMatrix<double> CollisionOperator::matrix(const Coeffs& cf) const {
  const auto& g = grid();
  const std::size_t N = g.size();
  const double inv_h = 1.0 / g.h;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(N * 48);
  for (int si = 0; si < 2; ++si) {
    const int s = si == 0 ? 1 : -1;
    for (int i = 0; i < 3; ++i) {
      const std::size_t sti = g.stride(i);
      for (std::size_t q = 0; q < N; ++q) {
        if (ratio_[si][i][q] == 0.0) continue;
        const std::size_t row_nb = s > 0 ? q + sti : q - sti;
        // flux J(q) = sum_k w_k f[col_k]
        std::pair<std::size_t, double> w[4];
        int nw = 0;
        double diag = -cf.c[si][i][q];
        for (int j = 0; j < 3; ++j) {
          const double rj = ratio_[si][j][q];
          if (rj == 0.0) continue;
          const double a = cf.A[packed(i, j)][q] * s * inv_h;
          diag -= a;
          const std::size_t stj = g.stride(j);
          w[nw++] = {s > 0 ? q + stj : q - stj, a * rj};
        }
        w[nw++] = {q, diag};
        const double scale = 0.5 * s * inv_h;
        for (int k = 0; k < nw; ++k) {
          trip.emplace_back(static_cast<int>(q), static_cast<int>(w[k].first), scale * w[k].second);
          trip.emplace_back(static_cast<int>(row_nb), static_cast<int>(w[k].first),
                            -scale * w[k].second);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> M(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

}  // namespace landau
