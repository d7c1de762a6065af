#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "landau/linop.hpp"

using namespace landau;

namespace {

GridField random_perturbation(const VelocityGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridField h(g);
  for (std::size_t q = 0; q < g.size(); ++q) h.data[q] = u(rng) * maxwellian(g.node(q));
  return h;
}

GridField smooth_perturbation(const VelocityGrid& g) {
  return GridField::sample(g, [](const Vec3& v) {
    return maxwellian(v) * (v[0] * v[0] * v[0] - 3 * v[0] + 0.5 * (v[1] * v[1] - 1) * v[2] + 0.3);
  });
}

double mu_norm(const GridField& h) { return std::sqrt(inner_mu_inv(h, h)); }

const LinearisedOperator& small_op() {
  static const LinearisedOperator op(VelocityGrid(10, 4.5), CollisionKernel(1.0));
  return op;
}

}  // namespace

TEST_CASE("split parameters are validated") {
  CHECK_THROWS_AS(SplitParams(-1.0, 2.0), DomainError);
  CHECK_THROWS_AS(SplitParams(1.0, 0.5), DomainError);
  CHECK_NOTHROW(SplitParams(0.0, 1.0));
}

TEST_CASE("L = A0 + B0 = A + B, and A = A0 without cutoff") {
  LinearisedOperator op(VelocityGrid(8, 4.0), CollisionKernel(1.0));
  const GridField h = random_perturbation(op.grid(), 3);
  const GridField L = op.apply_L(h);
  const double scale = L.data.norm();
  CHECK((op.apply_A(h) - op.apply_A0(h)).data.norm() == 0.0);
  op.set_split(SplitParams(7.0, 1.5));
  CHECK((op.apply_A(h) + op.apply_B(h) - L).data.norm() <= 1e-13 * scale);
  // the cutoff only acts inside |v| < 2R
  const GridField d = op.apply_A(h) - op.apply_A0(h);
  for (std::size_t q = 0; q < op.grid().size(); ++q) {
    const double r = op.grid().node(q).norm();
    if (r >= 3.0) CHECK(d.data[q] == 0.0);
    if (r <= 1.5) CHECK(d.data[q] == doctest::Approx(7.0 * h.data[q]).epsilon(1e-14));
  }
}

TEST_CASE("sparse B matrices match the matrix-free applies") {
  LinearisedOperator op(VelocityGrid(8, 4.0), CollisionKernel(1.0), SplitParams(3.0, 1.25));
  const GridField h = random_perturbation(op.grid(), 5);
  const Eigen::VectorXd b0 = op.B0_matrix() * h.data;
  const Eigen::VectorXd b = op.B_matrix() * h.data;
  CHECK((b0 - op.apply_B0(h).data).norm() <= 1e-13 * b0.norm());
  CHECK((b - op.apply_B(h).data).norm() <= 1e-13 * b.norm());
}

TEST_CASE("linearisation of Q around the Maxwellian") {
  const auto& op = small_op();
  const auto& col = op.collision();
  const GridField h = random_perturbation(op.grid(), 7);
  const Eigen::VectorXd lin = col.Q(op.mu().data, h.data) + col.Q(h.data, op.mu().data);
  const Eigen::VectorXd L = op.apply_L(h).data;
  CHECK((lin - L).norm() <= 1e-13 * L.norm());

  // finite-difference derivative of f -> Q(f, f) at mu
  const double eps = 1e-6;
  const Eigen::VectorXd fp = op.mu().data + eps * h.data;
  const Eigen::VectorXd fm = op.mu().data - eps * h.data;
  const Eigen::VectorXd fd = (col.Q(fp, fp) - col.Q(fm, fm)) / (2 * eps);
  CHECK((fd - L).norm() <= 1e-7 * L.norm());
}

TEST_CASE("L annihilates the collision invariants and conserves moments") {
  // wide box so that the boundary flux is negligible
  const LinearisedOperator op(VelocityGrid(12, 7.0), CollisionKernel(1.0));
  const auto& g = op.grid();
  CHECK(op.apply_L(op.mu()).data.norm() == 0.0);
  // v mu and |v|^2 mu are null only up to the discretization error
  const GridField s = smooth_perturbation(g);
  const double rel = op.apply_L(s).data.norm() / s.data.norm();
  for (int k = 1; k < 5; ++k) {
    const GridField e = GridField::sample(g, [k](const Vec3& v) {
      return (k == 4 ? v.squaredNorm() : v[k - 1]) * maxwellian(v);
    });
    CHECK(op.apply_L(e).data.norm() / e.data.norm() <= 1e-3 * rel);
  }
  const GridField h = random_perturbation(g, 11);
  const GridField Lh = op.apply_L(h);
  const double hn = norm(h, NormSpec::plain(1.0));
  for (int k = 0; k < 5; ++k) {
    const double m = integrate(Lh, [k](const Vec3& v) { return k == 0 ? 1.0 : k == 4 ? v.squaredNorm() : v[k - 1]; });
    CHECK(std::abs(m) <= 1e-6 * hn);
  }
}

TEST_CASE("projection onto the null space") {
  const auto& op = small_op();
  const auto& g = op.grid();
  const GridField h = random_perturbation(g, 13) + smooth_perturbation(g);
  const GridField P = projection_Pi(op, h);
  CHECK((projection_Pi(op, P) - P).data.norm() <= 1e-12 * P.data.norm());
  CHECK((projection_Pi(op, op.mu()) - op.mu()).data.norm() <= 1e-12 * op.mu().data.norm());
  // h - Pi h is orthogonal to every collision invariant
  const GridField r = h - P;
  for (int k = 0; k < 5; ++k) {
    const GridField e = GridField::sample(g, [k](const Vec3& v) {
      const double phi = k == 0 ? 1.0 : k == 4 ? v.squaredNorm() : v[k - 1];
      return phi * maxwellian(v);
    });
    CHECK(std::abs(inner_mu_inv(r, e)) <= 1e-12 * mu_norm(h) * mu_norm(e));
  }
  CHECK(gram_condition(g) < 1e3);
  // a grid that cannot resolve the Maxwellian has a singular Gram matrix
  CHECK_THROWS_AS(projection_coefficients(VelocityGrid(4, 200.0), GridField(VelocityGrid(4, 200.0))),
                  ProjectionError);
}

TEST_CASE("Dirichlet form is nonnegative and vanishes on the Maxwellian") {
  const auto& op = small_op();
  const auto& g = op.grid();
  CHECK(std::abs(dirichlet_form(op, op.mu())) <= 1e-14);
  for (unsigned s = 0; s < 8; ++s) {
    const GridField h = random_perturbation(g, 100 + s);
    CHECK(dirichlet_form(op, h) > 0.0);
  }
  CHECK(dirichlet_form(op, smooth_perturbation(g)) > 0.0);
}

TEST_CASE("L is self-adjoint in L2(mu^{-1/2})") {
  const auto& op = small_op();
  const auto& g = op.grid();
  const auto sm = assemble_symmetrized(op);
  const double Tn = sm.T.norm();
  for (unsigned s = 0; s < 4; ++s) {
    const GridField h = random_perturbation(g, 200 + s);
    const GridField k = random_perturbation(g, 300 + s) + smooth_perturbation(g);
    const double lhs = std::abs(inner_mu_inv(op.apply_L(h), k) - inner_mu_inv(h, op.apply_L(k)));
    CHECK(lhs <= (sm.asymmetry + 1e-13) * Tn * mu_norm(h) * mu_norm(k));
  }
}

TEST_CASE("symmetrized matrix equals the conjugated operator") {
  const auto& op = small_op();
  const auto& g = op.grid();
  const auto sm = assemble_symmetrized(op);
  CHECK(sm.asymmetry < 1e-12);
  const Eigen::VectorXd smu = op.mu().data.cwiseSqrt();
  const GridField h = random_perturbation(g, 17);
  const Eigen::VectorXd gv = h.data.cwiseQuotient(smu);
  const Eigen::VectorXd Tg = sm.T * gv;
  const Eigen::VectorXd ref = op.apply_L(h).data.cwiseQuotient(smu);
  CHECK((Tg - ref).norm() <= 1e-12 * ref.norm());
  // conjugated null vectors
  const double Tn = sm.T.norm();
  CHECK((sm.T * smu).norm() <= 1e-12 * Tn * smu.norm());
  Eigen::VectorXd v1(g.size());
  for (std::size_t q = 0; q < g.size(); ++q) v1[q] = g.node(q)[0] * smu[q];
  CHECK((sm.T * v1).norm() <= 1e-4 * Tn * v1.norm());
}

TEST_CASE("dense assembly is rejected above the size limit") {
  const LinearisedOperator op(VelocityGrid(28, 6.0), CollisionKernel(1.0));
  CHECK_THROWS_AS(assemble_symmetrized(op), FeasibilityError);
}

TEST_CASE("spectral gap on a small grid") {
  const auto& op = small_op();
  const auto rep = spectral_gap(op, 0, false);
  CHECK(rep.full_spectrum);
  CHECK(rep.null_count == 5);
  CHECK(rep.lambda0 > 0.0);
  CHECK(rep.nonpositive);
  CHECK(rep.eigenvalues.size() == op.grid().size());
  for (std::size_t i = 1; i < rep.eigenvalues.size(); ++i) CHECK(rep.eigenvalues[i] <= rep.eigenvalues[i - 1]);
  // lambda0 is minus the sixth eigenvalue
  CHECK(rep.lambda0 == doctest::Approx(-rep.eigenvalues[5]));
  const double scale = std::abs(rep.eigenvalues.back());
  for (double r : rep.residuals) CHECK(r <= 1e-10 * scale);
  // frozen value from the dense eigensolve at this resolution
  CHECK(rep.lambda0 == doctest::Approx(21.51).epsilon(2e-3));

  // the top-k path agrees with the full decomposition
  const auto top = spectral_gap(op, 12, false);
  CHECK_FALSE(top.full_spectrum);
  CHECK(top.null_count == 5);
  CHECK(top.lambda0 == doctest::Approx(rep.lambda0).epsilon(1e-10));
}

TEST_CASE("semigroup: null directions are stationary") {
  const LinearisedOperator op(VelocityGrid(8, 4.0), CollisionKernel(1.0));
  SemigroupOptions o;
  o.t_end = 0.2;
  o.dt = 0.01;
  o.output_every = 0.1;
  o.norms = {NormSpec::mu_inv_half()};
  const auto tr = evolve_semigroup(op, Generator::L, op.mu(), o);
  CHECK(tr.times.size() == 3);
  CHECK((tr.final_state - op.mu()).data.norm() <= 1e-8 * op.mu().data.norm());
}

TEST_CASE("semigroup of L matches the dense exponential") {
  const LinearisedOperator op(VelocityGrid(8, 4.0), CollisionKernel(1.0));
  const auto& g = op.grid();
  const GridField h0 = smooth_perturbation(g);
  const auto sm = assemble_symmetrized(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sm.T);
  const Eigen::VectorXd smu = op.mu().data.cwiseSqrt();
  const double t = 0.5;
  const Eigen::VectorXd c = es.eigenvectors().transpose() * h0.data.cwiseQuotient(smu);
  const Eigen::VectorXd ex =
      smu.cwiseProduct(es.eigenvectors() * (es.eigenvalues() * t).array().exp().matrix().cwiseProduct(c));
  double errs[2];
  int i = 0;
  for (double dt : {1e-2, 5e-3}) {
    SemigroupOptions o;
    o.t_end = t;
    o.dt = dt;
    o.output_every = t;
    errs[i++] = (evolve_semigroup(op, Generator::L, h0, o).final_state.data - ex).norm() / ex.norm();
  }
  CHECK(errs[1] < 1e-5);
  // second order in time
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("semigroup options are validated and blow-up is caught") {
  LinearisedOperator op(VelocityGrid(6, 4.0), CollisionKernel(1.0));
  SemigroupOptions o;
  o.t_end = 0.1;
  o.dt = 0.03;
  o.output_every = 0.1;
  CHECK_THROWS_AS(evolve_semigroup(op, Generator::B, op.mu(), o), DomainError);
  o.dt = 0.01;
  o.norms = {NormSpec::plain(1.0)};
  o.blowup_factor = 0.5;
  CHECK_THROWS_AS(evolve_semigroup(op, Generator::B, random_perturbation(op.grid(), 1), o), BlowUpError);
  o.blowup_factor = 1e6;
  CHECK_NOTHROW(evolve_semigroup(op, Generator::B, random_perturbation(op.grid(), 1), o));
}

TEST_CASE("certified split makes S_B dissipative in the weighted L1 norm") {
  LinearisedOperator op(VelocityGrid(12, 6.0), CollisionKernel(1.0));
  const Weight w = Weight::polynomial(5.0, 1.0, op.kernel());
  const double a = -1.0;
  const auto cr = certify_split(op, w, default_phi_params(w), a);
  REQUIRE(cr.suggested.has_value());
  op.set_split(*cr.suggested);
  SemigroupOptions o;
  o.t_end = 0.5;
  o.dt = 2.5e-3;
  o.output_every = 0.05;
  o.norms = {NormSpec::weighted(w, 1.0)};
  const auto tr = evolve_semigroup(op, Generator::B, random_perturbation(op.grid(), 23), o);
  const double n0 = tr.norms[0].front();
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    CHECK(tr.norms[0][i] <= std::exp(a * tr.times[i]) * n0 * (1.0 + 1e-6));
}

TEST_CASE("S_B regularises L1 data into L2") {
  LinearisedOperator op(VelocityGrid(12, 6.0), CollisionKernel(1.0));
  const Weight w = Weight::polynomial(5.0, 1.0, op.kernel());
  const auto cr = certify_split(op, w, default_phi_params(w), -1.0);
  REQUIRE(cr.suggested.has_value());
  op.set_split(*cr.suggested);
  const auto& g = op.grid();
  // narrow L1-normalised bump: large in L2 at t = 0
  GridField h0 = GridField::sample(g, [](const Vec3& v) {
    return std::exp(-(v - Vec3(0.5, 0.0, 0.0)).squaredNorm() / (2 * 0.3 * 0.3));
  });
  h0.data /= integrate(h0);
  SemigroupOptions o;
  o.t_end = 0.5;
  o.dt = 2.5e-3;
  o.output_every = 0.01;
  o.norms = {NormSpec::weighted(Weight::m0(0.125), 2.0)};
  const auto tr = evolve_semigroup(op, Generator::B, h0, o);
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 1; i < tr.times.size(); ++i) {
    const double s = tr.norms[0][i] * std::pow(tr.times[i], 0.75);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  CHECK(std::isfinite(hi));
  CHECK(hi <= 10.0 * norm(h0, NormSpec::weighted(Weight::m0(0.125), 1.0)));
}

TEST_CASE("certify_split examples") {
  const LinearisedOperator op(VelocityGrid(10, 5.0), CollisionKernel(1.0));
  const Weight w = Weight::polynomial(5.0, 1.0, op.kernel());
  const PhiParams pp = default_phi_params(w);
  CHECK(pp.theta == 0.0);

  // no cutoff: phi(0) exceeds a = -1
  const auto bare = certify_split(op, w, pp, -1.0);
  CHECK_FALSE(bare.ok);
  CHECK(bare.worst_margin > 0.0);
  CHECK(bare.worst_radius < 1.0);
  REQUIRE(bare.suggested.has_value());
  CHECK(bare.suggested->M > 0.0);
  CHECK(bare.suggested_margin <= 0.0);

  // the suggested pair certifies when installed
  LinearisedOperator op2(op.grid(), op.kernel(), *bare.suggested);
  const auto again = certify_split(op2, w, pp, -1.0);
  CHECK(again.ok);

  // gamma = 0: the far field sits at -2k
  const LinearisedOperator op0(VelocityGrid(10, 5.0), CollisionKernel(0.0));
  const auto pass = certify_split(op0, w, pp, -2 * 5.0 + 0.5);
  CHECK(pass.suggested.has_value());
  CHECK_THROWS_AS(certify_split(op0, w, pp, -2 * 5.0 - 0.5), DomainError);
  CHECK_THROWS_AS(certify_split(op0, w, pp, -10.0), DomainError);
}

TEST_CASE("default phi parameters") {
  const auto pp = default_phi_params(Weight::polynomial(5.0, 2.0, CollisionKernel(1.0)));
  CHECK(pp.theta == doctest::Approx(1.0));
  CHECK(default_phi_params(Weight::stretched_exp(0.2, 2.0, 2.0)).theta == 0.0);
}
