#include "landau/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "landau/matfree.hpp"

namespace landau {

GridField apply_Q(const CollisionOperator& col, const GridField& g, const GridField& h) {
  require_same_grid(col.grid(), g.grid);
  require_same_grid(col.grid(), h.grid);
  return GridField(col.grid(), col.Q(g.data, h.data));
}

void EvolveConfig::validate() const {
  if (!(t_end >= 0.0)) throw DomainError("evolve: t_end must be >= 0");
  if (!(output_every > 0.0)) throw DomainError("evolve: output_every must be > 0");
  if (dt && !(*dt > 0.0)) throw DomainError("evolve: dt must be > 0");
  if (!(eps >= 0.0)) throw DomainError("evolve: eps must be >= 0");
  if (!(floor > 0.0)) throw DomainError("evolve: floor must be > 0");
  if (!(blowup_factor > 0.0)) throw DomainError("evolve: blowup_factor must be > 0");
  if (!(solver_tol > 0.0)) throw DomainError("evolve: solver_tol must be > 0");
}

double EvolveConfig::step() const {
  if (dt) return *dt;
  const double m = std::ceil(output_every / kAutoDt - 1e-9);
  return output_every / m;
}

namespace {

Eigen::Matrix<double, 5, 1> invariants(const Vec3& v) {
  Eigen::Matrix<double, 5, 1> phi;
  phi << 1.0, v[0], v[1], v[2], v.squaredNorm();
  return phi;
}

double floor_of(const GridField& f, double floor) {
  const double mx = f.data.maxCoeff();
  return mx > 0.0 ? floor * mx : floor;
}

// log mu(v) for the standard Maxwellian
double log_mu(const Vec3& v) { return -0.5 * v.squaredNorm() - 1.5 * std::log(2.0 * M_PI); }

}  // namespace

GridField anisotropic_gaussian(const VelocityGrid& g, const Vec3& T) {
  if (!(T.minCoeff() > 0.0)) throw DomainError("anisotropic_gaussian: temperatures must be > 0");
  // targets are the lattice moments of the sampled Maxwellian, which is the discrete equilibrium
  const GridField mu = GridField::sample(g, [](const Vec3& v) { return maxwellian(v); });
  const double mass = integrate(mu);
  const double energy = integrate(mu, [](const Vec3& v) { return v.squaredNorm(); }) * T.sum() / 3.0;
  auto sample = [&](double s) {
    GridField f = GridField::sample(g, [&](const Vec3& v) {
      double e = 0.0;
      for (int i = 0; i < 3; ++i) e += v[i] * v[i] / (2.0 * s * T[i]);
      return std::exp(-e);
    });
    f.data *= mass / integrate(f);
    return f;
  };
  auto excess = [&](double s) { return integrate(sample(s), [](const Vec3& v) { return v.squaredNorm(); }) - energy; };
  boost::uintmax_t iters = 200;
  const auto br = boost::math::tools::toms748_solve(excess, 0.5, 2.0, boost::math::tools::eps_tolerance<double>(50), iters);
  return sample(0.5 * (br.first + br.second));
}

std::pair<Vec3, double> equilibrium_parameters(const GridField& f) {
  const auto m = moments(f);
  if (!(m[0] > 0.0)) throw DomainError("equilibrium_parameters: mass must be > 0");
  const Vec3 u = Vec3(m[1], m[2], m[3]) / m[0];
  const double e = (m[4] / m[0] - u.squaredNorm()) / 3.0;
  // temperature relative to the lattice second moment of the sampled standard Maxwellian
  const GridField mu = GridField::sample(f.grid, [](const Vec3& v) { return maxwellian(v); });
  const double e_mu = integrate(mu, [](const Vec3& v) { return v.squaredNorm(); }) / (3.0 * integrate(mu));
  double T = e / e_mu;
  if (u.norm() < 1e-9 && std::abs(T - 1.0) < 1e-9) T = 1.0;
  return {u.norm() < 1e-9 ? Vec3::Zero().eval() : u, T};
}

Eigen::Matrix<double, 5, 1> moments(const GridField& f) {
  const auto& g = f.grid;
  Eigen::Matrix<double, 5, 1> m = Eigen::Matrix<double, 5, 1>::Zero();
  for (std::size_t q = 0; q < g.size(); ++q) m += f.data[q] * invariants(g.node(q));
  return m * g.cell_volume();
}

void conserve_project(const GridField& mu, GridField& f, const Eigen::Matrix<double, 5, 1>& target) {
  require_same_grid(mu.grid, f.grid);
  const auto& g = f.grid;
  Eigen::Matrix<double, 5, 5> G = Eigen::Matrix<double, 5, 5>::Zero();
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto phi = invariants(g.node(q));
    G += mu.data[q] * phi * phi.transpose();
  }
  G *= g.cell_volume();
  const Eigen::Matrix<double, 5, 1> c = G.ldlt().solve(target - moments(f));
  for (std::size_t q = 0; q < g.size(); ++q) f.data[q] += mu.data[q] * c.dot(invariants(g.node(q)));
}

double entropy(const GridField& f, double floor) {
  const double fl = floor_of(f, floor);
  double s = 0.0;
  for (Eigen::Index q = 0; q < f.data.size(); ++q) {
    const double m = std::max(f.data[q], fl);
    s += m * std::log(m);
  }
  return s * f.grid.cell_volume();
}

namespace {

// (1+x) log(1+x) - x without cancellation for small x
double xlogx_excess(double x) {
  if (std::abs(x) < 1e-2) {
    // sum_{k>=2} (-x)^k / (k (k-1))
    double term = x * x, s = 0.0;
    for (int k = 2; k <= 8; ++k) {
      s += (k % 2 == 0 ? term : -term) / (k * (k - 1));
      term *= x;
    }
    return s;
  }
  return (1.0 + x) * std::log1p(x) - x;
}

}  // namespace

// summed as f log(f/mu) - f + mu, termwise nonnegative; equals int f log(f/mu) when the
// masses agree and stays accurate down to H ~ ||f - mu||^2 near equilibrium
double relative_entropy(const GridField& f, double floor) {
  const double fl = floor_of(f, floor);
  const auto& g = f.grid;
  double s = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double m = std::max(f.data[q], fl);
    const double lm = log_mu(g.node(q));
    const double x = m * std::exp(-lm) - 1.0;
    if (x > -0.5 && x < 1.0)
      s += std::exp(lm) * xlogx_excess(x);
    else
      s += m * (std::log(m) - lm) - m + std::exp(lm);
  }
  return s * g.cell_volume();
}

double dissipation(const CollisionOperator& col, const GridField& f, double floor) {
  require_same_grid(col.grid(), f.grid);
  const double fl = floor_of(f, floor);
  const Eigen::VectorXd Qf = col.Q(f.data, f.data);
  double s = 0.0;
  for (Eigen::Index q = 0; q < Qf.size(); ++q) s += Qf[q] * (1.0 + std::log(std::max(f.data[q], fl)));
  return -s * f.grid.cell_volume();
}

CkpResult ckp_check(const GridField& f, double floor) {
  const double mass = integrate(f);
  if (std::abs(mass - 1.0) > 1e-6) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "ckp_check: mass %.9g is not 1", mass);
    throw DomainError(buf);
  }
  const auto& g = f.grid;
  double l1 = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) l1 += std::abs(f.data[q] - maxwellian(g.node(q)));
  CkpResult r;
  r.lhs = l1 * g.cell_volume();
  r.rhs = std::sqrt(2.0 * std::max(0.0, relative_entropy(f, floor)));
  r.ok = r.lhs <= r.rhs * (1.0 + 1e-3);
  return r;
}

double bilinear_estimate_check(const CollisionOperator& col, const GridField& g, const GridField& h,
                               const NormSpec& m) {
  const double gam = col.kernel().gamma;
  const double num = norm(apply_Q(col, g, h), m);
  const double den = norm(g, NormSpec::japanese_pow(gam + 2.0, 1.0)) * hessian_norm(h, m.times_japanese(gam + 2.0)) +
                     norm(g, NormSpec::japanese_pow(gam, 1.0)) * norm(h, m.times_japanese(gam));
  if (!(den > 0.0)) throw DomainError("bilinear_estimate_check: zero denominator");
  return num / den;
}

EvolutionTrace evolve(const CollisionOperator& col, const GridField& f0, const EvolveConfig& cfg) {
  cfg.validate();
  require_same_grid(col.grid(), f0.grid);
  if (!f0.finite()) throw DomainError("evolve: f0 is not finite");
  if (f0.data.minCoeff() < -1e-8 * f0.data.maxCoeff()) throw DomainError("evolve: f0 must be nonnegative");

  const double dt = cfg.step();
  const long nsteps = std::lround(cfg.t_end / dt);
  const long stride = std::max(1L, std::lround(cfg.output_every / dt));
  if (std::abs(nsteps * dt - cfg.t_end) > 1e-9 * std::max(1.0, cfg.t_end) ||
      std::abs(stride * dt - cfg.output_every) > 1e-9 * std::max(1.0, cfg.output_every))
    throw DomainError("evolve: t_end and output_every must be multiples of dt");

  const auto& g = f0.grid;
  const std::size_t N = g.size();
  const auto target = moments(f0);
  // the scheme is built on the Maxwellian f0 relaxes to
  const auto [u_ref, T_ref] = equilibrium_parameters(f0);
  std::optional<CollisionOperator> own;
  if ((col.reference_velocity() - u_ref).norm() > 1e-9 || std::abs(col.reference_temperature() - T_ref) > 1e-9)
    own.emplace(g, col.kernel(), u_ref, T_ref);
  const CollisionOperator& C = own ? *own : col;
  const GridField mu = GridField::sample(g, [](const Vec3& v) { return maxwellian(v); });
  const GridField mu_ref(g, C.mu());
  const double mass0 = f0.data.cwiseAbs().sum() * g.cell_volume();

  EvolutionTrace tr;
  tr.dt = dt;
  tr.reference_velocity = u_ref;
  tr.reference_temperature = T_ref;
  for (const auto& ns : cfg.norms) tr.norm_tags.push_back(ns.tag());
  tr.norms.resize(cfg.norms.size());
  tr.min_ratio = f0.data.minCoeff() / f0.data.maxCoeff();

  auto record = [&](double t, const GridField& f) {
    const auto m = moments(f);
    tr.times.push_back(t);
    tr.mass.push_back(m[0]);
    tr.velocity.push_back(Vec3(m[1], m[2], m[3]) / m[0]);
    tr.energy.push_back(m[4]);
    tr.entropy.push_back(entropy(f, cfg.floor));
    tr.relative_entropy.push_back(relative_entropy(f, cfg.floor));
    tr.dissipation.push_back(dissipation(C, f, cfg.floor));
    const GridField h = f - mu;
    for (std::size_t k = 0; k < cfg.norms.size(); ++k) tr.norms[k].push_back(norm(h, cfg.norms[k]));
    if (cfg.keep_snapshots) tr.snapshots.push_back(f);
  };
  auto check = [&](double t, const Eigen::VectorXd& f) {
    const double mx = f.maxCoeff(), mn = f.minCoeff();
    if (!f.allFinite() || f.cwiseAbs().sum() * g.cell_volume() > cfg.blowup_factor * mass0) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "evolve: blow-up at t = %g", t);
      throw BlowUpError(buf);
    }
    tr.min_ratio = std::min(tr.min_ratio, mn / mx);
    if (mn < -1e-8 * mx) tr.negativity_flagged = true;
  };

  // every stage solves (a I - tau Q(gt, .)) x = rhs
  Eigen::SparseMatrix<double> I(N, N);
  I.setIdentity();
  const Eigen::SparseMatrix<double> B0 = C.matrix(C.coeffs(C.mu()));
  SparseLUd lu;
  auto factor = [&](const Eigen::SparseMatrix<double>& M) {
    lu.compute(M);
    if (lu.info() != Eigen::Success) throw std::runtime_error("evolve: sparse LU failed");
  };
  {
    Eigen::SparseMatrix<double> M = 1.5 * I - dt * B0;
    M.makeCompressed();
    factor(M);
  }
  auto solve = [&](double a, double tau, const Eigen::VectorXd& gt, const Eigen::VectorXd& rhs,
                   const Eigen::VectorXd& guess) {
    Eigen::SparseMatrix<double> M = a * I - tau * C.matrix(C.coeffs(gt));
    M.makeCompressed();
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, LUPreconditioner> it;
    it.preconditioner().set(&lu);
    it.setTolerance(cfg.solver_tol);
    it.setMaxIterations(500);
    it.compute(M);
    Eigen::VectorXd x = it.solveWithGuess(rhs, guess);
    if (it.info() != Eigen::Success) throw std::runtime_error("evolve: BiCGSTAB did not converge");
    tr.max_solver_iterations = std::max(tr.max_solver_iterations, static_cast<int>(it.iterations()));
    // far from equilibrium the linearisation around mu is a poor preconditioner: refresh it
    if (it.iterations() > 25 && a == 1.5) factor(M);
    return x;
  };
  auto finish_step = [&](Eigen::VectorXd& f, double t) {
    if (cfg.conserve_project) {
      GridField tmp(g, std::move(f));
      conserve_project(mu_ref, tmp, target);
      f = std::move(tmp.data);
    }
    check(t, f);
  };

  Eigen::VectorXd prev = f0.data, cur = f0.data;
  record(0.0, f0);
  if (nsteps > 0) {
    // Richardson-extrapolated linearly implicit Euler for the first step
    const Eigen::VectorXd full = solve(1.0, dt, cur, cur, cur);
    const Eigen::VectorXd half1 = solve(1.0, 0.5 * dt, cur, cur, cur);
    const Eigen::VectorXd half2 = solve(1.0, 0.5 * dt, half1, half1, half1);
    cur = 2.0 * half2 - full;
    finish_step(cur, dt);
    if (stride == 1) record(dt, GridField(g, cur));
  }
  for (long s = 2; s <= nsteps; ++s) {
    const Eigen::VectorXd ext = 2.0 * cur - prev;
    Eigen::VectorXd next = solve(1.5, dt, ext, 2.0 * cur - 0.5 * prev, ext);
    finish_step(next, s * dt);
    prev = std::move(cur);
    cur = std::move(next);
    if (s % stride == 0) record(s * dt, GridField(g, cur));
  }
  tr.final_state = GridField(g, cur);
  return tr;
}

void EvolutionTrace::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "t,mass,ux,uy,uz,energy,H,Hrel,D";
  for (const auto& t : norm_tags) os << ',' << t;
  os << '\n';
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
  };
  for (std::size_t i = 0; i < times.size(); ++i) {
    put(times[i]);
    for (double x : {mass[i], velocity[i][0], velocity[i][1], velocity[i][2], energy[i], entropy[i],
                     relative_entropy[i], dissipation[i]}) {
      os << ',';
      put(x);
    }
    for (const auto& n : norms) {
      os << ',';
      put(n[i]);
    }
    os << '\n';
  }
}

double duhamel_residual(const LinearisedOperator& op, const EvolutionTrace& tr, double k,
                        double semigroup_dt) {
  const auto& snaps = tr.snapshots;
  if (snaps.size() < 2 || snaps.size() != tr.times.size())
    throw DomainError("duhamel_residual: need snapshots at every output time");
  const double span = tr.times[1] - tr.times[0];
  for (std::size_t i = 1; i < tr.times.size(); ++i)
    if (std::abs(tr.times[i] - tr.times[i - 1] - span) > 1e-9 * span)
      throw DomainError("duhamel_residual: snapshots must be uniformly spaced");
  const auto& col = op.collision();
  const GridField& mu = op.mu();

  // Horner form: y <- S_L(span) y + w_i Q(h_i, h_i), starting from h_0
  SemigroupOptions so;
  so.t_end = span;
  so.dt = semigroup_dt;
  so.output_every = span;
  const std::size_t last = snaps.size() - 1;
  auto qterm = [&](std::size_t i) {
    const GridField h = snaps[i] - mu;
    const double w = (i == 0 || i == last) ? 0.5 * span : span;
    return w * apply_Q(col, h, h);
  };
  GridField y = (snaps[0] - mu) + qterm(0);
  for (std::size_t i = 1; i <= last; ++i) y = evolve_semigroup(op, Generator::L, y, so).final_state + qterm(i);
  return norm((snaps[last] - mu) - y, NormSpec::japanese_pow(k, 1.0));
}

double entropy_dissipation_ratio(const EvolutionTrace& tr, double gamma, double h_min) {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double H = tr.relative_entropy[i];
    if (!(H > h_min)) continue;
    r = std::min(r, tr.dissipation[i] / std::min(H, std::pow(H, 1.0 + 0.5 * gamma)));
  }
  return r;
}

}  // namespace landau
