#include "landau/linop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include <Eigen/SparseLU>
#include <lapacke.h>

#include "landau/matfree.hpp"
#include "landau/platform.hpp"

namespace landau {

SplitParams::SplitParams(double M_, double R_) : M(M_), R(R_) {
  if (!(M >= 0.0)) throw DomainError("split: M must be >= 0");
  if (!(R >= 1.0)) throw DomainError("split: R must be >= 1");
}

LinearisedOperator::LinearisedOperator(const VelocityGrid& g, const CollisionKernel& k,
                                       SplitParams split)
    : col_(g, k), mu_(g, col_.mu()) {
  set_split(split);
  const auto& conv = col_.convolver();
  mu_cf_ = col_.coeffs(mu_.data);
  for (int p = 0; p < 6; ++p) abar_[p] = GridField(g, mu_cf_.A[p]);
  const auto spec = conv.forward(mu_.data.data());
  for (int i = 0; i < 3; ++i) {
    bbar_[i] = GridField(g);
    conv.apply(static_cast<KernelComponent>(static_cast<int>(KernelComponent::B1) + i), spec,
               bbar_[i].data.data());
  }
  cbar_ = GridField(g);
  conv.apply(KernelComponent::C, spec, cbar_.data.data());
}

void LinearisedOperator::set_split(SplitParams s) {
  split_ = SplitParams(s.M, s.R);
  const auto& g = grid();
  chi_.resize(g.size());
  for (std::size_t q = 0; q < g.size(); ++q) chi_[q] = split_.chi_R(g.node(q));
}

void LinearisedOperator::check(const GridField& h) const { require_same_grid(grid(), h.grid); }

GridField LinearisedOperator::apply_A0(const GridField& h) const {
  check(h);
  return GridField(grid(), col_.Q(h.data, mu_.data));
}

GridField LinearisedOperator::apply_B0(const GridField& h) const {
  check(h);
  return GridField(grid(), col_.apply(mu_cf_, h.data));
}

GridField LinearisedOperator::apply_L(const GridField& h) const {
  return apply_A0(h) + apply_B0(h);
}

GridField LinearisedOperator::apply_A(const GridField& h) const {
  GridField out = apply_A0(h);
  out.data += split_.M * chi_.cwiseProduct(h.data);
  return out;
}

GridField LinearisedOperator::apply_B(const GridField& h) const {
  GridField out = apply_B0(h);
  out.data -= split_.M * chi_.cwiseProduct(h.data);
  return out;
}

Eigen::SparseMatrix<double> LinearisedOperator::B0_matrix() const { return col_.matrix(mu_cf_); }

Eigen::SparseMatrix<double> LinearisedOperator::B_matrix() const {
  Eigen::SparseMatrix<double> B = B0_matrix();
  if (split_.M != 0.0) {
    Eigen::SparseMatrix<double> D(B.rows(), B.cols());
    D.reserve(Eigen::VectorXi::Constant(B.cols(), 1));
    for (Eigen::Index q = 0; q < B.rows(); ++q)
      if (chi_[q] != 0.0) D.insert(q, q) = split_.M * chi_[q];
    B -= D;
  }
  return B;
}

namespace {

Eigen::Matrix<double, 5, 5> gram(const VelocityGrid& g) {
  Eigen::Matrix<double, 5, 5> G = Eigen::Matrix<double, 5, 5>::Zero();
  for (std::size_t q = 0; q < g.size(); ++q) {
    const Vec3 v = g.node(q);
    Eigen::Matrix<double, 5, 1> phi;
    phi << 1.0, v[0], v[1], v[2], v.squaredNorm();
    G += maxwellian(v) * phi * phi.transpose();
  }
  return G * g.cell_volume();
}

}  // namespace

double gram_condition(const VelocityGrid& g) {
  Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>> svd(gram(g));
  const auto& s = svd.singularValues();
  return s[0] / s[4];
}

Eigen::Matrix<double, 5, 1> projection_coefficients(const VelocityGrid& g, const GridField& h) {
  require_same_grid(g, h.grid);
  const auto G = gram(g);
  Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>> svd(G);
  const auto& s = svd.singularValues();
  if (!(s[0] / s[4] <= 1e8)) throw ProjectionError("projection: Gram matrix ill-conditioned, grid too coarse");
  Eigen::Matrix<double, 5, 1> b = Eigen::Matrix<double, 5, 1>::Zero();
  for (std::size_t q = 0; q < g.size(); ++q) {
    const Vec3 v = g.node(q);
    Eigen::Matrix<double, 5, 1> phi;
    phi << 1.0, v[0], v[1], v[2], v.squaredNorm();
    b += h.data[q] * phi;
  }
  b *= g.cell_volume();
  return G.ldlt().solve(b);
}

GridField projection_Pi(const LinearisedOperator& op, const GridField& h) {
  const auto& g = op.grid();
  const auto c = projection_coefficients(g, h);
  GridField out(g);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const Vec3 v = g.node(q);
    out.data[q] = op.mu().data[q] * (c[0] + c[1] * v[0] + c[2] * v[1] + c[3] * v[2] + c[4] * v.squaredNorm());
  }
  return out;
}

double inner_mu_inv(const GridField& f, const GridField& g) {
  require_same_grid(f.grid, g.grid);
  double s = 0.0;
  for (std::size_t q = 0; q < f.grid.size(); ++q) s += f.data[q] * g.data[q] / maxwellian(f.grid.node(q));
  return s * f.grid.cell_volume();
}

double dirichlet_form(const LinearisedOperator& op, const GridField& h) {
  return -inner_mu_inv(op.apply_L(h), h);
}

SymmetrizedMatrix assemble_symmetrized(const LinearisedOperator& op) {
  const auto& g = op.grid();
  const std::size_t N = g.size();
  if (N > kDenseMaxSize) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "dense assembly infeasible: n^3 = %zu exceeds %zu", N, kDenseMaxSize);
    throw FeasibilityError(buf);
  }
  const int n = g.n;
  const double h = g.h;
  const auto& col = op.collision();
  Eigen::VectorXd smu = col.mu().cwiseSqrt();

  // lattice kernel a_ij(d h) for offsets d in [-(n-1), n-1]^3
  const int L = 2 * n - 1;
  std::array<std::vector<double>, 6> tab;
  for (auto& t : tab) t.assign(static_cast<std::size_t>(L) * L * L, 0.0);
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < L; ++b)
      for (int c = 0; c < L; ++c) {
        const Vec3 z((a - n + 1) * h, (b - n + 1) * h, (c - n + 1) * h);
        const Mat3 az = eval_a(z, op.kernel());
        const std::size_t idx = (static_cast<std::size_t>(a) * L + b) * L + c;
        tab[0][idx] = az(0, 0);
        tab[1][idx] = az(0, 1);
        tab[2][idx] = az(0, 2);
        tab[3][idx] = az(1, 1);
        tab[4][idx] = az(1, 2);
        tab[5][idx] = az(2, 2);
      }

  // column v of S^s_i has entries at rows v (coefficient -s/h) and v - s e_i
  // (coefficient s rho/h); fold in h^{3/2} sqrt(mu) of the row
  struct Entry {
    int node[2];
    double coef[2];
  };
  const double h32 = std::pow(h, 1.5);
  std::array<std::array<std::vector<Entry>, 3>, 2> st;
  for (int si = 0; si < 2; ++si) {
    const int s = si == 0 ? 1 : -1;
    for (int i = 0; i < 3; ++i) {
      auto& e = st[si][i];
      e.resize(N);
      for (std::size_t v = 0; v < N; ++v) {
        Entry en{{static_cast<int>(v), static_cast<int>(v)}, {0.0, 0.0}};
        if (col.has_face(s, i, v)) en.coef[0] = -s / h * smu[v] * h32;
        const int ci = g.ijk(v)[i] - s;
        if (ci >= 0 && ci < n) {
          const std::size_t u = s > 0 ? v - g.stride(i) : v + g.stride(i);
          en.node[1] = static_cast<int>(u);
          en.coef[1] = s * std::sqrt(col.ratio(s, i, u)) / h * smu[u] * h32;
        }
        e[v] = en;
      }
    }
  }

  std::vector<std::array<int, 3>> coord(N);
  for (std::size_t v = 0; v < N; ++v) coord[v] = g.ijk(v);

  Eigen::MatrixXd T(N, N);
  for (std::size_t w = 0; w < N; ++w) {
    for (std::size_t v = 0; v < N; ++v) {
      double acc = 0.0;
      for (int si = 0; si < 2; ++si)
        for (int i = 0; i < 3; ++i) {
          const Entry& ev = st[si][i][v];
          for (int a = 0; a < 2; ++a) {
            if (ev.coef[a] == 0.0) continue;
            const auto& cv = coord[ev.node[a]];
            for (int j = 0; j < 3; ++j) {
              const Entry& ew = st[si][j][w];
              for (int b = 0; b < 2; ++b) {
                if (ew.coef[b] == 0.0) continue;
                const auto& cw = coord[ew.node[b]];
                const std::size_t d =
                    (static_cast<std::size_t>(cv[0] - cw[0] + n - 1) * L + (cv[1] - cw[1] + n - 1)) * L +
                    (cv[2] - cw[2] + n - 1);
                acc += ev.coef[a] * ew.coef[b] * tab[CollisionOperator::packed(i, j)][d];
              }
            }
          }
        }
      T(v, w) = 0.5 * acc;
    }
  }

  // local part -1/2 sum S_i^T diag(abar_ij) S_j
  std::array<std::array<Eigen::SparseMatrix<double>, 3>, 2> S;
  for (int si = 0; si < 2; ++si) {
    const int s = si == 0 ? 1 : -1;
    for (int i = 0; i < 3; ++i) {
      std::vector<Eigen::Triplet<double>> tr;
      for (std::size_t v = 0; v < N; ++v) {
        if (!col.has_face(s, i, v)) continue;
        const std::size_t u = s > 0 ? v + g.stride(i) : v - g.stride(i);
        tr.emplace_back(v, v, -s / h);
        tr.emplace_back(v, u, s * std::sqrt(col.ratio(s, i, v)) / h);
      }
      S[si][i].resize(N, N);
      S[si][i].setFromTriplets(tr.begin(), tr.end());
    }
  }
  Eigen::SparseMatrix<double> D(N, N);
  for (int si = 0; si < 2; ++si)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Eigen::VectorXd& a = op.mu_coeffs().A[CollisionOperator::packed(i, j)];
        Eigen::SparseMatrix<double> t = S[si][i].transpose() * a.asDiagonal() * S[si][j];
        D += t;
      }
  for (int k = 0; k < D.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(D, k); it; ++it)
      T(it.row(), it.col()) -= 0.5 * it.value();

  SymmetrizedMatrix out;
  const double tn = T.norm();
  double asym = 0.0;
  for (std::size_t w = 0; w < N; ++w)
    for (std::size_t v = w + 1; v < N; ++v) {
      const double d = T(v, w) - T(w, v);
      asym += 2.0 * d * d;
      const double m = 0.5 * (T(v, w) + T(w, v));
      T(v, w) = m;
      T(w, v) = m;
    }
  out.asymmetry = tn > 0.0 ? std::sqrt(asym) / tn : 0.0;
  out.T = std::move(T);
  return out;
}

void dump_triplets(const std::string& path, const Eigen::MatrixXd& T, double drop_tol) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot open " + path);
  for (Eigen::Index c = 0; c < T.cols(); ++c)
    for (Eigen::Index r = 0; r < T.rows(); ++r)
      if (std::abs(T(r, c)) > drop_tol) std::fprintf(fp, "%ld %ld %.17g\n", static_cast<long>(r), static_cast<long>(c), T(r, c));
  std::fclose(fp);
}

SpectralReport spectral_gap(SymmetrizedMatrix&& sm, int top_k, bool keep_vectors) {
  if (!blas_dgemm_ok()) throw std::runtime_error("BLAS self-check failed; set OPENBLAS_CORETYPE=Haswell");
  Eigen::MatrixXd& T = sm.T;
  const lapack_int N = static_cast<lapack_int>(T.rows());
  const bool full = top_k <= 0 || top_k >= N;
  const lapack_int k = full ? N : top_k;
  Eigen::VectorXd w(N);
  Eigen::MatrixXd Z(N, k);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
  lapack_int m = 0;
  // lower triangle and diagonal are overwritten; the strict upper triangle is kept
  const Eigen::VectorXd diag = T.diagonal();
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', full ? 'A' : 'I', 'L', N, T.data(), N, 0.0, 0.0,
                     full ? 0 : N - k + 1, full ? 0 : N, 0.0, &m, w.data(), Z.data(), N, isuppz.data());
  if (info != 0) throw std::runtime_error("dsyevr failed with info " + std::to_string(info));

  SpectralReport rep;
  rep.asymmetry = sm.asymmetry;
  rep.full_spectrum = full;
  rep.min_eigenvalue = w[0];
  // ascending from LAPACK; report descending
  rep.eigenvalues.resize(m);
  for (lapack_int i = 0; i < m; ++i) rep.eigenvalues[i] = w[m - 1 - i];
  const int nres = std::min<int>(m, full ? 40 : m);
  const auto Tu = T.triangularView<Eigen::StrictlyUpper>();
  const auto Tl = T.transpose().triangularView<Eigen::StrictlyLower>();
  for (int i = 0; i < nres; ++i) {
    const Eigen::VectorXd x = Z.col(m - 1 - i);
    const Eigen::VectorXd r = Tu * x + Tl * x + diag.cwiseProduct(x) - rep.eigenvalues[i] * x;
    rep.residuals.push_back(r.norm());
  }
  if (keep_vectors) {
    const int kv = full ? std::min<int>(m, 40) : m;
    rep.eigenvectors.resize(N, kv);
    for (int i = 0; i < kv; ++i) rep.eigenvectors.col(i) = Z.col(m - 1 - i);
  }
  if (m >= 6) {
    const double l6 = rep.eigenvalues[5];
    int cnt = 0;
    for (double e : rep.eigenvalues)
      if (std::abs(e) < kGapTol * std::abs(l6)) ++cnt;
    rep.null_count = cnt;
    rep.lambda0 = -l6;
    bool neg = true;
    for (std::size_t i = static_cast<std::size_t>(cnt); i < rep.eigenvalues.size(); ++i)
      neg = neg && rep.eigenvalues[i] < 0.0;
    rep.nonpositive = neg;
  }
  return rep;
}

SpectralReport spectral_gap(const LinearisedOperator& op, int top_k, bool keep_vectors) {
  return spectral_gap(assemble_symmetrized(op), top_k, keep_vectors);
}

namespace {

struct NormRecorder {
  const SemigroupOptions& opt;
  SemigroupTrace& tr;
  std::vector<double> initial;

  void record(double t, const GridField& h) {
    tr.times.push_back(t);
    for (std::size_t k = 0; k < opt.norms.size(); ++k) {
      const double v = norm(h, opt.norms[k]);
      tr.norms[k].push_back(v);
      if (initial.size() < opt.norms.size()) initial.push_back(v);
      if (!std::isfinite(v) || (initial[k] > 0.0 && v > opt.blowup_factor * initial[k])) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "semigroup blow-up at t = %g: %s grew to %g", t,
                      opt.norms[k].tag().c_str(), v);
        throw BlowUpError(buf);
      }
    }
    if (!h.finite()) throw BlowUpError("semigroup produced non-finite values");
    if (opt.keep_snapshots) tr.snapshots.push_back(h);
  }
};

}  // namespace

SemigroupTrace evolve_semigroup(const LinearisedOperator& op, Generator which, const GridField& h0,
                                const SemigroupOptions& opt) {
  require_same_grid(op.grid(), h0.grid);
  if (!(opt.dt > 0.0) || !(opt.t_end >= 0.0)) throw DomainError("semigroup: need dt > 0, t_end >= 0");
  const long nsteps = std::lround(opt.t_end / opt.dt);
  const long stride = std::max(1L, std::lround(opt.output_every / opt.dt));
  if (std::abs(nsteps * opt.dt - opt.t_end) > 1e-9 * std::max(1.0, opt.t_end) ||
      std::abs(stride * opt.dt - opt.output_every) > 1e-9 * std::max(1.0, opt.output_every))
    throw DomainError("semigroup: t_end and output_every must be multiples of dt");

  const auto& g = op.grid();
  const std::size_t N = g.size();
  SemigroupTrace tr;
  for (const auto& ns : opt.norms) tr.norm_tags.push_back(ns.tag());
  tr.norms.resize(opt.norms.size());
  NormRecorder rec{opt, tr, {}};

  // every stage solves (a I - tau G) x = rhs. G = B is sparse and factorised directly; for
  // G = L the sparse LU of a I - tau B0 preconditions a matrix-free BiCGSTAB.
  const bool full_L = which == Generator::L;
  const Eigen::SparseMatrix<double> Bsp = full_L ? op.B0_matrix() : op.B_matrix();
  Eigen::SparseMatrix<double> I(N, N);
  I.setIdentity();
  struct Stage {
    double a, tau;
    std::unique_ptr<SparseLUd> lu;
  };
  auto make_stage = [&](double a, double tau) {
    Stage st{a, tau, std::make_unique<SparseLUd>()};
    Eigen::SparseMatrix<double> M = a * I - tau * Bsp;
    M.makeCompressed();
    st.lu->compute(M);
    if (st.lu->info() != Eigen::Success) throw std::runtime_error("semigroup: sparse LU failed");
    return st;
  };
  auto solve = [&](const Stage& st, const Eigen::VectorXd& rhs, const Eigen::VectorXd& guess) {
    Eigen::VectorXd x = st.lu->solve(rhs);
    if (!full_L) return x;
    LinearMap map(static_cast<Eigen::Index>(N), [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
      out = st.a * in - st.tau * op.apply_L(GridField(g, in)).data;
    });
    Eigen::BiCGSTAB<LinearMap, LUPreconditioner> it;
    it.preconditioner().set(st.lu.get());
    it.setTolerance(kSemigroupSolveTol);
    it.setMaxIterations(200);
    it.compute(map);
    x = it.solveWithGuess(rhs, guess);
    if (it.info() != Eigen::Success) throw std::runtime_error("semigroup: BiCGSTAB did not converge");
    return x;
  };

  Eigen::VectorXd prev = h0.data, cur = h0.data;
  rec.record(0.0, h0);
  if (nsteps == 0) {
    tr.final_state = h0;
    return tr;
  }
  {
    // Richardson-extrapolated implicit Euler for the first step
    const Stage s1 = make_stage(1.0, opt.dt);
    const Stage s2 = make_stage(1.0, 0.5 * opt.dt);
    const Eigen::VectorXd full = solve(s1, cur, cur);
    const Eigen::VectorXd half1 = solve(s2, cur, cur);
    const Eigen::VectorXd half2 = solve(s2, half1, half1);
    cur = 2.0 * half2 - full;
  }
  if (stride == 1) rec.record(opt.dt, GridField(g, cur));
  const Stage bdf = make_stage(1.5, opt.dt);
  for (long s = 2; s <= nsteps; ++s) {
    const Eigen::VectorXd rhs = 2.0 * cur - 0.5 * prev;
    Eigen::VectorXd next = solve(bdf, rhs, 2.0 * cur - prev);
    prev = std::move(cur);
    cur = std::move(next);
    if (s % stride == 0) rec.record(s * opt.dt, GridField(g, cur));
  }
  tr.final_state = GridField(g, cur);
  return tr;
}

PhiParams default_phi_params(const Weight& w) {
  if (w.kind == Weight::Kind::Polynomial && w.p > 1.0)
    return PhiParams::make(w.p / (2.0 * (w.p - 1.0)), w.p);
  return PhiParams::make(0.0, w.p);
}

CertifyResult certify_split(const LinearisedOperator& op, const Weight& w, const PhiParams& pp,
                            double a) {
  const Abscissa ab = abscissa(w, op.kernel());
  if (ab.value && !(a > *ab.value)) throw DomainError("certify_split: target a must exceed the abscissa");
  const auto& g = op.grid();

  // phi is radial: evaluate it on the distinct lattice radii and a radial probe
  std::vector<double> radii;
  for (std::size_t q = 0; q < g.size(); ++q) radii.push_back(g.node(q).norm());
  const int nprobe = 800;
  const double rprobe = 4.0 * g.vmax;
  for (int i = 0; i <= nprobe; ++i) radii.push_back(rprobe * i / nprobe);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-12; }),
              radii.end());
  std::vector<double> ph(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i)
    ph[i] = phi(w, pp, Vec3(radii[i], 0.0, 0.0), op.kernel());

  auto margin = [&](const SplitParams& sp, double* where) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double m = ph[i] - sp.M * chi(radii[i] / sp.R) - a;
      if (m > worst) {
        worst = m;
        if (where) *where = radii[i];
      }
    }
    return worst;
  };

  CertifyResult res;
  res.worst_margin = margin(op.split(), &res.worst_radius);
  res.ok = res.worst_margin <= 0.0;
  if (res.ok) {
    res.suggested = op.split();
    res.suggested_margin = res.worst_margin;
    return res;
  }
  // geometric ladder: R = 1.25^k; smallest passing M rounded up to 2^{j/4}
  for (double R = 1.0; R <= rprobe; R *= 1.25) {
    double need = 0.0;
    bool feasible = true;
    for (std::size_t i = 0; i < radii.size() && feasible; ++i) {
      const double c = chi(radii[i] / R);
      const double ex = ph[i] - a;
      if (ex <= 0.0) continue;
      if (c == 0.0)
        feasible = false;
      else
        need = std::max(need, ex / c);
    }
    if (!feasible || !std::isfinite(need) || need > 1e12) continue;
    double M = 0.0;
    if (need > 0.0) M = std::pow(2.0, std::ceil(4.0 * std::log2(need)) / 4.0);
    while (M < need) M *= std::pow(2.0, 0.25);
    const SplitParams sp(M, R);
    const double mg = margin(sp, nullptr);
    if (mg <= 0.0) {
      res.suggested = sp;
      res.suggested_margin = mg;
      break;
    }
  }
  return res;
}

}  // namespace landau
