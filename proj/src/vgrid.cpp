#include "landau/vgrid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <fftw3.h>

namespace landau {

static_assert(std::endian::native == std::endian::little, "field IO assumes a little-endian host");

VelocityGrid::VelocityGrid(int n_, double vmax_) : n(n_), vmax(vmax_) {
  if (n < 4) throw DomainError("grid: n must be >= 4");
  if (!(vmax > 0.0) || !std::isfinite(vmax)) throw DomainError("grid: vmax must be positive");
  h = 2.0 * vmax / n;
}

GridField::GridField(const VelocityGrid& g, Eigen::VectorXd d) : grid(g), data(std::move(d)) {
  if (static_cast<std::size_t>(data.size()) != g.size())
    throw GridError("field size does not match grid");
}

GridField GridField::sample(const VelocityGrid& g,
                            const std::function<double(const Vec3&)>& fn) {
  GridField f(g);
  for (std::size_t q = 0; q < g.size(); ++q) f.data[q] = fn(g.node(q));
  return f;
}

bool GridField::finite() const { return data.allFinite(); }

void require_same_grid(const VelocityGrid& a, const VelocityGrid& b) {
  if (a != b) throw GridError("grid mismatch");
}

GridField& GridField::operator+=(const GridField& o) {
  require_same_grid(grid, o.grid);
  data += o.data;
  return *this;
}

GridField& GridField::operator-=(const GridField& o) {
  require_same_grid(grid, o.grid);
  data -= o.data;
  return *this;
}

GridField& GridField::operator*=(double a) {
  data *= a;
  return *this;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(double s, GridField a) { return a *= s; }

double integrate(const GridField& f, const std::function<double(const Vec3&)>& weight) {
  const auto& g = f.grid;
  double s = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) s += weight(g.node(q)) * f.data[q];
  return s * g.cell_volume();
}

double integrate(const GridField& f) { return f.data.sum() * f.grid.cell_volume(); }

double boundary_mass(const GridField& f) {
  const auto& g = f.grid;
  double s = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto c = g.ijk(q);
    bool edge = false;
    for (int a = 0; a < 3; ++a) edge = edge || c[a] < 2 || c[a] > g.n - 3;
    if (edge) s += std::abs(f.data[q]);
  }
  return s * g.cell_volume();
}

namespace {

// d/dx at position i of a line of length n, fourth order
double d1_line(const double* p, std::size_t st, int i, int n) {
  auto at = [&](int k) { return p[static_cast<std::size_t>(k) * st]; };
  if (i >= 2 && i <= n - 3)
    return (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / 12.0;
  if (i == 0) return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / 12.0;
  if (i == 1) return (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / 12.0;
  const int m = n - 1;
  if (i == m)
    return -(-25.0 * at(m) + 48.0 * at(m - 1) - 36.0 * at(m - 2) + 16.0 * at(m - 3) - 3.0 * at(m - 4)) / 12.0;
  return -(-3.0 * at(m) - 10.0 * at(m - 1) + 18.0 * at(m - 2) - 6.0 * at(m - 3) + at(m - 4)) / 12.0;
}

double d2_line(const double* p, std::size_t st, int i, int n) {
  auto at = [&](int k) { return p[static_cast<std::size_t>(k) * st]; };
  if (i >= 2 && i <= n - 3)
    return (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) + 16.0 * at(i + 1) - at(i + 2)) / 12.0;
  auto one_sided = [&](auto get) {
    // rows 0 and 1 of the six-point one-sided stencil
    return std::pair{
        (45.0 * get(0) - 154.0 * get(1) + 214.0 * get(2) - 156.0 * get(3) + 61.0 * get(4) - 10.0 * get(5)) / 12.0,
        (10.0 * get(0) - 15.0 * get(1) - 4.0 * get(2) + 14.0 * get(3) - 6.0 * get(4) + get(5)) / 12.0};
  };
  if (i <= 1) {
    auto r = one_sided([&](int k) { return at(k); });
    return i == 0 ? r.first : r.second;
  }
  auto r = one_sided([&](int k) { return at(n - 1 - k); });
  return i == n - 1 ? r.first : r.second;
}

GridField apply_line(const GridField& f, int axis,
                     double (*op)(const double*, std::size_t, int, int)) {
  const auto& g = f.grid;
  GridField out(g);
  const std::size_t st = g.stride(axis);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const int i = g.ijk(q)[axis];
    const double* base = f.data.data() + q - static_cast<std::size_t>(i) * st;
    out.data[q] = op(base, st, i, g.n);
  }
  return out;
}

}  // namespace

GridField first_derivative(const GridField& f, int axis) {
  if (axis < 0 || axis > 2) throw DomainError("axis must be 0, 1 or 2");
  GridField out = apply_line(f, axis, d1_line);
  out.data /= f.grid.h;
  return out;
}

GridField second_derivative(const GridField& f, int i, int j) {
  if (i < 0 || i > 2 || j < 0 || j > 2) throw DomainError("axis must be 0, 1 or 2");
  if (f.grid.n < 6) throw DomainError("second_derivative needs n >= 6");
  if (i == j) {
    GridField out = apply_line(f, i, d2_line);
    out.data /= f.grid.h * f.grid.h;
    return out;
  }
  return first_derivative(first_derivative(f, i), j);
}

KernelComponent a_component(int i, int j) {
  if (i > j) std::swap(i, j);
  static const KernelComponent t[3][3] = {
      {KernelComponent::A11, KernelComponent::A12, KernelComponent::A13},
      {KernelComponent::A12, KernelComponent::A22, KernelComponent::A23},
      {KernelComponent::A13, KernelComponent::A23, KernelComponent::A33}};
  return t[i][j];
}

struct Convolver::Plans {
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  ~Plans() {
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(cplx);
  }
};

namespace {

double component_value(KernelComponent c, const Vec3& z, const CollisionKernel& k) {
  const int ci = static_cast<int>(c);
  if (ci <= 5) {
    static const int ij[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
    const double r2 = z.squaredNorm();
    if (r2 == 0.0) return 0.0;
    const double pr = pow_abs(std::sqrt(r2), k.gamma);
    const int i = ij[ci][0], j = ij[ci][1];
    return pr * ((i == j ? r2 : 0.0) - z[i] * z[j]);
  }
  if (ci <= 8) return eval_b(z, k)[ci - 6];
  return eval_c(z, k);
}

}  // namespace

Convolver::Convolver(const VelocityGrid& g, const CollisionKernel& k)
    : grid_(g), kernel_(k), m_(2 * g.n), plans_(std::make_unique<Plans>()) {
  const std::size_t m = m_;
  const std::size_t nr = m * m * m;
  nc_ = m * m * (m / 2 + 1);
  plans_->real = fftw_alloc_real(nr);
  plans_->cplx = fftw_alloc_complex(nc_);
  // FFTW_ESTIMATE keeps plan choice, and hence rounding, identical across runs
  plans_->fwd = fftw_plan_dft_r2c_3d(m_, m_, m_, plans_->real, plans_->cplx, FFTW_ESTIMATE);
  plans_->inv = fftw_plan_dft_c2r_3d(m_, m_, m_, plans_->cplx, plans_->real, FFTW_ESTIMATE);
  if (!plans_->fwd || !plans_->inv) throw GridError("FFTW planning failed");

  const int n = g.n;
  auto offset = [&](std::size_t a) -> int {
    const int ai = static_cast<int>(a);
    if (ai < n) return ai;
    if (ai == n) return 0x7fffffff;
    return ai - m_;
  };
  const double h3 = g.cell_volume();
  kspec_.resize(10);
  for (int c = 0; c < 10; ++c) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t e = 0; e < m; ++e) {
          const int da = offset(a), db = offset(b), de = offset(e);
          double val = 0.0;
          if (da != 0x7fffffff && db != 0x7fffffff && de != 0x7fffffff) {
            const Vec3 z(da * g.h, db * g.h, de * g.h);
            val = h3 * component_value(static_cast<KernelComponent>(c), z, k);
          }
          plans_->real[(a * m + b) * m + e] = val;
        }
    fftw_execute(plans_->fwd);
    kspec_[c].resize(nc_);
    std::memcpy(static_cast<void*>(kspec_[c].data()), plans_->cplx, nc_ * sizeof(fftw_complex));
  }
}

Convolver::~Convolver() = default;

Convolver::Spectrum Convolver::forward(const double* field) const {
  const std::size_t m = m_, n = grid_.n;
  double* r = plans_->real;
  std::memset(r, 0, m * m * m * sizeof(double));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      std::memcpy(r + (a * m + b) * m, field + (a * n + b) * n, n * sizeof(double));
  fftw_execute(plans_->fwd);
  Spectrum s(nc_);
  std::memcpy(static_cast<void*>(s.data()), plans_->cplx, nc_ * sizeof(fftw_complex));
  return s;
}

void Convolver::inverse_sum(
    const std::vector<std::pair<KernelComponent, const Spectrum*>>& terms, double* out) const {
  auto* c = reinterpret_cast<std::complex<double>*>(plans_->cplx);
  std::fill(c, c + nc_, std::complex<double>(0.0, 0.0));
  for (const auto& [comp, spec] : terms) {
    const auto& k = kspec_[static_cast<int>(comp)];
    const auto& s = *spec;
    for (std::size_t q = 0; q < nc_; ++q) c[q] += k[q] * s[q];
  }
  fftw_execute(plans_->inv);
  const std::size_t m = m_, n = grid_.n;
  const double scale = 1.0 / static_cast<double>(m * m * m);
  const double* r = plans_->real;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t e = 0; e < n; ++e) out[(a * n + b) * n + e] = r[(a * m + b) * m + e] * scale;
}

void Convolver::apply(KernelComponent c, const Spectrum& s, double* out) const {
  inverse_sum({{c, &s}}, out);
}

GridField Convolver::convolve(const GridField& g, KernelComponent c) const {
  require_same_grid(grid_, g.grid);
  GridField out(grid_);
  const Spectrum s = forward(g.data.data());
  apply(c, s, out.data.data());
  return out;
}

GridField convolve_kernel(const Convolver& conv, const GridField& g, KernelComponent c) {
  return conv.convolve(g, c);
}

namespace {
constexpr char kMagic[4] = {'L', 'L', 'A', 'B'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_field_binary(const std::string& path, const GridField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  unsigned char hdr[32] = {};
  std::memcpy(hdr, kMagic, 4);
  const std::uint32_t n = static_cast<std::uint32_t>(f.grid.n);
  std::memcpy(hdr + 4, &kVersion, 4);
  std::memcpy(hdr + 8, &n, 4);
  std::memcpy(hdr + 16, &f.grid.vmax, 8);
  os.write(reinterpret_cast<const char*>(hdr), 32);
  os.write(reinterpret_cast<const char*>(f.data.data()),
           static_cast<std::streamsize>(f.data.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write failed: " + path);
}

GridField read_field_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  unsigned char hdr[32];
  is.read(reinterpret_cast<char*>(hdr), 32);
  if (!is || std::memcmp(hdr, kMagic, 4) != 0) throw GridError("not a field snapshot: " + path);
  std::uint32_t ver = 0, n = 0;
  double vmax = 0.0;
  std::memcpy(&ver, hdr + 4, 4);
  std::memcpy(&n, hdr + 8, 4);
  std::memcpy(&vmax, hdr + 16, 8);
  if (ver != kVersion) throw GridError("unsupported snapshot version");
  GridField f(VelocityGrid(static_cast<int>(n), vmax));
  is.read(reinterpret_cast<char*>(f.data.data()),
          static_cast<std::streamsize>(f.data.size() * sizeof(double)));
  if (!is) throw GridError("truncated snapshot: " + path);
  return f;
}

void write_field_csv(const std::string& path, const GridField& f) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot open " + path + " for writing");
  std::fprintf(fp, "v1,v2,v3,value\n");
  for (std::size_t q = 0; q < f.grid.size(); ++q) {
    const Vec3 v = f.grid.node(q);
    std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g\n", v[0], v[1], v[2], f.data[q]);
  }
  std::fclose(fp);
}

}  // namespace landau
