#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "landau/kernel.hpp"

namespace landau {

class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cell-centered lattice on [-vmax, vmax]^3, index (i, j, k) -> (i*n + j)*n + k.
struct VelocityGrid {
  int n = 16;
  double vmax = 6.0;
  double h = 0.75;

  VelocityGrid() = default;
  VelocityGrid(int n, double vmax);

  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  double x(int i) const { return -vmax + (i + 0.5) * h; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  std::array<int, 3> ijk(std::size_t idx) const {
    const int k = static_cast<int>(idx % n);
    const int j = static_cast<int>((idx / n) % n);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
    return {i, j, k};
  }
  Vec3 node(std::size_t idx) const {
    const auto c = ijk(idx);
    return {x(c[0]), x(c[1]), x(c[2])};
  }
  double cell_volume() const { return h * h * h; }
  // index stride along an axis
  std::size_t stride(int axis) const {
    return axis == 0 ? static_cast<std::size_t>(n) * n : (axis == 1 ? n : 1);
  }

  bool operator==(const VelocityGrid& o) const { return n == o.n && vmax == o.vmax; }
  bool operator!=(const VelocityGrid& o) const { return !(*this == o); }
};

struct GridField {
  VelocityGrid grid;
  Eigen::VectorXd data;

  GridField() = default;
  explicit GridField(const VelocityGrid& g) : grid(g), data(Eigen::VectorXd::Zero(g.size())) {}
  GridField(const VelocityGrid& g, Eigen::VectorXd d);

  static GridField sample(const VelocityGrid& g, const std::function<double(const Vec3&)>& fn);

  bool finite() const;
  GridField& operator+=(const GridField& o);
  GridField& operator-=(const GridField& o);
  GridField& operator*=(double a);
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(double s, GridField a);

void require_same_grid(const VelocityGrid& a, const VelocityGrid& b);

// h^3 sum weight(v) f(v)
double integrate(const GridField& f, const std::function<double(const Vec3&)>& weight);
double integrate(const GridField& f);

// mass outside the inner cube |v|_inf <= vmax - 2h
double boundary_mass(const GridField& f);

// fourth-order finite differences; one-sided stencils of the same order at the two
// outermost layers
GridField first_derivative(const GridField& f, int axis);
GridField second_derivative(const GridField& f, int i, int j);

enum class KernelComponent { A11, A12, A13, A22, A23, A33, B1, B2, B3, C };
KernelComponent a_component(int i, int j);

// Linear (non-periodic) convolution with kernel components sampled on the difference
// lattice, by FFT with zero padding to 2n per axis. Includes the h^3 quadrature factor.
class Convolver {
 public:
  using Spectrum = std::vector<std::complex<double>>;

  Convolver(const VelocityGrid& g, const CollisionKernel& k);
  ~Convolver();
  Convolver(const Convolver&) = delete;
  Convolver& operator=(const Convolver&) = delete;

  const VelocityGrid& grid() const { return grid_; }
  const CollisionKernel& kernel() const { return kernel_; }

  Spectrum forward(const double* field) const;
  // out = crop(IFFT(sum_t K_{c_t} * S_t))
  void inverse_sum(const std::vector<std::pair<KernelComponent, const Spectrum*>>& terms,
                   double* out) const;
  void apply(KernelComponent c, const Spectrum& s, double* out) const;

  GridField convolve(const GridField& g, KernelComponent c) const;

 private:
  VelocityGrid grid_;
  CollisionKernel kernel_;
  int m_;            // padded length per axis
  std::size_t nc_;   // complex length
  std::vector<Spectrum> kspec_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

GridField convolve_kernel(const Convolver& conv, const GridField& g, KernelComponent c);

// snapshots: 32-byte header (magic "LLAB", u32 version, u32 n, u32 0, f64 vmax, 8 zero
// bytes) then n^3 little-endian f64 values
void write_field_binary(const std::string& path, const GridField& f);
GridField read_field_binary(const std::string& path);
void write_field_csv(const std::string& path, const GridField& f);

}  // namespace landau
