#pragma once

// Matrix-free operator and sparse-LU preconditioner adapters for Eigen's iterative solvers.

#include <functional>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace landau {
class LinearMap;
}

namespace Eigen::internal {
template <>
struct traits<landau::LinearMap> : public Eigen::internal::traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace landau {

class LinearMap : public Eigen::EigenBase<LinearMap> {
 public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

  using Fn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;
  LinearMap(Eigen::Index n, Fn f) : n_(n), f_(std::move(f)) {}

  Eigen::Index rows() const { return n_; }
  Eigen::Index cols() const { return n_; }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const { f_(x, y); }

  template <typename Rhs>
  Eigen::Product<LinearMap, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<LinearMap, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

 private:
  Eigen::Index n_;
  Fn f_;
};

using SparseLUd = Eigen::SparseLU<Eigen::SparseMatrix<double>>;

// applies a factorised sparse approximation as the preconditioner
class LUPreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  LUPreconditioner() = default;
  void set(const SparseLUd* lu) { lu_ = lu; }

  template <typename M>
  LUPreconditioner& analyzePattern(const M&) { return *this; }
  template <typename M>
  LUPreconditioner& factorize(const M&) { return *this; }
  template <typename M>
  LUPreconditioner& compute(const M&) { return *this; }

  template <typename Rhs>
  Eigen::VectorXd solve(const Rhs& b) const {
    if (!lu_) return b;
    const Eigen::VectorXd tmp = b;
    return lu_->solve(tmp);
  }
  Eigen::ComputationInfo info() { return Eigen::Success; }

 private:
  const SparseLUd* lu_ = nullptr;
};

}  // namespace landau

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<landau::LinearMap, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<landau::LinearMap, Rhs, generic_product_impl<landau::LinearMap, Rhs>> {
  using Scalar = typename Product<landau::LinearMap, Rhs>::Scalar;
  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const landau::LinearMap& lhs, const Rhs& rhs, const Scalar& alpha) {
    const Eigen::VectorXd x = rhs;
    Eigen::VectorXd y;
    lhs.apply(x, y);
    dst += alpha * y;
  }
};
}  // namespace Eigen::internal
