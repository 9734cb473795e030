#pragma once

// Dense kernels shared by every other module. Everything is double precision
// and single threaded so repeated runs are bit-identical.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <limits>

#include "floatsolid/errors.hpp"

namespace floatsolid {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace linalg {

/// LU factorization with partial pivoting that refuses (numerically) singular
/// input instead of silently producing inf/nan.
template <typename Scalar>
class LuFactorization {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  LuFactorization() = default;

  explicit LuFactorization(const Matrix& a) { compute(a); }

  void compute(const Matrix& a) {
    if (a.rows() != a.cols()) throw SingularMatrix("lu: matrix is not square");
    lu_.compute(a);
    const auto& lu = lu_.matrixLU();
    const double scale = a.cwiseAbs().maxCoeff();
    const double threshold = 1e-300 * (scale > 0.0 ? scale : 1.0);
    for (Eigen::Index i = 0; i < lu.rows(); ++i) {
      if (!(std::abs(lu(i, i)) > threshold)) {
        throw SingularMatrix("lu: zero pivot in column " + std::to_string(i));
      }
    }
  }

  template <typename Rhs>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Rhs::ColsAtCompileTime> solve(
      const Eigen::MatrixBase<Rhs>& b) const {
    return lu_.solve(b);
  }

  Matrix inverse() const { return lu_.inverse(); }
  Scalar determinant() const { return lu_.determinant(); }

  double log_abs_determinant() const {
    double acc = 0.0;
    const auto& lu = lu_.matrixLU();
    for (Eigen::Index i = 0; i < lu.rows(); ++i) acc += std::log(std::abs(lu(i, i)));
    return acc;
  }
  Eigen::Index size() const { return lu_.rows(); }

 private:
  Eigen::PartialPivLU<Matrix> lu_;
};

/// Solves A x = b. Throws SingularMatrix for a zero pivot.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, DerivedB::ColsAtCompileTime>
lu_solve(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  LuFactorization<Scalar> lu(a.eval());
  return lu.solve(b);
}

/// All eigenvalues of a real square matrix (Hessenberg reduction + shifted QR).
VectorXcd eigenvalues(const MatrixXd& a);

struct RealSchur {
  MatrixXd q;  ///< orthogonal
  MatrixXd t;  ///< quasi upper triangular, q^T a q = t
};
RealSchur schur_real(const MatrixXd& a);

struct ComplexSchur {
  MatrixXcd u;  ///< unitary
  MatrixXcd t;  ///< upper triangular, u^* a u = t
};
ComplexSchur schur_complex(const MatrixXd& a);

struct SymmetricEigen {
  VectorXd values;   ///< ascending
  MatrixXd vectors;  ///< orthonormal columns
};
SymmetricEigen sym_eigen(const MatrixXd& s);

struct SignOptions {
  double tol = 1e-13;
  int max_iterations = 100;
};

/// Matrix sign function by determinant-scaled Newton iteration
/// Z <- (c Z + (c Z)^{-1}) / 2. Throws ImaginaryAxisEigenvalue when the
/// iteration hits a singular iterate or fails to converge.
MatrixXd matrix_sign(const MatrixXd& h, const SignOptions& options = {});

/// Largest singular value.
double norm2(const MatrixXd& a);
double norm2(const MatrixXcd& a);

/// max Re(eig(a)).
double spectral_abscissa(const MatrixXd& a);

inline MatrixXd symmetrize(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

}  // namespace linalg
}  // namespace floatsolid
