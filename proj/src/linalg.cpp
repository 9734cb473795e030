#include "floatsolid/linalg.hpp"

#include <cmath>

namespace floatsolid::linalg {

VectorXcd eigenvalues(const MatrixXd& a) {
  if (a.rows() != a.cols()) throw Error("eigenvalues: matrix is not square");
  if (a.rows() == 0) return VectorXcd();
  Eigen::EigenSolver<MatrixXd> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("eigenvalues: QR iteration did not converge");
  }
  return solver.eigenvalues();
}

RealSchur schur_real(const MatrixXd& a) {
  Eigen::RealSchur<MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("schur_real: QR iteration did not converge");
  }
  return {solver.matrixU(), solver.matrixT()};
}

ComplexSchur schur_complex(const MatrixXd& a) {
  Eigen::ComplexSchur<MatrixXcd> solver(a.cast<Complex>());
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("schur_complex: QR iteration did not converge");
  }
  return {solver.matrixU(), solver.matrixT()};
}

SymmetricEigen sym_eigen(const MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(s);
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("sym_eigen: Jacobi/QR iteration did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

MatrixXd matrix_sign(const MatrixXd& h, const SignOptions& options) {
  const Eigen::Index n = h.rows();
  if (n != h.cols()) throw Error("matrix_sign: matrix is not square");
  MatrixXd z = h;
  double previous_change = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.max_iterations; ++it) {
    LuFactorization<double> lu;
    try {
      lu.compute(z);
    } catch (const SingularMatrix&) {
      throw ImaginaryAxisEigenvalue("matrix_sign: singular iterate");
    }
    // |det z|^{-1/n}, in log space to stay finite for large n.
    const double log_det = lu.log_abs_determinant();
    const double c = std::exp(-log_det / static_cast<double>(n));
    MatrixXd next = 0.5 * (c * z + lu.inverse() / c);
    const double change = (next - z).norm();
    const double scale = next.norm();
    z = std::move(next);
    if (!std::isfinite(change)) break;
    if (change <= options.tol * scale) return z;
    // Rounding floor reached: quadratic convergence has stalled.
    if (change <= 1e-9 * scale && change >= 0.5 * previous_change) return z;
    previous_change = change;
  }
  throw ImaginaryAxisEigenvalue("matrix_sign: Newton iteration did not converge");
}

double norm2(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<MatrixXd> svd(a);
  return svd.singularValues()(0);
}

double norm2(const MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

double spectral_abscissa(const MatrixXd& a) {
  return eigenvalues(a).real().maxCoeff();
}

}  // namespace floatsolid::linalg
