#include <gtest/gtest.h>

#include <algorithm>

#include "floatsolid/linalg.hpp"

using namespace floatsolid;

TEST(Linalg, LuSolveRecoversOnesForHilbertMatrix) {
  MatrixXd h(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) h(i, j) = 1.0 / (i + j + 1);
  }
  const VectorXd x = linalg::lu_solve(h, h * VectorXd::Ones(4));
  EXPECT_LT((x - VectorXd::Ones(4)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Linalg, EigenvaluesOfCompanionMatrix) {
  MatrixXd a(2, 2);
  a << 0, 1, -2, -3;
  const VectorXcd ev = linalg::eigenvalues(a);
  std::vector<double> re = {ev(0).real(), ev(1).real()};
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -2.0, 1e-12);
  EXPECT_NEAR(re[1], -1.0, 1e-12);
  EXPECT_NEAR(std::abs(ev(0).imag()) + std::abs(ev(1).imag()), 0.0, 1e-12);
  EXPECT_NEAR(linalg::spectral_abscissa(a), -1.0, 1e-12);
}

TEST(Linalg, MatrixSignOfDiagonal) {
  const MatrixXd s = linalg::matrix_sign(Eigen::Vector2d(-2.0, 3.0).asDiagonal());
  MatrixXd expected(2, 2);
  expected << -1, 0, 0, 1;
  EXPECT_LT((s - expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Linalg, SymmetricEigenAscending) {
  MatrixXd s(2, 2);
  s << 2, 1, 1, 2;
  const linalg::SymmetricEigen e = linalg::sym_eigen(s);
  EXPECT_NEAR(e.values(0), 1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 3.0, 1e-14);
  EXPECT_LT((e.vectors.transpose() * e.vectors - MatrixXd::Identity(2, 2)).norm(), 1e-14);
}

TEST(Linalg, SchurFactorizationsReproduceMatrix) {
  MatrixXd a(3, 3);
  a << 1, 2, 0, -3, 1, 4, 0.5, 0, -2;
  const linalg::RealSchur r = linalg::schur_real(a);
  EXPECT_LT((r.q * r.t * r.q.transpose() - a).norm(), 1e-12);
  const linalg::ComplexSchur c = linalg::schur_complex(a);
  EXPECT_LT((c.u * c.t * c.u.adjoint() - a.cast<Complex>()).norm(), 1e-12);
}

TEST(Linalg, Norm2OfDiagonal) {
  EXPECT_NEAR(linalg::norm2(MatrixXd(Eigen::Vector3d(1.0, -5.0, 2.0).asDiagonal())), 5.0, 1e-13);
}
