#include <gtest/gtest.h>

#include <cmath>

#include "floatsolid/errors.hpp"
#include "floatsolid/lqr.hpp"

using namespace floatsolid;

namespace {

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

CareOptions with_method(CareMethod m) {
  CareOptions o;
  o.method = m;
  return o;
}

}  // namespace

TEST(Lqr, ScalarLyapunov) {
  EXPECT_NEAR(lyapunov_solve(scalar(-1.0), scalar(2.0))(0, 0), 1.0, 1e-15);
  EXPECT_EQ(lyapunov_solve(scalar(-1.0), scalar(0.0))(0, 0), 0.0);
}

TEST(Lqr, LyapunovResidualOnCompanionMatrix) {
  MatrixXd a(2, 2);
  a << 0, 1, -2, -3;
  const MatrixXd q = MatrixXd::Identity(2, 2);
  const MatrixXd x = lyapunov_solve(a, q);
  EXPECT_LT((a.transpose() * x + x * a + q).norm(), 1e-10);
  EXPECT_LT((x - x.transpose()).norm(), 1e-14);
}

TEST(Lqr, LyapunovRejectsUnstableMatrix) {
  EXPECT_THROW(lyapunov_solve(scalar(1.0), scalar(1.0)), UnstableClosedLoop);
}

TEST(Lqr, ScalarRiccatiBothMethods) {
  for (CareMethod m : {CareMethod::newton_kleinman, CareMethod::hamiltonian_sign}) {
    const RiccatiSolution s = care_solve(scalar(-1.0), scalar(1.0), scalar(1.0), with_method(m));
    EXPECT_NEAR(s.P(0, 0), std::sqrt(2.0) - 1.0, 1e-12) << to_string(m);
    EXPECT_NEAR(s.gain(0, 0), std::sqrt(2.0) - 1.0, 1e-12);
    EXPECT_LT(s.residual, 1e-12);
  }
}

TEST(Lqr, ZeroOutputGivesZeroRiccati) {
  const RiccatiSolution s = care_solve(scalar(-1.0), scalar(1.0), scalar(0.0));
  EXPECT_EQ(s.P(0, 0), 0.0);
  EXPECT_EQ(s.gain(0, 0), 0.0);
}

TEST(Lqr, MethodNamesRoundTrip) {
  for (CareMethod m : {CareMethod::newton_kleinman, CareMethod::hamiltonian_sign}) {
    EXPECT_EQ(care_method_from_string(to_string(m)), m);
  }
  EXPECT_THROW(care_method_from_string("schur"), ConfigError);
}

TEST(Lqr, DiscretizedSystemRiccati) {
  const Grid g = build_grid(PhysicalParams(1.0, 1.0), 20.0, 50, 5.0, 1.0);
  const SemiDiscreteSystem sys = assemble(g);
  const RiccatiSolution s = care_solve(sys);
  EXPECT_LT(s.residual, 1e-8);
  EXPECT_LT((s.P - s.P.transpose()).norm(), 1e-12 * s.P.norm());
  EXPECT_GE(s.min_eigenvalue, -1e-10 * s.P.norm());
  EXPECT_LT(s.closed_loop_abscissa, 0.0);
  const CareCrossCheck c = care_cross_check(sys);
  EXPECT_LT(c.relative_difference, 1e-6);
}

TEST(Lqr, ZeroInitialStateHasZeroCosts) {
  const Grid g = build_grid(PhysicalParams(1.0, 1.0), 10.0, 20, 3.0, 1.0);
  const SemiDiscreteSystem sys = assemble(g);
  const RiccatiSolution s = care_solve(sys);
  SimulationOptions o;
  o.T = 2.0;
  o.dt = 0.05;
  const ComparisonTable t =
      compare_feedbacks(sys, VectorXd::Zero(sys.dimension()), {0.5, 1.0}, s, o);
  ASSERT_EQ(t.rows.size(), 3u);
  for (const ComparisonRow& r : t.rows) EXPECT_EQ(r.J, 0.0);
}
