#include <gtest/gtest.h>

#include <cmath>

#include "floatsolid/discretization.hpp"
#include "floatsolid/errors.hpp"

using namespace floatsolid;

namespace {

const PhysicalParams kUnit(1.0, 1.0);

Grid small_grid() { return build_grid(kUnit, 5.0, 5, 0.0, 0.0); }

double relative(const MatrixXd& x, const MatrixXd& ref) { return (x - ref).norm() / ref.norm(); }

}  // namespace

TEST(Discretization, GridNodesAndSpacing) {
  const Grid g = small_grid();
  EXPECT_DOUBLE_EQ(g.spacing(), 1.0);
  VectorXd left(5), right(5);
  left << -5, -4, -3, -2, -1;
  right << 1, 2, 3, 4, 5;
  EXPECT_LT((g.left_nodes() - left).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((g.right_nodes() - right).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(g.right_midpoints()(0), 1.5, 1e-15);
}

TEST(Discretization, SpongeProfile) {
  const Grid g = build_grid(kUnit, 5.0, 5, 2.0, 2.0);
  EXPECT_NEAR(g.sigma(5.0), 2.0, 1e-15);
  EXPECT_NEAR(g.sigma(-5.0), 2.0, 1e-15);
  EXPECT_EQ(g.sigma(2.0), 0.0);
  for (double x : {-5.0, -3.5, 1.0, 4.0, 5.0}) EXPECT_EQ(small_grid().sigma(x), 0.0);
}

TEST(Discretization, InvalidGeometryIsRejected) {
  EXPECT_THROW(build_grid(kUnit, 0.5, 10, 0.0, 0.0), InvalidGeometry);
  EXPECT_THROW(build_grid(kUnit, 5.0, kMinNodesPerSide - 1, 0.0, 0.0), InvalidGeometry);
  EXPECT_THROW(build_grid(kUnit, 5.0, 10, 4.0, 1.0), InvalidGeometry);
}

TEST(Discretization, FlattenRoundTrip) {
  const Grid g = build_grid(kUnit, 6.0, 9, 1.0, 1.0);
  const Layout lay{g.n_side()};
  EXPECT_EQ(lay.dimension(), 4 * 9 - 3);
  const VectorXd z = VectorXd::LinSpaced(lay.dimension(), -1.0, 2.0);
  EXPECT_EQ(flatten(unflatten(g, z)), z);
  EXPECT_EQ(lay.q_left_node(0), -1);
  EXPECT_EQ(lay.q_right_node(g.cells()), -1);
}

TEST(Discretization, RestStateIsEquilibrium) {
  for (double sponge : {0.0, 1.0}) {
    const Grid g = build_grid(kUnit, 20.0, 40, 5.0, sponge);
    const SemiDiscreteSystem sys = assemble(g);
    EXPECT_LT((sys.A * rest_state(g, 1.0)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Discretization, EnergyIdentityIsExact) {
  const Grid g = build_grid(PhysicalParams(0.8, 1.5), 12.0, 30, 3.0, 1.0);
  const SemiDiscreteSystem sys = assemble(g);
  const MatrixXd W = energy_matrix(g);
  const MatrixXd D = dissipation_matrix(g, true);
  EXPECT_LT(relative(W * sys.A + sys.A.transpose() * W, -2.0 * D), 1e-13);
  EXPECT_LT((W * sys.B - sys.C.transpose()).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_EQ((sys.F + sys.C).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(Eigen::LLT<MatrixXd>(W).info(), Eigen::Success);
}

TEST(Discretization, InputOperatorConvergesToClosedForm) {
  const Grid g = build_grid(kUnit, 20.0, 400, 0.0, 0.0);
  const SemiDiscreteSystem sys = assemble(g);
  const Layout lay{g.n_side()};
  EXPECT_NEAR(sys.B(lay.q_minus()), 0.6, 0.02);
  EXPECT_NEAR(sys.B(lay.q_plus()), -0.6, 0.02);
}

TEST(Discretization, MassIsConserved) {
  const Grid g = build_grid(kUnit, 10.0, 20, 2.0, 1.0);
  const SemiDiscreteSystem sys = assemble(g);
  const VectorXd w = mass_covector(g);
  EXPECT_LT((w.transpose() * sys.A).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_NEAR(w.dot(sys.B), 0.0, 1e-14);
}

TEST(Discretization, CompatibleInitialState) {
  const Grid g = small_grid();
  const auto zero = [](double) { return 0.0; };
  const State s0 = initial_state(g, 0.0, 0.0, zero, zero);
  EXPECT_EQ(s0.q_minus, 0.0);
  EXPECT_EQ(s0.q_plus, 0.0);
  const State s = initial_state(g, 0.0, 1.0, zero, [](double x) { return -x; });
  EXPECT_DOUBLE_EQ(s.q_minus, 1.0);
  EXPECT_DOUBLE_EQ(s.q_plus, -1.0);
  EXPECT_DOUBLE_EQ(s.Hdot(1.0), 1.0);
}

TEST(Discretization, IncompatibleInitialStateThrows) {
  const auto zero = [](double) { return 0.0; };
  EXPECT_THROW(initial_state(small_grid(), 0.0, 0.0, zero, [](double x) { return -x; }),
               CompatibilityViolation);
}

TEST(Discretization, EnergyOfSolidFlux) {
  const Grid g = small_grid();
  const auto zero = [](double) { return 0.0; };
  State s = initial_state(g, 0.0, 0.0, zero, zero);
  s.q_minus = 1.0;
  s.q_plus = -1.0;
  const EnergyParts e = energy_parts(flatten(s), g);
  EXPECT_NEAR(e.interior, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(e.kinetic, 0.5, 1e-15);
  EXPECT_NEAR(e.interior + e.kinetic, 5.0 / 6.0, 1e-15);
  EXPECT_EQ(e.exterior, 0.0);
  EXPECT_NEAR(e.boundary_correction, g.spacing() / 2.0, 1e-15);
}

TEST(Discretization, EnergyOfHeave) {
  const Grid g = small_grid();
  const auto zero = [](double) { return 0.0; };
  const State s = initial_state(g, 1.0, 0.0, zero, zero);
  EXPECT_NEAR(energy(s, g), 1.0, 1e-15);
  EXPECT_EQ(energy(VectorXd::Zero(Layout{g.n_side()}.dimension()), g), 0.0);
}

TEST(Discretization, EnergyMatchesQuadraticForm) {
  const Grid g = build_grid(kUnit, 8.0, 17, 2.0, 1.0);
  const VectorXd z = VectorXd::LinSpaced(Layout{g.n_side()}.dimension(), -0.5, 1.5);
  EXPECT_NEAR(energy(z, g), 0.5 * z.dot(energy_matrix(g) * z), 1e-12);
}

TEST(Discretization, PressureVanishesAtRest) {
  const Grid g = build_grid(kUnit, 10.0, 20, 0.0, 0.0);
  const int n = Layout{g.n_side()}.dimension();
  const PressureReport zero = reconstruct_pressure(VectorXd::Zero(n), VectorXd::Zero(n), 0.0, g);
  EXPECT_EQ(zero.p.c0 + zero.p.c1 + zero.p.c2, 0.0);
  const VectorXd rest = rest_state(g, 1.0);
  const PressureReport r = reconstruct_pressure(rest, assemble(g).A * rest, 0.0, g);
  EXPECT_NEAR(std::abs(r.p.c0) + std::abs(r.p.c1) + std::abs(r.p.c2), 0.0, 1e-12);
  EXPECT_NEAR(r.right_jump_defect, 0.0, 1e-12);
  EXPECT_NEAR(r.newton_defect, 0.0, 1e-12);
}
