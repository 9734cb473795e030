#include <gtest/gtest.h>

#include <cmath>

#include "floatsolid/config.hpp"
#include "floatsolid/dynamics.hpp"
#include "floatsolid/errors.hpp"

using namespace floatsolid;

namespace {

Grid test_grid(double sponge) {
  return build_grid(PhysicalParams(1.0, 1.0), 10.0, 40, 3.0, sponge);
}

VectorXd bump_state(const Grid& g) {
  InitialPreset p;
  p.name = "bump";
  p.amplitude = 0.5;
  p.center = 3.0;
  return flatten(make_initial_state(g, p));
}

}  // namespace

TEST(Dynamics, TrapezoidalScalarStep) {
  const MatrixXd A = MatrixXd::Constant(1, 1, -1.0);
  const VectorXd B = VectorXd::Zero(1);
  const VectorXd z = step(A, B, VectorXd::Ones(1), 0.0, 0.0, 0.1, Scheme::trapezoidal);
  EXPECT_NEAR(z(0), 0.95 / 1.05, 1e-15);
  EXPECT_NEAR(z(0), 0.904762, 1e-6);
  const VectorXd e = step(A, B, VectorXd::Ones(1), 0.0, 0.0, 0.1, Scheme::implicit_euler);
  EXPECT_NEAR(e(0), 1.0 / 1.1, 1e-15);
}

TEST(Dynamics, SingularImplicitMatrixThrows) {
  const MatrixXd A = MatrixXd::Constant(1, 1, 20.0);
  EXPECT_THROW(step(A, VectorXd::Zero(1), VectorXd::Ones(1), 0.0, 0.0, 0.1, Scheme::trapezoidal),
               SingularSystem);
}

TEST(Dynamics, ZeroStateStaysZero) {
  const SemiDiscreteSystem sys = assemble(test_grid(1.0));
  const VectorXd z0 = VectorXd::Zero(sys.dimension());
  EXPECT_EQ(step(sys, z0, 0.0, 0.0, 0.01, Scheme::trapezoidal).cwiseAbs().maxCoeff(), 0.0);
  SimulationOptions o;
  o.T = 0.5;
  const Trajectory tr = simulate(sys, z0, OpenLoop{}, o);
  for (double e : tr.energies) EXPECT_EQ(e, 0.0);
  EXPECT_EQ(cost(tr).J, 0.0);
}

TEST(Dynamics, RestStateIsUnchanged) {
  const Grid g = test_grid(1.0);
  const SemiDiscreteSystem sys = assemble(g);
  const VectorXd rest = rest_state(g, 0.3);
  EXPECT_LT((step(sys, rest, 0.0, 0.0, 0.05, Scheme::trapezoidal) - rest).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(Dynamics, EnergyNonincreasingWithSponge) {
  const Grid g = test_grid(1.0);
  const SemiDiscreteSystem sys = assemble(g);
  SimulationOptions o;
  o.T = 5.0;
  o.dt = 0.02;
  const Trajectory tr = simulate(sys, bump_state(g), OpenLoop{}, o);
  for (std::size_t n = 1; n < tr.size(); ++n) {
    EXPECT_LE(tr.energies[n] - tr.energies[n - 1], 1e-10 * tr.energies.front());
  }
  const EnergyBalanceReport r = energy_balance_report(tr, sys);
  EXPECT_TRUE(r.monotone);
  EXPECT_LE(r.max_midpoint_defect, 1e-10 * tr.energies.front());
}

TEST(Dynamics, RecordedRatesMatchStoredStates) {
  const Grid g = test_grid(0.0);
  const SemiDiscreteSystem sys = assemble(g);
  SimulationOptions o;
  o.T = 1.0;
  o.dt = 0.01;
  const Trajectory a = simulate(sys, bump_state(g), OpenLoop{}, o);
  o.store_states = false;
  o.record_rates = true;
  const Trajectory b = simulate(sys, bump_state(g), OpenLoop{}, o);
  EXPECT_TRUE(b.states.empty());
  EXPECT_NEAR(energy_balance_report(a, sys).max_defect, energy_balance_report(b, sys).max_defect,
              1e-12);
}

TEST(Dynamics, FeedbackMatchesOpenLoopOfClosedSystem) {
  const Grid g = test_grid(1.0);
  const SemiDiscreteSystem sys = assemble(g);
  SemiDiscreteSystem closed = sys;
  closed.A = sys.A - sys.B * sys.C;
  SimulationOptions o;
  o.T = 2.0;
  o.dt = 0.02;
  const VectorXd z0 = bump_state(g);
  const Trajectory fb = simulate(sys, z0, Feedback{sys.C}, o);
  const Trajectory ol = simulate(closed, z0, OpenLoop{}, o);
  EXPECT_LT((fb.states.back() - ol.states.back()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(fb.inputs.back(), -fb.Hdot.back(), 1e-14);
}

TEST(Dynamics, OutputEnergyBoundUnderFeedback) {
  const Grid g = test_grid(1.0);
  const SemiDiscreteSystem sys = assemble(g);
  SimulationOptions o;
  o.T = 10.0;
  o.dt = 0.01;
  const Trajectory tr = simulate(sys, bump_state(g), Feedback{sys.C}, o);
  double integral = 0.0;
  for (std::size_t n = 1; n < tr.size(); ++n) {
    const double dt = tr.times[n] - tr.times[n - 1];
    integral += 0.5 * dt * (tr.Hdot[n] * tr.Hdot[n] + tr.Hdot[n - 1] * tr.Hdot[n - 1]);
    EXPECT_LE(integral, tr.energies.front());
  }
}

TEST(Dynamics, CostOfDecayingExponential) {
  std::vector<double> t, u, y;
  for (int n = 0; n <= 2000; ++n) {
    t.push_back(0.01 * n);
    u.push_back(std::exp(-t.back()));
    y.push_back(0.0);
  }
  const CostReport c = cost(t, u, y);
  EXPECT_NEAR(c.J + c.tail_estimate, 0.5, 1e-4);
  EXPECT_NEAR(c.J, 0.5, 1e-4);
  EXPECT_NEAR(c.decay_rate, -2.0, 1e-2);
}

TEST(Dynamics, CostRejectsGrowingTail) {
  std::vector<double> t, u, y;
  for (int n = 0; n <= 1000; ++n) {
    t.push_back(0.01 * n);
    u.push_back(std::exp(0.5 * t.back()));
    y.push_back(0.0);
  }
  EXPECT_THROW(cost(t, u, y), NonDecayingTail);
}
