#include <gtest/gtest.h>

#include <cmath>

#include "floatsolid/errors.hpp"
#include "floatsolid/linalg.hpp"
#include "floatsolid/resolvent.hpp"

using namespace floatsolid;

namespace {

const PhysicalParams kUnit(1.0, 1.0);

HalfLineFunction zero_on(Side side, int nodes) {
  return sample(side, half_line_grid(side, 1.0, 20.0, nodes), [](double) { return Complex(0.0); });
}

resolvent::ResolventInput zero_input(int nodes) {
  resolvent::ResolventInput in;
  for (Side side : {Side::left, Side::right}) {
    ExteriorFunction* parts[] = {&in.f2, &in.df2, &in.f3};
    for (ExteriorFunction* f : parts) {
      (side == Side::left ? f->left : f->right) = zero_on(side, nodes);
    }
  }
  return in;
}

double max_abs(const HalfLineFunction& f) { return f.values.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Resolvent, HalfLineGridEndsAtSolid) {
  const VectorXd r = half_line_grid(Side::right, 1.0, 5.0, 5);
  const VectorXd l = half_line_grid(Side::left, 1.0, 5.0, 5);
  EXPECT_DOUBLE_EQ(r(0), 1.0);
  EXPECT_DOUBLE_EQ(r(4), 5.0);
  EXPECT_DOUBLE_EQ(l(0), -5.0);
  EXPECT_DOUBLE_EQ(l(4), -1.0);
}

TEST(Resolvent, ShiftedGridIsRejected) {
  HalfLineFunction f = zero_on(Side::right, 11);
  f.grid.array() += 0.5;
  EXPECT_THROW(validate_half_line(f, 1.0), GridMismatch);
}

TEST(Resolvent, BoundaryExponential) {
  const VectorXd grid = half_line_grid(Side::right, 1.0, 2.0, 2);
  const HalfLineFunction d = resolvent::d_apply(Side::right, 1.0, 1.0, grid, 1.0);
  EXPECT_NEAR(std::abs(d.values(0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.values(1) - std::exp(-1.0)), 0.0, 1e-15);
  EXPECT_EQ(max_abs(resolvent::d_apply(Side::left, 1.0, 0.0, grid.array() - 3.0, 1.0)), 0.0);
}

TEST(Resolvent, HalfLineSolveOfZeroIsZero) {
  for (Side side : {Side::left, Side::right}) {
    EXPECT_EQ(max_abs(resolvent::r_apply(Complex(1.0, 2.0), zero_on(side, 101), 1.0)), 0.0);
  }
}

TEST(Resolvent, ClosedFormHalfLineSolution) {
  const int nodes = 1901;  // h = 0.01 on [1, 20]
  const VectorXd grid = half_line_grid(Side::right, 1.0, 20.0, nodes);
  const HalfLineFunction phi =
      sample(Side::right, grid, [](double x) { return Complex(std::exp(-(x - 1.0))); });
  const HalfLineFunction q = resolvent::r_apply(1.0, phi, 1.0);
  EXPECT_NEAR(q.values(100).real(), std::exp(-1.0) / 2.0, 1e-6);
  EXPECT_NEAR(q.values(100).real(), 0.1839397, 1e-7);
  EXPECT_NEAR(std::abs(q.values(0)), 0.0, 1e-15);
}

TEST(Resolvent, LeftSideMirrorsRightSide) {
  const int nodes = 801;
  const Complex omega(1.3, 0.4);
  const auto profile = [](double s) { return Complex(std::exp(-s * s), 0.5 * s * std::exp(-s)); };
  const HalfLineFunction pr = sample(Side::right, half_line_grid(Side::right, 1.0, 20.0, nodes),
                                     [&](double x) { return profile(x - 1.0); });
  const HalfLineFunction pl = sample(Side::left, half_line_grid(Side::left, 1.0, 20.0, nodes),
                                     [&](double x) { return profile(-x - 1.0); });
  const resolvent::HalfLineSolution sr = resolvent::helmholtz_halfline(omega, 0.7, pr, 1.0);
  const resolvent::HalfLineSolution sl = resolvent::helmholtz_halfline(omega, 0.7, pl, 1.0);
  for (int i = 0; i < nodes; ++i) {
    EXPECT_NEAR(std::abs(sr.q.values(i) - sl.q.values(nodes - 1 - i)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(sr.dq.values(i) + sl.dq.values(nodes - 1 - i)), 0.0, 1e-13);
  }
}

TEST(Resolvent, PureBoundaryExponential) {
  const VectorXd grid = half_line_grid(Side::right, 1.0, 20.0, 191);
  const resolvent::HalfLineSolution s =
      resolvent::helmholtz_halfline(1.0, 1.0, zero_on(Side::right, 191), 1.0);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(std::abs(s.q.values(i) - std::exp(1.0 - grid(i))), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.dq.values(i) + std::exp(1.0 - grid(i))), 0.0, 1e-14);
  }
}

TEST(Resolvent, ZeroInputGivesZeroOutput) {
  const resolvent::ResolventOutput out = resolvent::resolvent_apply(1.0, kUnit, zero_input(101));
  EXPECT_EQ(std::abs(out.H), 0.0);
  EXPECT_EQ(std::abs(out.q_minus) + std::abs(out.q_plus), 0.0);
  EXPECT_EQ(max_abs(out.q.right) + max_abs(out.h.left), 0.0);
}

TEST(Resolvent, SolidForcingMatchesTwoByTwoSolve) {
  resolvent::ResolventInput in = zero_input(101);
  in.f1 = 1.0;
  const resolvent::ResolventOutput out = resolvent::resolvent_apply(1.0, kUnit, in);
  const Eigen::Vector2cd q =
      linalg::lu_solve(spectral::matrix_M_lambda(1.0, kUnit), Eigen::Vector2cd(-4.0, 4.0));
  EXPECT_NEAR(std::abs(out.q_minus - q(0)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(out.q_plus - q(1)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(out.H - (1.0 - (q(1) - q(0)) / 2.0)), 0.0, 1e-13);
}

TEST(Resolvent, ApplyIsLinear) {
  const int nodes = 201;
  const auto make = [&](double shift) {
    resolvent::ResolventInput in;
    in.f1 = Complex(0.3, shift);
    in.f4 = 0.2 - shift;
    in.f5 = Complex(-0.1, 0.4);
    for (Side side : {Side::left, Side::right}) {
      const VectorXd g = half_line_grid(side, 1.0, 20.0, nodes);
      const double c = side == Side::left ? -3.0 - shift : 2.5 + shift;
      const auto bump = [c](double x) { return Complex(std::exp(-(x - c) * (x - c))); };
      const auto dbump = [c](double x) { return Complex(-2.0 * (x - c) * std::exp(-(x - c) * (x - c))); };
      (side == Side::left ? in.f2.left : in.f2.right) = sample(side, g, bump);
      (side == Side::left ? in.df2.left : in.df2.right) = sample(side, g, dbump);
      (side == Side::left ? in.f3.left : in.f3.right) =
          sample(side, g, [&](double x) { return Complex(0.0, 1.0) * bump(x + 0.5); });
    }
    return in;
  };
  const resolvent::ResolventInput f = make(0.0);
  const resolvent::ResolventInput g = make(1.0);
  const Complex alpha(0.7, -0.2), beta(-1.1, 0.5);
  resolvent::ResolventInput mix = f;
  mix.f1 = alpha * f.f1 + beta * g.f1;
  mix.f4 = alpha * f.f4 + beta * g.f4;
  mix.f5 = alpha * f.f5 + beta * g.f5;
  ExteriorFunction resolvent::ResolventInput::*fields[] = {
      &resolvent::ResolventInput::f2, &resolvent::ResolventInput::df2,
      &resolvent::ResolventInput::f3};
  for (auto field : fields) {
    (mix.*field).left.values = alpha * (f.*field).left.values + beta * (g.*field).left.values;
    (mix.*field).right.values = alpha * (f.*field).right.values + beta * (g.*field).right.values;
  }
  const Complex lambda(2.0, 2.0);
  const resolvent::ResolventOutput of = resolvent::resolvent_apply(lambda, kUnit, f);
  const resolvent::ResolventOutput og = resolvent::resolvent_apply(lambda, kUnit, g);
  const resolvent::ResolventOutput om = resolvent::resolvent_apply(lambda, kUnit, mix);
  EXPECT_NEAR(std::abs(om.H - (alpha * of.H + beta * og.H)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(om.q_plus - (alpha * of.q_plus + beta * og.q_plus)), 0.0, 1e-10);
  EXPECT_LT((om.q.left.values - (alpha * of.q.left.values + beta * og.q.left.values))
                .cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((om.h.right.values - (alpha * of.h.right.values + beta * og.h.right.values))
                .cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Resolvent, ExcludedLambdaIsRejected) {
  EXPECT_THROW(resolvent::resolvent_apply(-2.0, kUnit, zero_input(51)), Error);
}
