#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "floatsolid/errors.hpp"
#include "floatsolid/spectral.hpp"

using namespace floatsolid;

namespace {
const PhysicalParams kUnit(1.0, 1.0);
}

TEST(Spectral, OmegaAtOne) {
  const Complex w = spectral::omega_lambda(1.0, kUnit);
  EXPECT_NEAR(w.real(), std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(w.imag(), 0.0, 1e-14);
}

TEST(Spectral, OmegaAtImaginaryUnitIsPrincipalRoot) {
  const Complex w = spectral::omega_lambda(Complex(0.0, 1.0), kUnit);
  const Complex expected = std::pow(0.5, 0.25) * std::polar(1.0, 3.0 * std::numbers::pi / 8.0);
  EXPECT_NEAR(std::abs(w - expected), 0.0, 1e-14);
  EXPECT_NEAR(w.real(), 0.3218, 1e-4);
  EXPECT_NEAR(w.imag(), 0.7769, 1e-4);
}

TEST(Spectral, OmegaRejectsExcludedLambda) {
  EXPECT_THROW(spectral::omega_lambda(Complex(-1.0, 1.0), kUnit), ExcludedLambda);
}

TEST(Spectral, ExclusionRegionExamples) {
  EXPECT_TRUE(spectral::excluded_region_test(-2.0, kUnit));
  EXPECT_FALSE(spectral::excluded_region_test(1.0, kUnit));
  EXPECT_TRUE(spectral::excluded_region_test(Complex(-1.0, 1.0), kUnit));
  const auto c = spectral::classify_exclusion(Complex(-1.0, 1.0), kUnit);
  EXPECT_EQ(c.geometric, c.ratio_sign);
}

TEST(Spectral, MatrixMAtUnitRadius) {
  const Eigen::Matrix2d m = spectral::matrix_M(kUnit);
  EXPECT_NEAR(m(0, 0), 11.0 / 40.0, 1e-15);
  EXPECT_NEAR(m(0, 1), -1.0 / 40.0, 1e-15);
  EXPECT_NEAR(m(1, 0), -1.0 / 40.0, 1e-15);
  EXPECT_NEAR(m(1, 1), 11.0 / 40.0, 1e-15);
}

TEST(Spectral, MatrixMInverseAtUnitRadius) {
  const Eigen::Matrix2d mi = spectral::matrix_M_inverse(kUnit);
  EXPECT_NEAR(mi(0, 0), 11.0 / 3.0, 1e-14);
  EXPECT_NEAR(mi(0, 1), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(mi(1, 1), 11.0 / 3.0, 1e-14);
  for (double a : {0.5, 1.0, 2.0}) {
    const PhysicalParams p(a, 1.0);
    EXPECT_LT((spectral::matrix_M(p) * spectral::matrix_M_inverse(p) -
               Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Spectral, InputOperatorAtUnitRadius) {
  const Eigen::Vector2d b = spectral::input_operator_closed_form(kUnit);
  EXPECT_NEAR(b(0), 0.6, 1e-15);
  EXPECT_NEAR(b(1), -0.6, 1e-15);
  EXPECT_LT((spectral::input_operator_from_M(kUnit) - b).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Spectral, MatrixMLambdaAtOne) {
  const Matrix2c m = spectral::matrix_M_lambda(1.0, kUnit);
  const double diag = 11.0 / 3.0 + 4.0 + 4.0 / std::sqrt(0.5);
  EXPECT_NEAR(m(0, 0).real(), diag, 1e-12);
  EXPECT_NEAR(m(1, 1).real(), diag, 1e-12);
  EXPECT_NEAR(m(0, 1).real(), -11.0 / 3.0, 1e-12);
  EXPECT_NEAR(m(1, 0).real(), -11.0 / 3.0, 1e-12);
  EXPECT_NEAR(diag, 13.3235, 1e-4);
  EXPECT_NEAR(m.imag().cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(Spectral, FeedbackMatrixDiffersByIdentity) {
  for (Complex lambda : {Complex(1.0), Complex(2.0, 2.0), Complex(0.5, -3.0)}) {
    const Matrix2c d =
        spectral::matrix_M_lambda_feedback(lambda, kUnit) - spectral::matrix_M_lambda(lambda, kUnit);
    EXPECT_LT((d - Matrix2c::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_NEAR(spectral::matrix_M_lambda_feedback(1.0, kUnit)(0, 0).real(), 14.3235, 1e-4);
}

TEST(Spectral, SingularSetRootsAreStableAndVerified) {
  for (double mu : {0.5, 1.0, 2.0}) {
    const spectral::SingularSet s = spectral::singular_set(PhysicalParams(1.0, mu));
    EXPECT_LE(s.roots.size(), 4u);
    for (std::size_t i = 0; i < s.roots.size(); ++i) {
      EXPECT_LE(s.roots[i].real(), 0.0);
      EXPECT_LE(s.residuals[i], 1e-8);
    }
  }
}

TEST(Spectral, SpectrumDistanceVanishesOnExcludedSet) {
  const spectral::SingularSet s = spectral::singular_set(kUnit);
  EXPECT_NEAR(spectral::spectrum_distance(0.0, kUnit, s), 0.0, 1e-15);
  EXPECT_NEAR(spectral::spectrum_distance(-2.0, kUnit, s), 0.0, 1e-15);
  EXPECT_GE(spectral::spectrum_distance(1.0, kUnit, s), 1.0 - 1e-12);
}

TEST(Spectral, DecayBoundOnPositiveAxis) {
  const double w = spectral::omega_lambda(4.0, kUnit).real();
  EXPECT_NEAR(w, std::sqrt(16.0 / 5.0), 1e-14);
  const SectorTheta sector(0.0, SectorTheta::decay_bound_radius(0.0, 1.0));
  const spectral::BoundReport r = spectral::lemma5_bound_check({4.0, Complex(0.0, 4.0)}, kUnit,
                                                               sector);
  EXPECT_EQ(r.samples.size() + static_cast<std::size_t>(r.skipped), 2u);
  for (const auto& s : r.samples) EXPECT_TRUE(s.pass);
  EXPECT_TRUE(spectral::lemma5_bound_check({}, kUnit, sector).samples.empty());
}
