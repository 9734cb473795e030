#pragma once

// Closed-form complex-plane objects attached to the floating solid operator:
// the decay rate omega(lambda), the coupling matrices M, M^{-1}, M_lambda and
// its feedback variant, the finite singular set S, the set E that contains the
// spectrum, and sampled checks of the sector estimates.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "floatsolid/errors.hpp"
#include "floatsolid/linalg.hpp"

namespace floatsolid {

/// Solid half-width a and fluid viscosity mu, both strictly positive.
class PhysicalParams {
 public:
  PhysicalParams(double a, double mu) : a_(a), mu_(mu) {
    if (!(a > 0.0) || !(mu > 0.0)) {
      throw InvalidParams("physical parameters must satisfy a > 0 and mu > 0");
    }
  }

  double a() const { return a_; }
  double mu() const { return mu_; }

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;

 private:
  double a_;
  double mu_;
};

/// Opening of the sector Sigma_theta = {|arg lambda| < pi/2 + theta} and the
/// radius beyond which bounds are sampled.
class SectorTheta {
 public:
  SectorTheta(double theta, double radius_threshold);

  double theta() const { return theta_; }
  double radius_threshold() const { return radius_threshold_; }

  /// 4 / (mu (1 - sin theta)), the radius from which the decay-rate bound holds.
  static double decay_bound_radius(double theta, double mu);

 private:
  double theta_;
  double radius_threshold_;
};

using Matrix2c = Eigen::Matrix2cd;

namespace spectral {

/// Relative tolerance for membership in the circle / half-line set.
inline constexpr double kMembershipTol = 1e-9;

/// The two independent characterizations of the excluded set.
struct ExclusionClassification {
  bool geometric;   ///< lambda on (-inf, -1/mu) or on |lambda + 1/mu| = 1/mu
  bool ratio_sign;  ///< lambda^2 / (1 + mu lambda) negative real
};

ExclusionClassification classify_exclusion(Complex lambda, const PhysicalParams& p,
                                           double tol = kMembershipTol);

/// True when lambda lies on the half-line or circle where lambda^2/(1+mu lambda)
/// is negative real. Throws DegenerateLambda for lambda in {0, -1/mu}.
bool excluded_region_test(Complex lambda, const PhysicalParams& p,
                          double tol = kMembershipTol);

/// Principal square root of lambda^2 / (1 + mu lambda); Re omega > 0.
/// Throws DegenerateLambda / ExcludedLambda outside the admissible region.
Complex omega_lambda(Complex lambda, const PhysicalParams& p);

/// Re sqrt(z) through |z| and Re z only.
inline double re_sqrt_modulus_form(Complex z) {
  return std::sqrt(0.5 * (std::abs(z) + z.real()));
}

Eigen::Matrix2d matrix_M(const PhysicalParams& p);
Eigen::Matrix2d matrix_M_inverse(const PhysicalParams& p);

/// Input operator entries at (q_-, q_+): the closed form a/(1+2a^3/3) * [1, -1].
Eigen::Vector2d input_operator_closed_form(const PhysicalParams& p);
/// The same entries as 2 a M [1; -1].
Eigen::Vector2d input_operator_from_M(const PhysicalParams& p);

Matrix2c matrix_M_lambda(Complex lambda, const PhysicalParams& p);
/// M_lambda with 2a * 1/(2a) = 1 added on the diagonal (closed loop u = F z).
Matrix2c matrix_M_lambda_feedback(Complex lambda, const PhysicalParams& p);

/// det M_lambda through its factorization
/// 4a^2 lambda (a + 1/omega) [lambda (2 + 4a^3/3) + 4a(mu + 1/lambda) + 4a^2 lambda/omega].
Complex det_M_lambda_factored(Complex lambda, const PhysicalParams& p);

/// Coefficients (highest degree first) of
/// [lambda^2 (2 + 4a^3/3) + 4a(mu lambda + 1)]^2 - 16 a^4 lambda^2 (1 + mu lambda).
std::vector<double> singular_quartic(const PhysicalParams& p);

struct SingularSet {
  std::vector<Complex> roots;
  std::vector<double> residuals;   ///< |det M_lambda| at each root
  std::vector<Complex> spurious;   ///< quartic roots rejected by the direct check
};

/// Roots of det M_lambda = 0 in the admissible region (at most four).
SingularSet singular_set(const PhysicalParams& p, double det_tol = 1e-8);

/// Euclidean distance from lambda to E = {0} U S U (-inf,-1/mu] U circle.
double spectrum_distance(Complex lambda, const PhysicalParams& p, const SingularSet& s);

/// Sample lambda = r e^{i phi}: `angles` phases strictly inside
/// (-pi/2 - theta, pi/2 + theta), `radii` log-spaced radii in [r_min, r_max].
std::vector<Complex> sector_grid(double theta, int angles, int radii, double r_min,
                                 double r_max);

struct BoundSample {
  Complex lambda;
  Complex omega;
  double bound;
  double value;
  bool pass;
};

struct BoundReport {
  std::vector<BoundSample> samples;
  int skipped = 0;  ///< samples below the radius where the bound applies
  bool pass = true;
};

/// Checks Re omega >= (1/4) sqrt(|lambda| (1 - sin theta) / mu) at every sample.
BoundReport lemma5_bound_check(const std::vector<Complex>& samples, const PhysicalParams& p,
                               const SectorTheta& sector);

struct GrowthSample {
  Complex lambda;
  double norm;
};

struct GrowthReport {
  std::vector<GrowthSample> samples;
  std::vector<Complex> singular;  ///< samples where the matrix was numerically singular
  double sup_inner = 0.0;
  double sup_outer = 0.0;
  double trend_ratio = 1.0;  ///< sup over outer half of radii / sup over inner half
  bool pass = true;
};

/// Splits samples at the median radius and compares suprema of `norms`.
GrowthReport growth_trend(std::vector<GrowthSample> samples, double max_ratio = 1.1);

/// Sup of ||lambda M_lambda^{-1}||_2 over the samples and its growth trend.
GrowthReport lemma6_bound_check(const std::vector<Complex>& samples, const PhysicalParams& p,
                                const SectorTheta& sector, double max_ratio = 1.1);

}  // namespace spectral
}  // namespace floatsolid
