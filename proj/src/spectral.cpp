#include "floatsolid/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace floatsolid {

SectorTheta::SectorTheta(double theta, double radius_threshold)
    : theta_(theta), radius_threshold_(radius_threshold) {
  if (!(theta >= 0.0 && theta < std::numbers::pi / 2)) {
    throw InvalidParams("sector angle must lie in [0, pi/2)");
  }
  if (!(radius_threshold > 0.0)) throw InvalidParams("sector radius must be positive");
}

double SectorTheta::decay_bound_radius(double theta, double mu) {
  return 4.0 / (mu * (1.0 - std::sin(theta)));
}

namespace spectral {
namespace {

constexpr double kDegenerateTol = 1e-14;

void require_nondegenerate(Complex nu) {
  if (std::abs(nu) <= kDegenerateTol || std::abs(1.0 + nu) <= kDegenerateTol) {
    throw DegenerateLambda("lambda must differ from 0 and -1/mu");
  }
}

Complex ratio(Complex lambda, const PhysicalParams& p) {
  return lambda * lambda / (1.0 + p.mu() * lambda);
}

}  // namespace

ExclusionClassification classify_exclusion(Complex lambda, const PhysicalParams& p,
                                           double tol) {
  // Everything is scaled to mu = 1 through nu = mu lambda.
  const Complex nu = p.mu() * lambda;
  require_nondegenerate(nu);

  const bool on_half_line = nu.real() < -1.0 && std::abs(nu.imag()) <= tol * std::abs(nu);
  const bool on_circle = std::abs(std::abs(nu + 1.0) - 1.0) <= tol;

  // z = nu^2/(1+nu); |Im z| / |z'| is the first-order distance to the level set
  // Im z = 0, so the sign test uses the same length scale as the geometry.
  const Complex z = nu * nu / (1.0 + nu);
  const Complex dz = nu * (2.0 + nu) / ((1.0 + nu) * (1.0 + nu));
  const double scale = std::max(1.0, std::abs(nu));
  const bool negative_real =
      z.real() < 0.0 && std::abs(z.imag()) <= tol * scale * std::abs(dz);

  return {on_half_line || on_circle, negative_real};
}

bool excluded_region_test(Complex lambda, const PhysicalParams& p, double tol) {
  return classify_exclusion(lambda, p, tol).geometric;
}

Complex omega_lambda(Complex lambda, const PhysicalParams& p) {
  if (excluded_region_test(lambda, p)) {
    throw ExcludedLambda("lambda^2/(1+mu lambda) is negative real");
  }
  const Complex omega = std::sqrt(ratio(lambda, p));
  if (!(omega.real() > 0.0)) {
    throw ExcludedLambda("principal root has nonpositive real part");
  }
  return omega;
}

Eigen::Matrix2d matrix_M(const PhysicalParams& p) {
  const double a3 = p.a() * p.a() * p.a();
  const double prefactor = 1.0 / (8.0 * a3 * (1.0 + 2.0 * a3 / 3.0));
  const double diag = 1.0 + 8.0 * a3 / 3.0;
  const double off = 1.0 - 4.0 * a3 / 3.0;
  Eigen::Matrix2d m;
  m << diag, off, off, diag;
  return prefactor * m;
}

Eigen::Matrix2d matrix_M_inverse(const PhysicalParams& p) {
  const double a3 = p.a() * p.a() * p.a();
  const double diag = 1.0 + 8.0 * a3 / 3.0;
  const double off = -(1.0 - 4.0 * a3 / 3.0);
  Eigen::Matrix2d m;
  m << diag, off, off, diag;
  return m;
}

Eigen::Vector2d input_operator_closed_form(const PhysicalParams& p) {
  const double a = p.a();
  const double entry = a / (1.0 + 2.0 * a * a * a / 3.0);
  return {entry, -entry};
}

Eigen::Vector2d input_operator_from_M(const PhysicalParams& p) {
  return 2.0 * p.a() * matrix_M(p) * Eigen::Vector2d(1.0, -1.0);
}

Matrix2c matrix_M_lambda(Complex lambda, const PhysicalParams& p) {
  if (std::abs(lambda) == 0.0) throw DegenerateLambda("M_lambda is undefined at lambda = 0");
  const Complex omega = omega_lambda(lambda, p);
  const double a = p.a();
  const double a3 = a * a * a;
  const Complex coupling = 2.0 * a * (p.mu() + 1.0 / lambda);
  const Complex diag = lambda * (1.0 + 8.0 * a3 / 3.0) + coupling + 4.0 * a * a * lambda / omega;
  const Complex off = -lambda * (1.0 - 4.0 * a3 / 3.0) - coupling;
  Matrix2c m;
  m << diag, off, off, diag;
  return m;
}

Matrix2c matrix_M_lambda_feedback(Complex lambda, const PhysicalParams& p) {
  if (std::abs(lambda) == 0.0) throw DegenerateLambda("M_lambda is undefined at lambda = 0");
  const Complex omega = omega_lambda(lambda, p);
  const double a = p.a();
  const double a3 = a * a * a;
  const Complex coupling = 2.0 * a * (p.mu() + 1.0 / lambda);
  const Complex diag = lambda * (1.0 + 8.0 * a3 / 3.0) +
                       2.0 * a * (p.mu() + 1.0 / (2.0 * a) + 1.0 / lambda) +
                       4.0 * a * a * lambda / omega;
  const Complex off = -lambda * (1.0 - 4.0 * a3 / 3.0) - coupling;
  Matrix2c m;
  m << diag, off, off, diag;
  return m;
}

Complex det_M_lambda_factored(Complex lambda, const PhysicalParams& p) {
  const Complex omega = omega_lambda(lambda, p);
  const double a = p.a();
  const double a3 = a * a * a;
  const Complex symmetric_factor = 4.0 * a * a * lambda * (a + 1.0 / omega);
  const Complex antisymmetric_factor = lambda * (2.0 + 4.0 * a3 / 3.0) +
                                       4.0 * a * (p.mu() + 1.0 / lambda) +
                                       4.0 * a * a * lambda / omega;
  return symmetric_factor * antisymmetric_factor;
}

std::vector<double> singular_quartic(const PhysicalParams& p) {
  const double a = p.a();
  const double mu = p.mu();
  const double c = 2.0 + 4.0 * a * a * a / 3.0;
  const double inner[3] = {c, 4.0 * a * mu, 4.0 * a};  // c l^2 + 4a mu l + 4a
  std::vector<double> poly(5, 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) poly[i + j] += inner[i] * inner[j];
  }
  const double a4 = a * a * a * a;
  poly[1] -= 16.0 * a4 * mu;  // l^3
  poly[2] -= 16.0 * a4;       // l^2
  return poly;
}

namespace {

Complex horner(const std::vector<double>& poly, Complex x) {
  Complex acc = 0.0;
  for (double c : poly) acc = acc * x + c;
  return acc;
}

Complex horner_derivative(const std::vector<double>& poly, Complex x) {
  Complex acc = 0.0;
  const int degree = static_cast<int>(poly.size()) - 1;
  for (int i = 0; i < degree; ++i) acc = acc * x + poly[i] * static_cast<double>(degree - i);
  return acc;
}

}  // namespace

SingularSet singular_set(const PhysicalParams& p, double det_tol) {
  const std::vector<double> poly = singular_quartic(p);
  const int degree = static_cast<int>(poly.size()) - 1;

  // Companion matrix of the monic polynomial.
  MatrixXd companion = MatrixXd::Zero(degree, degree);
  for (int j = 0; j < degree; ++j) companion(0, j) = -poly[j + 1] / poly[0];
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;

  VectorXcd candidates;
  try {
    candidates = linalg::eigenvalues(companion);
  } catch (const NoConvergence& e) {
    throw RootFindingFailure(std::string("singular_set: ") + e.what());
  }

  SingularSet out;
  for (Complex root : candidates) {
    // Two Newton steps on the quartic to polish the eigenvalue.
    for (int k = 0; k < 2; ++k) {
      const Complex d = horner_derivative(poly, root);
      if (std::abs(d) == 0.0) break;
      root -= horner(poly, root) / d;
    }
    if (!std::isfinite(root.real()) || !std::isfinite(root.imag())) {
      throw RootFindingFailure("singular_set: non-finite root");
    }
    bool admissible = std::abs(root) > 0.0 && root.real() <= 0.0;
    double residual = std::numeric_limits<double>::infinity();
    if (admissible) {
      try {
        if (excluded_region_test(root, p)) {
          admissible = false;
        } else {
          residual = std::abs(matrix_M_lambda(root, p).determinant());
        }
      } catch (const Error&) {
        admissible = false;
      }
    }
    if (admissible && residual < det_tol) {
      out.roots.push_back(root);
      out.residuals.push_back(residual);
    } else {
      out.spurious.push_back(root);
    }
  }
  return out;
}

double spectrum_distance(Complex lambda, const PhysicalParams& p, const SingularSet& s) {
  const double inv_mu = 1.0 / p.mu();
  double d = std::abs(lambda);  // {0}
  for (Complex root : s.roots) d = std::min(d, std::abs(lambda - root));
  // (-inf, -1/mu]
  const double half_line = lambda.real() <= -inv_mu ? std::abs(lambda.imag())
                                                    : std::abs(lambda + inv_mu);
  d = std::min(d, half_line);
  // |lambda + 1/mu| = 1/mu; the only point of the circle outside C_- is 0,
  // already part of E.
  d = std::min(d, std::abs(std::abs(lambda + inv_mu) - inv_mu));
  return d;
}

std::vector<Complex> sector_grid(double theta, int angles, int radii, double r_min,
                                 double r_max) {
  std::vector<Complex> out;
  if (angles <= 0 || radii <= 0) return out;
  out.reserve(static_cast<std::size_t>(angles) * radii);
  const double half_opening = std::numbers::pi / 2 + theta;
  for (int i = 0; i < radii; ++i) {
    const double t = radii == 1 ? 0.0 : static_cast<double>(i) / (radii - 1);
    const double r = r_min * std::pow(r_max / r_min, t);
    for (int j = 0; j < angles; ++j) {
      // Cell midpoints keep every phase strictly inside the open sector.
      const double phi = -half_opening + (2.0 * half_opening) * (j + 0.5) / angles;
      out.push_back(std::polar(r, phi));
    }
  }
  return out;
}

BoundReport lemma5_bound_check(const std::vector<Complex>& samples, const PhysicalParams& p,
                               const SectorTheta& sector) {
  BoundReport report;
  const double sin_theta = std::sin(sector.theta());
  const double min_radius = SectorTheta::decay_bound_radius(sector.theta(), p.mu());
  for (Complex lambda : samples) {
    const bool in_sector = std::abs(std::arg(lambda)) < std::numbers::pi / 2 + sector.theta();
    if (!in_sector || std::abs(lambda) < min_radius) {
      ++report.skipped;
      continue;
    }
    BoundSample s{lambda, omega_lambda(lambda, p), 0.0, 0.0, false};
    s.bound = 0.25 * std::sqrt(std::abs(lambda) * (1.0 - sin_theta) / p.mu());
    s.value = s.omega.real();
    s.pass = s.value >= s.bound;
    report.pass = report.pass && s.pass;
    report.samples.push_back(s);
  }
  return report;
}

GrowthReport growth_trend(std::vector<GrowthSample> samples, double max_ratio) {
  GrowthReport report;
  report.samples = std::move(samples);
  if (report.samples.empty()) return report;

  std::vector<double> radii;
  radii.reserve(report.samples.size());
  for (const auto& s : report.samples) radii.push_back(std::abs(s.lambda));
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  const double r_lo = sorted.front();
  const double r_hi = sorted.back();
  // Split the radius range in half on a log scale.
  const double split = std::sqrt(r_lo * r_hi);

  bool any_outer = false;
  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    const double n = report.samples[i].norm;
    if (radii[i] > split && r_hi > r_lo) {
      report.sup_outer = std::max(report.sup_outer, n);
      any_outer = true;
    } else {
      report.sup_inner = std::max(report.sup_inner, n);
    }
  }
  report.trend_ratio = any_outer && report.sup_inner > 0.0 ? report.sup_outer / report.sup_inner
                                                           : 1.0;
  report.pass = report.trend_ratio <= max_ratio;
  return report;
}

GrowthReport lemma6_bound_check(const std::vector<Complex>& samples, const PhysicalParams& p,
                                const SectorTheta& sector, double max_ratio) {
  std::vector<GrowthSample> ok;
  std::vector<Complex> singular;
  for (Complex lambda : samples) {
    if (std::abs(lambda) < sector.radius_threshold()) continue;
    try {
      const Matrix2c m = matrix_M_lambda(lambda, p);
      const Complex det = m.determinant();
      if (std::abs(det) <= 1e-12 * m.cwiseAbs2().sum()) throw SingularMatrix("M_lambda");
      Matrix2c inv;
      inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
      inv /= det;
      ok.push_back({lambda, linalg::norm2(MatrixXcd(lambda * inv))});
    } catch (const Error&) {
      singular.push_back(lambda);
    }
  }
  GrowthReport report = growth_trend(std::move(ok), max_ratio);
  report.singular = std::move(singular);
  return report;
}

}  // namespace spectral
}  // namespace floatsolid
