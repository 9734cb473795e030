#include "floatsolid/resolvent.hpp"

#include <cmath>

namespace floatsolid {

VectorXd half_line_grid(Side side, double a, double L, int nodes) {
  if (!(L > a) || nodes < 2) throw InvalidGeometry("half-line grid needs L > a and >= 2 nodes");
  VectorXd grid = VectorXd::LinSpaced(nodes, a, L);
  if (side == Side::left) grid = (-grid).reverse().eval();
  // Pin the solid boundary exactly.
  if (side == Side::left) {
    grid(nodes - 1) = -a;
  } else {
    grid(0) = a;
  }
  return grid;
}

void validate_half_line(const HalfLineFunction& f, double a) {
  const Eigen::Index n = f.grid.size();
  if (n < 2 || f.values.size() != n) throw GridMismatch("half-line function: size mismatch");
  for (Eigen::Index i = 1; i < n; ++i) {
    if (!(f.grid(i) > f.grid(i - 1))) throw GridMismatch("half-line grid is not increasing");
  }
  const double boundary = f.side == Side::left ? f.grid(n - 1) + a : f.grid(0) - a;
  if (std::abs(boundary) > 1e-12 * std::max(1.0, a)) {
    throw GridMismatch("half-line grid does not end at the solid boundary");
  }
}

HalfLineFunction central_derivative(const HalfLineFunction& f) {
  const Eigen::Index n = f.grid.size();
  if (n < 3) throw GridMismatch("central_derivative needs at least 3 nodes");
  HalfLineFunction d{f.side, f.grid, VectorXcd(n)};
  const auto& x = f.grid;
  const auto& v = f.values;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    // Three-point formula, exact for quadratics on nonuniform grids.
    const double hl = x(i) - x(i - 1);
    const double hr = x(i + 1) - x(i);
    d.values(i) = (-hr / (hl * (hl + hr))) * v(i - 1) + ((hr - hl) / (hl * hr)) * v(i) +
                  (hl / (hr * (hl + hr))) * v(i + 1);
  }
  auto one_sided = [&](Eigen::Index i0, Eigen::Index i1, Eigen::Index i2) {
    const double h1 = x(i1) - x(i0);
    const double h2 = x(i2) - x(i0);
    return v(i0) * (-(h1 + h2) / (h1 * h2)) + v(i1) * (h2 / (h1 * (h2 - h1))) +
           v(i2) * (-h1 / (h2 * (h2 - h1)));
  };
  d.values(0) = one_sided(0, 1, 2);
  d.values(n - 1) = one_sided(n - 1, n - 2, n - 3);
  return d;
}

double l2_norm(const HalfLineFunction& f) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < f.grid.size(); ++i) {
    const double h = f.grid(i + 1) - f.grid(i);
    acc += 0.5 * h * (std::norm(f.values(i)) + std::norm(f.values(i + 1)));
  }
  return std::sqrt(acc);
}

namespace resolvent {
namespace {

void require_decay(Complex omega) {
  if (!(omega.real() > 0.0)) throw NonDecayingOmega("Re omega must be positive");
}

// Convolutions with decaying kernels, accumulated recursively so that no
// growing exponential is ever formed:
//   forward(k)  = int_{x_0}^{x_k} exp(-omega (x_k - xi)) phi(xi) dxi
//   backward(k) = int_{x_k}^{x_N} exp(-omega (xi - x_k)) phi(xi) dxi
struct Convolutions {
  VectorXcd forward;
  VectorXcd backward;
};

Convolutions convolve(Complex omega, const HalfLineFunction& phi) {
  const Eigen::Index n = phi.grid.size();
  Convolutions c{VectorXcd::Zero(n), VectorXcd::Zero(n)};
  const auto& x = phi.grid;
  const auto& v = phi.values;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double h = x(k + 1) - x(k);
    const Complex decay = std::exp(-omega * h);
    c.forward(k + 1) = decay * c.forward(k) + 0.5 * h * (decay * v(k) + v(k + 1));
  }
  for (Eigen::Index k = n - 2; k >= 0; --k) {
    const double h = x(k + 1) - x(k);
    const Complex decay = std::exp(-omega * h);
    c.backward(k) = decay * c.backward(k + 1) + 0.5 * h * (v(k) + decay * v(k + 1));
  }
  return c;
}

// Distance from node i to the solid boundary.
double boundary_distance(const HalfLineFunction& f, Eigen::Index i, double a) {
  return f.side == Side::left ? -a - f.grid(i) : f.grid(i) - a;
}

}  // namespace

HalfLineFunction d_apply(Side side, Complex omega, Complex gamma, const VectorXd& grid,
                         double a) {
  require_decay(omega);
  HalfLineFunction out{side, grid, VectorXcd(grid.size())};
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid(i);
    out.values(i) = gamma * std::exp(side == Side::left ? omega * (a + x) : omega * (a - x));
  }
  return out;
}

HalfLineFunction r_apply(Complex omega, const HalfLineFunction& phi, double a) {
  return helmholtz_halfline(omega, 0.0, phi, a).q;
}

HalfLineSolution helmholtz_halfline(Complex omega, Complex gamma, const HalfLineFunction& phi,
                                    double a) {
  require_decay(omega);
  validate_half_line(phi, a);
  const Eigen::Index n = phi.grid.size();
  const Convolutions c = convolve(omega, phi);

  HalfLineSolution s{{phi.side, phi.grid, VectorXcd(n)}, {phi.side, phi.grid, VectorXcd(n)}};
  if (phi.side == Side::right) {
    const Complex boundary_integral = c.backward(0);  // int_a^L exp(-omega (xi - a)) phi
    for (Eigen::Index k = 0; k < n; ++k) {
      const Complex e = std::exp(-omega * boundary_distance(phi, k, a));
      s.q.values(k) = (c.forward(k) + c.backward(k) - e * boundary_integral) / (2.0 * omega) +
                      gamma * e;
      s.dq.values(k) = 0.5 * (-c.forward(k) + c.backward(k) + e * boundary_integral) -
                       omega * gamma * e;
    }
  } else {
    const Complex boundary_integral = c.forward(n - 1);  // int_{-L}^{-a} exp(omega (xi + a)) phi
    for (Eigen::Index k = 0; k < n; ++k) {
      const Complex e = std::exp(-omega * boundary_distance(phi, k, a));
      s.q.values(k) = (c.backward(k) + c.forward(k) - e * boundary_integral) / (2.0 * omega) +
                      gamma * e;
      s.dq.values(k) = 0.5 * (c.backward(k) - c.forward(k) - e * boundary_integral) +
                       omega * gamma * e;
    }
  }
  return s;
}

ResolventOutput resolvent_apply(Complex lambda, const PhysicalParams& p,
                                const ResolventInput& in, const ResolventOptions& options) {
  const double a = p.a();
  const double mu = p.mu();
  const spectral::SingularSet s = spectral::singular_set(p);
  if (spectral::spectrum_distance(lambda, p, s) < options.spectrum_tol) {
    throw SpectrumProximity("lambda lies on (or too close to) the spectrum enclosure E");
  }
  const Complex omega = spectral::omega_lambda(lambda, p);

  auto phi_of = [&](const HalfLineFunction& f2d, const HalfLineFunction& f3) {
    validate_half_line(f3, a);
    if (f2d.grid.size() != f3.grid.size()) throw GridMismatch("f2' and f3 grids differ");
    HalfLineFunction phi{f3.side, f3.grid, (lambda * f3.values - f2d.values) / (1.0 + mu * lambda)};
    return phi;
  };
  const HalfLineFunction phi_left = phi_of(in.df2.left, in.f3.left);
  const HalfLineFunction phi_right = phi_of(in.df2.right, in.f3.right);

  // int_{-inf}^0 exp(omega xi) phi(xi - a) and int_0^inf exp(-omega xi) phi(xi + a).
  const Complex int_left = convolve(omega, phi_left).forward(phi_left.size() - 1);
  const Complex int_right = convolve(omega, phi_right).backward(0);

  const Eigen::Matrix2cd m_inv = spectral::matrix_M_inverse(p).cast<Complex>();
  Eigen::Vector2cd rhs = m_inv * Eigen::Vector2cd(in.f4, in.f5);
  rhs += (4.0 * a * a / lambda) *
         Eigen::Vector2cd(in.f2.left.boundary_value() - in.f1, in.f1 - in.f2.right.boundary_value());
  rhs += (4.0 * a * a * lambda / (omega * omega)) * Eigen::Vector2cd(int_left, int_right);

  const Matrix2c m_lambda = spectral::matrix_M_lambda(lambda, p);
  const Eigen::Vector2cd boundary = linalg::lu_solve(m_lambda, rhs);

  ResolventOutput out;
  out.q_minus = boundary(0);
  out.q_plus = boundary(1);

  const HalfLineSolution left = helmholtz_halfline(omega, out.q_minus, phi_left, a);
  const HalfLineSolution right = helmholtz_halfline(omega, out.q_plus, phi_right, a);
  out.q = {left.q, right.q};
  out.dq = {left.dq, right.dq};
  out.h.left = {Side::left, in.f2.left.grid, (in.f2.left.values - left.dq.values) / lambda};
  out.h.right = {Side::right, in.f2.right.grid, (in.f2.right.values - right.dq.values) / lambda};
  out.H = (in.f1 - (out.q_plus - out.q_minus) / (2.0 * a)) / lambda;
  return out;
}

}  // namespace resolvent
}  // namespace floatsolid
