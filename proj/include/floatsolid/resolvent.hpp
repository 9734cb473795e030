#pragma once

// Half-line operators D(omega), R(omega), the exterior Helmholtz solve and the
// closed-form resolvent of the floating solid generator, evaluated on nodal
// grids with composite trapezoid quadrature. Integrals beyond the truncation
// point are dropped (the data is taken to vanish there).

#include <Eigen/Dense>

#include "floatsolid/linalg.hpp"
#include "floatsolid/spectral.hpp"

namespace floatsolid {

enum class Side { left, right };

/// Complex samples on [-L, -a] (left) or [a, L] (right); the grid is strictly
/// increasing in both cases, so the solid boundary is the last left node and
/// the first right node.
struct HalfLineFunction {
  Side side = Side::right;
  VectorXd grid;
  VectorXcd values;

  Eigen::Index size() const { return grid.size(); }
  /// Value at the node adjacent to the solid (x = -a or x = a).
  Complex boundary_value() const {
    return side == Side::left ? values(values.size() - 1) : values(0);
  }
};

/// A function on the whole exterior domain.
struct ExteriorFunction {
  HalfLineFunction left;
  HalfLineFunction right;
};

/// Uniform grid with `nodes` points on the given side.
VectorXd half_line_grid(Side side, double a, double L, int nodes);

/// Checks strict monotonicity and that the grid ends at -a (left) / starts at
/// a (right) within 1e-12. Throws GridMismatch.
void validate_half_line(const HalfLineFunction& f, double a);

template <typename Fn>
HalfLineFunction sample(Side side, const VectorXd& grid, Fn&& fn) {
  HalfLineFunction out{side, grid, VectorXcd(grid.size())};
  for (Eigen::Index i = 0; i < grid.size(); ++i) out.values(i) = fn(grid(i));
  return out;
}

/// Second-order finite-difference derivative (central inside, one-sided at ends).
HalfLineFunction central_derivative(const HalfLineFunction& f);

namespace resolvent {

/// gamma exp(omega (a + x)) on the left, gamma exp(omega (a - x)) on the right.
HalfLineFunction d_apply(Side side, Complex omega, Complex gamma, const VectorXd& grid,
                         double a);

/// R(omega) phi: the decaying solution of -q'' + omega^2 q = phi with q = 0 at
/// the solid boundary.
HalfLineFunction r_apply(Complex omega, const HalfLineFunction& phi, double a);

/// Both q = D gamma + R phi and its derivative q'.
struct HalfLineSolution {
  HalfLineFunction q;
  HalfLineFunction dq;
};

HalfLineSolution helmholtz_halfline(Complex omega, Complex gamma, const HalfLineFunction& phi,
                                    double a);

struct ResolventInput {
  Complex f1 = 0.0;
  ExteriorFunction f2;   ///< height component (H^1)
  ExteriorFunction df2;  ///< its derivative at the same nodes
  ExteriorFunction f3;   ///< flux component
  Complex f4 = 0.0;
  Complex f5 = 0.0;
};

struct ResolventOutput {
  Complex H = 0.0;
  ExteriorFunction h;
  ExteriorFunction q;
  ExteriorFunction dq;
  Complex q_minus = 0.0;
  Complex q_plus = 0.0;
};

struct ResolventOptions {
  double spectrum_tol = 1e-8;
};

/// (lambda I - A)^{-1} F through the closed-form assembly: a 2x2 solve with
/// M_lambda for (q_-, q_+), half-line Helmholtz solves for q, then h and H.
/// Throws SpectrumProximity near E and SingularMatrix if M_lambda is singular.
ResolventOutput resolvent_apply(Complex lambda, const PhysicalParams& p,
                                const ResolventInput& input, const ResolventOptions& options = {});

}  // namespace resolvent

/// sqrt(trapezoid integral of |f|^2) over the function's own grid.
double l2_norm(const HalfLineFunction& f);

}  // namespace floatsolid
