#pragma once

// Truncated-domain semi-discretization of the pressure-eliminated evolution
// system on a staggered grid.
//
// On each exterior side the flux q lives on the nodes x_j (j = 0..N, N =
// n_side - 1) and the height h on the cell midpoints. On the right side x_0 = a
// carries the scalar state q_+ and x_N = L carries the Dirichlet value 0; the
// left side is the mirror image (x_0 = -L with q = 0, x_N = -a carrying q_-).
//
// Flattened order:
//   [H | h_left (N) | h_right (N) | q_left interior (N-1) | q_right interior (N-1) | q_- | q_+]
// so the state dimension is 4 n_side - 3.
//
// The staggering makes the discrete energy E = z^T W z / 2 satisfy
//   dE/dt = -mu sum_edges (dq)^2 / dx - mu (q_+ - q_-)^2 / (2a) - sum dx sigma q^2 + u Hdot
// exactly, so the spectrum of A_h lies in the closed left half-plane.

#include <Eigen/Dense>

#include <functional>

#include "floatsolid/linalg.hpp"
#include "floatsolid/spectral.hpp"

namespace floatsolid {

inline constexpr int kMinNodesPerSide = 4;

/// Uniform exterior grid with an optional quadratic sponge layer on q.
class Grid {
 public:
  Grid(PhysicalParams params, double L, int n_side, double sponge_width, double sponge_strength);

  const PhysicalParams& params() const { return params_; }
  double a() const { return params_.a(); }
  double mu() const { return params_.mu(); }
  double L() const { return L_; }
  int n_side() const { return n_side_; }
  int cells() const { return n_side_ - 1; }
  double spacing() const { return spacing_; }
  double sponge_width() const { return sponge_width_; }
  double sponge_strength() const { return sponge_strength_; }

  /// Node positions, increasing: [-L, ..., -a] and [a, ..., L].
  VectorXd left_nodes() const;
  VectorXd right_nodes() const;
  /// Cell midpoints, increasing.
  VectorXd left_midpoints() const;
  VectorXd right_midpoints() const;

  /// Sponge damping coefficient at x.
  double sigma(double x) const;

  /// Same grid with the sponge removed.
  Grid without_sponge() const;

 private:
  PhysicalParams params_;
  double L_;
  int n_side_;
  double spacing_;
  double sponge_width_;
  double sponge_strength_;
};

/// Throws InvalidGeometry unless L > a, n_side >= kMinNodesPerSide and
/// 0 <= sponge_width < L - a, sponge_strength >= 0.
Grid build_grid(const PhysicalParams& params, double L, int n_side, double sponge_width,
                double sponge_strength);

/// Index arithmetic for the flattened state.
struct Layout {
  int n_side;

  int cells() const { return n_side - 1; }
  int dimension() const { return 4 * n_side - 3; }
  int H() const { return 0; }
  int h_left(int k) const { return 1 + k; }
  int h_right(int k) const { return 1 + cells() + k; }
  int q_minus() const { return 4 * cells() - 1; }
  int q_plus() const { return 4 * cells(); }
  /// Index of left node k (0 = -L, N = -a); -1 for the Dirichlet node.
  int q_left_node(int k) const;
  /// Index of right node k (0 = a, N = L); -1 for the Dirichlet node.
  int q_right_node(int k) const;
};

/// Structured view of a flattened state. q_left / q_right hold the interior
/// nodes only (the boundary nodes are q_minus / q_plus and the Dirichlet zeros).
struct State {
  double H = 0.0;
  VectorXd h_left;
  VectorXd h_right;
  VectorXd q_left;
  VectorXd q_right;
  double q_minus = 0.0;
  double q_plus = 0.0;

  /// Ḣ read from the boundary fluxes, -(q_+ - q_-) / (2a).
  double Hdot(double a) const { return -(q_plus - q_minus) / (2.0 * a); }
};

VectorXd flatten(const State& s);
State unflatten(const Grid& grid, const Eigen::Ref<const VectorXd>& z);

struct SemiDiscreteSystem {
  Grid grid;
  MatrixXd A;
  VectorXd B;
  Eigen::RowVectorXd C;  ///< C z = Ḣ
  Eigen::RowVectorXd F;  ///< F = -C, the energy feedback u = F z

  Layout layout() const { return Layout{grid.n_side()}; }
  int dimension() const { return static_cast<int>(A.rows()); }
};

SemiDiscreteSystem assemble(const Grid& grid);

/// Energy weight W (symmetric positive definite), E = z^T W z / 2.
MatrixXd energy_matrix(const Grid& grid);

/// Symmetric D with z^T D z = mu ||dq/dx||^2 (including the solid region where
/// dq/dx = -Ḣ) and, if requested, the sponge sink sum dx sigma q^2.
MatrixXd dissipation_matrix(const Grid& grid, bool include_sponge);

struct EnergyParts {
  double exterior = 0.0;  ///< quadrature of (q^2 + h^2)/2 outside the solid
  double interior = 0.0;  ///< integral over the solid of (q_I^2 + H^2)/2
  double kinetic = 0.0;   ///< Ḣ^2 / 2
  double boundary_correction = 0.0;  ///< trapezoid end weights of q_-, q_+
  double total() const { return exterior + interior + kinetic + boundary_correction; }
};

/// Discrete energy split into its physical pieces. total() equals
/// z^T W z / 2 to rounding.
EnergyParts energy_parts(const Eigen::Ref<const VectorXd>& z, const Grid& grid);
double energy(const Eigen::Ref<const VectorXd>& z, const Grid& grid);
double energy(const State& s, const Grid& grid);

/// Conserved mass 2a H + sum dx h: w^T A_h = 0 and w^T B_h = 0.
VectorXd mass_covector(const Grid& grid);
/// Rest state H = 1, h = 1, q = 0.
VectorXd rest_state(const Grid& grid, double level = 1.0);

using ScalarFunction = std::function<double(double)>;

/// Samples h0 at midpoints and q0 at nodes (the Dirichlet nodes at +-L stay
/// zero), sets q_- = q0(-a), q_+ = q0(a) and checks G0 = -(q_+ - q_-)/(2a)
/// to 1e-10. Throws CompatibilityViolation.
State initial_state(const Grid& grid, double H0, double G0, const ScalarFunction& h0,
                    const ScalarFunction& q0);

/// p(x) = c2 x^2 + c1 x + c0 on [-a, a].
struct PressureProfile {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double operator()(double x) const { return (c2 * x + c1) * x + c0; }
  double integral(double a) const { return 2.0 * c2 * a * a * a / 3.0 + 2.0 * c0 * a; }
};

struct PressureReport {
  PressureProfile p;
  double right_jump_defect = 0.0;
  double newton_defect = 0.0;
};

/// Reconstructs the solid-region pressure from the state and its time
/// derivative; the left jump condition fixes c0 and the right jump condition
/// and Newton's law are reported as defects.
PressureReport reconstruct_pressure(const Eigen::Ref<const VectorXd>& z,
                                    const Eigen::Ref<const VectorXd>& zdot, double u,
                                    const Grid& grid);

}  // namespace floatsolid
