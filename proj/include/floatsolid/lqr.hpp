#pragma once

// Continuous-time algebraic Riccati equation A^T P + P A - P B B^T P + C^T C = 0,
// the optimal gain K = B^T P, and a comparison of the optimal feedback with the
// energy feedback u = -alpha Ḣ.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "floatsolid/discretization.hpp"
#include "floatsolid/dynamics.hpp"
#include "floatsolid/linalg.hpp"

namespace floatsolid {

enum class CareMethod { newton_kleinman, hamiltonian_sign };

std::string to_string(CareMethod method);
CareMethod care_method_from_string(const std::string& name);

struct RiccatiSolution {
  MatrixXd P;
  MatrixXd gain;  ///< K = B^T P, one row per input
  double residual = 0.0;  ///< Frobenius norm of the Riccati residual
  int iterations = 0;
  CareMethod method = CareMethod::newton_kleinman;
  double min_eigenvalue = 0.0;  ///< smallest eigenvalue of P
  bool loewner_monotone = true;  ///< Newton iterates nonincreasing (always true for sign)
  double closed_loop_abscissa = 0.0;  ///< on the controllable part for deflated solves
};

/// Solves Acl^T X + X Acl + Q = 0 by complex Schur reduction and column-wise
/// triangular substitution. Throws UnstableClosedLoop if Acl is not Hurwitz.
MatrixXd lyapunov_solve(const MatrixXd& Acl, const MatrixXd& Q);

struct CareOptions {
  CareMethod method = CareMethod::newton_kleinman;
  double tol = 1e-10;    ///< relative change of the gain between Newton steps
  double alpha0 = 1.0;   ///< initial gain K_0 = alpha0 C (requires as many inputs as outputs)
  int max_iterations = 60;
};

double riccati_residual(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C,
                        const MatrixXd& P);

/// Stabilizing solution of the Riccati equation for (A, B, C).
RiccatiSolution care_solve(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C,
                           const CareOptions& options = {});

/// Riccati solution for the discretized floating-solid system. The conserved
/// mass makes 0 an uncontrollable, unobservable eigenvalue; the equation is
/// solved on the invariant complement {w^T z = 0} and lifted back with the
/// projection along the rest state, so P annihilates the rest state.
RiccatiSolution care_solve(const SemiDiscreteSystem& system, const CareOptions& options = {});

struct CareCrossCheck {
  RiccatiSolution newton;
  RiccatiSolution sign;
  double relative_difference = 0.0;  ///< ||P_newton - P_sign||_F / ||P_newton||_F
};

/// Runs both methods concurrently on the same system.
CareCrossCheck care_cross_check(const SemiDiscreteSystem& system, const CareOptions& options = {});

struct ComparisonRow {
  std::string controller;  ///< "optimal" or "alpha=<value>"
  double alpha = 0.0;      ///< 0 for the optimal row
  double J = 0.0;          ///< simulated cost including the fitted tail
  double predicted = 0.0;  ///< z0^T P z0 (optimal row only)
  double relative_gap = 0.0;
  double horizon = 0.0;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;  ///< optimal first, then the alpha grid in order
  bool optimal_is_min = true;       ///< J(optimal) <= min_alpha J(alpha) (1 + slack)
  double slack = 1e-3;
};

/// Simulates every controller from z0 (concurrently) and tabulates the costs.
ComparisonTable compare_feedbacks(const SemiDiscreteSystem& system,
                                  const Eigen::Ref<const VectorXd>& z0,
                                  const std::vector<double>& alpha_grid,
                                  const RiccatiSolution& riccati,
                                  const SimulationOptions& options);

}  // namespace floatsolid
