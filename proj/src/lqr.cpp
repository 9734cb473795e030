#include "floatsolid/lqr.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace floatsolid {

std::string to_string(CareMethod method) {
  return method == CareMethod::newton_kleinman ? "newton_kleinman" : "hamiltonian_sign";
}

CareMethod care_method_from_string(const std::string& name) {
  if (name == "newton_kleinman") return CareMethod::newton_kleinman;
  if (name == "hamiltonian_sign") return CareMethod::hamiltonian_sign;
  throw ConfigError("unknown Riccati method '" + name + "'");
}

MatrixXd lyapunov_solve(const MatrixXd& Acl, const MatrixXd& Q) {
  const Eigen::Index n = Acl.rows();
  if (Acl.cols() != n || Q.rows() != n || Q.cols() != n) {
    throw InvalidParams("lyapunov: dimension mismatch");
  }
  const linalg::ComplexSchur s = linalg::schur_complex(Acl);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(s.t(i, i).real() < 0.0)) {
      throw UnstableClosedLoop("lyapunov: closed-loop eigenvalue with nonnegative real part");
    }
  }
  // Acl = U T U^*, X = U Y U^*:  T^* Y + Y T = -U^* Q U.
  const MatrixXcd rhs = -(s.u.adjoint() * Q.cast<Complex>() * s.u);
  const MatrixXcd t_adj = s.t.adjoint();
  MatrixXcd Y(n, n);
  MatrixXcd L = t_adj;
  for (Eigen::Index j = 0; j < n; ++j) {
    VectorXcd b = rhs.col(j);
    if (j > 0) b.noalias() -= Y.leftCols(j) * s.t.col(j).head(j);
    L.diagonal() = t_adj.diagonal().array() + s.t(j, j);
    Y.col(j) = L.triangularView<Eigen::Lower>().solve(b);
  }
  const MatrixXd X = (s.u * Y * s.u.adjoint()).real();
  return linalg::symmetrize(X);
}

double riccati_residual(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C,
                        const MatrixXd& P) {
  const MatrixXd PB = P * B;
  const MatrixXd R = A.transpose() * P + P * A - PB * PB.transpose() + C.transpose() * C;
  return R.norm();
}

namespace {

void finish(RiccatiSolution& sol, const MatrixXd& A, const MatrixXd& B, const MatrixXd& C) {
  sol.P = linalg::symmetrize(sol.P);
  sol.gain = B.transpose() * sol.P;
  sol.residual = riccati_residual(A, B, C, sol.P);
  sol.min_eigenvalue = linalg::sym_eigen(sol.P).values(0);
  sol.closed_loop_abscissa = linalg::spectral_abscissa(A - B * sol.gain);
}

RiccatiSolution newton_kleinman(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C,
                                const CareOptions& options) {
  MatrixXd K = (B.cols() == C.rows()) ? MatrixXd(options.alpha0 * C)
                                      : MatrixXd::Zero(B.cols(), A.rows());
  if (linalg::spectral_abscissa(A - B * K) >= 0.0) {
    throw UnstableClosedLoop("newton-kleinman: initial gain does not stabilize the system");
  }
  const MatrixXd CtC = C.transpose() * C;
  RiccatiSolution sol;
  sol.method = CareMethod::newton_kleinman;
  MatrixXd previous_P;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const MatrixXd P = lyapunov_solve(A - B * K, CtC + K.transpose() * K);
    if (previous_P.size() != 0) {
      const double scale = std::max(1.0, linalg::norm2(previous_P));
      const double lowest = linalg::sym_eigen(previous_P - P).values(0);
      if (lowest < -1e-9 * scale) sol.loewner_monotone = false;
    }
    const MatrixXd K_next = B.transpose() * P;
    const double change = (K_next - K).norm();
    sol.iterations = it;
    sol.P = P;
    previous_P = P;
    K = K_next;
    if (change <= options.tol * std::max(1.0, K.norm())) {
      finish(sol, A, B, C);
      return sol;
    }
  }
  throw NoConvergence("newton-kleinman: no convergence after " +
                      std::to_string(options.max_iterations) + " iterations");
}

RiccatiSolution hamiltonian_sign(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C) {
  const Eigen::Index n = A.rows();
  MatrixXd H(2 * n, 2 * n);
  H << A, -B * B.transpose(), -C.transpose() * C, -A.transpose();
  const MatrixXd S = linalg::matrix_sign(H);
  const MatrixXd I = MatrixXd::Identity(n, n);
  // Stable invariant subspace: [S12; S22 + I] P = -[S11 + I; S21].
  MatrixXd lhs(2 * n, n);
  lhs << S.topRightCorner(n, n), S.bottomRightCorner(n, n) + I;
  MatrixXd rhs(2 * n, n);
  rhs << S.topLeftCorner(n, n) + I, S.bottomLeftCorner(n, n);
  RiccatiSolution sol;
  sol.method = CareMethod::hamiltonian_sign;
  sol.P = lhs.colPivHouseholderQr().solve(-rhs);
  sol.iterations = 1;
  finish(sol, A, B, C);
  return sol;
}

}  // namespace

RiccatiSolution care_solve(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C,
                           const CareOptions& options) {
  if (A.rows() != A.cols() || B.rows() != A.rows() || C.cols() != A.rows()) {
    throw InvalidParams("care: dimension mismatch");
  }
  if (options.method == CareMethod::newton_kleinman) return newton_kleinman(A, B, C, options);
  return hamiltonian_sign(A, B, C);
}

RiccatiSolution care_solve(const SemiDiscreteSystem& system, const CareOptions& options) {
  const Eigen::Index n = system.dimension();
  const VectorXd w = mass_covector(system.grid);
  const VectorXd zeta = rest_state(system.grid);
  // Orthonormal basis of {w^T z = 0}: trailing columns of the Householder Q of w.
  const MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(w).householderQ();
  const MatrixXd V = Q.rightCols(n - 1);
  const MatrixXd Pi = MatrixXd::Identity(n, n) - zeta * w.transpose() / w.dot(zeta);

  const MatrixXd A_r = V.transpose() * system.A * V;
  const MatrixXd B_r = V.transpose() * system.B;
  const MatrixXd C_r = system.C * V;
  RiccatiSolution reduced = care_solve(A_r, B_r, C_r, options);

  RiccatiSolution sol = reduced;
  const MatrixXd lift = V.transpose() * Pi;
  sol.P = linalg::symmetrize(lift.transpose() * reduced.P * lift);
  sol.gain = system.B.transpose() * sol.P;
  sol.residual = riccati_residual(system.A, system.B, system.C, sol.P);
  sol.min_eigenvalue = linalg::sym_eigen(sol.P).values(0);
  sol.closed_loop_abscissa = reduced.closed_loop_abscissa;
  return sol;
}

CareCrossCheck care_cross_check(const SemiDiscreteSystem& system, const CareOptions& options) {
  CareOptions newton_options = options;
  newton_options.method = CareMethod::newton_kleinman;
  CareOptions sign_options = options;
  sign_options.method = CareMethod::hamiltonian_sign;
  auto sign_future =
      std::async(std::launch::async, [&] { return care_solve(system, sign_options); });
  CareCrossCheck out;
  out.newton = care_solve(system, newton_options);
  out.sign = sign_future.get();
  const double scale = out.newton.P.norm();
  out.relative_difference = (out.newton.P - out.sign.P).norm() / (scale > 0.0 ? scale : 1.0);
  return out;
}

ComparisonTable compare_feedbacks(const SemiDiscreteSystem& system,
                                  const Eigen::Ref<const VectorXd>& z0,
                                  const std::vector<double>& alpha_grid,
                                  const RiccatiSolution& riccati,
                                  const SimulationOptions& options) {
  if (riccati.gain.rows() != 1 || riccati.gain.cols() != system.dimension()) {
    throw GridMismatch("compare_feedbacks: gain does not match the system");
  }
  SimulationOptions sim = options;
  sim.store_states = false;
  const VectorXd start = z0;

  auto run = [&system, &start, sim](Eigen::RowVectorXd K) {
    const Trajectory tr = simulate(system, start, Feedback{std::move(K)}, sim);
    return cost(tr);
  };

  std::vector<std::future<CostReport>> jobs;
  jobs.push_back(std::async(std::launch::async, run, Eigen::RowVectorXd(riccati.gain.row(0))));
  for (double alpha : alpha_grid) {
    jobs.push_back(std::async(std::launch::async, run, Eigen::RowVectorXd(alpha * system.C)));
  }

  ComparisonTable table;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const CostReport c = jobs[i].get();
    ComparisonRow row;
    if (i == 0) {
      row.controller = "optimal";
      row.predicted = start.dot(riccati.P * start);
    } else {
      row.alpha = alpha_grid[i - 1];
      std::ostringstream name;
      name << "alpha=" << row.alpha;
      row.controller = name.str();
    }
    row.J = c.J + c.tail_estimate;
    row.horizon = c.horizon;
    if (i == 0) {
      const double denom = std::abs(row.predicted);
      row.relative_gap = denom > 0.0 ? std::abs(row.J - row.predicted) / denom
                                     : std::abs(row.J - row.predicted);
    }
    table.rows.push_back(row);
  }
  const double optimal = table.rows.front().J;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (optimal > table.rows[i].J * (1.0 + table.slack) + 1e-14) table.optimal_is_min = false;
  }
  return table;
}

}  // namespace floatsolid
