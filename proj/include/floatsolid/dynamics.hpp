#pragma once

// Time integration of z' = A_h z + B_h u with A-stable one-step schemes,
// discrete energy bookkeeping, and the quadratic cost J = int (u^2 + Ḣ^2) dt.

#include <Eigen/Dense>

#include <functional>
#include <variant>
#include <vector>

#include "floatsolid/discretization.hpp"
#include "floatsolid/linalg.hpp"

namespace floatsolid {

enum class Scheme { trapezoidal, implicit_euler };

/// Per-step scalar records; full states are kept only when requested.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> inputs;
  std::vector<double> H;
  std::vector<double> Hdot;      ///< C_h z at each time
  std::vector<double> q_minus;
  std::vector<double> q_plus;
  std::vector<double> energies;
  std::vector<VectorXd> states;  ///< empty unless SimulationOptions::store_states
  /// -mu ||dq/dx||^2 - sponge + u Ḣ at each time and at each step midpoint,
  /// and the sponge sink at each time; empty unless record_rates.
  std::vector<double> rates;
  std::vector<double> midpoint_rates;
  std::vector<double> sponge_sinks;
  Scheme scheme = Scheme::trapezoidal;

  std::size_t size() const { return times.size(); }
};

/// Open-loop input u(t).
using OpenLoop = std::function<double(double)>;
/// State feedback u = -K z.
struct Feedback {
  Eigen::RowVectorXd K;
};
using Control = std::variant<OpenLoop, Feedback>;

struct SimulationOptions {
  double T = 1.0;
  double dt = 1e-2;
  Scheme scheme = Scheme::trapezoidal;
  bool store_states = true;
  bool record_rates = false;
  /// Stop early once u^2 + Ḣ^2 drops below decay_tol times its running maximum
  /// and the energy has settled (0 disables).
  double decay_tol = 0.0;
};

/// One step of the scheme for a prescribed input:
///   trapezoidal:    (I - dt/2 A) z+ = (I + dt/2 A) z + dt/2 B (u_now + u_next)
///   implicit Euler: (I - dt A) z+ = z + dt B u_next
/// Throws SingularSystem when the implicit matrix is singular.
VectorXd step(const MatrixXd& A, const VectorXd& B, const Eigen::Ref<const VectorXd>& z,
              double u_now, double u_next, double dt, Scheme scheme);

VectorXd step(const SemiDiscreteSystem& system, const Eigen::Ref<const VectorXd>& z,
              double u_now, double u_next, double dt, Scheme scheme);

/// Marches from z0 to T (or until the decay criterion fires). With feedback the
/// input is treated implicitly, i.e. the scheme is applied to A - B K.
Trajectory simulate(const SemiDiscreteSystem& system, const Eigen::Ref<const VectorXd>& z0,
                    const Control& control, const SimulationOptions& options);

struct EnergyBalanceReport {
  double max_defect = 0.0;           ///< trapezoid-in-time rate vs. dissipation
  double max_midpoint_defect = 0.0;  ///< same rate vs. dissipation at the midpoint state
  double max_relative_increase = 0.0;  ///< max (E_{n+1} - E_n) / E_0
  double max_sponge_sink = 0.0;
  bool monotone = true;  ///< E_{n+1} <= E_n + 1e-10 E_0 for every step
  std::vector<double> defects;
};

/// Compares (E_{n+1} - E_n)/dt with -mu ||dq/dx||^2 - sponge + u Ḣ. Uses the
/// recorded rates when present, otherwise the stored states.
EnergyBalanceReport energy_balance_report(const Trajectory& trajectory,
                                          const SemiDiscreteSystem& system);

struct CostReport {
  double J = 0.0;       ///< u_part + y_part over the simulated horizon
  double u_part = 0.0;
  double y_part = 0.0;
  double horizon = 0.0;
  double tail_estimate = 0.0;  ///< fitted remainder beyond the horizon
  double decay_rate = 0.0;     ///< fitted exponential rate of u^2 + Ḣ^2 (negative = decay)
};

/// Trapezoid quadrature of u^2 + Ḣ^2 plus an exponential tail fit over the last
/// quarter of the horizon. Throws NonDecayingTail when the tail is not
/// negligible and does not decay.
CostReport cost(const Trajectory& trajectory);

/// Same, from raw samples.
CostReport cost(const std::vector<double>& times, const std::vector<double>& u,
                const std::vector<double>& hdot);

}  // namespace floatsolid
