#include "floatsolid/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace floatsolid {
namespace {

void require_positive_step(double dt) {
  if (!(dt > 0.0)) throw InvalidParams("time step must be positive");
}

// Dense one-step propagator z+ = G z + g_now u_now + g_next u_next.
struct Propagator {
  MatrixXd G;
  VectorXd g_now;
  VectorXd g_next;
};

Propagator make_propagator(const MatrixXd& A, const VectorXd& B, double dt, Scheme scheme) {
  require_positive_step(dt);
  const Eigen::Index n = A.rows();
  const MatrixXd I = MatrixXd::Identity(n, n);
  Propagator p;
  try {
    if (scheme == Scheme::trapezoidal) {
      const linalg::LuFactorization<double> lu(I - 0.5 * dt * A);
      p.G = lu.solve(I + 0.5 * dt * A);
      p.g_now = 0.5 * dt * lu.solve(B);
      p.g_next = p.g_now;
    } else {
      const linalg::LuFactorization<double> lu(I - dt * A);
      p.G = lu.solve(I);
      p.g_now = VectorXd::Zero(n);
      p.g_next = dt * lu.solve(B);
    }
  } catch (const SingularMatrix&) {
    throw SingularSystem("implicit time-stepping matrix is singular for dt = " +
                         std::to_string(dt));
  }
  return p;
}

}  // namespace

VectorXd step(const MatrixXd& A, const VectorXd& B, const Eigen::Ref<const VectorXd>& z,
              double u_now, double u_next, double dt, Scheme scheme) {
  require_positive_step(dt);
  const Eigen::Index n = A.rows();
  const MatrixXd I = MatrixXd::Identity(n, n);
  try {
    if (scheme == Scheme::trapezoidal) {
      const VectorXd rhs = z + 0.5 * dt * (A * z) + 0.5 * dt * B * (u_now + u_next);
      return linalg::lu_solve(I - 0.5 * dt * A, rhs);
    }
    const VectorXd rhs = z + dt * B * u_next;
    return linalg::lu_solve(I - dt * A, rhs);
  } catch (const SingularMatrix&) {
    throw SingularSystem("implicit time-stepping matrix is singular for dt = " +
                         std::to_string(dt));
  }
}

VectorXd step(const SemiDiscreteSystem& system, const Eigen::Ref<const VectorXd>& z,
              double u_now, double u_next, double dt, Scheme scheme) {
  return step(system.A, system.B, z, u_now, u_next, dt, scheme);
}

Trajectory simulate(const SemiDiscreteSystem& system, const Eigen::Ref<const VectorXd>& z0,
                    const Control& control, const SimulationOptions& options) {
  if (!(options.T > 0.0)) throw InvalidParams("simulation horizon must be positive");
  require_positive_step(options.dt);
  if (z0.size() != system.dimension()) throw GridMismatch("initial state has wrong length");

  const auto* feedback = std::get_if<Feedback>(&control);
  const auto* open_loop = std::get_if<OpenLoop>(&control);
  if (feedback != nullptr && feedback->K.size() != system.dimension()) {
    throw GridMismatch("feedback gain has wrong length");
  }

  const Propagator prop =
      feedback != nullptr
          ? make_propagator(system.A - system.B * feedback->K, VectorXd::Zero(system.dimension()),
                            options.dt, options.scheme)
          : make_propagator(system.A, system.B, options.dt, options.scheme);

  auto input_at = [&](double t, const VectorXd& z) {
    if (feedback != nullptr) return -feedback->K.dot(z);
    return (open_loop != nullptr && *open_loop) ? (*open_loop)(t) : 0.0;
  };

  const long steps = static_cast<long>(std::ceil(options.T / options.dt - 1e-9));
  const long window = std::max(10L, static_cast<long>(std::ceil(1.0 / options.dt)));
  Trajectory tr;
  tr.scheme = options.scheme;
  const std::size_t reserve = static_cast<std::size_t>(steps + 1);
  tr.times.reserve(reserve);
  tr.inputs.reserve(reserve);
  tr.H.reserve(reserve);
  tr.Hdot.reserve(reserve);
  tr.q_minus.reserve(reserve);
  tr.q_plus.reserve(reserve);
  tr.energies.reserve(reserve);

  const Layout layout = system.layout();
  MatrixXd d_full;
  MatrixXd d_sponge;
  if (options.record_rates) {
    d_full = dissipation_matrix(system.grid, true);
    d_sponge = d_full - dissipation_matrix(system.grid, false);
  }
  auto rate = [&](const VectorXd& state, double input) {
    return -state.dot(d_full * state) + input * system.C.dot(state);
  };
  VectorXd z = z0;
  double u = input_at(0.0, z);
  double running_max = 0.0;
  long quiet_steps = 0;
  for (long n = 0;; ++n) {
    const double t = n * options.dt;
    const double hdot = system.C.dot(z);
    tr.times.push_back(t);
    tr.inputs.push_back(u);
    tr.H.push_back(z(layout.H()));
    tr.Hdot.push_back(hdot);
    tr.q_minus.push_back(z(layout.q_minus()));
    tr.q_plus.push_back(z(layout.q_plus()));
    tr.energies.push_back(energy(z, system.grid));
    if (options.store_states) tr.states.push_back(z);
    if (options.record_rates) {
      tr.rates.push_back(rate(z, u));
      tr.sponge_sinks.push_back(z.dot(d_sponge * z));
    }
    if (n == steps) break;

    if (options.decay_tol > 0.0) {
      const double g = u * u + hdot * hdot;
      running_max = std::max(running_max, g);
      quiet_steps = (running_max > 0.0 && g <= options.decay_tol * running_max) ? quiet_steps + 1 : 0;
      if (quiet_steps >= window) break;
    }

    const double t_next = (n + 1) * options.dt;
    const VectorXd z_prev = options.record_rates ? z : VectorXd();
    const double u_prev = u;
    if (feedback != nullptr) {
      z = prop.G * z;
      u = input_at(t_next, z);
    } else {
      const double u_next = input_at(t_next, z);
      z = prop.G * z + prop.g_now * u + prop.g_next * u_next;
      u = u_next;
    }
    if (options.record_rates) {
      tr.midpoint_rates.push_back(rate(0.5 * (z_prev + z), 0.5 * (u_prev + u)));
    }
  }
  return tr;
}

EnergyBalanceReport energy_balance_report(const Trajectory& tr, const SemiDiscreteSystem& system) {
  EnergyBalanceReport r;
  if (tr.size() < 2) return r;
  std::vector<double> rates = tr.rates;
  std::vector<double> midpoint_rates = tr.midpoint_rates;
  std::vector<double> sinks = tr.sponge_sinks;
  if (rates.size() != tr.size() || midpoint_rates.size() + 1 != tr.size()) {
    if (tr.states.size() != tr.size()) {
      throw InvalidParams("energy balance needs recorded rates or stored states");
    }
    const MatrixXd d_full = dissipation_matrix(system.grid, true);
    const MatrixXd d_sponge = d_full - dissipation_matrix(system.grid, false);
    auto rate = [&](const VectorXd& z, double u) {
      return -z.dot(d_full * z) + u * system.C.dot(z);
    };
    rates.clear();
    midpoint_rates.clear();
    sinks.clear();
    for (std::size_t n = 0; n < tr.size(); ++n) {
      rates.push_back(rate(tr.states[n], tr.inputs[n]));
      sinks.push_back(tr.states[n].dot(d_sponge * tr.states[n]));
      if (n + 1 < tr.size()) {
        midpoint_rates.push_back(rate(0.5 * (tr.states[n] + tr.states[n + 1]),
                                      0.5 * (tr.inputs[n] + tr.inputs[n + 1])));
      }
    }
  }
  const double e0 = tr.energies.front();
  r.defects.reserve(tr.size() - 1);
  r.max_sponge_sink = *std::max_element(sinks.begin(), sinks.end());
  for (std::size_t n = 0; n + 1 < tr.size(); ++n) {
    const double dt = tr.times[n + 1] - tr.times[n];
    const double de = tr.energies[n + 1] - tr.energies[n];
    const double defect = std::abs(de / dt - 0.5 * (rates[n] + rates[n + 1]));
    r.defects.push_back(defect);
    r.max_defect = std::max(r.max_defect, defect);
    r.max_midpoint_defect = std::max(r.max_midpoint_defect, std::abs(de / dt - midpoint_rates[n]));
    if (e0 > 0.0) r.max_relative_increase = std::max(r.max_relative_increase, de / e0);
    if (de > 1e-10 * e0) r.monotone = false;
  }
  return r;
}

CostReport cost(const Trajectory& tr) { return cost(tr.times, tr.inputs, tr.Hdot); }

CostReport cost(const std::vector<double>& times, const std::vector<double>& u,
                const std::vector<double>& hdot) {
  const std::size_t n = times.size();
  if (u.size() != n || hdot.size() != n) throw InvalidParams("cost: sample lengths differ");
  CostReport r;
  if (n < 2) return r;
  double global_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(hdot[i])) {
      throw NonDecayingTail("cost: trajectory is not finite");
    }
    global_max = std::max(global_max, u[i] * u[i] + hdot[i] * hdot[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dt = times[i + 1] - times[i];
    r.u_part += 0.5 * dt * (u[i] * u[i] + u[i + 1] * u[i + 1]);
    r.y_part += 0.5 * dt * (hdot[i] * hdot[i] + hdot[i + 1] * hdot[i + 1]);
  }
  r.J = r.u_part + r.y_part;
  r.horizon = times.back() - times.front();

  // Log-linear fit of windowed maxima over the last quarter.
  const std::size_t start = (3 * n) / 4;
  const std::size_t count = n - start;
  const std::size_t windows = std::min<std::size_t>(8, count);
  if (windows < 2 || global_max <= 0.0) return r;
  std::vector<double> ts;
  std::vector<double> logs;
  double tail_max = 0.0;
  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t lo = start + (w * count) / windows;
    const std::size_t hi = start + ((w + 1) * count) / windows;
    double peak = 0.0;
    for (std::size_t i = lo; i < hi; ++i) peak = std::max(peak, u[i] * u[i] + hdot[i] * hdot[i]);
    tail_max = std::max(tail_max, peak);
    if (peak > 0.0) {
      ts.push_back(0.5 * (times[lo] + times[hi - 1]));
      logs.push_back(std::log(peak));
    }
  }
  const bool negligible = tail_max <= 1e-12 * global_max;
  if (ts.size() < 2) return r;
  const double k = static_cast<double>(ts.size());
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += logs[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * logs[i];
  }
  const double denom = k * stt - st * st;
  if (denom <= 0.0) return r;
  const double slope = (k * stl - st * sl) / denom;
  const double intercept = (sl - slope * st) / k;
  r.decay_rate = slope;
  if (slope < 0.0) {
    r.tail_estimate = std::exp(intercept + slope * times.back()) / (-slope);
  } else if (!negligible) {
    throw NonDecayingTail("cost: integrand does not decay over the last quarter of the horizon");
  }
  return r;
}

}  // namespace floatsolid
