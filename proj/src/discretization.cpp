#include "floatsolid/discretization.hpp"

#include <cmath>

namespace floatsolid {

Grid::Grid(PhysicalParams params, double L, int n_side, double sponge_width,
           double sponge_strength)
    : params_(params),
      L_(L),
      n_side_(n_side),
      spacing_(0.0),
      sponge_width_(sponge_width),
      sponge_strength_(sponge_strength) {
  if (!(L > params.a())) throw InvalidGeometry("grid: L must exceed a");
  if (n_side < kMinNodesPerSide) {
    throw InvalidGeometry("grid: n_side must be at least " + std::to_string(kMinNodesPerSide));
  }
  if (!(sponge_width >= 0.0) || !(sponge_width < L - params.a())) {
    throw InvalidGeometry("grid: sponge_width must lie in [0, L - a)");
  }
  if (!(sponge_strength >= 0.0)) throw InvalidGeometry("grid: sponge_strength must be >= 0");
  spacing_ = (L - params.a()) / (n_side - 1);
}

VectorXd Grid::right_nodes() const {
  VectorXd x(n_side_);
  for (int j = 0; j < n_side_; ++j) x(j) = a() + j * spacing_;
  x(n_side_ - 1) = L_;
  return x;
}

VectorXd Grid::left_nodes() const { return (-right_nodes()).reverse(); }

VectorXd Grid::right_midpoints() const {
  VectorXd x(cells());
  for (int j = 0; j < cells(); ++j) x(j) = a() + (j + 0.5) * spacing_;
  return x;
}

VectorXd Grid::left_midpoints() const { return (-right_midpoints()).reverse(); }

double Grid::sigma(double x) const {
  if (sponge_width_ <= 0.0) return 0.0;
  const double start = L_ - sponge_width_;
  const double depth = std::abs(x) - start;
  if (depth <= 0.0) return 0.0;
  const double s = depth / sponge_width_;
  return sponge_strength_ * s * s;
}

Grid Grid::without_sponge() const { return Grid(params_, L_, n_side_, 0.0, 0.0); }

Grid build_grid(const PhysicalParams& params, double L, int n_side, double sponge_width,
                double sponge_strength) {
  return Grid(params, L, n_side, sponge_width, sponge_strength);
}

int Layout::q_left_node(int k) const {
  if (k == 0) return -1;
  if (k == cells()) return q_minus();
  return 1 + 2 * cells() + (k - 1);
}

int Layout::q_right_node(int k) const {
  if (k == 0) return q_plus();
  if (k == cells()) return -1;
  return 1 + 2 * cells() + (cells() - 1) + (k - 1);
}

VectorXd flatten(const State& s) {
  const int n_side = static_cast<int>(s.h_left.size()) + 1;
  const Layout lay{n_side};
  if (s.h_right.size() != lay.cells() || s.q_left.size() != lay.cells() - 1 ||
      s.q_right.size() != lay.cells() - 1) {
    throw GridMismatch("state: component sizes are inconsistent");
  }
  VectorXd z(lay.dimension());
  z(lay.H()) = s.H;
  for (int k = 0; k < lay.cells(); ++k) {
    z(lay.h_left(k)) = s.h_left(k);
    z(lay.h_right(k)) = s.h_right(k);
  }
  for (int k = 1; k < lay.cells(); ++k) {
    z(lay.q_left_node(k)) = s.q_left(k - 1);
    z(lay.q_right_node(k)) = s.q_right(k - 1);
  }
  z(lay.q_minus()) = s.q_minus;
  z(lay.q_plus()) = s.q_plus;
  return z;
}

State unflatten(const Grid& grid, const Eigen::Ref<const VectorXd>& z) {
  const Layout lay{grid.n_side()};
  if (z.size() != lay.dimension()) throw GridMismatch("state: vector length mismatch");
  const int N = lay.cells();
  State s;
  s.H = z(lay.H());
  s.h_left = z.segment(lay.h_left(0), N);
  s.h_right = z.segment(lay.h_right(0), N);
  s.q_left = z.segment(lay.q_left_node(1), N - 1);
  s.q_right = z.segment(lay.q_right_node(1), N - 1);
  s.q_minus = z(lay.q_minus());
  s.q_plus = z(lay.q_plus());
  return s;
}

namespace {

// 2x2 weight of (q_-, q_+): M^{-1}/(4a^2) from the solid plus dx/2 from the
// trapezoid end weights.
Eigen::Matrix2d boundary_weight(const Grid& grid) {
  const double a = grid.a();
  return spectral::matrix_M_inverse(grid.params()) / (4.0 * a * a) +
         0.5 * grid.spacing() * Eigen::Matrix2d::Identity();
}

}  // namespace

SemiDiscreteSystem assemble(const Grid& grid) {
  const Layout lay{grid.n_side()};
  const int n = lay.dimension();
  const int N = lay.cells();
  const double a = grid.a();
  const double mu = grid.mu();
  const double dx = grid.spacing();
  const VectorXd xl = grid.left_nodes();
  const VectorXd xr = grid.right_nodes();

  MatrixXd A = MatrixXd::Zero(n, n);
  auto add = [&](int row, int col, double v) {
    if (col >= 0) A(row, col) += v;
  };

  // Hdot = -(q_+ - q_-)/(2a)
  add(lay.H(), lay.q_plus(), -1.0 / (2.0 * a));
  add(lay.H(), lay.q_minus(), 1.0 / (2.0 * a));

  // hdot at midpoints = -dq/dx
  for (int k = 0; k < N; ++k) {
    add(lay.h_left(k), lay.q_left_node(k + 1), -1.0 / dx);
    add(lay.h_left(k), lay.q_left_node(k), 1.0 / dx);
    add(lay.h_right(k), lay.q_right_node(k + 1), -1.0 / dx);
    add(lay.h_right(k), lay.q_right_node(k), 1.0 / dx);
  }

  // qdot at interior nodes = -dh/dx + mu d2q/dx2 - sigma q
  const double diff = mu / (dx * dx);
  for (int k = 1; k < N; ++k) {
    const int row_l = lay.q_left_node(k);
    add(row_l, lay.h_left(k), -1.0 / dx);
    add(row_l, lay.h_left(k - 1), 1.0 / dx);
    add(row_l, lay.q_left_node(k + 1), diff);
    add(row_l, lay.q_left_node(k - 1), diff);
    add(row_l, row_l, -2.0 * diff - grid.sigma(xl(k)));

    const int row_r = lay.q_right_node(k);
    add(row_r, lay.h_right(k), -1.0 / dx);
    add(row_r, lay.h_right(k - 1), 1.0 / dx);
    add(row_r, lay.q_right_node(k + 1), diff);
    add(row_r, lay.q_right_node(k - 1), diff);
    add(row_r, row_r, -2.0 * diff - grid.sigma(xr(k)));
  }

  // Boundary block: W_b [qdot_-; qdot_+] = beta + u/(2a) [1; -1] with
  //   beta_- =  mu d/(2a) + (h(-a-) - H) - mu (q_- - q_{N-1}) / dx
  //   beta_+ = -mu d/(2a) - (h(a+) - H) + mu (q_1 - q_+) / dx,   d = q_+ - q_-.
  MatrixXd beta = MatrixXd::Zero(2, n);
  const double visc = mu / (2.0 * a);
  beta(0, lay.q_plus()) += visc;
  beta(0, lay.q_minus()) -= visc;
  beta(0, lay.h_left(N - 1)) += 1.0;
  beta(0, lay.H()) -= 1.0;
  beta(0, lay.q_minus()) -= mu / dx;
  if (lay.q_left_node(N - 1) >= 0) beta(0, lay.q_left_node(N - 1)) += mu / dx;

  beta(1, lay.q_plus()) -= visc;
  beta(1, lay.q_minus()) += visc;
  beta(1, lay.h_right(0)) -= 1.0;
  beta(1, lay.H()) += 1.0;
  beta(1, lay.q_plus()) -= mu / dx;
  if (lay.q_right_node(1) >= 0) beta(1, lay.q_right_node(1)) += mu / dx;

  const Eigen::Matrix2d wb = boundary_weight(grid);
  const Eigen::Matrix2d wb_inv = wb.inverse();
  const MatrixXd rows = wb_inv * beta;
  A.row(lay.q_minus()) += rows.row(0);
  A.row(lay.q_plus()) += rows.row(1);

  VectorXd B = VectorXd::Zero(n);
  const Eigen::Vector2d b = wb_inv * Eigen::Vector2d(1.0, -1.0) / (2.0 * a);
  B(lay.q_minus()) = b(0);
  B(lay.q_plus()) = b(1);

  Eigen::RowVectorXd C = Eigen::RowVectorXd::Zero(n);
  C(lay.q_plus()) = -1.0 / (2.0 * a);
  C(lay.q_minus()) = 1.0 / (2.0 * a);

  return SemiDiscreteSystem{grid, std::move(A), std::move(B), C, -C};
}

MatrixXd energy_matrix(const Grid& grid) {
  const Layout lay{grid.n_side()};
  const int n = lay.dimension();
  MatrixXd W = MatrixXd::Zero(n, n);
  W(lay.H(), lay.H()) = 2.0 * grid.a();
  for (int i = 1; i < lay.q_minus(); ++i) W(i, i) = grid.spacing();
  W.block<2, 2>(lay.q_minus(), lay.q_minus()) = boundary_weight(grid);
  return W;
}

MatrixXd dissipation_matrix(const Grid& grid, bool include_sponge) {
  const Layout lay{grid.n_side()};
  const int n = lay.dimension();
  const int N = lay.cells();
  const double mu = grid.mu();
  const double dx = grid.spacing();
  MatrixXd D = MatrixXd::Zero(n, n);
  auto add_difference = [&](int i, int j, double weight) {
    // weight * (z_i - z_j)^2, with -1 meaning a Dirichlet zero
    if (i >= 0) D(i, i) += weight;
    if (j >= 0) D(j, j) += weight;
    if (i >= 0 && j >= 0) {
      D(i, j) -= weight;
      D(j, i) -= weight;
    }
  };
  for (int k = 0; k < N; ++k) {
    add_difference(lay.q_left_node(k + 1), lay.q_left_node(k), mu / dx);
    add_difference(lay.q_right_node(k + 1), lay.q_right_node(k), mu / dx);
  }
  add_difference(lay.q_plus(), lay.q_minus(), mu / (2.0 * grid.a()));
  if (include_sponge) {
    const VectorXd xl = grid.left_nodes();
    const VectorXd xr = grid.right_nodes();
    for (int k = 1; k < N; ++k) {
      D(lay.q_left_node(k), lay.q_left_node(k)) += dx * grid.sigma(xl(k));
      D(lay.q_right_node(k), lay.q_right_node(k)) += dx * grid.sigma(xr(k));
    }
  }
  return D;
}

EnergyParts energy_parts(const Eigen::Ref<const VectorXd>& z, const Grid& grid) {
  const Layout lay{grid.n_side()};
  if (z.size() != lay.dimension()) throw GridMismatch("energy: vector length mismatch");
  const double a = grid.a();
  const double dx = grid.spacing();
  const double qm = z(lay.q_minus());
  const double qp = z(lay.q_plus());
  EnergyParts e;
  e.exterior = 0.5 * dx * z.segment(1, lay.q_minus() - 1).squaredNorm();
  e.boundary_correction = 0.25 * dx * (qm * qm + qp * qp);
  // q_I(x) = -Hdot x + s on [-a, a]
  const double hdot = -(qp - qm) / (2.0 * a);
  const double s = 0.5 * (qp + qm);
  const double H = z(lay.H());
  e.interior = 0.5 * (hdot * hdot * 2.0 * a * a * a / 3.0 + 2.0 * a * s * s) + a * H * H;
  e.kinetic = 0.5 * hdot * hdot;
  return e;
}

double energy(const Eigen::Ref<const VectorXd>& z, const Grid& grid) {
  return energy_parts(z, grid).total();
}

double energy(const State& s, const Grid& grid) { return energy(flatten(s), grid); }

VectorXd mass_covector(const Grid& grid) {
  const Layout lay{grid.n_side()};
  VectorXd w = VectorXd::Zero(lay.dimension());
  w(lay.H()) = 2.0 * grid.a();
  for (int k = 0; k < lay.cells(); ++k) {
    w(lay.h_left(k)) = grid.spacing();
    w(lay.h_right(k)) = grid.spacing();
  }
  return w;
}

VectorXd rest_state(const Grid& grid, double level) {
  const Layout lay{grid.n_side()};
  VectorXd z = VectorXd::Zero(lay.dimension());
  z(lay.H()) = level;
  for (int k = 0; k < lay.cells(); ++k) {
    z(lay.h_left(k)) = level;
    z(lay.h_right(k)) = level;
  }
  return z;
}

State initial_state(const Grid& grid, double H0, double G0, const ScalarFunction& h0,
                    const ScalarFunction& q0) {
  const int N = grid.cells();
  const VectorXd xl = grid.left_nodes();
  const VectorXd xr = grid.right_nodes();
  const VectorXd ml = grid.left_midpoints();
  const VectorXd mr = grid.right_midpoints();
  State s;
  s.H = H0;
  s.h_left.resize(N);
  s.h_right.resize(N);
  for (int k = 0; k < N; ++k) {
    s.h_left(k) = h0(ml(k));
    s.h_right(k) = h0(mr(k));
  }
  s.q_left.resize(N - 1);
  s.q_right.resize(N - 1);
  for (int k = 1; k < N; ++k) {
    s.q_left(k - 1) = q0(xl(k));
    s.q_right(k - 1) = q0(xr(k));
  }
  s.q_minus = q0(-grid.a());
  s.q_plus = q0(grid.a());
  const double mismatch = G0 - s.Hdot(grid.a());
  if (!(std::abs(mismatch) <= 1e-10)) {
    throw CompatibilityViolation("initial data: G0 = " + std::to_string(G0) +
                                 " but -(q0(a) - q0(-a))/(2a) = " +
                                 std::to_string(s.Hdot(grid.a())));
  }
  return s;
}

PressureReport reconstruct_pressure(const Eigen::Ref<const VectorXd>& z,
                                    const Eigen::Ref<const VectorXd>& zdot, double u,
                                    const Grid& grid) {
  const Layout lay{grid.n_side()};
  if (z.size() != lay.dimension() || zdot.size() != lay.dimension()) {
    throw GridMismatch("pressure: vector length mismatch");
  }
  const int N = lay.cells();
  const double a = grid.a();
  const double mu = grid.mu();
  const double dx = grid.spacing();
  const double H = z(lay.H());
  const double hdot = -(z(lay.q_plus()) - z(lay.q_minus())) / (2.0 * a);
  const double hddot = -(zdot(lay.q_plus()) - zdot(lay.q_minus())) / (2.0 * a);

  PressureReport r;
  r.p.c2 = 0.5 * hddot;
  r.p.c1 = -0.5 * (zdot(lay.q_plus()) + zdot(lay.q_minus()));

  auto q_at = [&](int idx) { return idx >= 0 ? z(idx) : 0.0; };
  // Second-order one-sided traces just outside the solid.
  const double h_left_trace = 1.5 * z(lay.h_left(N - 1)) - 0.5 * z(lay.h_left(N - 2));
  const double h_right_trace = 1.5 * z(lay.h_right(0)) - 0.5 * z(lay.h_right(1));
  const double dq_left = (3.0 * z(lay.q_minus()) - 4.0 * q_at(lay.q_left_node(N - 1)) +
                          q_at(lay.q_left_node(N - 2))) /
                         (2.0 * dx);
  const double dq_right = (-3.0 * z(lay.q_plus()) + 4.0 * q_at(lay.q_right_node(1)) -
                           q_at(lay.q_right_node(2))) /
                          (2.0 * dx);

  // Left jump: h(-a-) - mu q'(-a-) = p(-a) + H - mu q'(-a+), with q'(+-a inside) = -Hdot.
  const double p_left = h_left_trace - mu * dq_left - H - mu * hdot;
  r.p.c0 = p_left - (r.p.c2 * a * a - r.p.c1 * a);
  // Right jump: h(a+) - mu q'(a+) = p(a) + H - mu q'(a-).
  r.right_jump_defect = (h_right_trace - mu * dq_right) - (r.p(a) + H + mu * hdot);
  r.newton_defect = hddot - (r.p.integral(a) + u);
  return r;
}

}  // namespace floatsolid
