#include "bubble/mode_dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bubble {

ModeStepper::ModeStepper(ModeSystem system, double dt)
    : system_(std::move(system)), dt_(dt) {
  if (!system_.has_interface()) {
    throw std::invalid_argument("ModeStepper: needs a two-phase mode system");
  }
  if (!(dt > 0)) throw std::invalid_argument("ModeStepper: dt must be positive");
  reduced_ = reduce(system_);

  const int nc = reduced_.size();
  const double mu = system_.params.mu;
  const double w = system_.interface_weight;
  step_matrix_ = Eigen::MatrixXd::Zero(nc + 2, nc + 2);
  step_matrix_.topLeftCorner(nc, nc) = reduced_.mass + dt * reduced_.stiffness;
  step_matrix_.topRightCorner(nc, 2) =
      -dt * mu * w * reduced_.trace.transpose() * system_.surface_laplacian;
  step_matrix_.bottomLeftCorner(2, nc) = -dt * reduced_.trace;
  step_matrix_.bottomRightCorner(2, 2).setIdentity();
  lu_.compute(step_matrix_);

  const double rcond = lu_.rcond();
  if (!(rcond > 1e-14)) {
    throw std::runtime_error("ModeStepper: singular step matrix for mode " +
                             std::to_string(system_.mode) + " (grids " +
                             std::to_string(system_.inner.intervals()) + "/" +
                             std::to_string(system_.outer.intervals()) + ")");
  }
}

Eigen::VectorXd ModeStepper::step(const Eigen::VectorXd& x, const Eigen::Vector2d& g,
                                  const Eigen::VectorXd* force) const {
  const int nc = reduced_.size();
  Eigen::VectorXd rhs(nc + 2);
  rhs.head(nc) = reduced_.mass * x.head(nc) +
                 dt_ * system_.interface_weight * reduced_.trace.transpose() * g;
  if (force != nullptr) {
    rhs.head(nc) += dt_ * reduced_.basis.transpose() * system_.mass.cwiseProduct(*force);
  }
  rhs.tail(2) = x.tail(2);
  return lu_.solve(rhs);
}

Eigen::VectorXd ModeStepper::apply(const Eigen::VectorXd& x) const {
  const int nc = reduced_.size();
  Eigen::VectorXd ex(nc + 2);
  ex.head(nc) = reduced_.mass * x.head(nc);
  ex.tail(2) = x.tail(2);
  return lu_.solve(ex);
}

Eigen::VectorXd ModeStepper::solve_transpose(const Eigen::VectorXd& y) const {
  return lu_.transpose().solve(y);
}

Eigen::VectorXd ModeStepper::apply_transpose(const Eigen::VectorXd& y) const {
  const int nc = reduced_.size();
  Eigen::VectorXd w = solve_transpose(y);
  w.head(nc) = reduced_.mass * w.head(nc).eval();
  return w;
}

Eigen::Matrix2d ModeStepper::interface_stiffness() const {
  return -system_.params.mu * system_.interface_weight * system_.surface_laplacian;
}

Eigen::MatrixXd ModeStepper::pairing() const {
  const int nc = reduced_.size();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(nc + 2, nc + 2);
  j.topLeftCorner(nc, nc) = reduced_.mass;
  j.bottomRightCorner(2, 2) = -interface_stiffness();
  return j;
}

double ModeStepper::energy(const Eigen::VectorXd& x) const {
  const int nc = reduced_.size();
  const Eigen::VectorXd c = x.head(nc);
  const Eigen::Vector2d z = x.tail(2);
  return 0.5 * c.dot(reduced_.mass * c) + 0.5 * z.dot(interface_stiffness() * z);
}

Eigen::VectorXd ModeStepper::reduce_velocity(const Eigen::VectorXd& u) const {
  return reduced_.basis.transpose() * u;
}

SimState ModeStepper::expand(const Eigen::VectorXd& x, int step, const Eigen::VectorXd* previous,
                             const Eigen::Vector2d& g, bool recover_pressure) const {
  const int nc = reduced_.size();
  SimState s;
  s.step = step;
  s.time = step * dt_;
  s.velocity = reduced_.basis * x.head(nc);
  s.displacement = x.tail(2);
  s.interface_velocity = reduced_.trace * x.head(nc);
  s.divergence_residual = (system_.divergence * s.velocity).cwiseAbs().maxCoeff();
  s.energy = energy(x);
  if (previous != nullptr) {
    s.kinematic_residual =
        (s.displacement - previous->tail(2) - dt_ * s.interface_velocity).cwiseAbs().maxCoeff();
    if (recover_pressure) {
      const Eigen::VectorXd u_prev = reduced_.basis * previous->head(nc);
      const Eigen::VectorXd momentum =
          system_.mass.cwiseProduct(s.velocity - u_prev) / dt_ + system_.stiffness * s.velocity -
          system_.interface_weight * system_.trace.transpose() *
              (system_.params.mu * system_.surface_laplacian * s.displacement + g);
      const Eigen::MatrixXd dt = Eigen::MatrixXd(system_.divergence).transpose();
      s.pressure = dt.completeOrthogonalDecomposition().solve(momentum);
    }
  }
  return s;
}

namespace {

void check_state(const SimState& s, double scale) {
  const double tol = 1e-10 * std::max(1.0, scale);
  if (!std::isfinite(s.energy) || s.divergence_residual > tol || s.kinematic_residual > tol) {
    throw std::runtime_error("simulate: constraint residual above tolerance at step " +
                             std::to_string(s.step));
  }
}

}  // namespace

std::vector<SimState> simulate(const ModeStepper& stepper, const SimulationInput& input) {
  if (input.steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
  const int n = stepper.state_size();
  Eigen::VectorXd x = input.initial.size() == 0 ? Eigen::VectorXd::Zero(n) : input.initial;
  if (x.size() != n) throw std::invalid_argument("simulate: initial state has the wrong size");

  std::vector<SimState> states;
  states.reserve(input.steps + 1);
  states.push_back(stepper.expand(x, 0));
  for (int k = 1; k <= input.steps; ++k) {
    const Eigen::Vector2d g =
        input.controls.cols() > 0 ? Eigen::Vector2d(input.controls.col(k - 1)) : Eigen::Vector2d::Zero();
    Eigen::VectorXd force;
    if (input.forcing.cols() > 0) force = input.forcing.col(k - 1);
    const Eigen::VectorXd next = stepper.step(x, g, force.size() > 0 ? &force : nullptr);
    SimState s = stepper.expand(next, k, &x, g, input.recover_pressure && force.size() == 0);
    check_state(s, s.velocity.cwiseAbs().maxCoeff());
    states.push_back(std::move(s));
    x = next;
  }
  return states;
}

Eigen::VectorXd simulate_terminal(const ModeStepper& stepper, const SimulationInput& input) {
  const int n = stepper.state_size();
  Eigen::VectorXd x = input.initial.size() == 0 ? Eigen::VectorXd::Zero(n) : input.initial;
  for (int k = 1; k <= input.steps; ++k) {
    const Eigen::Vector2d g =
        input.controls.cols() > 0 ? Eigen::Vector2d(input.controls.col(k - 1)) : Eigen::Vector2d::Zero();
    Eigen::VectorXd force;
    if (input.forcing.cols() > 0) force = input.forcing.col(k - 1);
    x = stepper.step(x, g, force.size() > 0 ? &force : nullptr);
  }
  return x;
}

namespace {

std::vector<Eigen::VectorXd> adjoint_by_transpose(const ModeStepper& stepper,
                                                  const Eigen::VectorXd& terminal, int steps) {
  const int nc = stepper.velocity_size();
  const Eigen::MatrixXd& mass = stepper.reduced().mass;
  const Eigen::MatrixXd& trace = stepper.reduced().trace;
  std::vector<Eigen::VectorXd> ys(steps + 1);
  ys[steps] = terminal;
  Eigen::VectorXd lambda = stepper.pairing() * terminal;
  for (int k = steps - 1; k >= 0; --k) {
    Eigen::VectorXd w = stepper.solve_transpose(lambda);
    Eigen::VectorXd y(nc + 2);
    y.head(nc) = w.head(nc);
    y.tail(2) = ys[k + 1].tail(2) + stepper.dt() * trace * w.head(nc);
    ys[k] = std::move(y);
    w.head(nc) = mass * w.head(nc).eval();
    lambda = std::move(w);
  }
  return ys;
}

std::vector<Eigen::VectorXd> adjoint_by_backward_pde(const ModeStepper& stepper,
                                                     const Eigen::VectorXd& terminal, int steps) {
  const ModeSystem& sys = stepper.system();
  const ReducedModeSystem& red = stepper.reduced();
  const int nc = red.size();
  const double dt = stepper.dt();

  // Backward difference -(phi_{k+1} - phi_k)/dt with all other terms at k:
  //   rho (phi_k - phi_{k+1})/dt + K phi_k = T^T W mu L zeta_k
  //   zeta_k - zeta_{k+1} = dt T phi_k            (phi = -zeta')
  Eigen::MatrixXd backward = Eigen::MatrixXd::Zero(nc + 2, nc + 2);
  backward.topLeftCorner(nc, nc) = red.mass / dt + red.stiffness;
  backward.topRightCorner(nc, 2) =
      -sys.interface_weight * red.trace.transpose() * (sys.params.mu * sys.surface_laplacian);
  backward.bottomLeftCorner(2, nc) = -dt * red.trace;
  backward.bottomRightCorner(2, 2).setIdentity();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(backward);

  std::vector<Eigen::VectorXd> ys(steps + 1);
  ys[steps] = terminal;
  for (int k = steps - 1; k >= 0; --k) {
    Eigen::VectorXd rhs(nc + 2);
    rhs.head(nc) = red.mass * ys[k + 1].head(nc) / dt;
    rhs.tail(2) = ys[k + 1].tail(2);
    ys[k] = lu.solve(rhs);
  }
  return ys;
}

}  // namespace

std::vector<Eigen::VectorXd> simulate_adjoint(const ModeStepper& stepper,
                                              const Eigen::VectorXd& terminal, int steps,
                                              AdjointScheme scheme) {
  if (steps < 1) throw std::invalid_argument("simulate_adjoint: steps must be >= 1");
  if (terminal.size() != stepper.state_size()) {
    throw std::invalid_argument("simulate_adjoint: terminal state has the wrong size");
  }
  return scheme == AdjointScheme::kTranspose ? adjoint_by_transpose(stepper, terminal, steps)
                                             : adjoint_by_backward_pde(stepper, terminal, steps);
}

}  // namespace bubble
