#pragma once

// Time integration of the linearized two-phase system for one angular mode,
// and its adjoint.
//
// The state is x = [c; Z], with c the velocity in the divergence-free basis
// of ReducedModeSystem and Z = (F, G) the modal interface displacement.
// Implicit Euler gives the one-step map
//
//   (E - dt A) x_{k+1} = E x_k + dt B g_{k+1} (+ dt P^T M f_{k+1}),
//
// with E = diag(M_r, I), A = [[-K_r, mu W T_r^T L], [T_r, 0]] and
// B = [W T_r^T; 0]. The pairing J = diag(M_r, -S), S = -mu W L, satisfies
// J Phi = Phi^T J for Phi = (E - dt A)^{-1} E, which is what makes the
// duality identity hold exactly in the discrete setting.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bubble/radial_stokes.hpp"

namespace bubble {

/// Snapshot of a simulated mode.
struct SimState {
  int step = 0;
  double time = 0.0;
  Eigen::VectorXd velocity;            ///< full velocity unknowns U = P c
  Eigen::Vector2d displacement;        ///< Z = (F, G)
  Eigen::Vector2d interface_velocity;  ///< T U
  Eigen::VectorXd pressure;            ///< per cell; empty unless requested
  double divergence_residual = 0.0;    ///< max |D U|
  double kinematic_residual = 0.0;     ///< max |Z_k - Z_{k-1} - dt T U_k|
  double energy = 0.0;
};

class ModeStepper {
 public:
  /// Takes ownership of a kTwoPhase system; throws if the step matrix is
  /// singular, naming the mode and grid.
  ModeStepper(ModeSystem system, double dt);

  const ModeSystem& system() const { return system_; }
  const ReducedModeSystem& reduced() const { return reduced_; }
  double dt() const { return dt_; }
  int state_size() const { return reduced_.size() + 2; }
  int velocity_size() const { return reduced_.size(); }

  /// x_{k+1} from x_k under interface force g (normal, azimuthal amplitude)
  /// and an optional body force given on the full velocity unknowns.
  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::Vector2d& g,
                       const Eigen::VectorXd* force = nullptr) const;

  /// Phi x (homogeneous step).
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Phi^T y.
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& y) const;
  /// (E - dt A)^{-T} y, the intermediate of apply_transpose().
  Eigen::VectorXd solve_transpose(const Eigen::VectorXd& y) const;

  /// The pairing J = diag(M_r, -S).
  Eigen::MatrixXd pairing() const;
  /// S = -mu W L: Z^T S Z = mu ||grad_G Z||^2.
  Eigen::Matrix2d interface_stiffness() const;

  /// rho/2 ||u||^2 + mu/2 ||grad_G Z||^2.
  double energy(const Eigen::VectorXd& x) const;

  /// Expands x into a snapshot. `previous` enables the kinematic residual;
  /// `recover_pressure` fills the pressure by least squares from the
  /// momentum equation (needs `previous`).
  SimState expand(const Eigen::VectorXd& x, int step, const Eigen::VectorXd* previous = nullptr,
                  const Eigen::Vector2d& g = Eigen::Vector2d::Zero(),
                  bool recover_pressure = false) const;

  /// Reduced coordinates of a full velocity vector (orthogonal projection
  /// onto ker D).
  Eigen::VectorXd reduce_velocity(const Eigen::VectorXd& u) const;

 private:
  ModeSystem system_;
  ReducedModeSystem reduced_;
  double dt_;
  Eigen::MatrixXd step_matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

struct SimulationInput {
  Eigen::VectorXd initial;   ///< x_0, defaults to zero when empty
  Eigen::Matrix2Xd controls;  ///< column k-1 is g on step k; empty means g = 0
  Eigen::MatrixXd forcing;    ///< column k-1 is f on step k; empty means f = 0
  int steps = 1;
  bool recover_pressure = false;
};

/// Runs `input.steps` implicit Euler steps and returns the snapshots x_0..x_N.
/// Throws std::runtime_error naming the step when a constraint residual
/// exceeds 1e-10 or the state stops being finite.
std::vector<SimState> simulate(const ModeStepper& stepper, const SimulationInput& input);

/// Terminal reduced state x_N only.
Eigen::VectorXd simulate_terminal(const ModeStepper& stepper, const SimulationInput& input);

enum class AdjointScheme {
  kTranspose,    ///< transpose of the forward map, applied in reverse
  kBackwardPde,  ///< backward implicit Euler on the adjoint equations
};

/// Adjoint states y_k = [phi_k; zeta_k], k = 0..N, from terminal data y_N.
///
/// kTranspose runs lambda_k = Phi^T lambda_{k+1} from lambda_N = J y_N and
/// reads phi_k off (E - dt A)^{-T} lambda_{k+1}; zeta follows from the
/// adjoint kinematic condition zeta_k = zeta_{k+1} + dt T_r phi_k.
/// kBackwardPde discretizes
///   -rho phi' - div sigma(phi, psi) = 0,  phi = -zeta',
///   -[sigma(phi, psi)] n = mu Delta_G zeta
/// backward in time with its own factorization.
std::vector<Eigen::VectorXd> simulate_adjoint(const ModeStepper& stepper,
                                              const Eigen::VectorXd& terminal, int steps,
                                              AdjointScheme scheme = AdjointScheme::kTranspose);

}  // namespace bubble
