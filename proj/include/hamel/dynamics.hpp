#pragma once

#include <functional>

#include "hamel/connection.hpp"
#include "hamel/lie.hpp"

namespace hamel {

struct BundleState;

using ForceFn =
    std::function<VecX(double t, const BundleState&)>;  // m_bar+delta_bar

/// Mechanical system on a trivial principal bundle G x V: mass-matrix
/// blocks L (locked inertia, fiber-fiber), K (coupling), S (shape),
/// shape-only potential V, and an optional generalized-force callback.
/// All blocks are functions of the shape coordinates r only (the
/// Lagrangian is G-invariant).
struct MechanicalSystem {
  GroupTag tag = GroupTag::SO3;
  Trivialization triv = Trivialization::Left;
  int delta_bar = 0;
  std::function<MatX(const VecX&)> L;
  std::function<MatX(const VecX&)> K;
  std::function<MatX(const VecX&)> S;
  std::function<double(const VecX&)> V;  // may be empty (no potential)
  ForceFn Q;                             // may be empty (unforced)

  int m_bar() const { return algebra_dim(tag); }
  int dof() const { return m_bar() + delta_bar; }

  MatX eval_L(const VecX& r) const;
  MatX eval_K(const VecX& r) const;
  MatX eval_S(const VecX& r) const;
  double eval_V(const VecX& r) const;
  VecX eval_Q(double t, const BundleState& state) const;
};

/// State on the bundle: fiber pose g, shape r, body velocity xi, shape
/// rate rdot, time t.
struct BundleState {
  GroupElement g;
  VecX r;
  AlgebraVector xi;
  VecX rdot;
  double t = 0.0;

  static BundleState make(const MechanicalSystem& system);
};

/// Fiber + shape accelerations returned by the RHS assemblies.
struct Acceleration {
  VecX fiber;  // xidot or Omegadot
  VecX rddot;
};

MatX mass_matrix(const MechanicalSystem& system, const VecX& r);

/// Block-diagonal mass matrix in locked coordinates,
/// [[L, 0], [0, S - A^T L A]] with A = L^-1 K. Congruent to the mass
/// matrix: equals T^T M T with T = [[I, -A], [0, I]].
MatX locked_mass_matrix(const MechanicalSystem& system, const VecX& r);

/// Momentum Pi = L xi + K rdot conjugate to the fiber velocity.
VecX fiber_momentum(const MechanicalSystem& system, const VecX& r,
                    const AlgebraVector& xi, const VecX& rdot);

/// Spatial (Ad-transported) momentum; constant along unforced motions.
VecX spatial_momentum(const MechanicalSystem& system, const BundleState& s);

double kinetic_energy(const MechanicalSystem& system, const VecX& r,
                      const AlgebraVector& xi, const VecX& rdot);
double total_energy(const MechanicalSystem& system, const BundleState& s);

/// Forced Euler-Poincare + Euler-Lagrange equations in coordinates
/// (xi, rdot): solves M(r) (xidot, rddot) = bias + Q.
Acceleration euler_poincare_rhs(const MechanicalSystem& system,
                                const BundleState& state);

/// Reduced Euler-Lagrange equations in locked coordinates (Omega, rdot)
/// with the block-diagonal locked mass matrix; Omega = xi + A rdot.
Acceleration lagrange_poincare_rhs(const MechanicalSystem& system,
                                   const VecX& r, const VecX& Omega,
                                   const VecX& rdot, double t);

/// Reduced shape dynamics for a system constrained by u = xi + A rdot = 0:
/// either kinematic constraints or conserved zero momentum (mechanical
/// connection). Returns rddot; the fiber velocity is xi = -A(r) rdot.
VecX constrained_rhs(const MechanicalSystem& system,
                     const LocalConnection& conn, const VecX& r,
                     const VecX& rdot, double t);

/// Constrained kinetic-energy mass S - A^T K - K^T A + A^T L A (equals
/// S - A^T L A when the connection is mechanical).
MatX constrained_mass(const MechanicalSystem& system,
                      const LocalConnection& conn, const VecX& r);

/// Holonomic-coordinate system of the trivial-bundle setting: full
/// Lagrangian L(s, r, sdot, rdot) on coordinates q = (s, r) with
/// Chaplygin constraints sdot = -A(r) rdot.
struct CoordinateSystem {
  int n_s = 0;
  int n_r = 0;
  std::function<double(const VecX& q, const VecX& qdot)> lagrangian;
  std::function<MatX(const VecX& r)> A;  // n_s x n_r
  std::function<VecX(const VecX& q, const VecX& qdot)> Q;  // optional
};

/// State for residual evaluation: the constraint and its derivative fix
/// sdot and sddot from (r, rdot, rddot).
struct CoordinateState {
  VecX s;
  VecX r;
  VecX rdot;
  VecX rddot;  // candidate acceleration, not necessarily a solution
};

/// Voronets form of the constrained equations: the plain Euler-Lagrange
/// residuals of the full Lagrangian projected onto the constraint
/// distribution, EL_r(I) - A^a_I EL_s(a), minus the projected forces.
VecX voronets_residual(const CoordinateSystem& cs, const CoordinateState& st);

/// Hamel form (constrained-Lagrangian route with the gamma-coefficient
/// force term); equals voronets_residual analytically.
VecX hamel_constrained_residual(const CoordinateSystem& cs,
                                const CoordinateState& st);

namespace detail {
/// Directional derivative sum_J dM/dr^J v^J by central differences.
MatX directional_block_derivative(const std::function<MatX(const VecX&)>& M,
                                  const VecX& r, const VecX& v);
/// Per-coordinate partial derivatives of a matrix function.
std::vector<MatX> block_partials(const std::function<MatX(const VecX&)>& M,
                                 const VecX& r);
VecX potential_gradient(const std::function<double(const VecX&)>& V,
                        const VecX& r);
Eigen::LDLT<MatX> spd_factor(const MatX& m, const char* label);
}  // namespace detail

}  // namespace hamel
