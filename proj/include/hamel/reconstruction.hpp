#pragma once

#include <optional>
#include <vector>

#include "hamel/dynamics.hpp"

namespace hamel {

/// Which right-hand-side family drives the simulation.
enum class Formulation {
  EulerPoincare,      // state (xi, rdot), full mass matrix
  LagrangePoincare,   // state (Omega, rdot), locked mass matrix
  Constrained,        // shape state only, kinematic connection
  MomentumConserved,  // shape state only, mechanical connection, Pi = 0
};

const char* to_string(Formulation f);

/// Time-sampled motion. States always carry the physical body velocity
/// xi (locked-coordinate runs are converted on storage).
struct Trajectory {
  std::vector<double> times;
  std::vector<BundleState> states;
  std::vector<std::size_t> rebase_events;  // indices into times/states

  const BundleState& back() const { return states.back(); }
};

struct IntegrateOptions {
  double rebase_threshold = 1.5707963267948966;  // pi/2 on ||eta_rot||
  int store_every = 1;
};

/// Munthe-Kaas RK4: the fiber motion is integrated on the algebra
/// variable eta with g = g0 exp(eta) (left trivialization) or
/// g = exp(eta) g0 (right), stepping eta through dexpinv; shape
/// variables ride along under classical RK4. Rebases eta to zero when
/// the rotation part exceeds the threshold. Throws DivergenceError when
/// the state stops being finite.
Trajectory integrate(const MechanicalSystem& system, Formulation form,
                     const BundleState& initial, double t_end, double dt,
                     const LocalConnection* kinematic = nullptr,
                     const IntegrateOptions& opts = {});

/// Prescribed shape motion r(t); rdot falls back to central differences
/// when not supplied.
struct ShapePath {
  std::function<VecX(double)> r;
  std::function<VecX(double)> rdot;  // optional
  double period = 1.0;

  VecX eval_r(double t) const;
  VecX eval_rdot(double t) const;
};

/// Integrates the extended reconstruction flow
///   xi(t) = L(r)^-1 Pi(t) - A(r) rdot(t)
/// for a prescribed shape path, where Pi(t) is the Ad-transported
/// conserved momentum with body value Pi0 at t = 0 and A is the
/// mechanical connection. Pi0 = 0 gives the pure geometric-phase flow.
Trajectory reconstruct_with_drift(const MechanicalSystem& system,
                                  const VecX& Pi0, const ShapePath& path,
                                  const GroupElement& g0, double t_end,
                                  double dt,
                                  const IntegrateOptions& opts = {});

/// Net fiber displacement per shape cycle and its log coordinates.
struct PhaseResult {
  GroupElement phase;  // net fiber displacement over one shape cycle
  int cycle_count = 0;
  std::vector<GroupElement> per_cycle;
  std::vector<VecX> per_cycle_log;
};

/// Holonomy of a closed shape path under a connection: integrates
/// xi = -A(r) rdot over `cycles` periods. Throws InputError unless
/// ||r(0) - r(T)|| <= 1e-10.
PhaseResult geometric_phase(const LocalConnection& conn,
                            const ShapePath& path, const GroupElement& g0,
                            double dt, int cycles = 1);

/// Phase result for an already-integrated trajectory sampled at
/// multiples of `period`.
PhaseResult phases_from_trajectory(const Trajectory& traj,
                                   Trivialization triv, double period);

/// Uniform grid over a shape-space box; returns the points where the
/// curvature vanishes (||B(r)||_inf < tol) -- candidates for zero-phase
/// cyclic paths.
std::vector<VecX> pseudo_holonomy_scan(const LocalConnection& conn,
                                       const VecX& lo, const VecX& hi,
                                       const std::vector<int>& counts,
                                       double tol = 1e-8);

}  // namespace hamel
