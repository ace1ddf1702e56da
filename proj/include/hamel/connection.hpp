#pragma once

#include <functional>
#include <vector>

#include "hamel/lie.hpp"

namespace hamel {

struct MechanicalSystem;  // dynamics.hpp

/// Local connection form in Chaplygin form: a shape-dependent matrix
/// A(r) (m_bar x delta_bar) mapping shape rates to algebra elements,
/// u = xi + A(r) rdot. Covers both kinematic connections (constraints)
/// and mechanical connections (momentum).
struct LocalConnection {
  GroupTag tag = GroupTag::SO3;
  Trivialization triv = Trivialization::Left;
  int m_bar = 0;
  int delta_bar = 0;
  std::function<MatX(const VecX&)> A;

  LocalConnection() = default;
  LocalConnection(GroupTag tag_, Trivialization triv_, int delta_bar_,
                  std::function<MatX(const VecX&)> A_);

  MatX eval(const VecX& r) const;
};

/// Curvature components B^alpha_{IJ} at one shape point, antisymmetric
/// in (I, J). Stored as B[alpha](I, J).
struct CurvatureComponents {
  std::vector<MatX> B;

  int m_bar() const { return static_cast<int>(B.size()); }
  double operator()(int alpha, int I, int J) const { return B[alpha](I, J); }
  double max_abs() const;
};

struct FlatnessReport {
  bool flat = false;
  double max_abs_curvature = 0.0;
  VecX worst_r;
};

/// Curvature of the local connection,
///   B^a_{IJ} = dA^a_I/dr^J - dA^a_J/dr^I +- c^a_{lm} A^l_I A^m_J,
/// with + for left and - for right trivialization. The derivative terms
/// use central differences; the bracket term is exact. Convention: B
/// equals the Hamel coefficients gamma^a_{IJ} (single library-wide sign
/// ledger, see docs/sign-conventions.md).
CurvatureComponents curvature(const LocalConnection& conn, const VecX& r);

/// Mechanical connection A(r) = L(r)^-1 K(r). Throws InertiaError when
/// L(r) is not symmetric positive definite.
MatX mechanical_connection(const MechanicalSystem& system, const VecX& r);

/// The full LocalConnection wrapping mechanical_connection.
LocalConnection mechanical_connection_form(const MechanicalSystem& system);

/// Locked velocity Omega = xi + A(r) rdot of the mechanical connection.
AlgebraVector locked_velocity(const MechanicalSystem& system, const VecX& r,
                              const AlgebraVector& xi, const VecX& rdot);

/// Samples the curvature over an axis-aligned chart box; flat iff the
/// largest |B| over all samples is below tol.
FlatnessReport is_flat(const LocalConnection& conn, const VecX& box_lo,
                       const VecX& box_hi, int samples = 1000,
                       double tol = 1e-8);

/// Centroidal quantities for an SE3 system: momentum, velocity and
/// inertia seen from a frame at pose g_bG relative to the body frame.
struct CentroidalState {
  VecX momentum;   // Pi_G = Ad_{g_bG}^T Pi
  VecX velocity;   // V_G  = Ad_{g_bG}^-1 V_loc
  MatX inertia;    // M_G  = Ad_{g_bG}^T L Ad_{g_bG}
};

CentroidalState centroidal_transform(const MechanicalSystem& system,
                                     const VecX& r, const AlgebraVector& xi,
                                     const VecX& rdot,
                                     const GroupElement& g_bG);

}  // namespace hamel
