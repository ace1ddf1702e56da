#pragma once

#include <array>

#include "hamel/dynamics.hpp"

namespace hamel {

/// Ball rolling on a plane without slipping or spinning about the
/// vertical. Inertia is taken about the COM in the spatial frame.
struct BallParams {
  double mass = 1.0;    // kg
  double radius = 0.1;  // m
  Mat3 inertia = Mat3::Identity();  // kg m^2

  /// Homogeneous preset, Theta = (2/5) m R^2 I.
  static BallParams homogeneous(double mass = 1.0, double radius = 0.1);
};

struct RollingBallModel {
  MechanicalSystem system;     // right-trivialized SO3 fiber over R^2
  LocalConnection connection;  // A^2_4 = -A^1_5 = 1/R
};

RollingBallModel rolling_ball(const BallParams& params);

/// Satellite with three mutually orthogonal symmetric reaction wheels.
/// Rotor axes are the body frame axes e_i; offsets are measured from
/// the reference frame. Rotor inertias are axisymmetric about their
/// axis (axial/transverse moments), so the blocks are constant.
struct SatelliteParams {
  double body_mass = 10.0;                      // kg
  Mat3 body_inertia =
      Vec3(1.0, 1.2, 1.4).asDiagonal();         // kg m^2, about body COM
  Vec3 body_com = Vec3::Zero();                 // m, from the RFR
  std::array<double, 3> rotor_mass = {1.0, 1.0, 1.0};      // kg
  std::array<double, 3> rotor_axial = {0.02, 0.02, 0.02};  // kg m^2
  std::array<double, 3> rotor_transverse = {0.01, 0.01, 0.01};
  std::array<Vec3, 3> rotor_com = {Vec3(0.1, 0, 0), Vec3(0, 0.1, 0),
                                   Vec3(0, 0, 0.1)};  // m, from the RFR

  double total_mass() const;
  Vec3 total_com() const;  // m, from the RFR

  /// Desk-scale preset with the body COM placed so the total COM sits
  /// at the reference frame while the rotor offsets stay on their axes
  /// (d = 0 and a_i = 0: the two satellite formulations then carry
  /// identical blocks).
  static SatelliteParams com_centered();
};

/// Constant blocks of the SE3 formulation (reference frame arbitrary).
struct SatelliteSe3Blocks {
  Mat6 L;
  Eigen::Matrix<double, 6, 3> K;
  Mat3 S;
  Mat3 Theta_bar;               // composite inertia about the RFR
  std::array<Vec3, 3> theta;    // Theta^i e_i
  std::array<Vec3, 3> a;        // d_i x e_i
  std::array<Mat6, 3> M_rotor;  // rotor inertia matrices about the RFR
  Vec3 d;                       // total COM in the RFR
  double total_mass = 0.0;
};

SatelliteSe3Blocks satellite_se3_blocks(const SatelliteParams& params);

/// Constant blocks of the mixed (SO3 x R3) formulation; the reference
/// frame sits at the total COM and all inertias are taken about it.
struct SatelliteSo3R3Blocks {
  Mat6 L;
  Eigen::Matrix<double, 6, 3> K;
  Mat3 S;
  Mat3 Theta_bar;             // composite inertia about the total COM
  std::array<Vec3, 3> theta;  // Theta^i e_i
  double total_mass = 0.0;
};

SatelliteSo3R3Blocks satellite_so3r3_blocks(const SatelliteParams& params);

MechanicalSystem satellite_so3r3(const SatelliteParams& params);
MechanicalSystem satellite_se3(const SatelliteParams& params);

/// Closed-form inverse of the SE3 locked inertia,
/// [[U, -U skew(d)], [skew(d) U, I/m - skew(d) U skew(d)]] with
/// U = (Theta_bar + m skew(d) skew(d))^-1.
Mat6 satellite_se3_locked_inverse(const SatelliteParams& params);

/// Rigid body with no shape coordinates: L is the 3x3 inertia (SO3) or
/// the 6x6 body inertia assembled from (Theta, mass, com) otherwise.
MechanicalSystem free_rigid_body(GroupTag tag, const Mat3& inertia,
                                 double mass = 1.0,
                                 const Vec3& com = Vec3::Zero());

}  // namespace hamel
