#include "hamel/models.hpp"

#include <cmath>

namespace hamel {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError("invalid params: " + what);
}

bool spd3(const Mat3& m) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.norm()))
    return false;
  Eigen::SelfAdjointEigenSolver<Mat3> es(m);
  return es.eigenvalues().minCoeff() > 0.0;
}

// Parallel-axis shift: inertia about a point offset by c from the COM.
Mat3 shifted(const Mat3& about_com, double mass, const Vec3& c) {
  return about_com + mass * (c.squaredNorm() * Mat3::Identity() -
                             c * c.transpose());
}

Mat3 rotor_own_inertia(const SatelliteParams& p, int i) {
  Vec3 e = Vec3::Zero();
  e[i] = 1.0;
  return p.rotor_transverse[i] * Mat3::Identity() +
         (p.rotor_axial[i] - p.rotor_transverse[i]) * e * e.transpose();
}

void validate(const SatelliteParams& p) {
  require(p.body_mass > 0.0, "body mass must be positive");
  require(spd3(p.body_inertia), "body inertia must be SPD");
  for (int i = 0; i < 3; ++i) {
    require(p.rotor_mass[i] > 0.0, "rotor mass must be positive");
    require(p.rotor_axial[i] > 0.0 && p.rotor_transverse[i] > 0.0,
            "rotor moments must be positive");
  }
}

MechanicalSystem constant_system(GroupTag tag, Trivialization triv,
                                 int delta_bar, MatX L, MatX K, MatX S) {
  MechanicalSystem sys;
  sys.tag = tag;
  sys.triv = triv;
  sys.delta_bar = delta_bar;
  sys.L = [L = std::move(L)](const VecX&) { return L; };
  sys.K = [K = std::move(K)](const VecX&) { return K; };
  sys.S = [S = std::move(S)](const VecX&) { return S; };
  return sys;
}

}  // namespace

BallParams BallParams::homogeneous(double mass, double radius) {
  BallParams p;
  p.mass = mass;
  p.radius = radius;
  p.inertia = 0.4 * mass * radius * radius * Mat3::Identity();
  return p;
}

RollingBallModel rolling_ball(const BallParams& params) {
  require(params.mass > 0.0, "ball mass must be positive");
  require(params.radius > 0.0, "ball radius must be positive");
  require(spd3(params.inertia), "ball inertia must be SPD");

  // Pure rolling: spatial angular velocity is slaved to the contact
  // point, u = omega + A rdot with A^2_4 = -A^1_5 = 1/R.
  MatX A(3, 2);
  A << 0.0, -1.0 / params.radius,
       1.0 / params.radius, 0.0,
       0.0, 0.0;

  RollingBallModel model;
  model.system = constant_system(
      GroupTag::SO3, Trivialization::Right, 2, params.inertia,
      MatX::Zero(3, 2), params.mass * MatX::Identity(2, 2));
  model.connection = LocalConnection(
      GroupTag::SO3, Trivialization::Right, 2,
      [A](const VecX&) { return MatX(A); });
  return model;
}

double SatelliteParams::total_mass() const {
  return body_mass + rotor_mass[0] + rotor_mass[1] + rotor_mass[2];
}

Vec3 SatelliteParams::total_com() const {
  Vec3 c = body_mass * body_com;
  for (int i = 0; i < 3; ++i) c += rotor_mass[i] * rotor_com[i];
  return c / total_mass();
}

SatelliteParams SatelliteParams::com_centered() {
  SatelliteParams p;
  Vec3 rotor_sum = Vec3::Zero();
  for (int i = 0; i < 3; ++i) rotor_sum += p.rotor_mass[i] * p.rotor_com[i];
  p.body_com = -rotor_sum / p.body_mass;
  return p;
}

SatelliteSe3Blocks satellite_se3_blocks(const SatelliteParams& p) {
  validate(p);
  SatelliteSe3Blocks b;
  b.total_mass = p.total_mass();
  b.d = p.total_com();

  b.Theta_bar = shifted(p.body_inertia, p.body_mass, p.body_com);
  b.S = Mat3::Zero();
  for (int i = 0; i < 3; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = 1.0;
    const Mat3 Theta_i =
        shifted(rotor_own_inertia(p, i), p.rotor_mass[i], p.rotor_com[i]);
    b.Theta_bar += Theta_i;
    b.theta[i] = Theta_i * e;
    b.a[i] = p.rotor_com[i].cross(e);
    b.S(i, i) = e.dot(Theta_i * e);

    Mat6 Mi = Mat6::Zero();
    Mi.topLeftCorner<3, 3>() = Theta_i;
    Mi.topRightCorner<3, 3>() = p.rotor_mass[i] * skew(p.rotor_com[i]);
    Mi.bottomLeftCorner<3, 3>() = -p.rotor_mass[i] * skew(p.rotor_com[i]);
    Mi.bottomRightCorner<3, 3>() = p.rotor_mass[i] * Mat3::Identity();
    b.M_rotor[i] = Mi;

    b.K.col(i).head<3>() = b.theta[i];
    b.K.col(i).tail<3>() = -p.rotor_mass[i] * b.a[i];
  }

  b.L = Mat6::Zero();
  b.L.topLeftCorner<3, 3>() = b.Theta_bar;
  b.L.topRightCorner<3, 3>() = b.total_mass * skew(b.d);
  b.L.bottomLeftCorner<3, 3>() = -b.total_mass * skew(b.d);
  b.L.bottomRightCorner<3, 3>() = b.total_mass * Mat3::Identity();
  return b;
}

SatelliteSo3R3Blocks satellite_so3r3_blocks(const SatelliteParams& p) {
  validate(p);
  SatelliteSo3R3Blocks b;
  b.total_mass = p.total_mass();
  const Vec3 com = p.total_com();

  b.Theta_bar = shifted(p.body_inertia, p.body_mass, p.body_com - com);
  b.S = Mat3::Zero();
  for (int i = 0; i < 3; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = 1.0;
    const Mat3 Theta_i = shifted(rotor_own_inertia(p, i), p.rotor_mass[i],
                                 p.rotor_com[i] - com);
    b.Theta_bar += Theta_i;
    b.theta[i] = Theta_i * e;
    b.S(i, i) = e.dot(Theta_i * e);
    b.K.col(i).head<3>() = b.theta[i];
    b.K.col(i).tail<3>().setZero();
  }

  b.L = Mat6::Zero();
  b.L.topLeftCorner<3, 3>() = b.Theta_bar;
  b.L.bottomRightCorner<3, 3>() = b.total_mass * Mat3::Identity();
  return b;
}

MechanicalSystem satellite_so3r3(const SatelliteParams& params) {
  const auto b = satellite_so3r3_blocks(params);
  return constant_system(GroupTag::SO3xR3, Trivialization::Left, 3, b.L, b.K,
                         b.S);
}

MechanicalSystem satellite_se3(const SatelliteParams& params) {
  const auto b = satellite_se3_blocks(params);
  return constant_system(GroupTag::SE3, Trivialization::Left, 3, b.L, b.K,
                         b.S);
}

Mat6 satellite_se3_locked_inverse(const SatelliteParams& params) {
  const auto b = satellite_se3_blocks(params);
  const Mat3 D = skew(b.d);
  const Mat3 U = (b.Theta_bar + b.total_mass * D * D).inverse();
  Mat6 inv;
  inv.topLeftCorner<3, 3>() = U;
  inv.topRightCorner<3, 3>() = -U * D;
  inv.bottomLeftCorner<3, 3>() = D * U;
  inv.bottomRightCorner<3, 3>() =
      Mat3::Identity() / b.total_mass - D * U * D;
  return inv;
}

MechanicalSystem free_rigid_body(GroupTag tag, const Mat3& inertia,
                                 double mass, const Vec3& com) {
  require(spd3(inertia), "inertia must be SPD");
  require(mass > 0.0, "mass must be positive");

  MechanicalSystem sys;
  sys.tag = tag;
  sys.triv = Trivialization::Left;
  sys.delta_bar = 0;
  if (tag == GroupTag::SO3) {
    sys.L = [inertia](const VecX&) { return MatX(inertia); };
  } else {
    Mat6 M = Mat6::Zero();
    M.topLeftCorner<3, 3>() = shifted(inertia, mass, com);
    M.topRightCorner<3, 3>() = mass * skew(com);
    M.bottomLeftCorner<3, 3>() = -mass * skew(com);
    M.bottomRightCorner<3, 3>() = mass * Mat3::Identity();
    if (tag == GroupTag::SO3xR3 && com.norm() > 0.0)
      throw InputError(
          "invalid params: SO3xR3 rigid body requires the frame at the COM");
    sys.L = [M](const VecX&) { return MatX(M); };
  }
  return sys;
}

}  // namespace hamel
