#pragma once

#include <Eigen/Dense>

#include "hamel/errors.hpp"

namespace hamel {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// The three fiber groups supported by the library.
enum class GroupTag { SO3, SE3, SO3xR3 };

/// Identification of velocities with the Lie algebra: Left is g^-1*dg
/// (body velocities), Right is dg*g^-1 (spatial velocities).
enum class Trivialization { Left, Right };

int algebra_dim(GroupTag tag);
const char* to_string(GroupTag tag);
const char* to_string(Trivialization triv);

/// Element of the Lie algebra identified with R^3 (SO3) or R^6 (SE3,
/// SO3xR3). Six-dimensional coordinates are split (omega, v).
struct AlgebraVector {
  GroupTag tag = GroupTag::SO3;
  VecX coords;

  AlgebraVector() = default;
  AlgebraVector(GroupTag t, const VecX& c);
  static AlgebraVector zero(GroupTag tag);

  int dim() const { return static_cast<int>(coords.size()); }
  Vec3 omega() const { return coords.head<3>(); }
  Vec3 linear() const;  // translational part; zero vector for SO3
  double norm() const { return coords.norm(); }
};

/// Element of SO(3), SE(3), or SO(3)xR^3 stored as a rotation matrix plus a
/// translation vector (the translation stays zero for SO3).
struct GroupElement {
  GroupTag tag = GroupTag::SO3;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static GroupElement identity(GroupTag tag);

  /// Deviation from orthonormality, ||R^T R - I||_inf.
  double orthonormality_defect() const;
};

GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& g);

/// Re-projects the rotation onto SO(3) (polar projection). Long
/// composition chains drift; reconstruction calls this periodically.
GroupElement orthonormalized(const GroupElement& g);

/// 3x3 skew matrix of x, so that skew(x)*y = cross(x, y).
Mat3 skew(const Vec3& x);
Vec3 unskew(const Mat3& m);

/// Matrix form of an algebra vector: 3x3 skew for SO3, else the 4x4
/// homogeneous container [[skew(omega), v], [0, 0]].
MatX hat(const AlgebraVector& v);
AlgebraVector vee(GroupTag tag, const MatX& m);

/// 4x4 homogeneous matrix of g (rotation + translation column).
Mat4 homogeneous(const GroupElement& g);

GroupElement exp(const AlgebraVector& eta);

/// Principal-branch logarithm. Throws BranchAmbiguityError when the
/// rotation angle is within 1e-8 of pi.
AlgebraVector log(const GroupElement& g);

/// Adjoint matrix Ad_g: 3x3 (SO3) or 6x6. For SE3 this is
/// [[R, 0], [skew(p)R, R]]; for SO3xR3 it is blkdiag(R, I).
MatX adjoint(const GroupElement& g);

/// Matrix of ad_xi, i.e. ad(x)*y = [x, y]. For SE3 this is
/// [[skew(w), 0], [skew(v), skew(w)]]; for SO3xR3 the lower-right
/// block is zero.
MatX ad(const AlgebraVector& xi);

/// Trivialized differential of exp. Right: d/dt exp(eta) =
/// hat(dexp(eta, Right)*etadot) * exp(eta); Left: the same with the
/// factor on the right. Closed forms with series fallback for small
/// rotation angles.
MatX dexp(const AlgebraVector& eta, Trivialization triv);
MatX dexpinv(const AlgebraVector& eta, Trivialization triv);

/// Group distance ||log(a^-1 b)||; used by tests and phase reports.
double distance(const GroupElement& a, const GroupElement& b);

namespace detail {
// Scalar coefficient functions of the rotation angle, with Taylor
// fallbacks (through order 8) below theta = 1e-4.
double sinc(double theta);                // sin(t)/t
double cos_coeff(double theta);           // (1-cos t)/t^2
double exp_coeff2(double theta);          // (t-sin t)/t^3
double dexpinv_coeff(double theta);       // 1/t^2 - (1+cos t)/(2 t sin t)
double cos_coeff_dt_over_t(double theta); // d/dt[(1-cos t)/t^2] / t
double exp_coeff2_dt_over_t(double theta);// d/dt[(t-sin t)/t^3] / t

Mat3 so3_exp(const Vec3& w);
Vec3 so3_log(const Mat3& R);
Mat3 so3_dexp_right(const Vec3& w);
Mat3 so3_dexpinv_right(const Vec3& w);
}  // namespace detail

}  // namespace hamel
