#include "hamel/lie.hpp"

#include <cmath>

namespace hamel {

namespace {
constexpr double kSmallAngle = 1e-4;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

int algebra_dim(GroupTag tag) { return tag == GroupTag::SO3 ? 3 : 6; }

const char* to_string(GroupTag tag) {
  switch (tag) {
    case GroupTag::SO3: return "SO3";
    case GroupTag::SE3: return "SE3";
    case GroupTag::SO3xR3: return "SO3xR3";
  }
  return "?";
}

const char* to_string(Trivialization triv) {
  return triv == Trivialization::Left ? "left" : "right";
}

AlgebraVector::AlgebraVector(GroupTag t, const VecX& c) : tag(t), coords(c) {
  if (coords.size() != algebra_dim(tag))
    throw InputError("algebra vector has dimension " +
                     std::to_string(coords.size()) + ", expected " +
                     std::to_string(algebra_dim(tag)) + " for " +
                     to_string(tag));
}

AlgebraVector AlgebraVector::zero(GroupTag tag) {
  return AlgebraVector(tag, VecX::Zero(algebra_dim(tag)));
}

Vec3 AlgebraVector::linear() const {
  return dim() == 6 ? Vec3(coords.tail<3>()) : Vec3::Zero();
}

GroupElement GroupElement::identity(GroupTag tag) {
  GroupElement g;
  g.tag = tag;
  return g;
}

double GroupElement::orthonormality_defect() const {
  return (rotation.transpose() * rotation - Mat3::Identity())
      .cwiseAbs()
      .maxCoeff();
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
  if (a.tag != b.tag) throw InputError("compose: group tags differ");
  GroupElement g;
  g.tag = a.tag;
  g.rotation = a.rotation * b.rotation;
  switch (a.tag) {
    case GroupTag::SO3:
      break;
    case GroupTag::SE3:
      g.translation = a.translation + a.rotation * b.translation;
      break;
    case GroupTag::SO3xR3:
      g.translation = a.translation + b.translation;
      break;
  }
  return g;
}

GroupElement inverse(const GroupElement& g) {
  GroupElement inv;
  inv.tag = g.tag;
  inv.rotation = g.rotation.transpose();
  switch (g.tag) {
    case GroupTag::SO3:
      break;
    case GroupTag::SE3:
      inv.translation = -(inv.rotation * g.translation);
      break;
    case GroupTag::SO3xR3:
      inv.translation = -g.translation;
      break;
  }
  return inv;
}

GroupElement orthonormalized(const GroupElement& g) {
  // Polar projection via SVD: R <- U V^T, forcing det +1.
  Eigen::JacobiSVD<Mat3> svd(g.rotation,
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 R = svd.matrixU() * svd.matrixV().transpose();
  if (R.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    R = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  GroupElement out = g;
  out.rotation = R;
  return out;
}

Mat3 skew(const Vec3& x) {
  Mat3 m;
  m << 0.0, -x.z(), x.y(),
       x.z(), 0.0, -x.x(),
      -x.y(), x.x(), 0.0;
  return m;
}

Vec3 unskew(const Mat3& m) {
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

MatX hat(const AlgebraVector& v) {
  if (v.tag == GroupTag::SO3) return skew(v.omega());
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = skew(v.omega());
  m.topRightCorner<3, 1>() = v.linear();
  return m;
}

AlgebraVector vee(GroupTag tag, const MatX& m) {
  if (tag == GroupTag::SO3) {
    if (m.rows() != 3 || m.cols() != 3)
      throw InputError("vee: expected 3x3 matrix for SO3");
    return AlgebraVector(tag, unskew(m));
  }
  if (m.rows() != 4 || m.cols() != 4)
    throw InputError("vee: expected 4x4 matrix for " +
                     std::string(to_string(tag)));
  Vec6 c;
  c.head<3>() = unskew(m.topLeftCorner<3, 3>());
  c.tail<3>() = m.topRightCorner<3, 1>();
  return AlgebraVector(tag, c);
}

Mat4 homogeneous(const GroupElement& g) {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = g.rotation;
  m.topRightCorner<3, 1>() = g.translation;
  return m;
}

namespace detail {

double sinc(double t) {
  if (std::abs(t) < kSmallAngle) {
    const double t2 = t * t;
    return 1.0 + t2 * (-1.0 / 6.0 +
           t2 * (1.0 / 120.0 + t2 * (-1.0 / 5040.0 + t2 / 362880.0)));
  }
  return std::sin(t) / t;
}

double cos_coeff(double t) {
  if (std::abs(t) < kSmallAngle) {
    const double t2 = t * t;
    return 0.5 + t2 * (-1.0 / 24.0 +
           t2 * (1.0 / 720.0 + t2 * (-1.0 / 40320.0 + t2 / 3628800.0)));
  }
  return (1.0 - std::cos(t)) / (t * t);
}

double exp_coeff2(double t) {
  if (std::abs(t) < kSmallAngle) {
    const double t2 = t * t;
    return 1.0 / 6.0 + t2 * (-1.0 / 120.0 +
           t2 * (1.0 / 5040.0 + t2 * (-1.0 / 362880.0 + t2 / 39916800.0)));
  }
  return (t - std::sin(t)) / (t * t * t);
}

double dexpinv_coeff(double t) {
  if (std::abs(t) < kSmallAngle) {
    const double t2 = t * t;
    return 1.0 / 12.0 + t2 * (1.0 / 720.0 +
           t2 * (1.0 / 30240.0 + t2 * (1.0 / 1209600.0 + t2 / 47900160.0)));
  }
  return 1.0 / (t * t) - (1.0 + std::cos(t)) / (2.0 * t * std::sin(t));
}

double cos_coeff_dt_over_t(double t) {
  if (std::abs(t) < kSmallAngle) {
    const double t2 = t * t;
    return -1.0 / 12.0 + t2 * (1.0 / 180.0 +
           t2 * (-1.0 / 6720.0 + t2 / 453600.0));
  }
  const double t2 = t * t;
  return (t * std::sin(t) - 2.0 * (1.0 - std::cos(t))) / (t2 * t2);
}

double exp_coeff2_dt_over_t(double t) {
  if (std::abs(t) < kSmallAngle) {
    const double t2 = t * t;
    return -1.0 / 60.0 + t2 * (1.0 / 1260.0 +
           t2 * (-1.0 / 60480.0 + t2 / 4989600.0));
  }
  const double t2 = t * t;
  return (t * (1.0 - std::cos(t)) - 3.0 * (t - std::sin(t))) / (t2 * t2 * t);
}

Mat3 so3_exp(const Vec3& w) {
  const double t = w.norm();
  const Mat3 W = skew(w);
  return Mat3::Identity() + sinc(t) * W + cos_coeff(t) * W * W;
}

Vec3 so3_log(const Mat3& R) {
  const Vec3 s = unskew(Mat3(0.5 * (R - R.transpose())));
  const double c = std::min(1.0, std::max(-1.0, 0.5 * (R.trace() - 1.0)));
  const double sn = std::min(1.0, s.norm());

  if (c > -0.9) {
    const double theta = std::atan2(sn, c);
    return s / sinc(theta);
  }

  // Near pi, sin(theta) is tiny and the antisymmetric part loses the
  // axis; recover it from the symmetric part instead.
  const double theta = kPi - std::asin(sn);
  if (kPi - theta < 1e-8)
    throw BranchAmbiguityError("rotation angle within 1e-8 of pi");
  const Mat3 M = 0.5 * (R + R.transpose()) - c * Mat3::Identity();
  const double one_minus_c = 1.0 - c;
  int k = 0;
  M.diagonal().maxCoeff(&k);
  Vec3 axis;
  axis[k] = std::sqrt(std::max(0.0, M(k, k) / one_minus_c));
  for (int j = 0; j < 3; ++j)
    if (j != k) axis[j] = M(k, j) / (one_minus_c * axis[k]);
  axis.normalize();
  if (axis.dot(s) < 0.0) axis = -axis;
  return theta * axis;
}

Mat3 so3_dexp_right(const Vec3& w) {
  const double t = w.norm();
  const Mat3 W = skew(w);
  return Mat3::Identity() + cos_coeff(t) * W + exp_coeff2(t) * W * W;
}

Mat3 so3_dexpinv_right(const Vec3& w) {
  const double t = w.norm();
  const Mat3 W = skew(w);
  return Mat3::Identity() - 0.5 * W + dexpinv_coeff(t) * W * W;
}

// Directional derivative of so3_dexp_right(w) in direction v; this is the
// lower-left block of the se(3) dexp in [[A, 0], [B, A]] form.
Mat3 se3_dexp_coupling(const Vec3& w, const Vec3& v) {
  const double t = w.norm();
  const Mat3 W = skew(w);
  const Mat3 V = skew(v);
  const double wv = w.dot(v);
  return cos_coeff(t) * V + exp_coeff2(t) * (W * V + V * W) +
         wv * (cos_coeff_dt_over_t(t) * W + exp_coeff2_dt_over_t(t) * W * W);
}

}  // namespace detail

GroupElement exp(const AlgebraVector& eta) {
  GroupElement g;
  g.tag = eta.tag;
  g.rotation = detail::so3_exp(eta.omega());
  switch (eta.tag) {
    case GroupTag::SO3:
      break;
    case GroupTag::SE3:
      g.translation = detail::so3_dexp_right(eta.omega()) * eta.linear();
      break;
    case GroupTag::SO3xR3:
      g.translation = eta.linear();
      break;
  }
  return g;
}

AlgebraVector log(const GroupElement& g) {
  const Vec3 w = detail::so3_log(g.rotation);
  switch (g.tag) {
    case GroupTag::SO3:
      return AlgebraVector(g.tag, w);
    case GroupTag::SE3: {
      Vec6 c;
      c.head<3>() = w;
      c.tail<3>() = detail::so3_dexpinv_right(w) * g.translation;
      return AlgebraVector(g.tag, c);
    }
    case GroupTag::SO3xR3: {
      Vec6 c;
      c.head<3>() = w;
      c.tail<3>() = g.translation;
      return AlgebraVector(g.tag, c);
    }
  }
  throw UnsupportedError("log: unknown group tag");
}

MatX adjoint(const GroupElement& g) {
  switch (g.tag) {
    case GroupTag::SO3:
      return g.rotation;
    case GroupTag::SE3: {
      Mat6 m = Mat6::Zero();
      m.topLeftCorner<3, 3>() = g.rotation;
      m.bottomRightCorner<3, 3>() = g.rotation;
      m.bottomLeftCorner<3, 3>() = skew(g.translation) * g.rotation;
      return m;
    }
    case GroupTag::SO3xR3: {
      Mat6 m = Mat6::Identity();
      m.topLeftCorner<3, 3>() = g.rotation;
      return m;
    }
  }
  throw UnsupportedError("adjoint: unknown group tag");
}

MatX ad(const AlgebraVector& xi) {
  switch (xi.tag) {
    case GroupTag::SO3:
      return skew(xi.omega());
    case GroupTag::SE3: {
      Mat6 m = Mat6::Zero();
      m.topLeftCorner<3, 3>() = skew(xi.omega());
      m.bottomRightCorner<3, 3>() = skew(xi.omega());
      m.bottomLeftCorner<3, 3>() = skew(xi.linear());
      return m;
    }
    case GroupTag::SO3xR3: {
      Mat6 m = Mat6::Zero();
      m.topLeftCorner<3, 3>() = skew(xi.omega());
      return m;
    }
  }
  throw UnsupportedError("ad: unknown group tag");
}

MatX dexp(const AlgebraVector& eta, Trivialization triv) {
  // Left-trivialized differential at eta equals the right one at -eta.
  const VecX c =
      triv == Trivialization::Right ? eta.coords : VecX(-eta.coords);
  const Vec3 w = c.head<3>();
  switch (eta.tag) {
    case GroupTag::SO3:
      return detail::so3_dexp_right(w);
    case GroupTag::SE3: {
      Mat6 m = Mat6::Zero();
      const Mat3 A = detail::so3_dexp_right(w);
      m.topLeftCorner<3, 3>() = A;
      m.bottomRightCorner<3, 3>() = A;
      m.bottomLeftCorner<3, 3>() = detail::se3_dexp_coupling(w, c.tail<3>());
      return m;
    }
    case GroupTag::SO3xR3: {
      Mat6 m = Mat6::Identity();
      m.topLeftCorner<3, 3>() = detail::so3_dexp_right(w);
      return m;
    }
  }
  throw UnsupportedError("dexp: unknown group tag");
}

MatX dexpinv(const AlgebraVector& eta, Trivialization triv) {
  const VecX c =
      triv == Trivialization::Right ? eta.coords : VecX(-eta.coords);
  const Vec3 w = c.head<3>();
  switch (eta.tag) {
    case GroupTag::SO3:
      return detail::so3_dexpinv_right(w);
    case GroupTag::SE3: {
      Mat6 m = Mat6::Zero();
      const Mat3 Ai = detail::so3_dexpinv_right(w);
      const Mat3 B = detail::se3_dexp_coupling(w, c.tail<3>());
      m.topLeftCorner<3, 3>() = Ai;
      m.bottomRightCorner<3, 3>() = Ai;
      m.bottomLeftCorner<3, 3>() = -Ai * B * Ai;
      return m;
    }
    case GroupTag::SO3xR3: {
      Mat6 m = Mat6::Identity();
      m.topLeftCorner<3, 3>() = detail::so3_dexpinv_right(w);
      return m;
    }
  }
  throw UnsupportedError("dexpinv: unknown group tag");
}

double distance(const GroupElement& a, const GroupElement& b) {
  return log(compose(inverse(a), b)).norm();
}

}  // namespace hamel
