#include "hamel/quasi_velocity.hpp"

#include <cmath>
#include <random>

namespace hamel {

double fd_step(const VecX& q) {
  return 1e-6 * std::max(1.0, q.norm());
}

QuasiVelocityMap::QuasiVelocityMap(int n_, MatrixFn A_, MatrixFn B_)
    : n(n_), A(std::move(A_)), B(std::move(B_)), m_bar(0), delta_bar(n_) {}

QuasiVelocityMap::QuasiVelocityMap(int m_bar_, int delta_bar_, MatrixFn A_,
                                   MatrixFn B_)
    : n(m_bar_ + delta_bar_),
      A(std::move(A_)),
      B(std::move(B_)),
      m_bar(m_bar_),
      delta_bar(delta_bar_) {}

MatX QuasiVelocityMap::eval_A(const VecX& q) const {
  MatX a = A(q);
  if (a.rows() != n || a.cols() != n)
    throw InputError("quasi-velocity map A(q) is " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) + ", expected " +
                     std::to_string(n) + "x" + std::to_string(n));
  return a;
}

MatX QuasiVelocityMap::eval_B(const VecX& q) const {
  if (B) return B(q);
  const MatX a = eval_A(q);
  Eigen::FullPivLU<MatX> lu(a);
  if (!lu.isInvertible())
    throw SingularMapError("A(q) is not invertible at the evaluation point");
  return lu.inverse();
}

double HamelCoefficients::max_abs() const {
  double m = 0.0;
  for (const auto& g : gamma) m = std::max(m, g.cwiseAbs().maxCoeff());
  return m;
}

double HamelCoefficients::antisymmetry_defect() const {
  double m = 0.0;
  for (const auto& g : gamma)
    m = std::max(m, (g + g.transpose()).cwiseAbs().maxCoeff());
  return m;
}

HamelCoefficients HamelCoefficients::zero(int n) {
  HamelCoefficients h;
  h.gamma.assign(n, MatX::Zero(n, n));
  return h;
}

namespace {

// dA[s] = dA/dq^s by central differences.
std::vector<MatX> matrix_derivatives(const MatrixFn& A, const VecX& q, int n) {
  const double h = fd_step(q);
  std::vector<MatX> dA(q.size());
  for (int s = 0; s < q.size(); ++s) {
    VecX qp = q, qm = q;
    qp[s] += h;
    qm[s] -= h;
    dA[s] = (A(qp) - A(qm)) / (2.0 * h);
    if (dA[s].rows() != n || dA[s].cols() != n)
      throw InputError("quasi-velocity map A(q) changed shape under FD");
  }
  return dA;
}

}  // namespace

HamelCoefficients hamel_numeric(const QuasiVelocityMap& map, const VecX& q) {
  if (q.size() != map.n)
    throw InputError("hamel_numeric: q has dimension " +
                     std::to_string(q.size()) + ", expected " +
                     std::to_string(map.n));
  const int n = map.n;
  const MatX B = map.eval_B(q);
  const std::vector<MatX> dA = matrix_derivatives(map.A, q, n);

  // curl[c](r, s) = dA^c_r/dq^s - dA^c_s/dq^r
  HamelCoefficients out;
  out.gamma.assign(n, MatX::Zero(n, n));
  MatX curl(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) curl(r, s) = dA[s](c, r) - dA[r](c, s);
    out.gamma[c] = B.transpose() * curl * B;
  }
  return out;
}

HamelCoefficients structure_constants(GroupTag tag, Trivialization triv) {
  const int n = algebra_dim(tag);
  const double sign = triv == Trivialization::Left ? 1.0 : -1.0;
  HamelCoefficients out;
  out.gamma.assign(n, MatX::Zero(n, n));
  for (int a = 0; a < n; ++a) {
    VecX ea = VecX::Zero(n);
    ea[a] = 1.0;
    const MatX ad_ea = ad(AlgebraVector(tag, ea));
    // c^c_{ab} = [e_a, e_b]^c = (ad(e_a))^c_b
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) out.gamma[c](a, b) = sign * ad_ea(c, b);
  }
  return out;
}

BlockHamelCoefficients block_hamel_holonomic(const QuasiVelocityMap& map,
                                             const VecX& q) {
  const int m = map.m_bar;
  const int d = map.delta_bar;
  if (m <= 0 || d <= 0)
    throw StructureError("map carries no (m_bar, delta_bar) partition");
  if (q.size() != map.n)
    throw InputError("block_hamel_holonomic: q has wrong dimension");

  const MatX A = map.eval_A(q);
  const double structure_tol = 1e-12;
  if (A.bottomLeftCorner(d, m).cwiseAbs().maxCoeff() > structure_tol ||
      (A.bottomRightCorner(d, d) - MatX::Identity(d, d))
              .cwiseAbs()
              .maxCoeff() > structure_tol)
    throw StructureError("lower blocks of A(q) are not [0 I]");

  const MatX B = map.eval_B(q);
  const MatX B1 = B.topLeftCorner(m, m);   // A1^-1
  const MatX B2 = B.topRightCorner(m, d);  // -A1^-1 A2

  // Per-block central differences of A1 = A(:m,:m) and A2 = A(:m,m:)
  // with respect to s (first m coordinates) and r (last d).
  const double h = fd_step(q);
  std::vector<MatX> dA1_s(m), dA2_s(m), dA1_r(d), dA2_r(d);
  auto eval_blocks = [&](const VecX& qq, MatX& a1, MatX& a2) {
    const MatX a = map.eval_A(qq);
    a1 = a.topLeftCorner(m, m);
    a2 = a.topRightCorner(m, d);
  };
  for (int s = 0; s < m; ++s) {
    VecX qp = q, qm = q;
    qp[s] += h;
    qm[s] -= h;
    MatX a1p, a2p, a1m, a2m;
    eval_blocks(qp, a1p, a2p);
    eval_blocks(qm, a1m, a2m);
    dA1_s[s] = (a1p - a1m) / (2.0 * h);
    dA2_s[s] = (a2p - a2m) / (2.0 * h);
  }
  for (int r = 0; r < d; ++r) {
    VecX qp = q, qm = q;
    qp[m + r] += h;
    qm[m + r] -= h;
    MatX a1p, a2p, a1m, a2m;
    eval_blocks(qp, a1p, a2p);
    eval_blocks(qm, a1m, a2m);
    dA1_r[r] = (a1p - a1m) / (2.0 * h);
    dA2_r[r] = (a2p - a2m) / (2.0 * h);
  }

  BlockHamelCoefficients out;
  out.m_bar = m;
  out.delta_bar = d;
  out.gamma_IJ.assign(m, MatX::Zero(d, d));
  out.gamma_betaJ.assign(m, MatX::Zero(m, d));
  out.gamma_betalambda.assign(m, MatX::Zero(m, m));

  for (int alpha = 0; alpha < m; ++alpha) {
    // gamma^a_{beta lambda} = (dA^a_mu/ds^nu - dA^a_nu/ds^mu) B^mu_b B^nu_l
    MatX curl_ss(m, m);
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu)
        curl_ss(mu, nu) = dA1_s[nu](alpha, mu) - dA1_s[mu](alpha, nu);
    out.gamma_betalambda[alpha] = B1.transpose() * curl_ss * B1;

    // gamma^a_{beta J}: fiber-shape mixed slice.
    MatX mixed(m, d);
    for (int mu = 0; mu < m; ++mu)
      for (int J = 0; J < d; ++J)
        mixed(mu, J) = dA1_r[J](alpha, mu) - dA2_s[mu](alpha, J);
    out.gamma_betaJ[alpha] =
        B1.transpose() * curl_ss * B2 + B1.transpose() * mixed;

    // gamma^a_{IJ}: four term groups of the expanded formula.
    MatX g(d, d);
    for (int I = 0; I < d; ++I) {
      for (int J = 0; J < d; ++J) {
        double v = dA2_r[J](alpha, I) - dA2_r[I](alpha, J);
        for (int b = 0; b < m; ++b) {
          v += (dA2_s[b](alpha, I) - dA1_r[I](alpha, b)) * B2(b, J);
          v += (dA1_r[J](alpha, b) - dA2_s[b](alpha, J)) * B2(b, I);
          for (int mu = 0; mu < m; ++mu)
            v += (dA1_s[mu](alpha, b) - dA1_s[b](alpha, mu)) * B2(b, I) *
                 B2(mu, J);
        }
        g(I, J) = v;
      }
    }
    out.gamma_IJ[alpha] = g;
  }
  return out;
}

bool vanishes_identically(const QuasiVelocityMap& map,
                          const std::vector<VecX>& samples, double tol) {
  for (const auto& q : samples)
    if (hamel_numeric(map, q).max_abs() >= tol) return false;
  return true;
}

bool vanishes_identically(const QuasiVelocityMap& map, const VecX& box_lo,
                          const VecX& box_hi, int samples, double tol) {
  if (box_lo.size() != map.n || box_hi.size() != map.n)
    throw InputError("vanishes_identically: chart box has wrong dimension");
  if (samples < 1) throw InputError("vanishes_identically: samples >= 1");
  std::mt19937 rng(0x5eed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<VecX> pts(samples);
  for (auto& q : pts) {
    q.resize(map.n);
    for (int i = 0; i < map.n; ++i)
      q[i] = box_lo[i] + u(rng) * (box_hi[i] - box_lo[i]);
  }
  return vanishes_identically(map, pts, tol);
}

}  // namespace hamel
