#include "hamel/riemann.hpp"

#include <cmath>

namespace hamel {

namespace {
constexpr double kStep = 1e-5;
}

MatX Metric::eval(const VecX& q) const {
  MatX m = g(q);
  if (m.rows() != n || m.cols() != n)
    throw InputError("metric g(q) has wrong shape");
  return m;
}

MatX Metric::eval_inverse(const VecX& q) const {
  const MatX m = eval(q);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw InertiaError("metric is not symmetric");
  Eigen::LLT<MatX> llt(m);
  if (llt.info() != Eigen::Success)
    throw InertiaError("metric is not positive definite");
  return llt.solve(MatX::Identity(n, n));
}

std::vector<MatX> christoffel(const Metric& metric, const VecX& q) {
  const int n = metric.n;
  const MatX ginv = metric.eval_inverse(q);

  std::vector<MatX> dg(n);
  for (int c = 0; c < n; ++c) {
    VecX qp = q, qm = q;
    qp[c] += kStep;
    qm[c] -= kStep;
    dg[c] = (metric.eval(qp) - metric.eval(qm)) / (2.0 * kStep);
  }

  // Gamma^a_{bc} = 1/2 g^{ad} (d_b g_{dc} + d_c g_{db} - d_d g_{bc})
  std::vector<MatX> Gamma(n, MatX::Zero(n, n));
  for (int b = 0; b < n; ++b) {
    for (int c = 0; c < n; ++c) {
      VecX low(n);
      for (int d = 0; d < n; ++d)
        low[d] = 0.5 * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
      const VecX up = ginv * low;
      for (int a = 0; a < n; ++a) Gamma[a](b, c) = up[a];
    }
  }
  return Gamma;
}

VecX covariant_eom_rhs(const Metric& metric, const VecX& q, const VecX& qdot,
                       const VecX& Q_cov) {
  const auto Gamma = christoffel(metric, q);
  VecX acc = VecX::Zero(metric.n);
  if (Q_cov.size() > 0) {
    if (Q_cov.size() != metric.n)
      throw InputError("covariant force has wrong dimension");
    acc = metric.eval_inverse(q) * Q_cov;
  }
  for (int a = 0; a < metric.n; ++a)
    acc[a] -= qdot.dot(Gamma[a] * qdot);
  return acc;
}

std::vector<std::vector<MatX>> riemann_tensor(const Metric& metric,
                                              const VecX& q) {
  const int n = metric.n;

  // dGamma[c][a](d, b) = d Gamma^a_{db} / dq^c
  std::vector<std::vector<MatX>> dGamma(n);
  for (int c = 0; c < n; ++c) {
    VecX qp = q, qm = q;
    qp[c] += kStep;
    qm[c] -= kStep;
    const auto Gp = christoffel(metric, qp);
    const auto Gm = christoffel(metric, qm);
    dGamma[c].resize(n);
    for (int a = 0; a < n; ++a) dGamma[c][a] = (Gp[a] - Gm[a]) / (2.0 * kStep);
  }
  const auto Gamma = christoffel(metric, q);

  std::vector<std::vector<MatX>> R(n, std::vector<MatX>(n, MatX::Zero(n, n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = dGamma[c][a](d, b) - dGamma[d][a](c, b);
          for (int e = 0; e < n; ++e)
            v += Gamma[a](c, e) * Gamma[e](d, b) -
                 Gamma[a](d, e) * Gamma[e](c, b);
          R[a][b](c, d) = v;
        }
  return R;
}

double riemann_max_abs(const std::vector<std::vector<MatX>>& R) {
  double m = 0.0;
  for (const auto& row : R)
    for (const auto& blk : row) m = std::max(m, blk.cwiseAbs().maxCoeff());
  return m;
}

VecX linearized_perturbation_rhs(const Metric& metric, const VecX& q,
                                 const VecX& qdot, const VecX& x,
                                 const VecX& /*dx_cov*/, const CovectorField& Q,
                                 const VecX& Phi) {
  const int n = metric.n;
  const MatX ginv = metric.eval_inverse(q);
  const auto R = riemann_tensor(metric, q);

  // Jacobi curvature term R^a_{bcd} qdot^b x^c qdot^d.
  VecX curv = VecX::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      curv[a] += qdot[b] * x.dot(R[a][b] * qdot);

  VecX force = Phi.size() > 0 ? Phi : VecX::Zero(n);
  if (Q) {
    // (nabla_b Q_a) x^b with nabla_b Q_a = dQ_a/dq^b - Gamma^c_{ba} Q_c.
    const auto Gamma = christoffel(metric, q);
    const VecX Q0 = Q(q);
    MatX dQ(n, n);  // dQ(a, b) = dQ_a/dq^b
    for (int b = 0; b < n; ++b) {
      VecX qp = q, qm = q;
      qp[b] += kStep;
      qm[b] -= kStep;
      dQ.col(b) = (Q(qp) - Q(qm)) / (2.0 * kStep);
    }
    VecX nablaQx = VecX::Zero(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double nab = dQ(a, b);
        for (int c = 0; c < n; ++c) nab -= Gamma[c](b, a) * Q0[c];
        nablaQx[a] += nab * x[b];
      }
    force += nablaQx;
  }

  return ginv * force - curv;
}

VecX absolute_from_plain(const Metric& metric, const VecX& q,
                         const VecX& qdot, const VecX& x, const VecX& xdot) {
  const auto Gamma = christoffel(metric, q);
  VecX out = xdot;
  for (int a = 0; a < metric.n; ++a) out[a] += qdot.dot(Gamma[a] * x);
  return out;
}

VecX plain_from_absolute(const Metric& metric, const VecX& q,
                         const VecX& qdot, const VecX& x, const VecX& dx_cov) {
  const auto Gamma = christoffel(metric, q);
  VecX out = dx_cov;
  for (int a = 0; a < metric.n; ++a) out[a] -= qdot.dot(Gamma[a] * x);
  return out;
}

}  // namespace hamel
