#include "hamel/connection.hpp"

#include <cmath>
#include <random>

#include "hamel/dynamics.hpp"
#include "hamel/quasi_velocity.hpp"

namespace hamel {

LocalConnection::LocalConnection(GroupTag tag_, Trivialization triv_,
                                 int delta_bar_,
                                 std::function<MatX(const VecX&)> A_)
    : tag(tag_),
      triv(triv_),
      m_bar(algebra_dim(tag_)),
      delta_bar(delta_bar_),
      A(std::move(A_)) {}

MatX LocalConnection::eval(const VecX& r) const {
  MatX a = A(r);
  if (a.rows() != m_bar || a.cols() != delta_bar)
    throw InputError("connection A(r) is " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + ", expected " +
                     std::to_string(m_bar) + "x" + std::to_string(delta_bar));
  return a;
}

double CurvatureComponents::max_abs() const {
  double m = 0.0;
  for (const auto& b : B)
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

CurvatureComponents curvature(const LocalConnection& conn, const VecX& r) {
  if (r.size() != conn.delta_bar)
    throw InputError("curvature: r has wrong dimension");
  const int m = conn.m_bar;
  const int d = conn.delta_bar;
  const MatX A0 = conn.eval(r);
  const double sign = conn.triv == Trivialization::Left ? 1.0 : -1.0;

  const double h = fd_step(r);
  std::vector<MatX> dA(d);
  for (int J = 0; J < d; ++J) {
    VecX rp = r, rm = r;
    rp[J] += h;
    rm[J] -= h;
    dA[J] = (conn.eval(rp) - conn.eval(rm)) / (2.0 * h);
  }

  CurvatureComponents out;
  out.B.assign(m, MatX::Zero(d, d));
  for (int I = 0; I < d; ++I) {
    const AlgebraVector AI(conn.tag, A0.col(I));
    const MatX adAI = ad(AI);
    for (int J = 0; J < d; ++J) {
      const VecX bracket = adAI * A0.col(J);  // [A_I, A_J]
      for (int alpha = 0; alpha < m; ++alpha)
        out.B[alpha](I, J) =
            dA[J](alpha, I) - dA[I](alpha, J) + sign * bracket[alpha];
    }
  }
  return out;
}

MatX mechanical_connection(const MechanicalSystem& system, const VecX& r) {
  const MatX L = system.eval_L(r);
  auto ldlt = detail::spd_factor(L, "L(r)");
  return ldlt.solve(system.eval_K(r));
}

LocalConnection mechanical_connection_form(const MechanicalSystem& system) {
  return LocalConnection(system.tag, system.triv, system.delta_bar,
                         [&system](const VecX& r) {
                           return mechanical_connection(system, r);
                         });
}

AlgebraVector locked_velocity(const MechanicalSystem& system, const VecX& r,
                              const AlgebraVector& xi, const VecX& rdot) {
  if (xi.tag != system.tag)
    throw InputError("locked_velocity: group tags differ");
  const MatX A = mechanical_connection(system, r);
  return AlgebraVector(system.tag, xi.coords + A * rdot);
}

FlatnessReport is_flat(const LocalConnection& conn, const VecX& box_lo,
                       const VecX& box_hi, int samples, double tol) {
  if (samples < 1) throw InputError("is_flat: samples must be >= 1");
  if (box_lo.size() != conn.delta_bar || box_hi.size() != conn.delta_bar)
    throw InputError("is_flat: chart box has wrong dimension");

  std::mt19937 rng(0x5eed);  // fixed seed: deterministic report
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FlatnessReport rep;
  rep.worst_r = box_lo;
  for (int k = 0; k < samples; ++k) {
    VecX r(conn.delta_bar);
    for (int i = 0; i < conn.delta_bar; ++i)
      r[i] = box_lo[i] + u(rng) * (box_hi[i] - box_lo[i]);
    const double m = curvature(conn, r).max_abs();
    if (m > rep.max_abs_curvature) {
      rep.max_abs_curvature = m;
      rep.worst_r = r;
    }
  }
  rep.flat = rep.max_abs_curvature < tol;
  return rep;
}

CentroidalState centroidal_transform(const MechanicalSystem& system,
                                     const VecX& r, const AlgebraVector& xi,
                                     const VecX& rdot,
                                     const GroupElement& g_bG) {
  if (system.tag != GroupTag::SE3)
    throw UnsupportedError("centroidal transform requires an SE3 system");
  if (g_bG.tag != GroupTag::SE3)
    throw InputError("centroidal transform: g_bG must be SE3");

  const MatX Ad = adjoint(g_bG);
  const MatX L = system.eval_L(r);
  const VecX Pi = fiber_momentum(system, r, xi, rdot);
  const AlgebraVector Vloc = locked_velocity(system, r, xi, rdot);

  CentroidalState out;
  out.momentum = Ad.transpose() * Pi;
  out.velocity = Ad.partialPivLu().solve(Vloc.coords);
  out.inertia = Ad.transpose() * L * Ad;
  return out;
}

}  // namespace hamel
