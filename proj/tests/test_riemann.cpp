#include <doctest.h>

#include "hamel/riemann.hpp"
#include "test_util.hpp"

using namespace hamel;
using namespace hamel::testutil;

namespace {

Metric sphere_metric() {
  // Unit 2-sphere in (theta, phi).
  Metric m;
  m.n = 2;
  m.g = [](const VecX& q) {
    MatX g = MatX::Zero(2, 2);
    g(0, 0) = 1.0;
    const double s = std::sin(q[0]);
    g(1, 1) = s * s;
    return g;
  };
  return m;
}

Metric polar_metric() {
  // Flat plane in polar coordinates (rho, phi).
  Metric m;
  m.n = 2;
  m.g = [](const VecX& q) {
    MatX g = MatX::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = q[0] * q[0];
    return g;
  };
  return m;
}

Metric random_polynomial_metric(std::mt19937& g, int n) {
  const MatX G0 = random_spd(g, n);
  const MatX G1 = 0.1 * random_spd(g, n, 0.0);
  const MatX G2 = 0.05 * random_spd(g, n, 0.0);
  const VecX w = random_vec(g, n);
  Metric m;
  m.n = n;
  m.g = [G0, G1, G2, w](const VecX& q) {
    return MatX(G0 + q.dot(w) * G1 + q.squaredNorm() * G2);
  };
  return m;
}

// Plain RK4 on a flat vector field, for driving the test trajectories.
template <typename F>
VecX rk4(const F& f, VecX y, double t_end, double dt) {
  double t = 0.0;
  while (t < t_end - 1e-12) {
    const double h = std::min(dt, t_end - t);
    const VecX k1 = f(t, y);
    const VecX k2 = f(t + h / 2, VecX(y + h / 2 * k1));
    const VecX k3 = f(t + h / 2, VecX(y + h / 2 * k2));
    const VecX k4 = f(t + h, VecX(y + h * k3));
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return y;
}

}  // namespace

TEST_CASE("constant metric has no Christoffel symbols") {
  auto g = rng(80);
  const MatX G0 = random_spd(g, 3);
  Metric m;
  m.n = 3;
  m.g = [G0](const VecX&) { return G0; };
  const auto Gamma = christoffel(m, random_vec(g, 3));
  for (const auto& blk : Gamma) CHECK(max_abs(blk) < 1e-12);
}

TEST_CASE("sphere Christoffel symbols match the closed form") {
  const Metric m = sphere_metric();
  VecX q(2);
  q << 0.9, 0.4;
  const auto Gamma = christoffel(m, q);
  const double s = std::sin(q[0]), c = std::cos(q[0]);
  CHECK(Gamma[0](1, 1) == doctest::Approx(-s * c).epsilon(1e-8));
  CHECK(Gamma[1](0, 1) == doctest::Approx(c / s).epsilon(1e-8));
  CHECK(Gamma[1](1, 0) == doctest::Approx(c / s).epsilon(1e-8));
  CHECK(std::abs(Gamma[0](0, 0)) < 1e-9);
  // Symmetric in the lower indices.
  for (const auto& blk : Gamma)
    CHECK(max_abs(blk - blk.transpose()) < 1e-9);
}

TEST_CASE("metric compatibility: covariant derivative of g vanishes") {
  auto g = rng(81);
  const Metric m = random_polynomial_metric(g, 3);
  for (int trial = 0; trial < 5; ++trial) {
    const VecX q = random_vec(g, 3, 0.8);
    const auto Gamma = christoffel(m, q);
    const double h = 1e-5;
    for (int c = 0; c < 3; ++c) {
      VecX qp = q, qm = q;
      qp[c] += h;
      qm[c] -= h;
      const MatX dg = (m.eval(qp) - m.eval(qm)) / (2 * h);
      const MatX G = m.eval(q);
      MatX nabla = dg;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int d = 0; d < 3; ++d)
            nabla(a, b) -= Gamma[d](c, a) * G(d, b) + Gamma[d](c, b) * G(a, d);
      CHECK(max_abs(nabla) < 1e-6);
    }
  }
}

TEST_CASE("covariant equations of motion") {
  auto g = rng(82);

  // Flat metric, no force: no acceleration.
  const MatX G0 = random_spd(g, 2);
  Metric flat;
  flat.n = 2;
  flat.g = [G0](const VecX&) { return G0; };
  CHECK(covariant_eom_rhs(flat, random_vec(g, 2), random_vec(g, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // Geodesics preserve the kinetic energy g(qdot, qdot).
  const Metric m = random_polynomial_metric(g, 2);
  VecX y(4);
  y << random_vec(g, 2, 0.5), random_vec(g, 2, 0.8);
  const double e0 = y.tail(2).dot(m.eval(y.head(2)) * y.tail(2));
  auto f = [&m](double, const VecX& y) {
    VecX dy(4);
    dy << y.tail(2), covariant_eom_rhs(m, y.head(2), y.tail(2));
    return dy;
  };
  const VecX yT = rk4(f, y, 2.0, 1e-3);
  const double eT = yT.tail(2).dot(m.eval(yT.head(2)) * yT.tail(2));
  CHECK(std::abs(eT - e0) / e0 < 1e-8);
}

TEST_CASE("covariant EOM equals the Lagrangian oracle") {
  auto g = rng(83);
  const Metric m = random_polynomial_metric(g, 3);

  // Oracle: Euler-Lagrange of L = 1/2 qdot^T g(q) qdot via the
  // coefficient form g qddot = dL/dq - gdot qdot.
  for (int k = 0; k < 10; ++k) {
    const VecX q = random_vec(g, 3, 0.7);
    const VecX qd = random_vec(g, 3);
    const double h = 1e-5;

    VecX dLdq(3);
    MatX gdot = MatX::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
      VecX qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      dLdq[i] = 0.5 * (qd.dot(m.eval(qp) * qd) - qd.dot(m.eval(qm) * qd)) /
                (2 * h);
      gdot += (m.eval(qp) - m.eval(qm)) / (2 * h) * qd[i];
    }
    const VecX oracle =
        m.eval(q).ldlt().solve(dLdq - gdot * qd);
    const VecX covariant = covariant_eom_rhs(m, q, qd);
    CHECK((oracle - covariant).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("flat metric in polar coordinates has vanishing curvature") {
  const Metric m = polar_metric();
  for (double rho : {0.7, 1.3, 2.1}) {
    VecX q(2);
    q << rho, 0.8;
    CHECK(riemann_max_abs(riemann_tensor(m, q)) < 1e-5);
  }
}

TEST_CASE("flat metric: perturbation acceleration is g^-1 Phi") {
  auto g = rng(84);
  const MatX G0 = random_spd(g, 3);
  Metric flat;
  flat.n = 3;
  flat.g = [G0](const VecX&) { return G0; };
  const VecX Phi = random_vec(g, 3);
  const VecX rhs = linearized_perturbation_rhs(
      flat, random_vec(g, 3), random_vec(g, 3), random_vec(g, 3),
      random_vec(g, 3), nullptr, Phi);
  CHECK((rhs - VecX(G0.ldlt().solve(Phi))).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("first Bianchi symmetry of the Riemann tensor") {
  auto g = rng(85);
  const Metric m = random_polynomial_metric(g, 2);
  const VecX q = random_vec(g, 2, 0.6);
  const auto R = riemann_tensor(m, q);
  double worst = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          worst = std::max(worst, std::abs(R[a][b](c, d) + R[a][c](d, b) +
                                           R[a][d](b, c)));
  CHECK(worst < 1e-5);

  const auto Rs = riemann_tensor(sphere_metric(), (VecX(2) << 1.1, 0.3).finished());
  worst = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          worst = std::max(worst, std::abs(Rs[a][b](c, d) + Rs[a][c](d, b) +
                                           Rs[a][d](b, c)));
  CHECK(worst < 1e-5);
}

TEST_CASE("sphere geodesics reconverge (positive curvature sign)") {
  const Metric m = sphere_metric();
  // Equator geodesic with unit speed; a polar perturbation oscillates
  // back instead of growing.
  VecX q(2), qd(2), x(2), dx(2);
  q << 1.5707963267948966, 0.0;
  qd << 0.0, 1.0;
  x << 0.01, 0.0;
  dx << 0.0, 0.0;
  const VecX acc = linearized_perturbation_rhs(m, q, qd, x, dx, nullptr,
                                               VecX::Zero(2));
  CHECK(acc[0] * x[0] < 0.0);  // restoring
  CHECK(acc[0] == doctest::Approx(-x[0]).epsilon(1e-4));
}

TEST_CASE("linearized equation matches two nearby trajectories") {
  auto g = rng(86);
  const Metric m = random_polynomial_metric(g, 2);

  const VecX q0 = random_vec(g, 2, 0.4);
  const VecX qd0 = random_vec(g, 2, 0.7);
  const VecX x0 = VecX(random_vec(g, 2)).normalized();

  // Nonlinear geodesic flow.
  auto flow = [&m](double, const VecX& y) {
    VecX dy(4);
    dy << y.tail(2), covariant_eom_rhs(m, y.head(2), y.tail(2));
    return dy;
  };

  // Nominal + linearized perturbation, propagated together. State:
  // (q, qdot, x, y) with y = Dx/dt.
  auto joint = [&m](double, const VecX& s) {
    const VecX q = s.head(2), qd = s.segment(2, 2);
    const VecX x = s.segment(4, 2), y = s.tail(2);
    const VecX xdot = plain_from_absolute(m, q, qd, x, y);
    const VecX Dy = linearized_perturbation_rhs(m, q, qd, x, y, nullptr,
                                                VecX::Zero(2));
    const VecX ydot = plain_from_absolute(m, q, qd, y, Dy);
    VecX ds(8);
    ds << qd, covariant_eom_rhs(m, q, qd), xdot, ydot;
    return ds;
  };

  // The comparison runs vary the initial position at fixed plain
  // velocity, so Dx/dt(0) = Gamma(qdot0) x0.
  const VecX y0 =
      absolute_from_plain(m, q0, qd0, x0, VecX::Zero(2));
  VecX joint0(8);
  joint0 << q0, qd0, x0, y0;
  const double T = 1.0, dt = 2e-3;
  const VecX jointT = rk4(joint, joint0, T, dt);
  const VecX xT = jointT.segment(4, 2);

  auto defect = [&](double eps) {
    VecX ya(4), yb(4);
    ya << q0, qd0;
    yb << q0 + eps * x0, qd0;
    const VecX qa = rk4(flow, ya, T, dt).head(2);
    const VecX qb = rk4(flow, yb, T, dt).head(2);
    return ((qb - qa) / eps - xT).norm();
  };

  // First-order match with second-order remainder in eps.
  const double d4 = defect(1e-4);
  const double d5 = defect(1e-5);
  CHECK(d5 < 1e-8 * std::max(1.0, xT.norm()) + 1e-7);
  CHECK(d4 / d5 > 5.0);  // shrinks at least linearly past FD noise
}
