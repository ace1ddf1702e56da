// Acceptance suite: one line per criterion, PASS/FAIL with the measured
// quantity, non-zero exit when anything fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "hamel/config.hpp"
#include "hamel/models.hpp"
#include "hamel/quasi_velocity.hpp"
#include "hamel/reconstruction.hpp"
#include "hamel/riemann.hpp"

using namespace hamel;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int id, bool ok, const std::string& name,
            const std::string& detail) {
  std::printf("criterion %2d: %s  %s (%s)\n", id, ok ? "PASS" : "FAIL",
              name.c_str(), detail.c_str());
  if (!ok) ++g_failures;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

VecX random_vec(std::mt19937& g, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  VecX v(n);
  for (int i = 0; i < n; ++i) v[i] = u(g);
  return v;
}

MatX random_spd(std::mt19937& g, int n) {
  const MatX a = MatX::NullaryExpr(
      n, n, [&](Eigen::Index, Eigen::Index) {
        return std::uniform_real_distribution<double>(-1, 1)(g);
      });
  return a * a.transpose() + n * MatX::Identity(n, n);
}

ShapePath rotor_path() {
  ShapePath path;
  path.period = 1.0;
  path.r = [](double t) {
    VecX r(3);
    r << kPi * (std::cos(2 * kPi * t) - 1.0), kPi * std::sin(2 * kPi * t),
        0.5 * kPi * std::sin(4 * kPi * t);
    return r;
  };
  path.rdot = [](double t) {
    VecX v(3);
    v << -2 * kPi * kPi * std::sin(2 * kPi * t),
        2 * kPi * kPi * std::cos(2 * kPi * t),
        2 * kPi * kPi * std::cos(4 * kPi * t);
    return v;
  };
  return path;
}

ShapePath square_path(double side) {
  ShapePath path;
  path.period = 1.0;
  const double speed = 4.0 * side;
  path.r = [side](double t) {
    double u = std::fmod(t, 1.0);
    if (u < 0) u += 1.0;
    const double s = 4.0 * u;
    const int e = std::min(3, static_cast<int>(s));
    const double f = (s - e) * side;
    VecX r = VecX::Zero(2);
    switch (e) {
      case 0: r[0] = f; break;
      case 1: r[0] = side; r[1] = f; break;
      case 2: r[0] = side - f; r[1] = side; break;
      case 3: r[1] = side - f; break;
    }
    return r;
  };
  path.rdot = [speed](double t) {
    double u = std::fmod(t, 1.0);
    if (u < 0) u += 1.0;
    const int e = std::min(3, static_cast<int>(4.0 * u));
    VecX v = VecX::Zero(2);
    switch (e) {
      case 0: v[0] = speed; break;
      case 1: v[1] = speed; break;
      case 2: v[0] = -speed; break;
      case 3: v[1] = -speed; break;
    }
    return v;
  };
  return path;
}

// ---- criterion 1 ---------------------------------------------------------

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 g(101);
  double worst = 0.0;
  for (auto triv : {Trivialization::Left, Trivialization::Right}) {
    QuasiVelocityMap map(
        3,
        [triv](const VecX& q) {
          return dexp(AlgebraVector(GroupTag::SO3, q), triv);
        },
        [triv](const VecX& q) {
          return dexpinv(AlgebraVector(GroupTag::SO3, q), triv);
        });
    const auto expected = structure_constants(GroupTag::SO3, triv);
    for (int k = 0; k < 5; ++k) {
      const auto gamma = hamel_numeric(map, random_vec(g, 3, 0.8));
      for (int c = 0; c < 3; ++c)
        worst = std::max(worst, (gamma.gamma[c] - expected.gamma[c])
                                    .cwiseAbs()
                                    .maxCoeff());
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(1, worst < 1e-6 && secs < 1.0, "structure-constant recovery",
         "max err " + num(worst) + ", " + num(secs) + " s");
}

// ---- criterion 2 ---------------------------------------------------------

void criterion_2() {
  const double R = 0.1;
  const auto model = rolling_ball(BallParams::homogeneous(1.0, R));
  std::mt19937 g(102);
  const VecX r = random_vec(g, 2, 2.0);

  const MatX A = model.connection.eval(r);
  const auto B = curvature(model.connection, r);
  double analytic = std::abs(A(1, 0) - 1.0 / R);
  analytic = std::max(analytic, std::abs(A(0, 1) + 1.0 / R));
  analytic = std::max(analytic, std::abs(B(2, 1, 0) - 1.0 / (R * R)));
  analytic = std::max(analytic, std::abs(B(2, 0, 1) + 1.0 / (R * R)));
  for (int a = 0; a < 2; ++a)
    analytic = std::max(analytic, B.B[a].cwiseAbs().maxCoeff());

  // Numeric path: Hamel coefficients of the assembled block map.
  const MatX Aball = model.connection.eval(VecX::Zero(2));
  QuasiVelocityMap map(3, 2, [Aball](const VecX& q) {
    MatX m = MatX::Identity(5, 5);
    m.topLeftCorner(3, 3) =
        dexp(AlgebraVector(GroupTag::SO3, VecX(q.head(3))),
             Trivialization::Right);
    m.topRightCorner(3, 2) = Aball;
    return m;
  });
  VecX q(5);
  q << random_vec(g, 3, 0.5), random_vec(g, 2, 2.0);
  const auto gamma = hamel_numeric(map, q);
  double numeric = std::abs(gamma(2, 4, 3) - 1.0 / (R * R));
  numeric = std::max(numeric, std::abs(gamma(2, 3, 4) + 1.0 / (R * R)));

  report(2, analytic < 1e-10 && numeric < 1e-6, "rolling-ball coefficients",
         "analytic " + num(analytic) + ", numeric " + num(numeric));
}

// ---- criterion 3 ---------------------------------------------------------

void criterion_3() {
  std::mt19937 g(103);
  double off = 0.0, congruence = 0.0;
  for (const MechanicalSystem& sys :
       {satellite_so3r3(SatelliteParams{}), satellite_se3(SatelliteParams{})}) {
    for (int k = 0; k < 20; ++k) {
      const VecX r = random_vec(g, 3, 3.0);
      const MatX locked = locked_mass_matrix(sys, r);
      off = std::max(off,
                     locked.topRightCorner(6, 3).cwiseAbs().maxCoeff());
      off = std::max(off,
                     locked.bottomLeftCorner(3, 6).cwiseAbs().maxCoeff());
      MatX T = MatX::Identity(9, 9);
      T.topRightCorner(6, 3) = -mechanical_connection(sys, r);
      congruence = std::max(
          congruence,
          (T.transpose() * mass_matrix(sys, r) * T - locked)
              .cwiseAbs()
              .maxCoeff());
    }
  }
  report(3, off == 0.0 && congruence < 1e-12, "inertial decoupling",
         "off-diag " + num(off) + ", congruence " + num(congruence));
}

// ---- criterion 4 ---------------------------------------------------------

void criterion_4() {
  std::mt19937 g(104);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    SatelliteParams p;
    p.body_mass = 5.0 + 10.0 * std::abs(u(g));
    p.body_inertia = random_spd(g, 3);
    p.body_com = 0.2 * Vec3(u(g), u(g), u(g));
    for (int i = 0; i < 3; ++i) {
      p.rotor_mass[i] = 0.5 + std::abs(u(g));
      p.rotor_axial[i] = 0.02 + 0.02 * std::abs(u(g));
      p.rotor_transverse[i] = 0.01 + 0.01 * std::abs(u(g));
      p.rotor_com[i] = 0.2 * Vec3(u(g), u(g), u(g));
    }
    const Mat6 L = satellite_se3_blocks(p).L;
    worst = std::max(worst, (satellite_se3_locked_inverse(p) -
                             Mat6(L.inverse())).cwiseAbs().maxCoeff());
  }
  report(4, worst < 1e-10, "closed-form locked-inertia inverse",
         "max err " + num(worst));
}

// ---- criterion 5 ---------------------------------------------------------

void criterion_5() {
  const SatelliteParams p = SatelliteParams::com_centered();
  const MechanicalSystem se3 = satellite_se3(p);
  const MechanicalSystem mixed = satellite_so3r3(p);

  const Vec3 w0(0.4, -0.3, 0.5), v0(0.1, 0.0, -0.2), phidot0(1.0, -2.0, 0.5);

  BundleState init_se3 = BundleState::make(se3);
  init_se3.xi = AlgebraVector(GroupTag::SE3,
                              (VecX(6) << w0, v0).finished());
  init_se3.rdot = phidot0;
  BundleState init_mixed = BundleState::make(mixed);
  init_mixed.xi = AlgebraVector(GroupTag::SO3xR3,
                                (VecX(6) << w0, v0).finished());
  init_mixed.rdot = phidot0;

  const Trajectory a =
      integrate(se3, Formulation::EulerPoincare, init_se3, 1.0, 1e-3);
  const Trajectory b =
      integrate(mixed, Formulation::EulerPoincare, init_mixed, 1.0, 1e-3);

  double worst = 0.0;
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    worst = std::max(worst, (a.states[k].xi.omega() -
                             b.states[k].xi.omega()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (a.states[k].rdot - b.states[k].rdot)
                                .cwiseAbs()
                                .maxCoeff());
  }
  report(5, worst < 1e-8, "formulation equivalence (SE3 vs SO3xR3)",
         "max dev " + num(worst));
}

// ---- criterion 6 ---------------------------------------------------------

void criterion_6() {
  SatelliteParams p;
  const MechanicalSystem sys = satellite_so3r3(p);
  BundleState init = BundleState::make(sys);
  init.xi = AlgebraVector(
      GroupTag::SO3xR3, (VecX(6) << 0.3, -0.5, 0.2, 0.1, 0.05, 0.0).finished());
  init.rdot = Vec3(1.2, -0.4, 0.9);

  const Trajectory ep =
      integrate(sys, Formulation::EulerPoincare, init, 1.0, 1e-3);
  const Trajectory lp =
      integrate(sys, Formulation::LagrangePoincare, init, 1.0, 1e-3);

  double worst = 0.0;
  for (std::size_t k = 0; k < ep.states.size(); ++k) {
    worst = std::max(worst, (ep.states[k].xi.coords -
                             lp.states[k].xi.coords).cwiseAbs().maxCoeff());
    worst = std::max(worst, (ep.states[k].rdot - lp.states[k].rdot)
                                .cwiseAbs()
                                .maxCoeff());
    worst = std::max(worst, distance(ep.states[k].g, lp.states[k].g));
  }
  report(6, worst < 1e-8, "coordinate-change equivalence (EP vs LP)",
         "max dev " + num(worst));
}

// ---- criterion 7 ---------------------------------------------------------

void criterion_7() {
  SatelliteParams p;
  const MechanicalSystem sys = satellite_se3(p);
  BundleState init = BundleState::make(sys);
  init.xi = AlgebraVector(
      GroupTag::SE3, (VecX(6) << 0.3, -0.2, 0.4, 0.1, 0.05, -0.1).finished());
  init.rdot = Vec3(2.0, -1.0, 0.5);

  const Trajectory traj =
      integrate(sys, Formulation::EulerPoincare, init, 10.0, 1e-3);
  const double e0 = total_energy(sys, traj.states.front());
  const VecX p0 = spatial_momentum(sys, traj.states.front());
  double e_drift = 0.0, p_drift = 0.0;
  for (const auto& s : traj.states) {
    e_drift = std::max(e_drift, std::abs(total_energy(sys, s) - e0));
    p_drift = std::max(p_drift, (spatial_momentum(sys, s) - p0).norm());
  }
  e_drift /= std::abs(e0);

  // Step-halving order check.
  auto final_state = [&](double dt) {
    const Trajectory t =
        integrate(sys, Formulation::EulerPoincare, init, 1.0, dt);
    VecX out(12);
    out << t.back().xi.coords, t.back().r, t.back().rdot;
    return out;
  };
  const VecX f1 = final_state(2e-2);
  const VecX f2 = final_state(1e-2);
  const VecX f3 = final_state(5e-3);
  const double ratio = (f1 - f2).norm() / (f2 - f3).norm();

  report(7,
         e_drift < 1e-8 && p_drift < 1e-8 && ratio >= 12.0 && ratio <= 20.0,
         "conservation and MK-RK4 order",
         "energy " + num(e_drift) + ", momentum " + num(p_drift) +
             ", ratio " + num(ratio));
}

// ---- criterion 8 ---------------------------------------------------------

void criterion_8() {
  SatelliteParams p;
  const MechanicalSystem sys = satellite_so3r3(p);

  // Free zero-momentum run: the dynamic constraint stays satisfied.
  BundleState init = BundleState::make(sys);
  init.rdot = Vec3(1.5, -0.7, 0.4);
  const LocalConnection mech = mechanical_connection_form(sys);
  init.xi = AlgebraVector(GroupTag::SO3xR3,
                          VecX(-mech.eval(init.r) * init.rdot));
  const Trajectory traj =
      integrate(sys, Formulation::MomentumConserved, init, 2.0, 1e-3);
  double pi_max = 0.0;
  for (const auto& s : traj.states)
    pi_max = std::max(pi_max,
                      fiber_momentum(sys, s.r, s.xi, s.rdot).norm());

  // Prescribed rotor cycles: identical per-cycle phases.
  const PhaseResult phases =
      geometric_phase(mech, rotor_path(),
                      GroupElement::identity(GroupTag::SO3xR3), 1e-3, 6);
  double pair = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      pair = std::max(pair,
                      distance(phases.per_cycle[i], phases.per_cycle[j]));
  const double displacement = log(phases.phase).norm();

  report(8, pi_max < 1e-9 && pair < 1e-8 && displacement > 1e-3,
         "zero-momentum reduction and repeated phases",
         "|Pi| " + num(pi_max) + ", pairwise " + num(pair) +
             ", per-cycle displacement " + num(displacement));
}

// ---- criterion 9 ---------------------------------------------------------

void criterion_9() {
  SatelliteParams p;
  const MechanicalSystem sys = satellite_so3r3(p);
  const ShapePath path = rotor_path();
  const GroupElement id = GroupElement::identity(GroupTag::SO3xR3);
  const VecX Pi0 = sys.eval_K(VecX::Zero(3)) * path.eval_rdot(0.0);

  // Total phase: drift + shape motion.
  const Trajectory total_run =
      reconstruct_with_drift(sys, Pi0, path, id, 1.0, 1e-3);
  const GroupElement total = total_run.back().g;

  // Geometric phase: zero momentum, same path.
  const Trajectory geo_run =
      reconstruct_with_drift(sys, VecX::Zero(6), path, id, 1.0, 1e-3);
  const GroupElement geometric = geo_run.back().g;

  // Dynamic phase: momentum only, rotors frozen.
  ShapePath still;
  still.period = 1.0;
  still.r = [](double) { return VecX::Zero(3); };
  still.rdot = [](double) { return VecX::Zero(3); };
  const Trajectory dyn_run =
      reconstruct_with_drift(sys, Pi0, still, id, 1.0, 1e-3);
  const GroupElement dynamic = dyn_run.back().g;

  // Independent oracle for the frozen-shape flow: rigid-body dynamics
  // with the locked inertia.
  MechanicalSystem frozen;
  frozen.tag = GroupTag::SO3xR3;
  frozen.triv = Trivialization::Left;
  frozen.delta_bar = 0;
  const MatX L0 = sys.eval_L(VecX::Zero(3));
  frozen.L = [L0](const VecX&) { return L0; };
  BundleState finit = BundleState::make(frozen);
  finit.xi = AlgebraVector(GroupTag::SO3xR3, VecX(L0.ldlt().solve(Pi0)));
  const Trajectory oracle =
      integrate(frozen, Formulation::EulerPoincare, finit, 1.0, 1e-3);

  const double split_geo = distance(total, geometric);
  const double split_dyn = distance(total, dynamic);
  const double frozen_err = distance(dynamic, oracle.back().g);

  report(9,
         split_geo > 1e-6 && split_dyn > 1e-6 && frozen_err < 1e-8,
         "dynamic phase split",
         "|total-geo| " + num(split_geo) + ", |total-dyn| " + num(split_dyn) +
             ", frozen-shape err " + num(frozen_err));
}

// ---- criterion 10 --------------------------------------------------------

void criterion_10() {
  const double R = 0.1, eps = 1e-2;
  const auto model = rolling_ball(BallParams::homogeneous(1.0, R));
  const auto res = geometric_phase(model.connection, square_path(eps),
                                   GroupElement::identity(GroupTag::SO3),
                                   1e-4, 1);
  // Counterclockwise loop, signed area +eps^2; leading order of the
  // holonomy is -area * B^3_{54} about the vertical.
  const double expected = -eps * eps / (R * R);
  const double got = res.per_cycle_log.front()[2];
  const double rel = std::abs(got - expected) / std::abs(expected);
  report(10, rel < 0.05, "holonomy-curvature consistency",
         "log_z " + num(got) + " vs " + num(expected) + ", rel " + num(rel));
}

// ---- criterion 11 --------------------------------------------------------

void criterion_11() {
  std::mt19937 g(111);
  const int ns = 2, nr = 2, n = ns + nr;
  const MatX M0 = random_spd(g, n);
  const MatX M1 = 0.1 * random_spd(g, n);
  const VecX w = random_vec(g, n);

  CoordinateSystem cs;
  cs.n_s = ns;
  cs.n_r = nr;
  cs.lagrangian = [M0, M1, w](const VecX& q, const VecX& qd) {
    const MatX M = M0 + 0.2 * std::sin(w.dot(q)) * M1;
    return 0.5 * qd.dot(M * qd) - 0.2 * q.squaredNorm();
  };
  cs.A = [](const VecX& r) {
    MatX a(2, 2);
    a << r[1], 0.4 * r[0] * r[0], std::sin(r[0]), 0.3 + r[0] * r[1];
    return a;
  };

  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    CoordinateState st;
    st.s = random_vec(g, ns, 0.7);
    st.r = random_vec(g, nr, 0.7);
    st.rdot = random_vec(g, nr);
    st.rddot = random_vec(g, nr);
    worst = std::max(worst, (voronets_residual(cs, st) -
                             hamel_constrained_residual(cs, st))
                                .cwiseAbs()
                                .maxCoeff());
  }
  report(11, worst < 1e-8, "Voronets equivalence", "max diff " + num(worst));
}

// ---- criterion 12 --------------------------------------------------------

void criterion_12() {
  // Flat metric in polar coordinates.
  Metric polar;
  polar.n = 2;
  polar.g = [](const VecX& q) {
    MatX g = MatX::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = q[0] * q[0];
    return g;
  };
  double flat = 0.0;
  for (double rho : {0.8, 1.4, 2.0}) {
    VecX q(2);
    q << rho, 0.5;
    flat = std::max(flat, riemann_max_abs(riemann_tensor(polar, q)));
  }

  // Covariant equations of motion against the Euler-Lagrange oracle.
  std::mt19937 g(112);
  const MatX G0 = random_spd(g, 3);
  const MatX G1 = 0.1 * random_spd(g, 3);
  const VecX w = random_vec(g, 3);
  Metric m;
  m.n = 3;
  m.g = [G0, G1, w](const VecX& q) {
    return MatX(G0 + 0.5 * std::sin(w.dot(q)) * G1);
  };
  double eom = 0.0;
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
      dLdq[i] =
          0.5 * (qd.dot(m.eval(qp) * qd) - qd.dot(m.eval(qm) * qd)) / (2 * h);
      gdot += (m.eval(qp) - m.eval(qm)) / (2 * h) * qd[i];
    }
    const VecX oracle = m.eval(q).ldlt().solve(dLdq - gdot * qd);
    eom = std::max(eom, (oracle - covariant_eom_rhs(m, q, qd))
                            .cwiseAbs()
                            .maxCoeff());
  }

  // Linearized equation vs two nearby trajectories, second order in eps.
  Metric m2;
  m2.n = 2;
  const MatX H0 = random_spd(g, 2);
  const MatX H1 = 0.1 * random_spd(g, 2);
  const VecX w2 = random_vec(g, 2);
  m2.g = [H0, H1, w2](const VecX& q) {
    return MatX(H0 + 0.5 * std::sin(w2.dot(q)) * H1 +
                0.05 * q.squaredNorm() * MatX::Identity(2, 2));
  };
  const VecX q0 = random_vec(g, 2, 0.4);
  const VecX qd0 = random_vec(g, 2, 0.7);
  const VecX x0 = VecX(random_vec(g, 2)).normalized();

  auto rk4 = [](const std::function<VecX(const VecX&)>& f, VecX y,
                double t_end, double dt) {
    double t = 0.0;
    while (t < t_end - 1e-12) {
      const double h = std::min(dt, t_end - t);
      const VecX k1 = f(y);
      const VecX k2 = f(VecX(y + h / 2 * k1));
      const VecX k3 = f(VecX(y + h / 2 * k2));
      const VecX k4 = f(VecX(y + h * k3));
      y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      t += h;
    }
    return y;
  };
  auto flow = [&m2](const VecX& y) {
    VecX dy(4);
    dy << y.tail(2), covariant_eom_rhs(m2, y.head(2), y.tail(2));
    return dy;
  };
  auto joint = [&m2](const VecX& s) {
    const VecX q = s.head(2), qd = s.segment(2, 2);
    const VecX x = s.segment(4, 2), y = s.tail(2);
    const VecX xdot = plain_from_absolute(m2, q, qd, x, y);
    const VecX Dy = linearized_perturbation_rhs(m2, q, qd, x, y, nullptr,
                                                VecX::Zero(2));
    const VecX ydot = plain_from_absolute(m2, q, qd, y, Dy);
    VecX ds(8);
    ds << qd, covariant_eom_rhs(m2, q, qd), xdot, ydot;
    return ds;
  };
  VecX joint0(8);
  joint0 << q0, qd0, x0, absolute_from_plain(m2, q0, qd0, x0, VecX::Zero(2));
  const VecX xT = rk4(joint, joint0, 1.0, 2e-3).segment(4, 2);
  auto defect = [&](double eps) {
    VecX ya(4), yb(4);
    ya << q0, qd0;
    yb << q0 + eps * x0, qd0;
    const VecX qa = rk4(flow, ya, 1.0, 2e-3).head(2);
    const VecX qb = rk4(flow, yb, 1.0, 2e-3).head(2);
    return ((qb - qa) / eps - xT).norm();
  };
  const double d4 = defect(1e-4);
  const double d5 = defect(1e-5);
  const bool second_order = d5 < 1e-7 && d4 / std::max(d5, 1e-300) > 5.0;

  report(12, flat < 1e-5 && eom < 1e-6 && second_order, "Riemann module",
         "polar " + num(flat) + ", eom " + num(eom) + ", defects " + num(d4) +
             "/" + num(d5));
}

// ---- criterion 13 --------------------------------------------------------

void criterion_13() {
  const fs::path dir = fs::temp_directory_path() / "hamel-acceptance";
  fs::create_directories(dir);
  const fs::path cfg = dir / "det.json";
  {
    std::ofstream out(cfg);
    out << R"({
      "model": {"preset": "satellite_so3r3"},
      "run": {"formulation": "euler-poincare", "t_end": 0.5, "dt": 0.001,
              "initial": {"xi": [0.3, -0.2, 0.4, 0.1, 0.0, -0.1],
                          "rdot": [1.0, -2.0, 0.5]}}
    })";
  }
  auto run = [&](const fs::path& out_dir) {
    const std::string cmd = std::string(HAMEL_CLI_PATH) + " simulate --config " +
                            cfg.string() + " --out " + out_dir.string() +
                            " > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  const int s1 = run(dir / "a");
  const int s2 = run(dir / "b");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(dir / "a" / "trajectory.csv");
  const std::string b = slurp(dir / "b" / "trajectory.csv");
  report(13, s1 == 0 && s2 == 0 && !a.empty() && a == b, "determinism",
         a == b ? "byte-identical CSV (" + std::to_string(a.size()) + " bytes)"
                : "outputs differ");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 13 criteria passed\n");
  return 0;
}
