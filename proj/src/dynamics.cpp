#include "hamel/dynamics.hpp"

#include <cmath>

#include "hamel/quasi_velocity.hpp"

namespace hamel {

namespace detail {

MatX directional_block_derivative(const std::function<MatX(const VecX&)>& M,
                                  const VecX& r, const VecX& v) {
  const double vn = v.norm();
  if (r.size() == 0 || vn == 0.0) {
    MatX m0 = M(r);
    return MatX::Zero(m0.rows(), m0.cols());
  }
  const double h = fd_step(r) / vn;
  return (M(r + h * v) - M(r - h * v)) / (2.0 * h);
}

std::vector<MatX> block_partials(const std::function<MatX(const VecX&)>& M,
                                 const VecX& r) {
  const double h = fd_step(r);
  std::vector<MatX> out(r.size());
  for (int j = 0; j < r.size(); ++j) {
    VecX rp = r, rm = r;
    rp[j] += h;
    rm[j] -= h;
    out[j] = (M(rp) - M(rm)) / (2.0 * h);
  }
  return out;
}

VecX potential_gradient(const std::function<double(const VecX&)>& V,
                        const VecX& r) {
  VecX g = VecX::Zero(r.size());
  if (!V) return g;
  const double h = fd_step(r);
  for (int j = 0; j < r.size(); ++j) {
    VecX rp = r, rm = r;
    rp[j] += h;
    rm[j] -= h;
    g[j] = (V(rp) - V(rm)) / (2.0 * h);
  }
  return g;
}

Eigen::LDLT<MatX> spd_factor(const MatX& m, const char* label) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw InertiaError(std::string(label) + " is not symmetric");
  Eigen::LLT<MatX> llt(m);
  if (llt.info() != Eigen::Success)
    throw InertiaError(std::string(label) + " is not positive definite");
  Eigen::LDLT<MatX> ldlt(m);
  if (ldlt.info() != Eigen::Success)
    throw InertiaError(std::string(label) + " factorization failed");
  return ldlt;
}

// Five-point central differences: enough headroom for the residual
// identities that are asserted to 1e-8.
static double fd5(const std::function<double(double)>& f, double h) {
  return (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
}

}  // namespace detail

MatX MechanicalSystem::eval_L(const VecX& r) const {
  MatX m = L ? L(r) : MatX();
  if (m.rows() != m_bar() || m.cols() != m_bar())
    throw InputError("system block L(r) has wrong shape");
  return m;
}

MatX MechanicalSystem::eval_K(const VecX& r) const {
  if (!K) return MatX::Zero(m_bar(), delta_bar);
  MatX m = K(r);
  if (m.rows() != m_bar() || m.cols() != delta_bar)
    throw InputError("system block K(r) has wrong shape");
  return m;
}

MatX MechanicalSystem::eval_S(const VecX& r) const {
  if (!S) {
    if (delta_bar == 0) return MatX::Zero(0, 0);
    throw InputError("system with shape coordinates lacks S(r)");
  }
  MatX m = S(r);
  if (m.rows() != delta_bar || m.cols() != delta_bar)
    throw InputError("system block S(r) has wrong shape");
  return m;
}

double MechanicalSystem::eval_V(const VecX& r) const { return V ? V(r) : 0.0; }

VecX MechanicalSystem::eval_Q(double t, const BundleState& state) const {
  if (!Q) return VecX::Zero(dof());
  VecX q = Q(t, state);
  if (q.size() != dof())
    throw InputError("force callback returned wrong dimension");
  return q;
}

BundleState BundleState::make(const MechanicalSystem& system) {
  BundleState s;
  s.g = GroupElement::identity(system.tag);
  s.r = VecX::Zero(system.delta_bar);
  s.xi = AlgebraVector::zero(system.tag);
  s.rdot = VecX::Zero(system.delta_bar);
  return s;
}

MatX mass_matrix(const MechanicalSystem& system, const VecX& r) {
  const int m = system.m_bar();
  const int d = system.delta_bar;
  MatX M(m + d, m + d);
  M.topLeftCorner(m, m) = system.eval_L(r);
  M.topRightCorner(m, d) = system.eval_K(r);
  M.bottomLeftCorner(d, m) = M.topRightCorner(m, d).transpose();
  M.bottomRightCorner(d, d) = system.eval_S(r);
  return M;
}

MatX locked_mass_matrix(const MechanicalSystem& system, const VecX& r) {
  const int m = system.m_bar();
  const int d = system.delta_bar;
  const MatX L = system.eval_L(r);
  MatX M = MatX::Zero(m + d, m + d);
  M.topLeftCorner(m, m) = L;
  if (d > 0) {
    const MatX A = mechanical_connection(system, r);
    M.bottomRightCorner(d, d) =
        system.eval_S(r) - A.transpose() * L * A;
  }
  return M;
}

VecX fiber_momentum(const MechanicalSystem& system, const VecX& r,
                    const AlgebraVector& xi, const VecX& rdot) {
  return system.eval_L(r) * xi.coords + system.eval_K(r) * rdot;
}

VecX spatial_momentum(const MechanicalSystem& system, const BundleState& s) {
  const VecX Pi = fiber_momentum(system, s.r, s.xi, s.rdot);
  const MatX Ad = adjoint(s.g);
  if (system.triv == Trivialization::Left)
    return Ad.transpose().partialPivLu().solve(Pi);  // Ad_g^-T Pi
  return Ad.transpose() * Pi;
}

double kinetic_energy(const MechanicalSystem& system, const VecX& r,
                      const AlgebraVector& xi, const VecX& rdot) {
  const VecX Pi = fiber_momentum(system, r, xi, rdot);
  const VecX ps = system.eval_K(r).transpose() * xi.coords +
                  system.eval_S(r) * rdot;
  return 0.5 * (xi.coords.dot(Pi) + rdot.dot(ps));
}

double total_energy(const MechanicalSystem& system, const BundleState& s) {
  return kinetic_energy(system, s.r, s.xi, s.rdot) + system.eval_V(s.r);
}

Acceleration euler_poincare_rhs(const MechanicalSystem& system,
                                const BundleState& state) {
  const int m = system.m_bar();
  const int d = system.delta_bar;
  const VecX& r = state.r;
  const VecX& rdot = state.rdot;
  const VecX& xi = state.xi.coords;
  const double sign = system.triv == Trivialization::Left ? 1.0 : -1.0;

  const MatX M = mass_matrix(system, r);
  const VecX Pi = fiber_momentum(system, r, state.xi, rdot);
  const VecX Qf = system.eval_Q(state.t, state);

  VecX rhs(m + d);
  rhs.head(m) = Qf.head(m) + sign * ad(state.xi).transpose() * Pi;

  if (d > 0) {
    const auto dL = detail::block_partials(system.L, r);
    const auto dK = detail::block_partials(system.K ? system.K
                                                    : [m, d](const VecX&) {
                                                        return MatX::Zero(m, d);
                                                      },
                                           r);
    const auto dS = detail::block_partials(system.S, r);
    const VecX dV = detail::potential_gradient(system.V, r);

    MatX DL = MatX::Zero(m, m), DK = MatX::Zero(m, d), DS = MatX::Zero(d, d);
    for (int j = 0; j < d; ++j) {
      DL += dL[j] * rdot[j];
      DK += dK[j] * rdot[j];
      DS += dS[j] * rdot[j];
    }
    rhs.head(m) -= DL * xi + DK * rdot;

    VecX bs(d);
    for (int I = 0; I < d; ++I) {
      const double dT = 0.5 * xi.dot(dL[I] * xi) + xi.dot(dK[I] * rdot) +
                        0.5 * rdot.dot(dS[I] * rdot);
      bs[I] = dT - dV[I];
    }
    rhs.tail(d) = Qf.tail(d) + bs - DK.transpose() * xi - DS * rdot;
  }

  auto ldlt = detail::spd_factor(M, "mass matrix");
  const VecX acc = ldlt.solve(rhs);

  Acceleration out;
  out.fiber = acc.head(m);
  out.rddot = acc.tail(d);
  return out;
}

Acceleration lagrange_poincare_rhs(const MechanicalSystem& system,
                                   const VecX& r, const VecX& Omega,
                                   const VecX& rdot, double t) {
  const int m = system.m_bar();
  const int d = system.delta_bar;
  const double sign = system.triv == Trivialization::Left ? 1.0 : -1.0;

  const MatX L = system.eval_L(r);
  const MatX A = d > 0 ? mechanical_connection(system, r) : MatX::Zero(m, 0);
  const VecX Pi = L * Omega;
  const AlgebraVector xi(system.tag, Omega - A * rdot);

  // Forces are supplied dual to (xi, rdot); transform to locked duals.
  BundleState probe;
  probe.g = GroupElement::identity(system.tag);
  probe.r = r;
  probe.xi = xi;
  probe.rdot = rdot;
  probe.t = t;
  const VecX Qf = system.eval_Q(t, probe);
  const VecX Q_fiber = Qf.head(m);
  const VecX Q_shape = Qf.tail(d) - A.transpose() * Q_fiber;

  Acceleration out;

  // Fiber: L Omegadot = Q - (d/dt L) Omega +- ad^T_xi Pi.
  const MatX DL = detail::directional_block_derivative(system.L, r, rdot);
  const VecX fiber_rhs =
      Q_fiber - DL * Omega + sign * ad(xi).transpose() * Pi;
  out.fiber = detail::spd_factor(L, "L(r)").solve(fiber_rhs);

  if (d == 0) {
    out.rddot = VecX();
    return out;
  }

  // Shape: reduced mass is the lower-right locked block.
  auto reduced = [&system](const VecX& rr) {
    const MatX Lr = system.eval_L(rr);
    const MatX Ar = mechanical_connection(system, rr);
    return MatX(system.eval_S(rr) - Ar.transpose() * Lr * Ar);
  };
  const MatX St = reduced(r);
  const MatX DSt = detail::directional_block_derivative(reduced, r, rdot);

  const auto dL = detail::block_partials(system.L, r);
  const auto dSt = detail::block_partials(reduced, r);
  const VecX dV = detail::potential_gradient(system.V, r);

  const CurvatureComponents B = curvature(mechanical_connection_form(system), r);

  VecX shape_rhs(d);
  for (int I = 0; I < d; ++I) {
    const double dl_dr = 0.5 * Omega.dot(dL[I] * Omega) +
                         0.5 * rdot.dot(dSt[I] * rdot) - dV[I];
    double curv = 0.0;
    for (int alpha = 0; alpha < m; ++alpha)
      curv += Pi[alpha] * B.B[alpha].row(I).dot(rdot);
    const AlgebraVector AI(system.tag, A.col(I));
    const double coupling = -sign * Pi.dot(ad(AI) * Omega);
    shape_rhs[I] = Q_shape[I] + dl_dr - curv - coupling;
  }
  shape_rhs -= DSt * rdot;
  out.rddot = detail::spd_factor(St, "locked shape mass").solve(shape_rhs);
  return out;
}

MatX constrained_mass(const MechanicalSystem& system,
                      const LocalConnection& conn, const VecX& r) {
  const MatX A = conn.eval(r);
  const MatX L = system.eval_L(r);
  const MatX K = system.eval_K(r);
  return system.eval_S(r) - A.transpose() * K - K.transpose() * A +
         A.transpose() * L * A;
}

VecX constrained_rhs(const MechanicalSystem& system,
                     const LocalConnection& conn, const VecX& r,
                     const VecX& rdot, double t) {
  const int m = system.m_bar();
  const int d = system.delta_bar;
  if (conn.delta_bar != d || conn.tag != system.tag)
    throw InputError("constrained_rhs: connection does not match system");

  const MatX A = conn.eval(r);
  const VecX xi = -A * rdot;
  const AlgebraVector xiv(system.tag, xi);
  const VecX mu = system.eval_K(r) * rdot + system.eval_L(r) * xi;

  auto Sc = [&system, &conn](const VecX& rr) {
    return constrained_mass(system, conn, rr);
  };
  const MatX Sc0 = Sc(r);
  const MatX DSc = detail::directional_block_derivative(Sc, r, rdot);

  const auto dL = detail::block_partials(system.L, r);
  const auto dK = detail::block_partials(system.K ? system.K
                                                  : [m, d](const VecX&) {
                                                      return MatX::Zero(m, d);
                                                    },
                                         r);
  const auto dS = detail::block_partials(system.S, r);
  const auto dA = detail::block_partials(conn.A, r);
  const VecX dV = detail::potential_gradient(system.V, r);

  const CurvatureComponents B = curvature(conn, r);

  BundleState probe;
  probe.g = GroupElement::identity(system.tag);
  probe.r = r;
  probe.xi = xiv;
  probe.rdot = rdot;
  probe.t = t;
  const VecX Qf = system.eval_Q(t, probe);
  const VecX Q_eff = Qf.tail(d) - A.transpose() * Qf.head(m);

  VecX rhs(d);
  for (int I = 0; I < d; ++I) {
    const double dlc_dr = 0.5 * xi.dot(dL[I] * xi) + xi.dot(dK[I] * rdot) +
                          0.5 * rdot.dot(dS[I] * rdot) -
                          mu.dot(dA[I] * rdot) - dV[I];
    double curv = 0.0;
    for (int alpha = 0; alpha < m; ++alpha)
      curv += mu[alpha] * B.B[alpha].row(I).dot(rdot);
    rhs[I] = Q_eff[I] + dlc_dr - curv;
  }
  rhs -= DSc * rdot;
  return detail::spd_factor(Sc0, "constrained shape mass").solve(rhs);
}

namespace {

// Gradient of a scalar function of x by five-point central differences.
VecX fd_gradient(const std::function<double(const VecX&)>& f, const VecX& x) {
  const double h = 1e-3 * std::max(1.0, x.norm());
  VecX g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    auto fi = [&](double t) {
      VecX xx = x;
      xx[i] += t;
      return f(xx);
    };
    g[i] = detail::fd5(fi, h);
  }
  return g;
}

// d/dt of a vector function along the direction (v); five-point in tau.
VecX fd_time_derivative(const std::function<VecX(const VecX&)>& f,
                        const VecX& x, const VecX& v) {
  const double vn = v.norm();
  if (vn == 0.0) return VecX::Zero(f(x).size());
  const double h = 1e-3 * std::max(1.0, x.norm()) / vn;
  const VecX fp2 = f(x + 2.0 * h * v), fp = f(x + h * v);
  const VecX fm = f(x - h * v), fm2 = f(x - 2.0 * h * v);
  return (-fp2 + 8.0 * fp - 8.0 * fm + fm2) / (12.0 * h);
}

struct CoordinateKinematics {
  VecX q, qdot, qddot;  // with constraints resolved
};

CoordinateKinematics resolve_constraints(const CoordinateSystem& cs,
                                         const CoordinateState& st) {
  const MatX A = cs.A(st.r);
  if (A.rows() != cs.n_s || A.cols() != cs.n_r)
    throw InputError("coordinate system A(r) has wrong shape");
  const MatX DA = detail::directional_block_derivative(cs.A, st.r, st.rdot);
  CoordinateKinematics k;
  k.q = VecX(cs.n_s + cs.n_r);
  k.q << st.s, st.r;
  k.qdot = VecX(cs.n_s + cs.n_r);
  k.qdot << VecX(-A * st.rdot), st.rdot;
  k.qddot = VecX(cs.n_s + cs.n_r);
  k.qddot << VecX(-DA * st.rdot - A * st.rddot), st.rddot;
  return k;
}

}  // namespace

VecX voronets_residual(const CoordinateSystem& cs, const CoordinateState& st) {
  const int ns = cs.n_s, nr = cs.n_r;
  const auto k = resolve_constraints(cs, st);
  const MatX A = cs.A(st.r);

  // x = (q, qdot); EL residual blocks of the full Lagrangian.
  auto p_full = [&](const VecX& x) {
    const VecX q = x.head(ns + nr), qd = x.tail(ns + nr);
    return fd_gradient([&](const VecX& qq) { return cs.lagrangian(q, qq); },
                       qd);
  };
  VecX x(2 * (ns + nr));
  x << k.q, k.qdot;
  VecX v(2 * (ns + nr));
  v << k.qdot, k.qddot;

  const VecX dpdt = fd_time_derivative(p_full, x, v);
  const VecX dLdq = fd_gradient(
      [&](const VecX& qq) { return cs.lagrangian(qq, k.qdot); }, k.q);
  const VecX Q = cs.Q ? cs.Q(k.q, k.qdot) : VecX::Zero(ns + nr);

  const VecX el = dpdt - dLdq - Q;  // full Euler-Lagrange residual
  return el.tail(nr) - A.transpose() * el.head(ns);
}

VecX hamel_constrained_residual(const CoordinateSystem& cs,
                                const CoordinateState& st) {
  const int ns = cs.n_s, nr = cs.n_r;
  const auto k = resolve_constraints(cs, st);
  const MatX A = cs.A(st.r);

  // Constrained Lagrangian L_c(s, r, rdot) = L(s, r, -A(r) rdot, rdot).
  auto Lc = [&](const VecX& s, const VecX& r, const VecX& rdot) {
    VecX q(ns + nr), qd(ns + nr);
    q << s, r;
    qd << VecX(-cs.A(r) * rdot), rdot;
    return cs.lagrangian(q, qd);
  };

  // y = (s, r, rdot); shape momentum p_c = dL_c/drdot.
  auto p_c = [&](const VecX& y) {
    const VecX s = y.head(ns), r = y.segment(ns, nr), rd = y.tail(nr);
    return fd_gradient([&](const VecX& v) { return Lc(s, r, v); }, rd);
  };
  VecX y(ns + 2 * nr);
  y << st.s, st.r, st.rdot;
  VecX ydot(ns + 2 * nr);
  ydot << k.qdot.head(ns), st.rdot, st.rddot;

  const VecX dpdt = fd_time_derivative(p_c, y, ydot);
  const VecX dLc_dr = fd_gradient(
      [&](const VecX& r) { return Lc(st.s, r, st.rdot); }, st.r);
  const VecX dLc_ds = fd_gradient(
      [&](const VecX& s) { return Lc(s, st.r, st.rdot); }, st.s);

  // dL/dsdot of the full Lagrangian at the constrained velocities.
  const VecX p_s = fd_gradient(
      [&](const VecX& sd) {
        VecX qd(ns + nr);
        qd << sd, st.rdot;
        return cs.lagrangian(k.q, qd);
      },
      k.qdot.head(ns));

  // gamma^a_{IJ} of the assembled block map [[I, A(r)], [0, I]].
  QuasiVelocityMap map(ns, nr, [&cs, ns, nr](const VecX& q) {
    MatX m = MatX::Identity(ns + nr, ns + nr);
    m.topRightCorner(ns, nr) = cs.A(q.tail(nr));
    return m;
  });
  const auto gamma = block_hamel_holonomic(map, k.q);

  const VecX Qfull = cs.Q ? cs.Q(k.q, k.qdot) : VecX::Zero(ns + nr);
  const VecX Qu = Qfull.tail(nr) - A.transpose() * Qfull.head(ns);

  VecX res = dpdt - dLc_dr + A.transpose() * dLc_ds - Qu;
  for (int I = 0; I < nr; ++I) {
    double corr = 0.0;
    for (int a = 0; a < ns; ++a)
      corr += p_s[a] * gamma.gamma_IJ[a].row(I).dot(st.rdot);
    res[I] += corr;
  }
  return res;
}

}  // namespace hamel
