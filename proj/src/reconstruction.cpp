#include "hamel/reconstruction.hpp"

#include <cmath>

namespace hamel {

namespace {

GroupElement attach(const GroupElement& g0, const AlgebraVector& eta,
                    Trivialization triv) {
  const GroupElement e = exp(eta);
  return triv == Trivialization::Left ? compose(g0, e) : compose(e, g0);
}

bool finite(const VecX& v) { return v.allFinite(); }

// One MK-RK4 integration driver shared by the dynamic families and the
// prescribed-path reconstructions. The ODE state is (eta, z); the
// callback supplies (xi, zdot) for given (t, g, z).
struct MkContext {
  GroupTag tag;
  Trivialization triv;
  GroupElement g0;
  VecX eta;
  VecX z;
  double t = 0.0;

  GroupElement current() const {
    return attach(g0, AlgebraVector(tag, eta), triv);
  }
};

using RatesFn = std::function<void(double t, const GroupElement& g,
                                   const VecX& z, VecX& xi, VecX& zdot)>;

void mk_rk4_step(MkContext& c, double dt, const RatesFn& rates) {
  const int m = algebra_dim(c.tag);
  const int nz = static_cast<int>(c.z.size());
  VecX keta[4], kz[4];
  VecX xi(m), zdot(nz);

  auto stage = [&](double tau, const VecX& eta_s, const VecX& z_s, VecX& ke,
                   VecX& kzv) {
    const GroupElement g =
        attach(c.g0, AlgebraVector(c.tag, eta_s), c.triv);
    rates(c.t + tau, g, z_s, xi, kzv);
    ke = dexpinv(AlgebraVector(c.tag, eta_s), c.triv) * xi;
  };

  stage(0.0, c.eta, c.z, keta[0], kz[0]);
  stage(0.5 * dt, VecX(c.eta + 0.5 * dt * keta[0]),
        VecX(c.z + 0.5 * dt * kz[0]), keta[1], kz[1]);
  stage(0.5 * dt, VecX(c.eta + 0.5 * dt * keta[1]),
        VecX(c.z + 0.5 * dt * kz[1]), keta[2], kz[2]);
  stage(dt, VecX(c.eta + dt * keta[2]), VecX(c.z + dt * kz[2]), keta[3],
        kz[3]);

  c.eta += (dt / 6.0) * (keta[0] + 2.0 * keta[1] + 2.0 * keta[2] + keta[3]);
  c.z += (dt / 6.0) * (kz[0] + 2.0 * kz[1] + 2.0 * kz[2] + kz[3]);
  c.t += dt;
}

// Returns true when a rebase occurred.
bool maybe_rebase(MkContext& c, double threshold) {
  if (c.eta.head<3>().norm() <= threshold) return false;
  c.g0 = orthonormalized(c.current());
  c.eta.setZero();
  return true;
}

Trajectory run_mk(MkContext& c, double t_end, double dt, const RatesFn& rates,
                  const IntegrateOptions& opts,
                  const std::function<BundleState(double, const GroupElement&,
                                                  const VecX&)>& to_state) {
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  if (t_end < c.t) throw InputError("t_end must not precede the start time");

  Trajectory traj;
  const auto n_steps =
      static_cast<long>(std::ceil((t_end - c.t) / dt - 1e-12));
  traj.times.reserve(n_steps / opts.store_every + 2);
  traj.states.reserve(n_steps / opts.store_every + 2);

  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(to_state(t, c.current(), c.z));
  };
  record(c.t);

  double last_good = c.t;
  for (long k = 0; k < n_steps; ++k) {
    const double step = std::min(dt, t_end - c.t);
    mk_rk4_step(c, step, rates);
    if (!finite(c.eta) || !finite(c.z))
      throw DivergenceError(last_good, "state became non-finite");
    last_good = c.t;
    if (maybe_rebase(c, opts.rebase_threshold))
      traj.rebase_events.push_back(traj.times.size());
    if ((k + 1) % opts.store_every == 0 || k + 1 == n_steps) record(c.t);
  }
  return traj;
}

}  // namespace

const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::EulerPoincare: return "euler-poincare";
    case Formulation::LagrangePoincare: return "lagrange-poincare";
    case Formulation::Constrained: return "constrained";
    case Formulation::MomentumConserved: return "momentum-conserved";
  }
  return "?";
}

Trajectory integrate(const MechanicalSystem& system, Formulation form,
                     const BundleState& initial, double t_end, double dt,
                     const LocalConnection* kinematic,
                     const IntegrateOptions& opts) {
  const int m = system.m_bar();
  const int d = system.delta_bar;
  if (initial.r.size() != d || initial.rdot.size() != d)
    throw InputError("initial state shape dimension mismatch");
  if (initial.xi.dim() != m)
    throw InputError("initial state velocity dimension mismatch");

  std::optional<LocalConnection> mech;
  const LocalConnection* conn = nullptr;
  switch (form) {
    case Formulation::Constrained:
      if (!kinematic)
        throw InputError("constrained run needs a kinematic connection");
      conn = kinematic;
      break;
    case Formulation::MomentumConserved:
      mech = mechanical_connection_form(system);
      conn = &*mech;
      break;
    case Formulation::LagrangePoincare:
      if (d > 0) {
        mech = mechanical_connection_form(system);
        conn = &*mech;
      }
      break;
    default:
      break;
  }

  MkContext c;
  c.tag = system.tag;
  c.triv = system.triv;
  c.g0 = initial.g;
  c.eta = VecX::Zero(m);
  c.t = initial.t;

  RatesFn rates;
  std::function<BundleState(double, const GroupElement&, const VecX&)>
      to_state;

  switch (form) {
    case Formulation::EulerPoincare: {
      c.z = VecX(d + m + d);
      c.z << initial.r, initial.xi.coords, initial.rdot;
      rates = [&system, m, d](double t, const GroupElement& g, const VecX& z,
                              VecX& xi, VecX& zdot) {
        BundleState s;
        s.g = g;
        s.r = z.head(d);
        s.xi = AlgebraVector(system.tag, z.segment(d, m));
        s.rdot = z.tail(d);
        s.t = t;
        const Acceleration a = euler_poincare_rhs(system, s);
        xi = s.xi.coords;
        zdot.resize(d + m + d);
        zdot << s.rdot, a.fiber, a.rddot;
      };
      to_state = [&system, m, d](double t, const GroupElement& g,
                                 const VecX& z) {
        BundleState s;
        s.g = g;
        s.r = z.head(d);
        s.xi = AlgebraVector(system.tag, z.segment(d, m));
        s.rdot = z.tail(d);
        s.t = t;
        return s;
      };
      break;
    }
    case Formulation::LagrangePoincare: {
      // Locked-coordinate state; stored states convert back to xi.
      VecX Omega0 = initial.xi.coords;
      if (d > 0) Omega0 += conn->eval(initial.r) * initial.rdot;
      c.z = VecX(d + m + d);
      c.z << initial.r, Omega0, initial.rdot;
      rates = [&system, conn, m, d](double t, const GroupElement&,
                                    const VecX& z, VecX& xi, VecX& zdot) {
        const VecX r = z.head(d);
        const VecX Omega = z.segment(d, m);
        const VecX rdot = z.tail(d);
        const Acceleration a =
            lagrange_poincare_rhs(system, r, Omega, rdot, t);
        xi = Omega;
        if (d > 0) xi -= conn->eval(r) * rdot;
        zdot.resize(d + m + d);
        zdot << rdot, a.fiber, a.rddot;
      };
      to_state = [&system, conn, m, d](double t, const GroupElement& g,
                                       const VecX& z) {
        BundleState s;
        s.g = g;
        s.r = z.head(d);
        VecX xi = z.segment(d, m);
        if (d > 0) xi -= conn->eval(s.r) * z.tail(d);
        s.xi = AlgebraVector(system.tag, xi);
        s.rdot = z.tail(d);
        s.t = t;
        return s;
      };
      break;
    }
    case Formulation::Constrained:
    case Formulation::MomentumConserved: {
      c.z = VecX(2 * d);
      c.z << initial.r, initial.rdot;
      rates = [&system, conn, d](double t, const GroupElement&, const VecX& z,
                                 VecX& xi, VecX& zdot) {
        const VecX r = z.head(d);
        const VecX rdot = z.tail(d);
        xi = -conn->eval(r) * rdot;
        const VecX rddot = constrained_rhs(system, *conn, r, rdot, t);
        zdot.resize(2 * d);
        zdot << rdot, rddot;
      };
      to_state = [&system, conn, d](double t, const GroupElement& g,
                                    const VecX& z) {
        BundleState s;
        s.g = g;
        s.r = z.head(d);
        s.rdot = z.tail(d);
        s.xi = AlgebraVector(system.tag, -conn->eval(s.r) * s.rdot);
        s.t = t;
        return s;
      };
      break;
    }
  }

  return run_mk(c, initial.t + t_end, dt, rates, opts, to_state);
}

VecX ShapePath::eval_r(double t) const {
  if (!r) throw InputError("shape path has no r(t)");
  return r(t);
}

VecX ShapePath::eval_rdot(double t) const {
  if (rdot) return rdot(t);
  const double h = 1e-7 * std::max(1.0, std::abs(t));
  return (r(t + h) - r(t - h)) / (2.0 * h);
}

Trajectory reconstruct_with_drift(const MechanicalSystem& system,
                                  const VecX& Pi0, const ShapePath& path,
                                  const GroupElement& g0, double t_end,
                                  double dt, const IntegrateOptions& opts) {
  const int m = system.m_bar();
  const int d = system.delta_bar;
  if (Pi0.size() != m)
    throw InputError("Pi0 has dimension " + std::to_string(Pi0.size()) +
                     ", expected " + std::to_string(m));
  if (!path.r) throw InputError("shape path has no r(t)");
  if (path.eval_r(0.0).size() != d)
    throw InputError("shape path dimension does not match system");

  const LocalConnection mech = mechanical_connection_form(system);
  const bool left = system.triv == Trivialization::Left;

  // Ad-transported conserved momentum: for a left-trivialized system the
  // spatial value Ad_g^-T Pi is constant, so Pi(t) = Ad_g^T Pi_const.
  const MatX Ad0 = adjoint(g0);
  const VecX Pi_const =
      left ? VecX(Ad0.transpose().partialPivLu().solve(Pi0))
           : VecX(Ad0.transpose() * Pi0);
  const bool drift = Pi0.norm() > 0.0;

  MkContext c;
  c.tag = system.tag;
  c.triv = system.triv;
  c.g0 = g0;
  c.eta = VecX::Zero(m);
  c.z = VecX::Zero(0);

  RatesFn rates = [&, left, drift, d](double t, const GroupElement& g,
                                      const VecX&, VecX& xi, VecX& zdot) {
    const VecX r = path.eval_r(t);
    const VecX rd = path.eval_rdot(t);
    xi = VecX::Zero(algebra_dim(system.tag));
    if (d > 0) xi = -mech.eval(r) * rd;
    if (drift) {
      const MatX Ad = adjoint(g);
      const VecX Pi_t =
          left ? VecX(Ad.transpose() * Pi_const)
               : VecX(Ad.transpose().partialPivLu().solve(Pi_const));
      xi += detail::spd_factor(system.eval_L(r), "L(r)").solve(Pi_t);
    }
    zdot.resize(0);
  };

  auto to_state = [&system, &path, d](double t, const GroupElement& g,
                                      const VecX&) {
    BundleState s;
    s.g = g;
    s.r = path.eval_r(t);
    s.rdot = path.eval_rdot(t);
    s.xi = AlgebraVector::zero(system.tag);
    s.t = t;
    return s;
  };

  Trajectory traj = run_mk(c, t_end, dt, rates, opts, to_state);
  // Fill in the stored xi from the flow definition.
  for (auto& s : traj.states) {
    VecX xi = VecX::Zero(m);
    if (d > 0) xi = -mech.eval(s.r) * s.rdot;
    if (drift) {
      const MatX Ad = adjoint(s.g);
      const VecX Pi_t =
          left ? VecX(Ad.transpose() * Pi_const)
               : VecX(Ad.transpose().partialPivLu().solve(Pi_const));
      xi += detail::spd_factor(system.eval_L(s.r), "L(r)").solve(Pi_t);
    }
    s.xi = AlgebraVector(system.tag, xi);
  }
  return traj;
}

PhaseResult geometric_phase(const LocalConnection& conn, const ShapePath& path,
                            const GroupElement& g0, double dt, int cycles) {
  if (cycles < 1) throw InputError("cycle count must be >= 1");
  if (!path.r) throw InputError("shape path has no r(t)");
  const double T = path.period;
  if ((path.eval_r(0.0) - path.eval_r(T)).norm() > 1e-10)
    throw InputError("shape path is not closed over one period");

  MkContext c;
  c.tag = conn.tag;
  c.triv = conn.triv;
  c.g0 = g0;
  c.eta = VecX::Zero(algebra_dim(conn.tag));
  c.z = VecX::Zero(0);

  RatesFn rates = [&conn, &path](double t, const GroupElement&, const VecX&,
                                 VecX& xi, VecX& zdot) {
    xi = -conn.eval(path.eval_r(t)) * path.eval_rdot(t);
    zdot.resize(0);
  };

  // Integrate cycle by cycle in local time, rebasing at every boundary:
  // each cycle then runs in the same chart over the same stage times.
  std::vector<GroupElement> marks;
  marks.push_back(g0);
  const auto per_cycle =
      static_cast<long>(std::llround(T / dt));
  const double step = T / static_cast<double>(std::max<long>(1, per_cycle));
  for (int k = 0; k < cycles; ++k) {
    c.t = 0.0;
    for (long i = 0; i < std::max<long>(1, per_cycle); ++i)
      mk_rk4_step(c, step, rates);
    c.g0 = orthonormalized(c.current());
    c.eta.setZero();
    marks.push_back(c.g0);
  }

  PhaseResult out;
  out.cycle_count = cycles;
  for (int k = 0; k < cycles; ++k) {
    const GroupElement h =
        conn.triv == Trivialization::Left
            ? compose(inverse(marks[k]), marks[k + 1])
            : compose(marks[k + 1], inverse(marks[k]));
    out.per_cycle.push_back(h);
    out.per_cycle_log.push_back(log(h).coords);
  }
  out.phase = out.per_cycle.front();
  return out;
}

PhaseResult phases_from_trajectory(const Trajectory& traj, Trivialization triv,
                                   double period) {
  if (traj.times.size() < 2) throw InputError("trajectory too short");
  PhaseResult out;
  std::vector<GroupElement> marks;
  double next = traj.times.front();
  const double tol = 1e-9 * std::max(1.0, period);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] >= next - tol) {
      marks.push_back(traj.states[i].g);
      next += period;
    }
  }
  if (marks.size() < 2)
    throw InputError("trajectory does not span one full period");
  out.cycle_count = static_cast<int>(marks.size()) - 1;
  for (int k = 0; k < out.cycle_count; ++k) {
    const GroupElement h = triv == Trivialization::Left
                               ? compose(inverse(marks[k]), marks[k + 1])
                               : compose(marks[k + 1], inverse(marks[k]));
    out.per_cycle.push_back(h);
    out.per_cycle_log.push_back(log(h).coords);
  }
  out.phase = out.per_cycle.front();
  return out;
}

std::vector<VecX> pseudo_holonomy_scan(const LocalConnection& conn,
                                       const VecX& lo, const VecX& hi,
                                       const std::vector<int>& counts,
                                       double tol) {
  const int d = conn.delta_bar;
  if (lo.size() != d || hi.size() != d ||
      static_cast<int>(counts.size()) != d)
    throw InputError("pseudo_holonomy_scan: grid spec has wrong dimension");
  for (int c : counts)
    if (c < 1) throw InputError("pseudo_holonomy_scan: counts must be >= 1");

  std::vector<VecX> hits;
  std::vector<int> idx(d, 0);
  while (true) {
    VecX r(d);
    for (int i = 0; i < d; ++i)
      r[i] = counts[i] == 1
                 ? lo[i]
                 : lo[i] + (hi[i] - lo[i]) * idx[i] / (counts[i] - 1.0);
    if (curvature(conn, r).max_abs() < tol) hits.push_back(r);
    int i = 0;
    for (; i < d; ++i) {
      if (++idx[i] < counts[i]) break;
      idx[i] = 0;
    }
    if (i == d) break;
  }
  return hits;
}

}  // namespace hamel
