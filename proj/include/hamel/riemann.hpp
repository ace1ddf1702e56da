#pragma once

#include <functional>
#include <vector>

#include "hamel/lie.hpp"

namespace hamel {

/// Riemannian metric on a coordinate chart: the mass matrix g(q) read
/// as metric coefficients.
struct Metric {
  int n = 0;
  std::function<MatX(const VecX&)> g;

  MatX eval(const VecX& q) const;
  MatX eval_inverse(const VecX& q) const;  // throws InertiaError if not SPD
};

/// Christoffel symbols of the second kind, Gamma[a](b, c), symmetric in
/// (b, c). All derivatives by central differences with h = 1e-5.
std::vector<MatX> christoffel(const Metric& metric, const VecX& q);

/// Covariant equations of motion: qddot^a = Q^a - Gamma^a_{bc} qdot^b
/// qdot^c, with Q supplied covariant and raised by the inverse metric.
/// Q may be empty (geodesic motion).
VecX covariant_eom_rhs(const Metric& metric, const VecX& q, const VecX& qdot,
                       const VecX& Q_cov = VecX());

/// Riemann tensor R[a][b](c, d) in the convention
/// R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
///           + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb},
/// i.e. R(e_c, e_d) e_b = R^a_{bcd} e_a. Nested central differences
/// (outer step 1e-5); accuracy targets are 1e-5 accordingly.
std::vector<std::vector<MatX>> riemann_tensor(const Metric& metric,
                                              const VecX& q);

double riemann_max_abs(const std::vector<std::vector<MatX>>& R);

/// Position-dependent covariant force field Q_a(q).
using CovectorField = std::function<VecX(const VecX&)>;

/// Second absolute derivative of a perturbation x riding on the nominal
/// state (q, qdot):
///   D^2x/dt^2 = g^-1 (Phi + nablaQ-term) - R^a_{bcd} qdot^b x^c qdot^d
/// where (nablaQ x)_a = (dQ_a/dq^b - Gamma^c_{ba} Q_c) x^b. For a flat
/// metric with Q = 0 this reduces to g^-1 Phi.
VecX linearized_perturbation_rhs(const Metric& metric, const VecX& q,
                                 const VecX& qdot, const VecX& x,
                                 const VecX& dx_cov, const CovectorField& Q,
                                 const VecX& Phi);

/// Converts between plain time derivatives and absolute derivatives of
/// a vector field x along qdot: Dx/dt = xdot + Gamma(qdot, x).
VecX absolute_from_plain(const Metric& metric, const VecX& q,
                         const VecX& qdot, const VecX& x, const VecX& xdot);
VecX plain_from_absolute(const Metric& metric, const VecX& q,
                         const VecX& qdot, const VecX& x, const VecX& dx_cov);

}  // namespace hamel
