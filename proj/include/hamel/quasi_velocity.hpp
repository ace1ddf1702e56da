#pragma once

#include <functional>

#include "hamel/lie.hpp"

namespace hamel {

using MatrixFn = std::function<MatX(const VecX&)>;

/// Central-difference step used for all coordinate derivatives in the
/// library: h = 1e-6 * max(1, ||q||).
double fd_step(const VecX& q);

/// Quasi-velocity coordinate map u = A(q) qdot with inverse B = A^-1.
/// The index partition splits the n coordinates into m_bar dependent
/// (fiber) indices followed by delta_bar independent (shape) indices.
struct QuasiVelocityMap {
  int n = 0;
  MatrixFn A;
  MatrixFn B;       // if empty, A(q) is inverted numerically
  int m_bar = 0;    // dependent block size
  int delta_bar = 0;

  QuasiVelocityMap() = default;
  QuasiVelocityMap(int n_, MatrixFn A_, MatrixFn B_ = nullptr);
  QuasiVelocityMap(int m_bar_, int delta_bar_, MatrixFn A_,
                   MatrixFn B_ = nullptr);

  MatX eval_A(const VecX& q) const;
  /// B(q), either the supplied inverse or a numeric one. Throws
  /// SingularMapError when A(q) is not invertible.
  MatX eval_B(const VecX& q) const;
};

/// Dense three-index array gamma^c_{ab}, antisymmetric in (a, b).
/// Stored as gamma[c](a, b).
struct HamelCoefficients {
  std::vector<MatX> gamma;

  int n() const { return static_cast<int>(gamma.size()); }
  double operator()(int c, int a, int b) const { return gamma[c](a, b); }
  double max_abs() const;
  double antisymmetry_defect() const;
  static HamelCoefficients zero(int n);
};

/// Restricted coefficient slices for a block-triangular map on
/// coordinates (s, r): only the alpha-rows are non-zero.
struct BlockHamelCoefficients {
  int m_bar = 0;
  int delta_bar = 0;
  std::vector<MatX> gamma_IJ;        // [alpha](I, J), delta x delta
  std::vector<MatX> gamma_betaJ;     // [alpha](beta, J), m x delta
  std::vector<MatX> gamma_betalambda;// [alpha](beta, lambda), m x m
};

/// Hamel coefficients from the defining formula,
/// gamma^c_{ab} = (dA^c_r/dq^s - dA^c_s/dq^r) B^r_a B^s_b,
/// with the A-derivatives taken by central differences.
HamelCoefficients hamel_numeric(const QuasiVelocityMap& map, const VecX& q);

/// Structure constants c^c_{ab} of the group algebra as a coefficient
/// array; right trivialization negates ("gamma = -c").
HamelCoefficients structure_constants(GroupTag tag, Trivialization triv);

/// Hamel coefficient slices for a map with the block-triangular
/// structure [[A1, A2], [0, I]] on partitioned coordinates (s, r),
/// evaluated from the per-block derivative formula rather than the
/// generic full-map path. Throws StructureError when the lower blocks
/// are not [0 I].
BlockHamelCoefficients block_hamel_holonomic(const QuasiVelocityMap& map,
                                             const VecX& q);

/// True when all |gamma| < tol at every sample point (the map is an
/// exact coordinate change there).
bool vanishes_identically(const QuasiVelocityMap& map,
                          const std::vector<VecX>& samples,
                          double tol = 1e-8);

/// Same test on uniform random points in a chart box (fixed seed).
bool vanishes_identically(const QuasiVelocityMap& map, const VecX& box_lo,
                          const VecX& box_hi, int samples = 10,
                          double tol = 1e-8);

}  // namespace hamel
