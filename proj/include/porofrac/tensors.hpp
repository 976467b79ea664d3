#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>

#include "porofrac/errors.hpp"

namespace porofrac {

using Real = double;

template <typename Scalar>
using Vec2T = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vec6T = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using Mat2T = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Mat3T = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Mat6T = Eigen::Matrix<Scalar, 6, 6>;

using Vec2 = Vec2T<Real>;
using Vec3 = Vec3T<Real>;
using Vec6 = Vec6T<Real>;
using Mat2 = Mat2T<Real>;
using Mat3 = Mat3T<Real>;
using Mat6 = Mat6T<Real>;

/// Ramp functions <x>_+ and <x>_-.
template <typename Scalar>
inline Scalar ramp_pos(Scalar x) { return x > Scalar(0) ? x : Scalar(0); }
template <typename Scalar>
inline Scalar ramp_neg(Scalar x) { return x < Scalar(0) ? x : Scalar(0); }

/// Symmetric second-order tensor in 3D. Stores the six independent
/// components in the order (xx, yy, zz, xy, yz, xz). Plane-strain states
/// keep yz = xz = 0; all operations preserve that.
template <typename Scalar>
struct SymTensor3T {
  Vec6T<Scalar> c = Vec6T<Scalar>::Zero();

  SymTensor3T() = default;
  explicit SymTensor3T(const Vec6T<Scalar>& components) : c(components) {}
  SymTensor3T(Scalar xx, Scalar yy, Scalar zz, Scalar xy, Scalar yz, Scalar xz) {
    c << xx, yy, zz, xy, yz, xz;
  }

  static SymTensor3T Zero() { return SymTensor3T(); }
  static SymTensor3T Identity() {
    return SymTensor3T(Scalar(1), Scalar(1), Scalar(1), Scalar(0), Scalar(0), Scalar(0));
  }
  static SymTensor3T diag(Scalar a, Scalar b, Scalar d) {
    return SymTensor3T(a, b, d, Scalar(0), Scalar(0), Scalar(0));
  }

  Scalar xx() const { return c[0]; }
  Scalar yy() const { return c[1]; }
  Scalar zz() const { return c[2]; }
  Scalar xy() const { return c[3]; }
  Scalar yz() const { return c[4]; }
  Scalar xz() const { return c[5]; }
  Scalar& xx() { return c[0]; }
  Scalar& yy() { return c[1]; }
  Scalar& zz() { return c[2]; }
  Scalar& xy() { return c[3]; }
  Scalar& yz() { return c[4]; }
  Scalar& xz() { return c[5]; }

  Mat3T<Scalar> matrix() const {
    Mat3T<Scalar> m;
    m << c[0], c[3], c[5],
         c[3], c[1], c[4],
         c[5], c[4], c[2];
    return m;
  }
  static SymTensor3T from_matrix(const Mat3T<Scalar>& m) {
    return SymTensor3T(m(0, 0), m(1, 1), m(2, 2),
                       Scalar(0.5) * (m(0, 1) + m(1, 0)),
                       Scalar(0.5) * (m(1, 2) + m(2, 1)),
                       Scalar(0.5) * (m(0, 2) + m(2, 0)));
  }

  /// Mandel (orthonormal) 6-vector: (xx, yy, zz, s*xy, s*yz, s*xz), s = sqrt(2).
  /// In this representation a:b is the plain dot product and fourth-order
  /// tensors act as plain 6x6 matrices.
  Vec6T<Scalar> mandel() const {
    const Scalar s = std::sqrt(Scalar(2));
    Vec6T<Scalar> v = c;
    v[3] *= s; v[4] *= s; v[5] *= s;
    return v;
  }
  static SymTensor3T from_mandel(const Vec6T<Scalar>& v) {
    const Scalar s = std::sqrt(Scalar(2));
    SymTensor3T t(v);
    t.c[3] /= s; t.c[4] /= s; t.c[5] /= s;
    return t;
  }

  Scalar trace() const { return c[0] + c[1] + c[2]; }

  SymTensor3T dev() const {
    const Scalar p = trace() / Scalar(3);
    SymTensor3T d(*this);
    d.c[0] -= p; d.c[1] -= p; d.c[2] -= p;
    return d;
  }

  /// Double contraction a : b.
  Scalar ddot(const SymTensor3T& o) const {
    return c[0] * o.c[0] + c[1] * o.c[1] + c[2] * o.c[2] +
           Scalar(2) * (c[3] * o.c[3] + c[4] * o.c[4] + c[5] * o.c[5]);
  }

  /// Frobenius norm.
  Scalar norm() const { return std::sqrt(ddot(*this)); }

  bool all_finite() const { return c.allFinite(); }

  SymTensor3T operator+(const SymTensor3T& o) const { return SymTensor3T(Vec6T<Scalar>(c + o.c)); }
  SymTensor3T operator-(const SymTensor3T& o) const { return SymTensor3T(Vec6T<Scalar>(c - o.c)); }
  SymTensor3T operator-() const { return SymTensor3T(Vec6T<Scalar>(-c)); }
  SymTensor3T& operator+=(const SymTensor3T& o) { c += o.c; return *this; }
  SymTensor3T& operator-=(const SymTensor3T& o) { c -= o.c; return *this; }
  SymTensor3T& operator*=(Scalar a) { c *= a; return *this; }
  friend SymTensor3T operator*(Scalar a, const SymTensor3T& t) { return SymTensor3T(Vec6T<Scalar>(a * t.c)); }
  friend SymTensor3T operator*(const SymTensor3T& t, Scalar a) { return a * t; }
};

using SymTensor3 = SymTensor3T<Real>;

/// Rank-one symmetric tensor n (x) n.
template <typename Scalar>
SymTensor3T<Scalar> outer_sym(const Vec3T<Scalar>& n) {
  return SymTensor3T<Scalar>(n[0] * n[0], n[1] * n[1], n[2] * n[2],
                             n[0] * n[1], n[1] * n[2], n[0] * n[2]);
}

/// n . t . n for unit vector n.
template <typename Scalar>
Scalar normal_projection(const SymTensor3T<Scalar>& t, const Vec3T<Scalar>& n) {
  const Mat3T<Scalar> m = t.matrix();
  return n.dot(m * n);
}

template <typename Scalar>
struct InvariantsT {
  Scalar trace;
  Scalar dev_norm;
  SymTensor3T<Scalar> dev;
};
using Invariants = InvariantsT<Real>;

/// Trace, deviator and deviator norm in one pass.
template <typename Scalar>
InvariantsT<Scalar> invariants(const SymTensor3T<Scalar>& t) {
  InvariantsT<Scalar> r;
  r.trace = t.trace();
  r.dev = t.dev();
  r.dev_norm = r.dev.norm();
  return r;
}

/// Spectral decomposition with ramped tensile/compressive parts.
/// Eigenvalues sorted descending; for repeated eigenvalues any orthonormal
/// eigenbasis is acceptable (the split itself is basis independent).
template <typename Scalar>
struct SpectralSplitT {
  Vec3T<Scalar> eigenvalues;
  std::array<SymTensor3T<Scalar>, 3> projectors;
  SymTensor3T<Scalar> positive;
  SymTensor3T<Scalar> negative;
};
using SpectralSplit = SpectralSplitT<Real>;

/// Energies, stresses and tangents of the tensile/compressive split
///   psi0_pm = lambda/2 <tr eps>_pm^2 + G eps_pm : eps_pm.
/// Fourth-order tangents are returned as 6x6 matrices acting on Mandel
/// 6-vectors.
template <typename Scalar>
struct SplitEnergyT {
  Scalar psi_plus;
  Scalar psi_minus;
  SymTensor3T<Scalar> sigma_plus;
  SymTensor3T<Scalar> sigma_minus;
  Mat6T<Scalar> tangent_plus;
  Mat6T<Scalar> tangent_minus;
};
using SplitEnergy = SplitEnergyT<Real>;

SpectralSplit spectral_split(const SymTensor3& eps);
SplitEnergy split_energy_and_stress(const SymTensor3& eps_e, Real lambda, Real G);

namespace detail {
// Threshold below which two eigenvalues count as coincident and the
// difference quotient in the spectral tangent switches to its limit.
inline constexpr Real kEigenCoincidenceTol = 1e-12;
}  // namespace detail

}  // namespace porofrac
