#include "porofrac/tensors.hpp"

#include <algorithm>

namespace porofrac {

namespace {

struct EigenSystem {
  Vec3 values;
  std::array<Vec3, 3> vectors;
};

// In-plane closed-form eigendecomposition. Plane strain makes the z axis an
// eigenvector, so only the 2x2 block (xx, yy, xy) needs work. States with
// out-of-plane shear fall back to Eigen's self-adjoint solver.
EigenSystem decompose(const SymTensor3& eps) {
  EigenSystem s;
  const Real scale = eps.c.lpNorm<Eigen::Infinity>();
  const Real tol = detail::kEigenCoincidenceTol * std::max(Real(1), scale);

  Vec3 lam;
  std::array<Vec3, 3> vec;
  if (std::abs(eps.yz()) > tol || std::abs(eps.xz()) > tol) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(eps.matrix());
    for (int i = 0; i < 3; ++i) {
      lam[i] = es.eigenvalues()[i];
      vec[i] = es.eigenvectors().col(i);
    }
  } else {
    const Real a = eps.xx(), b = eps.yy(), e = eps.xy();
    const Real mid = Real(0.5) * (a + b);
    const Real rad = std::hypot(Real(0.5) * (a - b), e);
    lam[0] = mid + rad;
    lam[1] = mid - rad;
    if (rad <= tol) {
      vec[0] = Vec3::UnitX();
      vec[1] = Vec3::UnitY();
    } else {
      const Real theta = Real(0.5) * std::atan2(Real(2) * e, a - b);
      vec[0] = Vec3(std::cos(theta), std::sin(theta), 0);
      vec[1] = Vec3(-vec[0][1], vec[0][0], 0);
    }
    lam[2] = eps.zz();
    vec[2] = Vec3::UnitZ();
  }

  std::array<int, 3> idx = {0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return lam[i] > lam[j]; });
  for (int i = 0; i < 3; ++i) {
    s.values[i] = lam[idx[i]];
    s.vectors[i] = vec[idx[i]];
  }
  return s;
}

}  // namespace

SpectralSplit spectral_split(const SymTensor3& eps) {
  if (!eps.all_finite()) throw NumericalError("spectral_split: non-finite input tensor");
  const EigenSystem es = decompose(eps);
  SpectralSplit s;
  s.eigenvalues = es.values;
  s.positive = SymTensor3::Zero();
  s.negative = SymTensor3::Zero();
  for (int i = 0; i < 3; ++i) {
    s.projectors[i] = outer_sym<Real>(es.vectors[i]);
    s.positive += ramp_pos(s.eigenvalues[i]) * s.projectors[i];
    s.negative += ramp_neg(s.eigenvalues[i]) * s.projectors[i];
  }
  return s;
}

SplitEnergy split_energy_and_stress(const SymTensor3& eps_e, Real lambda, Real G) {
  if (G < 0 || lambda < -Real(2) / Real(3) * G)
    throw ConfigError("split_energy_and_stress: Lame constants must satisfy G >= 0, lambda >= -2/3 G");
  if (!eps_e.all_finite()) throw NumericalError("split_energy_and_stress: non-finite strain");

  const EigenSystem es = decompose(eps_e);
  std::array<SymTensor3, 3> proj;
  for (int i = 0; i < 3; ++i) proj[i] = outer_sym<Real>(es.vectors[i]);

  const Real tr = eps_e.trace();
  const Real trp = ramp_pos(tr), trm = ramp_neg(tr);
  // <0>_+ assigns the kink at zero trace to the tensile branch.
  const Real hp = tr >= 0 ? Real(1) : Real(0);
  const Real hm = Real(1) - hp;

  SplitEnergy out;
  out.psi_plus = Real(0.5) * lambda * trp * trp;
  out.psi_minus = Real(0.5) * lambda * trm * trm;

  SymTensor3 eps_pos = SymTensor3::Zero(), eps_neg = SymTensor3::Zero();
  for (int i = 0; i < 3; ++i) {
    const Real lp = ramp_pos(es.values[i]);
    const Real lm = ramp_neg(es.values[i]);
    out.psi_plus += G * lp * lp;
    out.psi_minus += G * lm * lm;
    eps_pos += lp * proj[i];
    eps_neg += lm * proj[i];
  }

  const SymTensor3 id = SymTensor3::Identity();
  out.sigma_plus = lambda * trp * id + Real(2) * G * eps_pos;
  out.sigma_minus = lambda * trm * id + Real(2) * G * eps_neg;

  // Tangent of the ramped spectral map f(eps) = sum <lam_i>_pm P_i in the
  // orthonormal eigenbasis {n_i (x) n_i, (n_i (x) n_j + n_j (x) n_i)/sqrt 2}:
  // diagonal entries f'(lam_i), off-diagonal shear modes carry the difference
  // quotient (f_i - f_j)/(lam_i - lam_j), replaced by its limit
  // 0.5 (f'_i + f'_j) when eigenvalues coincide.
  const Real ctol = detail::kEigenCoincidenceTol * std::max(Real(1), eps_e.c.lpNorm<Eigen::Infinity>());
  const auto ramp_tangent = [&](bool plus) {
    Mat6 t = Mat6::Zero();
    const auto deriv = [&](Real l) {
      const Real h = l >= 0 ? Real(1) : Real(0);
      return plus ? h : Real(1) - h;
    };
    const auto val = [&](Real l) { return plus ? ramp_pos(l) : ramp_neg(l); };
    for (int i = 0; i < 3; ++i) {
      const Vec6 mi = proj[i].mandel();
      t += deriv(es.values[i]) * (mi * mi.transpose());
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const Real li = es.values[i], lj = es.values[j];
        const Real g = std::abs(li - lj) <= ctol
                           ? Real(0.5) * (deriv(li) + deriv(lj))
                           : (val(li) - val(lj)) / (li - lj);
        const Mat3 dyad = (es.vectors[i] * es.vectors[j].transpose() +
                           es.vectors[j] * es.vectors[i].transpose()) /
                          std::sqrt(Real(2));
        const Vec6 mij = SymTensor3::from_matrix(dyad).mandel();
        t += g * (mij * mij.transpose());
      }
    }
    return t;
  };

  const Vec6 idm = id.mandel();
  out.tangent_plus = lambda * hp * (idm * idm.transpose()) + Real(2) * G * ramp_tangent(true);
  out.tangent_minus = lambda * hm * (idm * idm.transpose()) + Real(2) * G * ramp_tangent(false);
  return out;
}

}  // namespace porofrac
