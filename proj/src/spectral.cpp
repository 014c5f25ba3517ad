#include "bosonet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

namespace bosonet {

namespace {

// Flip v so that its first component above `eps` (relative to max) is positive.
void fix_sign(Eigen::Ref<RealVector> v) {
  const double big = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-8 * big) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

// Same for complex vectors: rotate the phase so the first significant
// component is real and positive.
void fix_phase(Eigen::Ref<ComplexVector> v) {
  const double big = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-8 * big) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

// Orthonormal basis of span(vs) built from projected unit vectors e_0, e_1, ...
RealMatrix canonical_basis(const RealMatrix& vs) {
  const Eigen::Index n = vs.rows();
  const Eigen::Index k = vs.cols();
  const RealMatrix proj = vs * vs.transpose();
  RealMatrix out(n, k);
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < n && found < k; ++i) {
    RealVector v = proj.col(i);
    for (Eigen::Index j = 0; j < found; ++j) v -= out.col(j).dot(v) * out.col(j);
    for (Eigen::Index j = 0; j < found; ++j) v -= out.col(j).dot(v) * out.col(j);
    const double norm = v.norm();
    if (norm > 1e-6) out.col(found++) = v / norm;
  }
  // Only reachable if the projector lost rank numerically.
  if (found < k) return vs;
  return out;
}

bool complex_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

NormalModes diagonalize_h(const RealMatrix& h, const SpectralTolerances& tol) {
  const Eigen::Index n = h.rows();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  RealVector w = es.eigenvalues();
  RealMatrix v = es.eigenvectors();

  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && w(stop) - w(stop - 1) < tol.degeneracy * scale) ++stop;
    const Eigen::Index k = stop - start;
    if (k > 1) {
      v.middleCols(start, k) = canonical_basis(v.middleCols(start, k));
      w.segment(start, k).setConstant(w.segment(start, k).mean());
    } else {
      fix_sign(v.col(start));
    }
    start = stop;
  }
  return {v.transpose(), w};
}

DissipativeMatrix build_hd(const RealMatrix& h, const RealMatrix& gamma,
                           const SpectralTolerances& tol) {
  if (h.rows() != gamma.rows() || h.cols() != gamma.cols() || h.rows() != h.cols())
    throw ValidationError("gamma: damping matrix must match the coupling matrix size");
  const Eigen::Index n = h.rows();
  DissipativeMatrix out;
  out.hd = gamma.cast<cplx>() * 0.5 + kI * h.cast<cplx>();

  ComplexVector values;
  ComplexMatrix vectors;
  Eigen::ComplexSchur<ComplexMatrix> schur(out.hd);
  if (schur.info() != Eigen::Success) throw NumericalError("complex Schur decomposition failed");
  const ComplexMatrix& t = schur.matrixT();
  const double off = t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
  const double hd_norm = std::max(1.0, out.hd.norm());
  if (off <= tol.normal_residual * hd_norm) {
    out.normal = true;
    values = t.diagonal();
    vectors = schur.matrixU();
  } else {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(out.hd);
    if (es.info() != Eigen::Success) throw NumericalError("non-Hermitian eigensolver failed");
    values = es.eigenvalues();
    vectors = es.eigenvectors();
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return complex_less(values(a), values(b)); });
  out.eigenvalues.resize(n);
  out.d.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = values(order[static_cast<std::size_t>(k)]);
    out.d.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
    out.d.col(k).normalize();
    fix_phase(out.d.col(k));
  }

  if (out.normal) {
    out.d_inv = out.d.adjoint();
    out.condition = 1.0;
  } else {
    Eigen::JacobiSVD<ComplexMatrix> svd(out.d);
    const auto& s = svd.singularValues();
    const double smin = s(n - 1);
    out.condition = smin > 0 ? s(0) / smin : std::numeric_limits<double>::infinity();
    if (out.condition > tol.max_condition) {
      out.use_expm = true;
      out.d_inv = ComplexMatrix::Zero(n, n);
    } else {
      out.d_inv = out.d.fullPivLu().inverse();
    }
  }

  const double resid = (out.hd * out.d - out.d * out.eigenvalues.asDiagonal()).norm();
  if (!out.use_expm && !(resid <= 1e-8 * hd_norm)) out.use_expm = true;
  return out;
}

ComplexMatrix expm(const ComplexMatrix& a) { return a.exp(); }

Propagator propagator(const DissipativeMatrix& dm, double t) {
  if (t == 0.0) return {t, ComplexMatrix::Identity(dm.hd.rows(), dm.hd.cols())};
  if (dm.use_expm) return {t, expm(-t * dm.hd)};
  const ComplexVector decay = (-t * dm.eigenvalues).array().exp();
  return {t, dm.d * decay.asDiagonal() * dm.d_inv};
}

Propagator propagator_flipped(const DissipativeMatrix& dm, double t) {
  if (dm.use_expm) return {t, expm(t * dm.hd)};
  const ComplexVector growth = (t * dm.eigenvalues).array().exp();
  return {t, dm.d * growth.asDiagonal() * dm.d_inv};
}

}  // namespace bosonet
