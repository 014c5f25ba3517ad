#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical routines.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace testing_support {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

// Taylor series with scaling and squaring.
inline CMat taylor_expm(const CMat& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.25) {
    scaled *= 0.5;
    ++squarings;
  }
  const CMat b = a / std::pow(2.0, squarings);
  CMat term = CMat::Identity(a.rows(), a.cols());
  CMat sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-20) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// det(M) by Gaussian elimination with partial pivoting.
inline cplx determinant(CMat m) {
  const auto n = m.rows();
  cplx det = 1.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(p, c))) p = r;
    if (std::abs(m(p, c)) == 0.0) return 0.0;
    if (p != c) {
      m.row(p).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) m.row(r) -= (m(r, c) / m(c, c)) * m.row(c);
  }
  return det;
}

// 2x2 propagator exp(-A t) via Cayley-Hamilton:
// exp(-A t) = e^{-mu t} [cosh(d t) I - sinh(d t)/d (A - mu I)], mu = tr/2,
// d^2 = mu^2 - det.
inline CMat expm_2x2(const CMat& a, double t) {
  const cplx mu = 0.5 * (a(0, 0) + a(1, 1));
  const cplx d = std::sqrt(mu * mu - (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)));
  const CMat shifted = a - mu * CMat::Identity(2, 2);
  const cplx sinhc = std::abs(d) < 1e-14 ? cplx(t) : std::sinh(d * t) / d;
  return std::exp(-mu * t) * (std::cosh(d * t) * CMat::Identity(2, 2) - sinhc * shifted);
}

// Symmetric matrix with a prescribed spectrum: Q diag(eigs) Q^T with a
// random orthogonal Q from Gram-Schmidt.
inline RMat synthesize_symmetric(const std::vector<double>& eigs, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(eigs.size());
  std::normal_distribution<double> g;
  RMat q(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) q(i, j) = g(rng);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    q.col(j).normalize();
  }
  RMat d = RMat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = eigs[static_cast<std::size_t>(i)];
  return q * d * q.transpose();
}

// Single-mode coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!).
inline Eigen::VectorXcd coherent_vector(cplx a, int levels) {
  Eigen::VectorXcd v(levels);
  cplx c = std::exp(-0.5 * std::norm(a));
  for (int n = 0; n < levels; ++n) {
    v(n) = c;
    c *= a / std::sqrt(static_cast<double>(n + 1));
  }
  return v;
}

// Trace norm / 2 through the eigenvalues of a Hermitian difference.
inline double trace_distance(const CMat& a, const CMat& b) {
  const CMat d = a - b;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace testing_support
