#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "mdr/core/types.hpp"

namespace mdr {

/// Kronecker product; `a` indexes the slow (leftmost) factor.
inline Matrix tensor(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return {a.layout().concat(b.layout()), tensor(a.matrix(), b.matrix())};
}

/// Spectral decomposition with eigenvalues within the PSD tolerance of zero
/// clipped to exactly zero. Negative eigenvalues beyond tolerance throw.
struct Spectrum {
  Eigen::VectorXd values;
  Matrix vectors;

  [[nodiscard]] double max_value() const { return values.size() ? values.maxCoeff() : 0.0; }
};

inline Spectrum psd_spectrum(const Matrix& h) {
  if (!detail::is_hermitian(h)) throw Error("expected a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) * 0.5);
  Spectrum s{es.eigenvalues(), es.eigenvectors()};
  const double scale = std::max(detail::max_abs_eigenvalue(s.values), 1e-300);
  const double cut = tol::psd * scale;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values(i) < -tol::psd * std::max(scale, 1.0))
      throw Error("matrix is not positive semidefinite (eigenvalue " + std::to_string(s.values(i)) + ")");
    if (s.values(i) <= cut) s.values(i) = 0.0;
  }
  return s;
}

inline Matrix from_spectrum(const Matrix& vectors, const Eigen::VectorXd& values) {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

/// H^p on the support of H: kernel eigenvalues map to 0 for every p.
inline Matrix hermitian_power(const Matrix& h, double p) {
  auto s = psd_spectrum(h);
  for (Eigen::Index i = 0; i < s.values.size(); ++i) s.values(i) = s.values(i) > 0.0 ? std::pow(s.values(i), p) : 0.0;
  return from_spectrum(s.vectors, s.values);
}

inline Matrix sqrtm_psd(const Matrix& h) { return hermitian_power(h, 0.5); }

/// Largest singular value.
inline double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

inline double trace_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Projector onto a unit vector.
inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

inline Vector basis_vector(Eigen::Index dim, Eigen::Index k) {
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return v;
}

}  // namespace mdr
