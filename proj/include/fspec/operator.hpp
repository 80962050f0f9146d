#pragma once

// Dense complex operator algebra between finite-dimensional Hilbert spaces.
//
// Everything here is templated on the real scalar type and accepts any Eigen
// expression; the `Operator` / `Vector` aliases fix the scalar to double for
// the rest of the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "fspec/error.hpp"

namespace fspec {

template <typename Real>
using OperatorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Operator = OperatorT<double>;
using Vector = VectorT<double>;
using RealVector = RealVectorT<double>;
using Complex = std::complex<double>;

/// Absolute floor applied to every relative tolerance.
inline constexpr double kAbsoluteFloor = 1e-14;

template <typename Real>
[[nodiscard]] Real scaled_tolerance(Real tol, Real scale) {
  return std::max(tol * scale, static_cast<Real>(kAbsoluteFloor));
}

enum class Schatten { one, two, infinity };

/// Eigen-decomposition of a Hermitian operator, eigenvalues non-increasing.
template <typename Real>
struct HermitianEigenSystemT {
  RealVectorT<Real> eigenvalues;
  OperatorT<Real> eigenvectors;  // columns, orthonormal

  [[nodiscard]] Eigen::Index dim() const { return eigenvalues.size(); }

  [[nodiscard]] OperatorT<Real> reconstruct() const {
    return eigenvectors * eigenvalues.template cast<std::complex<Real>>().asDiagonal() *
           eigenvectors.adjoint();
  }
};

using HermitianEigenSystem = HermitianEigenSystemT<double>;

template <typename Real>
struct PseudoInverseT {
  OperatorT<Real> inverse;           // P⁻
  OperatorT<Real> range_projector;   // P P⁻, projector onto Im(P)
  OperatorT<Real> domain_projector;  // P⁻ P, projector onto the row space
  Eigen::Index rank = 0;
};

using PseudoInverse = PseudoInverseT<double>;

template <typename Derived>
[[nodiscard]] auto adjoint(const Eigen::MatrixBase<Derived>& p) {
  return p.adjoint().eval();
}

/// x ⊗ y = x yᴴ, so that (x ⊗ y) z = ⟨z, y⟩ x.
template <typename DerivedX, typename DerivedY>
[[nodiscard]] auto outer(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  return (x * y.adjoint()).eval();
}

template <typename Derived>
[[nodiscard]] auto singular_values(const Eigen::MatrixBase<Derived>& p) {
  using Real = typename Derived::RealScalar;
  if (p.size() == 0) return RealVectorT<Real>();
  OperatorT<Real> a = p;
  Eigen::JacobiSVD<OperatorT<Real>> svd(a);
  return RealVectorT<Real>(svd.singularValues());
}

template <typename Derived>
[[nodiscard]] typename Derived::RealScalar schatten_norm(const Eigen::MatrixBase<Derived>& p, Schatten which) {
  using Real = typename Derived::RealScalar;
  switch (which) {
    case Schatten::two:
      return p.norm();
    case Schatten::one:
      return singular_values(p).sum();
    case Schatten::infinity: {
      const auto s = singular_values(p);
      return s.size() == 0 ? Real(0) : s(0);
    }
  }
  return Real(0);
}

template <typename Derived>
[[nodiscard]] typename Derived::RealScalar operator_norm(const Eigen::MatrixBase<Derived>& p) {
  return schatten_norm(p, Schatten::infinity);
}

template <typename Derived>
[[nodiscard]] typename Derived::RealScalar hermitian_defect(const Eigen::MatrixBase<Derived>& p) {
  return operator_norm(p - p.adjoint());
}

template <typename Derived>
[[nodiscard]] auto hermitian_part(const Eigen::MatrixBase<Derived>& p) {
  using Real = typename Derived::RealScalar;
  OperatorT<Real> h = (p + p.adjoint()) * Real(0.5);
  return h;
}

namespace detail {

template <typename Real>
void require_square(const OperatorT<Real>& p, const char* op) {
  if (p.rows() != p.cols()) {
    throw Error(ErrorKind::dimension, std::string(op) + ": operator is " + std::to_string(p.rows()) + "x" +
                                          std::to_string(p.cols()) + ", expected square");
  }
}

template <typename Real>
[[nodiscard]] Real min_hermitian_eigenvalue(const OperatorT<Real>& p) {
  if (p.rows() == 0) return Real(0);
  Eigen::SelfAdjointEigenSolver<OperatorT<Real>> solver(hermitian_part(p), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

// Largest-modulus entry made real positive; first entry within 1e-12 of the
// maximum wins.
template <typename Real>
void normalize_phase(Eigen::Ref<VectorT<Real>> v) {
  if (v.size() == 0) return;
  const Real max_mod = v.cwiseAbs().maxCoeff();
  if (max_mod == Real(0)) return;
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= max_mod * (Real(1) - Real(1e-12))) {
      pivot = i;
      break;
    }
  }
  const std::complex<Real> phase = std::conj(v(pivot)) / std::abs(v(pivot));
  v *= phase;
  v(pivot) = std::complex<Real>(std::abs(v(pivot)), Real(0));
}

}  // namespace detail

/// Positivity: ‖P−Pᴴ‖ ≤ tol·max(‖P‖, scale) and λ_min ≥ −tol·scale, where scale defaults
/// to the trace norm of P.
template <typename Derived>
[[nodiscard]] bool psd_check_scaled(const Eigen::MatrixBase<Derived>& p, typename Derived::RealScalar tol,
                                    typename Derived::RealScalar scale) {
  using Real = typename Derived::RealScalar;
  OperatorT<Real> a = p;
  detail::require_square(a, "psd_check");
  if (a.size() == 0) return true;
  if (!a.allFinite()) return false;
  const Real norm = operator_norm(a);
  if (hermitian_defect(a) > scaled_tolerance(tol, std::max(norm, scale))) return false;
  return detail::min_hermitian_eigenvalue(a) >= -scaled_tolerance(tol, scale);
}

template <typename Derived>
[[nodiscard]] bool psd_check(const Eigen::MatrixBase<Derived>& p, typename Derived::RealScalar tol) {
  return psd_check_scaled(p, tol, schatten_norm(p, Schatten::one));
}

/// Eigen-decomposition with non-increasing eigenvalues and the phase
/// convention above. Ties keep the solver's order.
template <typename Derived>
[[nodiscard]] auto hermitian_eig(const Eigen::MatrixBase<Derived>& p) {
  using Real = typename Derived::RealScalar;
  OperatorT<Real> a = p;
  detail::require_square(a, "hermitian_eig");
  const Eigen::Index n = a.rows();
  HermitianEigenSystemT<Real> out;
  if (n == 0) return out;
  const Real defect = hermitian_defect(a);
  if (defect > scaled_tolerance(Real(1e-10), operator_norm(a))) {
    throw Error(ErrorKind::symmetry, "hermitian_eig: ‖P − Pᴴ‖ = " + std::to_string(defect));
  }
  Eigen::SelfAdjointEigenSolver<OperatorT<Real>> solver(hermitian_part(a));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& values = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return values(i) > values(j); });
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = values(src);
    out.eigenvectors.col(k) = solver.eigenvectors().col(src);
    detail::normalize_phase<Real>(out.eigenvectors.col(k));
  }
  return out;
}

/// Positive square root. Eigenvalues in [−tol·‖P‖₁, 0) are clamped to zero.
template <typename Derived>
[[nodiscard]] auto psd_sqrt(const Eigen::MatrixBase<Derived>& p) {
  using Real = typename Derived::RealScalar;
  OperatorT<Real> a = p;
  detail::require_square(a, "psd_sqrt");
  if (!psd_check(a, Real(1e-10))) {
    throw Error(ErrorKind::positivity, "psd_sqrt: operator is not positive semi-definite");
  }
  if (a.size() == 0) return a;
  auto eig = hermitian_eig(a);
  RealVectorT<Real> roots = eig.eigenvalues.cwiseMax(Real(0)).cwiseSqrt();
  OperatorT<Real> root = eig.eigenvectors * roots.template cast<std::complex<Real>>().asDiagonal() *
                         eig.eigenvectors.adjoint();
  return OperatorT<Real>(hermitian_part(root));
}

/// Moore–Penrose inverse; singular values ≤ rank_tol·σ_max are treated as zero.
template <typename Derived>
[[nodiscard]] auto pinv_on_range(const Eigen::MatrixBase<Derived>& p, typename Derived::RealScalar rank_tol) {
  using Real = typename Derived::RealScalar;
  using Op = OperatorT<Real>;
  Op a = p;
  PseudoInverseT<Real> out;
  out.inverse = Op::Zero(a.cols(), a.rows());
  out.range_projector = Op::Zero(a.rows(), a.rows());
  out.domain_projector = Op::Zero(a.cols(), a.cols());
  if (a.size() == 0) return out;
  Eigen::JacobiSVD<Op> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == Real(0)) return out;
  const Real cut = std::max(rank_tol * s(0), std::numeric_limits<Real>::min());
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  const Op u = svd.matrixU().leftCols(r);
  const Op v = svd.matrixV().leftCols(r);
  const RealVectorT<Real> inv_s = s.head(r).cwiseInverse();
  out.inverse = v * inv_s.template cast<std::complex<Real>>().asDiagonal() * u.adjoint();
  out.range_projector = u * u.adjoint();
  out.domain_projector = v * v.adjoint();
  out.rank = r;
  return out;
}

/// Orthonormal basis of Im(P), rank cut at rank_tol·σ_max.
template <typename Derived>
[[nodiscard]] auto range_basis(const Eigen::MatrixBase<Derived>& p, typename Derived::RealScalar rank_tol) {
  using Real = typename Derived::RealScalar;
  using Op = OperatorT<Real>;
  Op a = p;
  if (a.size() == 0) return Op(a.rows(), 0);
  Eigen::JacobiSVD<Op> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == Real(0)) return Op(a.rows(), 0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rank_tol * s(0)) ++r;
  return Op(svd.matrixU().leftCols(r));
}

/// Orthonormal basis of ker(P), rank cut at rank_tol·σ_max.
template <typename Derived>
[[nodiscard]] auto null_basis(const Eigen::MatrixBase<Derived>& p, typename Derived::RealScalar rank_tol) {
  using Real = typename Derived::RealScalar;
  using Op = OperatorT<Real>;
  Op a = p;
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Op(Op::Identity(n, n));
  Eigen::JacobiSVD<Op> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  if (s.size() > 0 && s(0) > Real(0)) {
    while (r < s.size() && s(r) > rank_tol * s(0)) ++r;
  }
  return Op(svd.matrixV().rightCols(n - r));
}

template <typename Derived>
[[nodiscard]] auto projector_onto(const Eigen::MatrixBase<Derived>& basis) {
  using Real = typename Derived::RealScalar;
  OperatorT<Real> b = basis;
  return OperatorT<Real>(b * b.adjoint());
}

/// Hermitian and idempotent within tol·max(1, ‖D‖).
template <typename Derived>
[[nodiscard]] bool is_orthogonal_projector(const Eigen::MatrixBase<Derived>& d, typename Derived::RealScalar tol) {
  using Real = typename Derived::RealScalar;
  OperatorT<Real> a = d;
  if (a.rows() != a.cols()) return false;
  const Real scale = std::max(Real(1), operator_norm(a));
  return hermitian_defect(a) <= tol * scale && operator_norm(OperatorT<Real>(a * a - a)) <= tol * scale;
}

}  // namespace fspec
