#pragma once

// Herglotz/Bochner correspondence on ℤ: autocovariances of atomic spectral
// measures, exact inversion on the uniform grid, and finite positive-type checks.

#include <span>
#include <vector>

#include "fspec/povm.hpp"
#include "fspec/process.hpp"

namespace fspec {

/// Γ(h) for |h| ≤ max_lag. Only h ≥ 0 is stored; Γ(−h) = Γ(h)ᴴ.
class AutocovarianceSequence {
 public:
  AutocovarianceSequence(Eigen::Index dim, std::vector<Operator> nonnegative_lags);

  [[nodiscard]] Eigen::Index dim() const { return dim_; }
  [[nodiscard]] int max_lag() const { return static_cast<int>(values_.size()) - 1; }
  [[nodiscard]] Operator at(int h) const;
  [[nodiscard]] const std::vector<Operator>& values() const { return values_; }

 private:
  Eigen::Index dim_;
  std::vector<Operator> values_;
};

/// Γ(h) = Σ_j e^{iλ_j h} ν_j
[[nodiscard]] AutocovarianceSequence autocov_from_povm(const AtomicTracePovm& nu, int max_lag);

/// λ_k = −π + 2πk/M, canonicalized (k = 0 lands on π).
[[nodiscard]] std::vector<double> fourier_grid(int period);

/// Recovers the atoms on the M-point grid: ν_k = M⁻¹ Σ_{h<M} Γ(h) e^{−iλ_k h}.
/// Lags past max_lag are read through Γ(h) = (−1)^M Γ(h − M), which holds
/// for measures supported on the grid. Throws not-positive-type
/// when a recovered atom fails the 1e-8 positivity check.
[[nodiscard]] AtomicTracePovm povm_from_autocov_grid(const AutocovarianceSequence& gamma, int period);

/// Block matrix [Γ(t_i − t_j)]_{i,j}.
[[nodiscard]] Operator autocov_block_matrix(const AutocovarianceSequence& gamma, std::span<const int> times);

[[nodiscard]] bool positive_type_check(const AutocovarianceSequence& gamma, std::span<const int> times,
                                       double tol = 1e-10);
/// Σ_{i,j} ⟨Γ(t_i − t_j) x_j, x_i⟩ ≥ 0 for the given vectors.
[[nodiscard]] bool positive_type_check(const AutocovarianceSequence& gamma, std::span<const int> times,
                                       std::span<const Vector> vectors, double tol = 1e-10);

/// Σ_{i,j} a_i ā_j Γ(t_i − t_j) ⪰ 0
[[nodiscard]] bool hermitian_nnd_check(const AutocovarianceSequence& gamma, std::span<const int> times,
                                       std::span<const Complex> coeffs, double tol = 1e-10);

struct EmpiricalAutocov {
  AutocovarianceSequence gamma;
  double standard_error_scale = 0.0;  // R^{-1/2}
};

/// Ensemble and time average of X_{t+h} X_tᴴ over the valid t.
[[nodiscard]] EmpiricalAutocov empirical_autocov(const ProcessSample& x, int max_lag);

}  // namespace fspec
