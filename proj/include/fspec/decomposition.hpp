#pragma once

// Cramér–Karhunen–Loève decomposition and harmonic functional PCA, built from
// per-atom eigen-systems of the spectral operator measure.

#include <string>
#include <vector>

#include "fspec/cagos.hpp"
#include "fspec/povm.hpp"
#include "fspec/transfer.hpp"

namespace fspec {

struct CklAtom {
  double freq = 0.0;
  double mass = 0.0;       // w_j = Tr ν_j
  RealVector sigmas;       // eigenvalues of ν_j, non-increasing, zero past rank
  Operator vectors;        // φ_n as columns; zero columns past rank
  Eigen::Index rank = 0;
};

class CklSystem {
 public:
  CklSystem(AtomicTracePovm source, std::vector<CklAtom> atoms);

  [[nodiscard]] const AtomicTracePovm& source() const { return source_; }
  [[nodiscard]] const std::vector<CklAtom>& atoms() const { return atoms_; }
  [[nodiscard]] const CklAtom& atom(std::size_t j) const { return atoms_[j]; }
  [[nodiscard]] Eigen::Index dim() const { return source_.dim(); }
  [[nodiscard]] std::size_t size() const { return atoms_.size(); }

  /// σ_n of the density with respect to ‖ν‖₁ (sums to one on atoms of positive mass).
  [[nodiscard]] RealVector density_sigmas(std::size_t j) const;
  /// φ_n ⊗ φ_n at every atom.
  [[nodiscard]] TransferFunction component_transfer(Eigen::Index n) const;
  /// φ_nᴴ at every atom, a 1 × dim transfer.
  [[nodiscard]] TransferFunction scalar_transfer(Eigen::Index n) const;
  /// Σ_n φ_n ⊗ φ_n, the per-atom range projector.
  [[nodiscard]] TransferFunction completeness_transfer() const;

 private:
  AtomicTracePovm source_;
  std::vector<CklAtom> atoms_;
};

/// Clamped to [1, dim] on use.
class RankFunction {
 public:
  explicit RankFunction(std::vector<int> ranks);
  static RankFunction constant(std::size_t atoms, int rank);

  [[nodiscard]] std::size_t size() const { return ranks_.size(); }
  [[nodiscard]] int raw(std::size_t j) const { return ranks_[j]; }
  [[nodiscard]] Eigen::Index at(std::size_t j, Eigen::Index dim) const;

 private:
  std::vector<int> ranks_;
};

[[nodiscard]] CklSystem ckl_decompose(const AtomicTracePovm& nu);

/// ‖Σ_n φ_n ⊗ φ_n − I‖_ν
[[nodiscard]] double ckl_completeness_residual(const CklSystem& sys);

/// F_{φ_n ⊗ φ_n}(W)
[[nodiscard]] CagosRealization ckl_component(const CagosRealization& w, const CklSystem& sys, Eigen::Index n);
/// F_{φ_nᴴ}(W), a scalar measure.
[[nodiscard]] CagosRealization ckl_scalar_component(const CagosRealization& w, const CklSystem& sys, Eigen::Index n);

/// Θ_j = Σ_{n < q_j ∧ N} φ_n ⊗ φ_n
[[nodiscard]] TransferFunction hfpca_projector(const CklSystem& sys, const RankFunction& q);

/// Σ_j ‖(I − Θ_j) ν_j^{1/2}‖₂², the mean-square reconstruction error E‖X_t − [F_Θ X]_t‖².
[[nodiscard]] double hfpca_error(const AtomicTracePovm& nu, const TransferFunction& theta);

/// Σ_j Σ_{n ≥ q_j ∧ N} σ_n(ν_j)
[[nodiscard]] double hfpca_optimal_error(const CklSystem& sys, const RankFunction& q);

/// Atoms where a tied eigenvalue pair straddles the rank cut.
[[nodiscard]] std::vector<std::string> hfpca_tie_warnings(const CklSystem& sys, const RankFunction& q,
                                                          double rel_tol = 1e-10);

}  // namespace fspec
