#pragma once

// Atomic trace-class positive operator valued measures on (−π, π].

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fspec/operator.hpp"
#include "fspec/transfer.hpp"

namespace fspec {

/// Eigenvalues at or below this fraction of the largest are dropped from ν_j^{1/2}.
inline constexpr double kSupportTolerance = 1e-12;

struct PovmAtom {
  double freq = 0.0;
  Operator weight;
};

/// Finite atomic p.o.v.m. with positive semi-definite weights. Frequencies are
/// canonicalized to (−π, π], sorted, and atoms closer than
/// kFrequencyTolerance are merged.
class AtomicTracePovm {
 public:
  AtomicTracePovm(Eigen::Index dim, std::vector<PovmAtom> atoms);

  [[nodiscard]] Eigen::Index dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return atoms_.size(); }
  [[nodiscard]] double freq(std::size_t j) const { return atoms_[j].freq; }
  [[nodiscard]] const Operator& weight(std::size_t j) const { return atoms_[j].weight; }
  /// ν_j^{1/2}
  [[nodiscard]] const Operator& sqrt_weight(std::size_t j) const { return roots_[j]; }
  /// Orthonormal basis of Im(ν_j), numerical rank.
  [[nodiscard]] const Operator& support_basis(std::size_t j) const { return supports_[j]; }
  /// ‖ν_j‖₁ = Tr ν_j
  [[nodiscard]] double mass(std::size_t j) const { return masses_[j]; }
  /// Atoms carrying no variation mass are excluded from a.e. statements.
  [[nodiscard]] bool is_null(std::size_t j) const;
  [[nodiscard]] std::vector<double> freqs() const;
  [[nodiscard]] const std::vector<PovmAtom>& atoms() const { return atoms_; }
  /// ν(𝕋)
  [[nodiscard]] Operator total() const;
  [[nodiscard]] double total_mass() const { return total_mass_; }

 private:
  Eigen::Index dim_ = 0;
  std::vector<PovmAtom> atoms_;
  std::vector<Operator> roots_;
  std::vector<Operator> supports_;
  std::vector<double> masses_;
  double total_mass_ = 0.0;
};

struct VariationMeasure {
  std::vector<double> mass;
  std::vector<std::size_t> null_atoms;
};

/// Radon–Nikodym density g = dν/dμ at the atoms: ν_j = w_j g_j.
struct PovmDensity {
  std::vector<double> base_weights;
  std::vector<Operator> densities;
};

[[nodiscard]] VariationMeasure variation_measure(const AtomicTracePovm& nu);

/// Defaults to μ = ‖ν‖₁, for which Tr g_j = 1 on every atom of positive mass.
[[nodiscard]] PovmDensity radon_nikodym(const AtomicTracePovm& nu,
                                        std::optional<std::span<const double>> mu = std::nullopt);

/// ∫ f dν = Σ_j f_j ν_j
[[nodiscard]] Operator scalar_integral(const AtomicTracePovm& nu, std::span<const Complex> f);

struct AtomCheck {
  std::size_t atom = 0;
  double freq = 0.0;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = true;
};

struct IntegrabilityReport {
  bool ok = true;
  std::vector<AtomCheck> atoms;

  [[nodiscard]] std::optional<AtomCheck> first_failure() const;
  [[nodiscard]] std::string describe() const;
};

/// Square ν-integrability of a transfer function. At finite dimension only
/// the domain condition Im(ν_j^{1/2}) ⊆ 𝒟(Φ_j) can fail.
[[nodiscard]] IntegrabilityReport square_integrability_check(const TransferFunction& phi, const AtomicTracePovm& nu,
                                                             double tol = 1e-10);

/// ∫ Φ dν Ψᴴ through the default density.
[[nodiscard]] Operator operator_integral(const TransferFunction& phi, const AtomicTracePovm& nu,
                                         const TransferFunction& psi);
/// Same integral through the density with respect to an explicit dominating measure.
[[nodiscard]] Operator operator_integral(const TransferFunction& phi, const AtomicTracePovm& nu,
                                         const TransferFunction& psi, std::span<const double> mu);

/// ⟨Φ, Ψ⟩_ν
[[nodiscard]] Operator gramian_inner(const TransferFunction& phi, const TransferFunction& psi,
                                     const AtomicTracePovm& nu);
/// ‖Φ‖_ν = (Tr ⟨Φ, Φ⟩_ν)^{1/2}
[[nodiscard]] double gramian_norm(const TransferFunction& phi, const AtomicTracePovm& nu);

/// Per-atom eigen-systems of the density g_j.
[[nodiscard]] std::vector<HermitianEigenSystem> eigendecompose(
    const AtomicTracePovm& nu, std::optional<std::span<const double>> mu = std::nullopt);

/// Throws alignment/shape errors unless Φ is indexed by the atoms of ν.
void require_aligned(const TransferFunction& phi, const AtomicTracePovm& nu, const char* op);

}  // namespace fspec
