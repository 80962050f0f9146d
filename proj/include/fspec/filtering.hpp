#pragma once

// Lag-invariant linear filters given by operator-valued transfer functions.

#include <map>

#include "fspec/cagos.hpp"
#include "fspec/povm.hpp"
#include "fspec/process.hpp"
#include "fspec/transfer.hpp"

namespace fspec {

/// Finitely supported convolution kernel s ↦ F_s.
struct FirFilter {
  std::map<int, Operator> taps;

  [[nodiscard]] Eigen::Index out_dim() const;
  [[nodiscard]] Eigen::Index in_dim() const;
};

/// Φ is in the modular spectral domain of ν.
[[nodiscard]] IntegrabilityReport check_filterable(const TransferFunction& phi, const AtomicTracePovm& nu);

/// Atoms Φ_j Z_j with intensity ΦνΦᴴ.
[[nodiscard]] CagosRealization apply_filter(const TransferFunction& phi, const CagosRealization& w);

/// Atoms (Φ_j ν_j^{1/2})(Φ_j ν_j^{1/2})ᴴ.
[[nodiscard]] AtomicTracePovm pushforward_povm(const TransferFunction& phi, const AtomicTracePovm& nu);

/// Ψ_j Φ_j. A partial Ψ_j restricts the domain to Φ_j⁻¹(Im D_j^Ψ).
[[nodiscard]] TransferFunction compose_transfer(const TransferFunction& psi, const TransferFunction& phi,
                                                double rank_tol = 1e-10);

enum class Injectivity {
  on_support,  // Φ_j injective on Im(ν_j^{1/2})
  strict,      // Φ_j injective on its whole domain
};

/// Per-atom inverse (Φ_j restricted to B_j)⁻¹ with domain Im(Φ_j B_j), B_j the
/// support of ν_j (or the domain of Φ_j when strict); zero on null atoms.
[[nodiscard]] TransferFunction invert_transfer(const TransferFunction& phi, const AtomicTracePovm& nu,
                                               double rank_tol = 1e-10,
                                               Injectivity mode = Injectivity::on_support);

/// Φ̂(λ_j) = Σ_s F_s e^{−iλ_j s}
[[nodiscard]] TransferFunction fir_to_transfer(const FirFilter& fir, const std::vector<double>& freqs);

/// Circular convolution Y_t = Σ_s F_s X_{(t−s) mod M}.
[[nodiscard]] ProcessSample apply_fir_time(const FirFilter& fir, const ProcessSample& x);

/// λ_j ↦ e^{iλ_j h} Φ_j, domains unchanged.
[[nodiscard]] TransferFunction modulate_transfer(const TransferFunction& phi, int h);

}  // namespace fspec
