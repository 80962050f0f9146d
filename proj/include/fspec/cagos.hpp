#pragma once

// Gaussian random c.a.g.o.s. measures on an atomic intensity: sampling, the
// stochastic integral, process synthesis and the orthogonal increment path.

#include <cstdint>
#include <span>
#include <vector>

#include "fspec/povm.hpp"
#include "fspec/process.hpp"
#include "fspec/transfer.hpp"

namespace fspec {

/// One sampled measure per realization: samples[j] is dim × R, column r
/// holding W({λ_j}) for realization r.
class CagosRealization {
 public:
  CagosRealization(AtomicTracePovm intensity, std::vector<Operator> samples);

  [[nodiscard]] const AtomicTracePovm& intensity() const { return intensity_; }
  [[nodiscard]] const std::vector<Operator>& samples() const { return samples_; }
  [[nodiscard]] const Operator& sample(std::size_t j) const { return samples_[j]; }
  [[nodiscard]] Eigen::Index dim() const { return intensity_.dim(); }
  [[nodiscard]] Eigen::Index realizations() const { return samples_.front().cols(); }
  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  [[nodiscard]] std::vector<double> freqs() const { return intensity_.freqs(); }

 private:
  AtomicTracePovm intensity_;
  std::vector<Operator> samples_;
};

struct SamplingOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Z_j = ν_j^{1/2} ξ_j, ξ_j standard circular complex Gaussian. Each
/// (atom, realization) pair owns a Philox substream keyed by the seed, so the
/// result does not depend on the thread count.
[[nodiscard]] CagosRealization sample_gaussian_cagos(const AtomicTracePovm& nu, Eigen::Index realizations,
                                                     std::uint64_t seed, SamplingOptions options = {});

/// W(A) = Σ_{j∈A} Z_j
[[nodiscard]] Operator evaluate_measure(const CagosRealization& w, std::span<const std::size_t> atoms);

/// ∫ Φ dW = Σ_j Φ_j Z_j, out_dim × R.
[[nodiscard]] Operator cagos_integral(const TransferFunction& phi, const CagosRealization& w);

/// X_t = Σ_j e^{iλ_j t} Z_j for t = 0..period−1.
[[nodiscard]] ProcessSample synthesize_process(const CagosRealization& w, int period);

/// √2·Re X_t: a real-valued process whose autocovariance is Re Γ(h).
[[nodiscard]] ProcessSample synthesize_real_process(const CagosRealization& w, int period);

/// (1/R) Σ_r (u_r − ū)(v_r − v̄)ᴴ for dim × R ensembles. Ĉov(V, U) = Ĉov(U, V)ᴴ bitwise.
[[nodiscard]] Operator empirical_gramian(const Operator& u, const Operator& v);

struct OrthogonalIncrementPath {
  std::vector<double> breakpoints;  // atom frequencies, increasing
  std::vector<Operator> cumulative;  // Z_λ = W((−π, λ]) at each breakpoint, dim × R

  /// Z_λ for any λ; zero below the first breakpoint.
  [[nodiscard]] Operator value_at(double lambda) const;
};

[[nodiscard]] OrthogonalIncrementPath to_increment_path(const CagosRealization& w);
[[nodiscard]] CagosRealization from_increment_path(const OrthogonalIncrementPath& z, const AtomicTracePovm& intensity);

}  // namespace fspec
