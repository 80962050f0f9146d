#pragma once

#include <optional>
#include <vector>

#include "fspec/operator.hpp"

namespace fspec {

/// Frequencies closer than this are the same atom.
inline constexpr double kFrequencyTolerance = 1e-12;

/// Maps λ into (−π, π].
[[nodiscard]] double canonical_frequency(double lambda);

/// A per-atom operator table Φ(λ_j): H₀ → G₀. An atom may carry a domain
/// projector D_j, in which case Φ_j is a partial operator defined on Im(D_j).
class TransferFunction {
 public:
  TransferFunction(std::vector<double> freqs, std::vector<Operator> ops,
                   std::vector<std::optional<Operator>> domains = {});

  static TransferFunction constant(const std::vector<double>& freqs, const Operator& op);
  static TransferFunction identity(const std::vector<double>& freqs, Eigen::Index dim);
  static TransferFunction zero(const std::vector<double>& freqs, Eigen::Index out_dim, Eigen::Index in_dim);
  /// P at atom k, zero elsewhere.
  static TransferFunction indicator(const std::vector<double>& freqs, std::size_t k, const Operator& op);

  [[nodiscard]] Eigen::Index in_dim() const { return in_dim_; }
  [[nodiscard]] Eigen::Index out_dim() const { return out_dim_; }
  [[nodiscard]] std::size_t size() const { return ops_.size(); }
  [[nodiscard]] const std::vector<double>& freqs() const { return freqs_; }
  [[nodiscard]] double freq(std::size_t j) const { return freqs_[j]; }
  [[nodiscard]] const Operator& op(std::size_t j) const { return ops_[j]; }
  [[nodiscard]] const std::vector<Operator>& ops() const { return ops_; }
  [[nodiscard]] bool is_partial(std::size_t j) const { return domains_[j].has_value(); }
  [[nodiscard]] bool is_total() const;
  /// Domain projector at atom j; identity for total atoms.
  [[nodiscard]] Operator domain(std::size_t j) const;
  [[nodiscard]] const std::optional<Operator>& domain_if_partial(std::size_t j) const { return domains_[j]; }

 private:
  Eigen::Index in_dim_ = 0;
  Eigen::Index out_dim_ = 0;
  std::vector<double> freqs_;
  std::vector<Operator> ops_;
  std::vector<std::optional<Operator>> domains_;
};

[[nodiscard]] bool same_frequencies(const std::vector<double>& a, const std::vector<double>& b);

/// Φ_j x with the domain check ‖(I − D_j)x‖ ≤ tol·‖x‖ applied column-wise.
[[nodiscard]] Operator apply_at_atom(const TransferFunction& phi, std::size_t j, const Operator& x,
                                     double tol = 1e-8);

}  // namespace fspec
