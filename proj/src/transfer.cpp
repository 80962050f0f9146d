#include "fspec/transfer.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fspec {

double canonical_frequency(double lambda) {
  constexpr double pi = std::numbers::pi;
  double out = std::remainder(lambda, 2.0 * pi);  // in [−π, π]
  if (out <= -pi + kFrequencyTolerance) out += 2.0 * pi;
  return out;
}

TransferFunction::TransferFunction(std::vector<double> freqs, std::vector<Operator> ops,
                                   std::vector<std::optional<Operator>> domains)
    : freqs_(std::move(freqs)), ops_(std::move(ops)), domains_(std::move(domains)) {
  if (ops_.empty()) throw Error(ErrorKind::shape, "transfer function needs at least one atom");
  if (freqs_.size() != ops_.size()) {
    throw Error(ErrorKind::shape, "transfer function: " + std::to_string(freqs_.size()) + " frequencies for " +
                                      std::to_string(ops_.size()) + " operators");
  }
  if (domains_.empty()) domains_.resize(ops_.size());
  if (domains_.size() != ops_.size()) throw Error(ErrorKind::shape, "transfer function: domain count mismatch");
  out_dim_ = ops_.front().rows();
  in_dim_ = ops_.front().cols();
  if (in_dim_ == 0 || out_dim_ == 0) throw Error(ErrorKind::shape, "transfer function: empty operator");
  for (std::size_t j = 0; j < ops_.size(); ++j) {
    if (ops_[j].rows() != out_dim_ || ops_[j].cols() != in_dim_) {
      throw Error(ErrorKind::shape, "transfer function: inconsistent dimensions at atom " + std::to_string(j));
    }
    if (!ops_[j].allFinite()) throw Error(ErrorKind::shape, "transfer function: non-finite entry at atom " + std::to_string(j));
    if (domains_[j]) {
      const auto& d = *domains_[j];
      if (d.rows() != in_dim_ || d.cols() != in_dim_ || !is_orthogonal_projector(d, 1e-10)) {
        throw Error(ErrorKind::shape, "transfer function: domain at atom " + std::to_string(j) +
                                          " is not an orthogonal projector on the input space");
      }
    }
  }
}

TransferFunction TransferFunction::constant(const std::vector<double>& freqs, const Operator& op) {
  return TransferFunction(freqs, std::vector<Operator>(freqs.size(), op));
}

TransferFunction TransferFunction::identity(const std::vector<double>& freqs, Eigen::Index dim) {
  return constant(freqs, Operator::Identity(dim, dim));
}

TransferFunction TransferFunction::zero(const std::vector<double>& freqs, Eigen::Index out_dim, Eigen::Index in_dim) {
  return constant(freqs, Operator::Zero(out_dim, in_dim));
}

TransferFunction TransferFunction::indicator(const std::vector<double>& freqs, std::size_t k, const Operator& op) {
  std::vector<Operator> ops(freqs.size(), Operator::Zero(op.rows(), op.cols()));
  if (k >= ops.size()) throw Error(ErrorKind::index, "indicator: atom " + std::to_string(k) + " out of range");
  ops[k] = op;
  return TransferFunction(freqs, std::move(ops));
}

bool TransferFunction::is_total() const {
  for (const auto& d : domains_) {
    if (d) return false;
  }
  return true;
}

Operator TransferFunction::domain(std::size_t j) const {
  return domains_[j] ? *domains_[j] : Operator(Operator::Identity(in_dim_, in_dim_));
}

bool same_frequencies(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::abs(a[j] - b[j]) > kFrequencyTolerance) return false;
  }
  return true;
}

Operator apply_at_atom(const TransferFunction& phi, std::size_t j, const Operator& x, double tol) {
  if (x.rows() != phi.in_dim()) throw Error(ErrorKind::shape, "apply: input dimension mismatch");
  if (const auto& d = phi.domain_if_partial(j)) {
    const Operator outside = x - *d * x;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const double norm = x.col(c).norm();
      if (outside.col(c).norm() > scaled_tolerance(tol, norm)) {
        throw Error(ErrorKind::domain, "sample " + std::to_string(c) + " at atom " + std::to_string(j) +
                                           " lies outside the domain of the partial operator");
      }
    }
  }
  return phi.op(j) * x;
}

}  // namespace fspec
