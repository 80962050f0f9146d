#include "fspec/spectral.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace fspec {

namespace {

constexpr double kGridPositivityTol = 1e-8;

Operator lag_value(const AutocovarianceSequence& gamma, int h) {
  if (std::abs(h) > gamma.max_lag()) {
    throw Error(ErrorKind::coverage, "lag " + std::to_string(h) + " exceeds max_lag " + std::to_string(gamma.max_lag()));
  }
  return gamma.at(h);
}

}  // namespace

AutocovarianceSequence::AutocovarianceSequence(Eigen::Index dim, std::vector<Operator> nonnegative_lags)
    : dim_(dim), values_(std::move(nonnegative_lags)) {
  if (dim <= 0) throw Error(ErrorKind::shape, "autocovariance dimension must be positive");
  if (values_.empty()) throw Error(ErrorKind::shape, "autocovariance needs at least Γ(0)");
  for (std::size_t h = 0; h < values_.size(); ++h) {
    if (values_[h].rows() != dim || values_[h].cols() != dim) {
      throw Error(ErrorKind::dimension, "autocovariance: Γ(" + std::to_string(h) + ") has wrong shape");
    }
    if (!values_[h].allFinite()) throw Error(ErrorKind::shape, "autocovariance: non-finite Γ(" + std::to_string(h) + ")");
  }
  if (!psd_check(values_[0], 1e-10)) {
    throw Error(ErrorKind::not_positive_type, "autocovariance: Γ(0) is not positive semi-definite");
  }
}

Operator AutocovarianceSequence::at(int h) const {
  const auto idx = static_cast<std::size_t>(std::abs(h));
  if (idx >= values_.size()) {
    throw Error(ErrorKind::coverage, "lag " + std::to_string(h) + " exceeds max_lag " + std::to_string(max_lag()));
  }
  return h >= 0 ? values_[idx] : Operator(values_[idx].adjoint());
}

AutocovarianceSequence autocov_from_povm(const AtomicTracePovm& nu, int max_lag) {
  if (max_lag < 0) throw Error(ErrorKind::shape, "max_lag must be non-negative");
  std::vector<Operator> values;
  values.reserve(static_cast<std::size_t>(max_lag) + 1);
  for (int h = 0; h <= max_lag; ++h) {
    Operator sum = Operator::Zero(nu.dim(), nu.dim());
    for (std::size_t j = 0; j < nu.size(); ++j) {
      sum += std::polar(1.0, nu.freq(j) * h) * nu.weight(j);
    }
    values.push_back(std::move(sum));
  }
  return {nu.dim(), std::move(values)};
}

std::vector<double> fourier_grid(int period) {
  if (period <= 0) throw Error(ErrorKind::shape, "grid period must be positive");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(period));
  for (int k = 0; k < period; ++k) {
    grid.push_back(canonical_frequency(-std::numbers::pi + 2.0 * std::numbers::pi * k / period));
  }
  return grid;
}

AtomicTracePovm povm_from_autocov_grid(const AutocovarianceSequence& gamma, int period) {
  if (period <= 0) throw Error(ErrorKind::shape, "grid period must be positive");
  const Eigen::Index dim = gamma.dim();
  std::vector<Operator> lags;
  lags.reserve(static_cast<std::size_t>(period));
  for (int h = 0; h < period; ++h) {
    if (h <= gamma.max_lag()) {
      lags.push_back(gamma.at(h));
    } else if (period - h <= gamma.max_lag()) {
      // e^{iλ_k M} = (−1)^M on the −π-anchored grid.
      const double sign = period % 2 == 0 ? 1.0 : -1.0;
      lags.push_back(sign * gamma.at(h - period));
    } else {
      // A sequence that is not of positive type is rejected as such, even when short.
      std::vector<int> times(static_cast<std::size_t>(gamma.max_lag()) + 1);
      std::iota(times.begin(), times.end(), 0);
      if (!positive_type_check(gamma, times, kGridPositivityTol)) {
        throw Error(ErrorKind::not_positive_type, "lags 0.." + std::to_string(gamma.max_lag()) +
                                                      " do not form a positive semi-definite block matrix");
      }
      throw Error(ErrorKind::coverage, "grid of period " + std::to_string(period) + " needs Γ(" + std::to_string(h) +
                                           ") or Γ(" + std::to_string(h - period) + "), max_lag is " +
                                           std::to_string(gamma.max_lag()));
    }
  }
  const double scale = gamma.at(0).trace().real();
  const auto grid = fourier_grid(period);
  std::vector<PovmAtom> atoms;
  atoms.reserve(grid.size());
  for (int k = 0; k < period; ++k) {
    const double lambda = -std::numbers::pi + 2.0 * std::numbers::pi * k / period;
    Operator atom = Operator::Zero(dim, dim);
    for (int h = 0; h < period; ++h) atom += std::polar(1.0, -lambda * h) * lags[static_cast<std::size_t>(h)];
    atom /= static_cast<double>(period);
    if (!psd_check_scaled(atom, kGridPositivityTol, scale)) {
      throw Error(ErrorKind::not_positive_type,
                  "recovered grid atom k = " + std::to_string(k) + " (λ = " + std::to_string(lambda) +
                      ") is not positive semi-definite");
    }
    // Round-off below the tolerance is projected back onto the positive cone.
    const auto eig = hermitian_eig(hermitian_part(atom));
    const RealVector clamped = eig.eigenvalues.cwiseMax(0.0);
    atom = eig.eigenvectors * clamped.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    atoms.push_back({grid[static_cast<std::size_t>(k)], hermitian_part(atom)});
  }
  return {dim, std::move(atoms)};
}

Operator autocov_block_matrix(const AutocovarianceSequence& gamma, std::span<const int> times) {
  const Eigen::Index d = gamma.dim();
  const auto n = static_cast<Eigen::Index>(times.size());
  Operator block(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      block.block(i * d, j * d, d, d) = lag_value(gamma, times[static_cast<std::size_t>(i)] - times[static_cast<std::size_t>(j)]);
    }
  }
  return block;
}

bool positive_type_check(const AutocovarianceSequence& gamma, std::span<const int> times, double tol) {
  if (times.empty()) return true;
  return psd_check(autocov_block_matrix(gamma, times), tol);
}

bool positive_type_check(const AutocovarianceSequence& gamma, std::span<const int> times,
                         std::span<const Vector> vectors, double tol) {
  if (vectors.size() != times.size()) throw Error(ErrorKind::shape, "positive_type_check: one vector per time");
  Complex form = 0.0;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (vectors[i].size() != gamma.dim()) throw Error(ErrorKind::dimension, "positive_type_check: vector dimension");
    norm2 += vectors[i].squaredNorm();
    for (std::size_t j = 0; j < times.size(); ++j) {
      form += vectors[i].dot(lag_value(gamma, times[i] - times[j]) * vectors[j]);
    }
  }
  const double scale = gamma.at(0).trace().real() * norm2 * static_cast<double>(times.size());
  const double threshold = scaled_tolerance(tol, scale);
  return form.real() >= -threshold && std::abs(form.imag()) <= threshold;
}

bool hermitian_nnd_check(const AutocovarianceSequence& gamma, std::span<const int> times,
                         std::span<const Complex> coeffs, double tol) {
  if (coeffs.size() != times.size()) throw Error(ErrorKind::shape, "hermitian_nnd_check: one coefficient per time");
  Operator sum = Operator::Zero(gamma.dim(), gamma.dim());
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t j = 0; j < times.size(); ++j) {
      sum += coeffs[i] * std::conj(coeffs[j]) * lag_value(gamma, times[i] - times[j]);
    }
  }
  return psd_check(sum, tol);
}

EmpiricalAutocov empirical_autocov(const ProcessSample& x, int max_lag) {
  if (x.realizations < 2) {
    throw Error(ErrorKind::sample_size, "empirical_autocov needs at least 2 realizations, got " +
                                            std::to_string(x.realizations));
  }
  if (max_lag < 0 || max_lag >= x.period) {
    throw Error(ErrorKind::coverage, "max_lag must lie in [0, period)");
  }
  const auto r = static_cast<double>(x.realizations);
  std::vector<Operator> values;
  values.reserve(static_cast<std::size_t>(max_lag) + 1);
  for (int h = 0; h <= max_lag; ++h) {
    Operator sum = Operator::Zero(x.dim, x.dim);
    for (int t = 0; t + h < x.period; ++t) sum.noalias() += x.at(t + h) * x.at(t).adjoint();
    values.push_back(sum / (r * (x.period - h)));
  }
  return {AutocovarianceSequence(x.dim, std::move(values)), 1.0 / std::sqrt(r)};
}

}  // namespace fspec
