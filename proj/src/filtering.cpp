#include "fspec/filtering.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace fspec {

namespace {

void require_filterable(const TransferFunction& phi, const AtomicTracePovm& nu, const char* op) {
  const auto report = check_filterable(phi, nu);
  if (!report.ok) throw Error(ErrorKind::domain, std::string(op) + ": " + report.describe());
}

}  // namespace

Eigen::Index FirFilter::out_dim() const { return taps.empty() ? 0 : taps.begin()->second.rows(); }

Eigen::Index FirFilter::in_dim() const { return taps.empty() ? 0 : taps.begin()->second.cols(); }

IntegrabilityReport check_filterable(const TransferFunction& phi, const AtomicTracePovm& nu) {
  if (!same_frequencies(phi.freqs(), nu.freqs())) {
    throw Error(ErrorKind::alignment, "check_filterable: transfer frequencies do not match the measure atoms");
  }
  return square_integrability_check(phi, nu);
}

CagosRealization apply_filter(const TransferFunction& phi, const CagosRealization& w) {
  require_filterable(phi, w.intensity(), "apply_filter");
  std::vector<Operator> samples;
  samples.reserve(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) samples.push_back(apply_at_atom(phi, j, w.sample(j)));
  return {pushforward_povm(phi, w.intensity()), std::move(samples)};
}

AtomicTracePovm pushforward_povm(const TransferFunction& phi, const AtomicTracePovm& nu) {
  require_filterable(phi, nu, "pushforward_povm");
  std::vector<PovmAtom> atoms;
  atoms.reserve(nu.size());
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const Operator a = phi.op(j) * nu.sqrt_weight(j);
    atoms.push_back({nu.freq(j), a * a.adjoint()});
  }
  return {phi.out_dim(), std::move(atoms)};
}

TransferFunction compose_transfer(const TransferFunction& psi, const TransferFunction& phi, double rank_tol) {
  if (psi.in_dim() != phi.out_dim()) {
    throw Error(ErrorKind::dimension, "compose_transfer: Ψ expects dimension " + std::to_string(psi.in_dim()) +
                                          ", Φ produces " + std::to_string(phi.out_dim()));
  }
  if (!same_frequencies(psi.freqs(), phi.freqs())) {
    throw Error(ErrorKind::alignment, "compose_transfer: frequency tables differ");
  }
  const Eigen::Index n = phi.in_dim();
  std::vector<Operator> ops;
  std::vector<std::optional<Operator>> domains;
  ops.reserve(phi.size());
  domains.reserve(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) {
    ops.push_back(psi.op(j) * phi.op(j));
    if (!psi.is_partial(j) && !phi.is_partial(j)) {
      domains.emplace_back();
      continue;
    }
    // 𝒟(ΨΦ) = {x ∈ 𝒟(Φ) : Φx ∈ 𝒟(Ψ)} = ker of the stacked constraints.
    Operator constraints(0, n);
    const auto stack = [&](const Operator& rows) {
      Operator grown(constraints.rows() + rows.rows(), n);
      grown << constraints, rows;
      constraints = std::move(grown);
    };
    if (psi.is_partial(j)) {
      const Operator outside = Operator::Identity(psi.in_dim(), psi.in_dim()) - psi.domain(j);
      stack(outside * phi.op(j));
    }
    if (phi.is_partial(j)) stack(Operator::Identity(n, n) - phi.domain(j));
    domains.emplace_back(projector_onto(null_basis(constraints, rank_tol)));
  }
  return {phi.freqs(), std::move(ops), std::move(domains)};
}

TransferFunction invert_transfer(const TransferFunction& phi, const AtomicTracePovm& nu, double rank_tol,
                                 Injectivity mode) {
  require_filterable(phi, nu, "invert_transfer");
  std::vector<Operator> ops;
  std::vector<std::optional<Operator>> domains;
  ops.reserve(phi.size());
  domains.reserve(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) {
    if (nu.is_null(j)) {
      ops.push_back(Operator::Zero(phi.in_dim(), phi.out_dim()));
      domains.emplace_back();
      continue;
    }
    const Operator basis = mode == Injectivity::strict
                               ? (phi.is_partial(j) ? range_basis(phi.domain(j), 1e-10)
                                                    : Operator(Operator::Identity(phi.in_dim(), phi.in_dim())))
                               : nu.support_basis(j);
    const Operator restricted = phi.op(j) * basis;
    const RealVector s = singular_values(restricted);
    const double sigma_max = operator_norm(phi.op(j));
    const double sigma_min = s.size() == 0 ? 0.0 : s(s.size() - 1);
    const bool injective = s.size() == basis.cols() && sigma_min > rank_tol * sigma_max;
    if (!injective) {
      std::ostringstream os;
      os << "invert_transfer: Φ is not injective at atom " << j << " (λ = " << nu.freq(j)
         << "): smallest singular value " << sigma_min << " <= " << rank_tol << " * " << sigma_max;
      throw Error(ErrorKind::not_invertible, os.str());
    }
    const auto pinv = pinv_on_range(restricted, rank_tol);
    ops.push_back(basis * pinv.inverse);
    domains.emplace_back(pinv.range_projector);
  }
  return {phi.freqs(), std::move(ops), std::move(domains)};
}

TransferFunction fir_to_transfer(const FirFilter& fir, const std::vector<double>& freqs) {
  if (fir.taps.empty()) throw Error(ErrorKind::shape, "FIR filter has no taps");
  for (const auto& [s, tap] : fir.taps) {
    if (tap.rows() != fir.out_dim() || tap.cols() != fir.in_dim()) {
      throw Error(ErrorKind::dimension, "FIR tap " + std::to_string(s) + " has inconsistent dimensions");
    }
  }
  std::vector<Operator> ops;
  ops.reserve(freqs.size());
  for (double lambda : freqs) {
    Operator sum = Operator::Zero(fir.out_dim(), fir.in_dim());
    for (const auto& [s, tap] : fir.taps) sum += std::polar(1.0, -lambda * s) * tap;
    ops.push_back(std::move(sum));
  }
  return {freqs, std::move(ops)};
}

ProcessSample apply_fir_time(const FirFilter& fir, const ProcessSample& x) {
  if (fir.taps.empty()) throw Error(ErrorKind::shape, "FIR filter has no taps");
  if (fir.in_dim() != x.dim) throw Error(ErrorKind::dimension, "FIR input dimension differs from the process");
  ProcessSample y{fir.out_dim(), x.period, x.realizations, {}};
  y.values.reserve(static_cast<std::size_t>(x.period));
  for (int t = 0; t < x.period; ++t) {
    Operator sum = Operator::Zero(fir.out_dim(), x.realizations);
    for (const auto& [s, tap] : fir.taps) {
      const int src = ((t - s) % x.period + x.period) % x.period;
      sum.noalias() += tap * x.at(src);
    }
    y.values.push_back(std::move(sum));
  }
  return y;
}

TransferFunction modulate_transfer(const TransferFunction& phi, int h) {
  std::vector<Operator> ops;
  std::vector<std::optional<Operator>> domains;
  ops.reserve(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) {
    ops.push_back(std::polar(1.0, phi.freq(j) * h) * phi.op(j));
    domains.push_back(phi.domain_if_partial(j));
  }
  return {phi.freqs(), std::move(ops), std::move(domains)};
}

}  // namespace fspec
