#include "fspec/povm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fspec {

namespace {

std::string atom_label(std::size_t j, double freq) {
  std::ostringstream os;
  os.precision(17);
  os << "atom " << j << " (λ = " << freq << ")";
  return os.str();
}

void require_integrable(const TransferFunction& phi, const AtomicTracePovm& nu, const char* op) {
  const auto report = square_integrability_check(phi, nu);
  if (!report.ok) {
    const auto bad = *report.first_failure();
    throw Error(ErrorKind::domain, std::string(op) + ": not square integrable at " + atom_label(bad.atom, bad.freq) +
                                       ", ‖(I − D)ν^{1/2}‖ = " + std::to_string(bad.residual));
  }
}

std::vector<double> checked_weights(const AtomicTracePovm& nu, std::span<const double> mu) {
  if (mu.size() != nu.size()) {
    throw Error(ErrorKind::shape, "dominating measure has " + std::to_string(mu.size()) + " weights for " +
                                      std::to_string(nu.size()) + " atoms");
  }
  std::vector<double> w(mu.begin(), mu.end());
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!std::isfinite(w[j]) || w[j] < 0.0) {
      throw Error(ErrorKind::shape, "dominating measure weight at atom " + std::to_string(j) + " is not a non-negative number");
    }
    if (w[j] == 0.0 && !nu.is_null(j)) {
      throw Error(ErrorKind::absolute_continuity,
                  "dominating measure vanishes at " + atom_label(j, nu.freq(j)) + " which carries mass " +
                      std::to_string(nu.mass(j)));
    }
  }
  return w;
}

}  // namespace

AtomicTracePovm::AtomicTracePovm(Eigen::Index dim, std::vector<PovmAtom> atoms) : dim_(dim) {
  if (dim <= 0) throw Error(ErrorKind::shape, "povm dimension must be positive");
  if (atoms.empty()) throw Error(ErrorKind::shape, "povm needs at least one atom");
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    auto& a = atoms[j];
    if (!std::isfinite(a.freq)) throw Error(ErrorKind::shape, "povm: non-finite frequency at atom " + std::to_string(j));
    if (a.weight.rows() != dim || a.weight.cols() != dim) {
      throw Error(ErrorKind::dimension, "povm: weight at atom " + std::to_string(j) + " is not " +
                                            std::to_string(dim) + "x" + std::to_string(dim));
    }
    a.freq = canonical_frequency(a.freq);
  }
  std::stable_sort(atoms.begin(), atoms.end(), [](const PovmAtom& a, const PovmAtom& b) { return a.freq < b.freq; });
  for (auto& a : atoms) {
    if (!atoms_.empty() && a.freq - atoms_.back().freq <= kFrequencyTolerance) {
      atoms_.back().weight += a.weight;
    } else {
      atoms_.push_back(std::move(a));
    }
  }
  roots_.reserve(atoms_.size());
  supports_.reserve(atoms_.size());
  masses_.reserve(atoms_.size());
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    auto& w = atoms_[j].weight;
    if (!psd_check(w, 1e-10)) {
      throw Error(ErrorKind::positivity, "povm weight at " + atom_label(j, atoms_[j].freq) + " is not positive semi-definite");
    }
    w = hermitian_part(w);
    const auto eig = hermitian_eig(w);
    const double cut = kSupportTolerance * std::max(0.0, eig.eigenvalues.size() ? eig.eigenvalues(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < eig.eigenvalues.size() && eig.eigenvalues(rank) > cut) ++rank;
    const Operator basis = eig.eigenvectors.leftCols(rank);
    const RealVector roots = eig.eigenvalues.head(rank).cwiseSqrt();
    roots_.push_back(hermitian_part(Operator(basis * roots.cast<Complex>().asDiagonal() * basis.adjoint())));
    supports_.push_back(basis);
    masses_.push_back(std::max(0.0, w.trace().real()));
    total_mass_ += masses_.back();
  }
}

bool AtomicTracePovm::is_null(std::size_t j) const {
  return masses_[j] <= kAbsoluteFloor * total_mass();
}

std::vector<double> AtomicTracePovm::freqs() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.freq);
  return out;
}

Operator AtomicTracePovm::total() const {
  Operator sum = Operator::Zero(dim_, dim_);
  for (const auto& a : atoms_) sum += a.weight;
  return sum;
}

VariationMeasure variation_measure(const AtomicTracePovm& nu) {
  VariationMeasure out;
  out.mass.reserve(nu.size());
  for (std::size_t j = 0; j < nu.size(); ++j) {
    out.mass.push_back(nu.mass(j));
    if (nu.is_null(j)) out.null_atoms.push_back(j);
  }
  return out;
}

PovmDensity radon_nikodym(const AtomicTracePovm& nu, std::optional<std::span<const double>> mu) {
  PovmDensity out;
  out.base_weights = mu ? checked_weights(nu, *mu) : variation_measure(nu).mass;
  out.densities.reserve(nu.size());
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const double w = out.base_weights[j];
    out.densities.push_back(w > 0.0 ? Operator(nu.weight(j) / w) : Operator(Operator::Zero(nu.dim(), nu.dim())));
  }
  return out;
}

Operator scalar_integral(const AtomicTracePovm& nu, std::span<const Complex> f) {
  if (f.size() != nu.size()) {
    throw Error(ErrorKind::shape, "scalar_integral: " + std::to_string(f.size()) + " values for " +
                                      std::to_string(nu.size()) + " atoms");
  }
  Operator sum = Operator::Zero(nu.dim(), nu.dim());
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (!std::isfinite(f[j].real()) || !std::isfinite(f[j].imag())) {
      throw Error(ErrorKind::shape, "scalar_integral: non-finite integrand at atom " + std::to_string(j));
    }
    sum += f[j] * nu.weight(j);
  }
  return sum;
}

std::optional<AtomCheck> IntegrabilityReport::first_failure() const {
  for (const auto& a : atoms) {
    if (!a.passed) return a;
  }
  return std::nullopt;
}

std::string IntegrabilityReport::describe() const {
  if (ok) return "square integrable at every atom";
  const auto bad = *first_failure();
  std::ostringstream os;
  os << "domain condition fails at " << atom_label(bad.atom, bad.freq) << ": residual " << bad.residual
     << " > threshold " << bad.threshold;
  return os.str();
}

void require_aligned(const TransferFunction& phi, const AtomicTracePovm& nu, const char* op) {
  if (phi.size() != nu.size()) {
    throw Error(ErrorKind::shape, std::string(op) + ": transfer function has " + std::to_string(phi.size()) +
                                      " atoms, measure has " + std::to_string(nu.size()));
  }
  if (phi.in_dim() != nu.dim()) {
    throw Error(ErrorKind::shape, std::string(op) + ": transfer input dimension " + std::to_string(phi.in_dim()) +
                                      " differs from measure dimension " + std::to_string(nu.dim()));
  }
  if (!same_frequencies(phi.freqs(), nu.freqs())) {
    throw Error(ErrorKind::alignment, std::string(op) + ": transfer frequencies do not match the measure atoms");
  }
}

IntegrabilityReport square_integrability_check(const TransferFunction& phi, const AtomicTracePovm& nu, double tol) {
  require_aligned(phi, nu, "square_integrability_check");
  IntegrabilityReport report;
  report.atoms.reserve(nu.size());
  for (std::size_t j = 0; j < nu.size(); ++j) {
    AtomCheck check{j, nu.freq(j), 0.0, 0.0, true};
    if (phi.is_partial(j) && !nu.is_null(j)) {
      const Operator& root = nu.sqrt_weight(j);
      check.residual = operator_norm(Operator(root - phi.domain(j) * root));
      check.threshold = scaled_tolerance(tol, operator_norm(root));
      check.passed = check.residual <= check.threshold;
    }
    report.ok = report.ok && check.passed;
    report.atoms.push_back(check);
  }
  return report;
}

Operator operator_integral(const TransferFunction& phi, const AtomicTracePovm& nu, const TransferFunction& psi) {
  require_integrable(phi, nu, "operator_integral");
  require_integrable(psi, nu, "operator_integral");
  const auto w = variation_measure(nu).mass;
  Operator sum = Operator::Zero(phi.out_dim(), psi.out_dim());
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (nu.is_null(j) || w[j] <= 0.0) continue;
    // g_j^{1/2} = ν_j^{1/2} / √w_j
    const Operator root_density = nu.sqrt_weight(j) / std::sqrt(w[j]);
    sum += w[j] * (phi.op(j) * root_density) * (psi.op(j) * root_density).adjoint();
  }
  return sum;
}

Operator operator_integral(const TransferFunction& phi, const AtomicTracePovm& nu, const TransferFunction& psi,
                           std::span<const double> mu) {
  require_integrable(phi, nu, "operator_integral");
  require_integrable(psi, nu, "operator_integral");
  const auto density = radon_nikodym(nu, mu);
  Operator sum = Operator::Zero(phi.out_dim(), psi.out_dim());
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const double w = density.base_weights[j];
    if (nu.is_null(j) || w <= 0.0) continue;
    const Operator root_density = psd_sqrt(density.densities[j]);
    sum += w * (phi.op(j) * root_density) * (psi.op(j) * root_density).adjoint();
  }
  return sum;
}

Operator gramian_inner(const TransferFunction& phi, const TransferFunction& psi, const AtomicTracePovm& nu) {
  return operator_integral(phi, nu, psi);
}

double gramian_norm(const TransferFunction& phi, const AtomicTracePovm& nu) {
  return std::sqrt(std::max(0.0, gramian_inner(phi, phi, nu).trace().real()));
}

std::vector<HermitianEigenSystem> eigendecompose(const AtomicTracePovm& nu, std::optional<std::span<const double>> mu) {
  const auto density = radon_nikodym(nu, mu);
  std::vector<HermitianEigenSystem> out;
  out.reserve(nu.size());
  for (const auto& g : density.densities) out.push_back(hermitian_eig(g));
  return out;
}

}  // namespace fspec
