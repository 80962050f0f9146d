#include "fspec/decomposition.hpp"

#include <cmath>
#include <sstream>

#include "fspec/filtering.hpp"

namespace fspec {

namespace {

void require_index(const CklSystem& sys, Eigen::Index n) {
  if (n < 0 || n >= sys.dim()) {
    throw Error(ErrorKind::index, "component " + std::to_string(n) + " out of range [0, " + std::to_string(sys.dim()) + ")");
  }
}

void require_same_atoms(const CagosRealization& w, const CklSystem& sys) {
  if (w.dim() != sys.dim() || !same_frequencies(w.freqs(), sys.source().freqs())) {
    throw Error(ErrorKind::alignment, "realization and decomposition are indexed by different atoms");
  }
}

}  // namespace

CklSystem::CklSystem(AtomicTracePovm source, std::vector<CklAtom> atoms)
    : source_(std::move(source)), atoms_(std::move(atoms)) {
  if (atoms_.size() != source_.size()) throw Error(ErrorKind::shape, "decomposition: one eigen-system per atom");
}

RealVector CklSystem::density_sigmas(std::size_t j) const {
  const auto& a = atoms_[j];
  return a.mass > 0.0 ? RealVector(a.sigmas / a.mass) : RealVector(RealVector::Zero(a.sigmas.size()));
}

TransferFunction CklSystem::component_transfer(Eigen::Index n) const {
  require_index(*this, n);
  std::vector<Operator> ops;
  ops.reserve(atoms_.size());
  for (const auto& a : atoms_) ops.push_back(outer(a.vectors.col(n), a.vectors.col(n)));
  return {source_.freqs(), std::move(ops)};
}

TransferFunction CklSystem::scalar_transfer(Eigen::Index n) const {
  require_index(*this, n);
  std::vector<Operator> ops;
  ops.reserve(atoms_.size());
  for (const auto& a : atoms_) ops.push_back(a.vectors.col(n).adjoint());
  return {source_.freqs(), std::move(ops)};
}

TransferFunction CklSystem::completeness_transfer() const {
  std::vector<Operator> ops;
  ops.reserve(atoms_.size());
  for (const auto& a : atoms_) ops.push_back(a.vectors * a.vectors.adjoint());
  return {source_.freqs(), std::move(ops)};
}

RankFunction::RankFunction(std::vector<int> ranks) : ranks_(std::move(ranks)) {
  for (std::size_t j = 0; j < ranks_.size(); ++j) {
    if (ranks_[j] < 1) throw Error(ErrorKind::shape, "rank function must be at least 1, atom " + std::to_string(j));
  }
}

RankFunction RankFunction::constant(std::size_t atoms, int rank) {
  return RankFunction(std::vector<int>(atoms, rank));
}

Eigen::Index RankFunction::at(std::size_t j, Eigen::Index dim) const {
  return std::min<Eigen::Index>(ranks_[j], dim);
}

CklSystem ckl_decompose(const AtomicTracePovm& nu) {
  std::vector<CklAtom> atoms;
  atoms.reserve(nu.size());
  for (std::size_t j = 0; j < nu.size(); ++j) {
    auto eig = hermitian_eig(nu.weight(j));
    CklAtom a;
    a.freq = nu.freq(j);
    a.mass = nu.mass(j);
    a.rank = nu.is_null(j) ? 0 : nu.support_basis(j).cols();
    a.sigmas = RealVector::Zero(nu.dim());
    a.sigmas.head(a.rank) = eig.eigenvalues.head(a.rank);
    a.vectors = Operator::Zero(nu.dim(), nu.dim());
    a.vectors.leftCols(a.rank) = eig.eigenvectors.leftCols(a.rank);
    atoms.push_back(std::move(a));
  }
  return {nu, std::move(atoms)};
}

double ckl_completeness_residual(const CklSystem& sys) {
  const auto& nu = sys.source();
  const auto sum = sys.completeness_transfer();
  std::vector<Operator> ops;
  ops.reserve(sum.size());
  for (const auto& p : sum.ops()) ops.push_back(p - Operator::Identity(nu.dim(), nu.dim()));
  return gramian_norm(TransferFunction(nu.freqs(), std::move(ops)), nu);
}

CagosRealization ckl_component(const CagosRealization& w, const CklSystem& sys, Eigen::Index n) {
  require_same_atoms(w, sys);
  return apply_filter(sys.component_transfer(n), w);
}

CagosRealization ckl_scalar_component(const CagosRealization& w, const CklSystem& sys, Eigen::Index n) {
  require_same_atoms(w, sys);
  return apply_filter(sys.scalar_transfer(n), w);
}

TransferFunction hfpca_projector(const CklSystem& sys, const RankFunction& q) {
  if (q.size() != sys.size()) throw Error(ErrorKind::shape, "rank function needs one value per atom");
  std::vector<Operator> ops;
  ops.reserve(sys.size());
  for (std::size_t j = 0; j < sys.size(); ++j) {
    const auto& a = sys.atom(j);
    const Operator top = a.vectors.leftCols(q.at(j, sys.dim()));
    ops.push_back(top * top.adjoint());
  }
  return {sys.source().freqs(), std::move(ops)};
}

double hfpca_error(const AtomicTracePovm& nu, const TransferFunction& theta) {
  const auto report = check_filterable(theta, nu);
  if (!report.ok) throw Error(ErrorKind::domain, "hfpca_error: " + report.describe());
  if (theta.out_dim() != nu.dim()) throw Error(ErrorKind::dimension, "hfpca_error: Θ must map H₀ to itself");
  double total = 0.0;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const Operator residual = nu.sqrt_weight(j) - theta.op(j) * nu.sqrt_weight(j);
    total += residual.squaredNorm();
  }
  return total;
}

double hfpca_optimal_error(const CklSystem& sys, const RankFunction& q) {
  if (q.size() != sys.size()) throw Error(ErrorKind::shape, "rank function needs one value per atom");
  double total = 0.0;
  for (std::size_t j = 0; j < sys.size(); ++j) {
    const auto& s = sys.atom(j).sigmas;
    const Eigen::Index kept = q.at(j, sys.dim());
    total += s.tail(s.size() - kept).sum();
  }
  return total;
}

std::vector<std::string> hfpca_tie_warnings(const CklSystem& sys, const RankFunction& q, double rel_tol) {
  std::vector<std::string> warnings;
  for (std::size_t j = 0; j < sys.size(); ++j) {
    const auto& a = sys.atom(j);
    const Eigen::Index cut = q.at(j, sys.dim());
    if (cut >= a.rank || cut == 0) continue;
    const double gap = a.sigmas(cut - 1) - a.sigmas(cut);
    if (gap <= rel_tol * a.sigmas(0)) {
      std::ostringstream os;
      os << "atom " << j << " (λ = " << a.freq << "): eigenvalues " << cut - 1 << " and " << cut
         << " are tied across the rank cut; the projector is not unique";
      warnings.push_back(os.str());
    }
  }
  return warnings;
}

}  // namespace fspec
