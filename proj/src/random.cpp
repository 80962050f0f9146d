#include "fspec/random.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace fspec::random {

int uniform_int(Engine& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform_real(Engine& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Operator gaussian_operator(Engine& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Operator out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = Complex(normal(rng), normal(rng));
  }
  return out;
}

Vector gaussian_vector(Engine& rng, Eigen::Index dim) { return gaussian_operator(rng, dim, 1).col(0); }

Operator haar_frame(Engine& rng, Eigen::Index dim, Eigen::Index cols) {
  const Operator g = gaussian_operator(rng, dim, dim);
  Eigen::HouseholderQR<Operator> qr(g);
  Operator q = qr.householderQ() * Operator::Identity(dim, dim);
  const Operator r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double mod = std::abs(r(k, k));
    if (mod > 0.0) q.col(k) *= r(k, k) / mod;
  }
  return q.leftCols(cols);
}

Operator psd_operator(Engine& rng, Eigen::Index dim, Eigen::Index rank) {
  const Operator a = gaussian_operator(rng, dim, rank);
  return hermitian_part(Operator(a * a.adjoint() / static_cast<double>(dim)));
}

Operator conditioned_operator(Engine& rng, Eigen::Index rows, Eigen::Index cols, double cond) {
  const Eigen::Index k = std::min(rows, cols);
  RealVector s(k);
  for (Eigen::Index i = 0; i < k; ++i) s(i) = std::exp(uniform_real(rng, 0.0, std::log(cond)));
  if (k > 1) {
    s(0) = 1.0;
    s(1) = cond;
  }
  const Operator u = haar_frame(rng, rows, k);
  const Operator v = haar_frame(rng, cols, k);
  return u * s.cast<Complex>().asDiagonal() * v.adjoint();
}

AtomicTracePovm povm_on(Engine& rng, const std::vector<double>& freqs, const PovmShape& shape) {
  std::vector<PovmAtom> atoms;
  atoms.reserve(freqs.size());
  for (double f : freqs) {
    Eigen::Index rank = shape.dim;
    if (uniform_real(rng, 0.0, 1.0) < shape.rank_deficient_fraction && shape.dim > 1) {
      rank = uniform_int(rng, 1, static_cast<int>(shape.dim) - 1);
    }
    if (uniform_real(rng, 0.0, 1.0) < shape.null_fraction) rank = 0;
    atoms.push_back({f, rank == 0 ? Operator(Operator::Zero(shape.dim, shape.dim)) : psd_operator(rng, shape.dim, rank)});
  }
  return {shape.dim, std::move(atoms)};
}

AtomicTracePovm povm(Engine& rng, const PovmShape& shape) {
  std::set<double> freqs;
  while (freqs.size() < shape.atoms) freqs.insert(canonical_frequency(uniform_real(rng, -std::numbers::pi, std::numbers::pi)));
  return povm_on(rng, std::vector<double>(freqs.begin(), freqs.end()), shape);
}

TransferFunction transfer(Engine& rng, const std::vector<double>& freqs, Eigen::Index out_dim, Eigen::Index in_dim) {
  std::vector<Operator> ops;
  ops.reserve(freqs.size());
  for (std::size_t j = 0; j < freqs.size(); ++j) ops.push_back(gaussian_operator(rng, out_dim, in_dim));
  return {freqs, std::move(ops)};
}

FirFilter fir(Engine& rng, Eigen::Index out_dim, Eigen::Index in_dim, int max_taps) {
  FirFilter f;
  const int count = uniform_int(rng, 1, max_taps);
  while (static_cast<int>(f.taps.size()) < count) {
    f.taps.emplace(uniform_int(rng, -3, 3), gaussian_operator(rng, out_dim, in_dim));
  }
  return f;
}

}  // namespace fspec::random
