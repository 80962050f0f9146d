#pragma once

// Random test instances: operators, measures, transfers and filters.

#include <random>
#include <vector>

#include "fspec/filtering.hpp"
#include "fspec/povm.hpp"
#include "fspec/transfer.hpp"

namespace fspec::random {

using Engine = std::mt19937_64;

/// i.i.d. standard circular complex Gaussian entries.
[[nodiscard]] Operator gaussian_operator(Engine& rng, Eigen::Index rows, Eigen::Index cols);
[[nodiscard]] Vector gaussian_vector(Engine& rng, Eigen::Index dim);

/// Haar-distributed dim × cols matrix with orthonormal columns (QR with phase fix).
[[nodiscard]] Operator haar_frame(Engine& rng, Eigen::Index dim, Eigen::Index cols);

/// A Aᴴ / dim with A dim × rank.
[[nodiscard]] Operator psd_operator(Engine& rng, Eigen::Index dim, Eigen::Index rank);

/// U diag(s) Vᴴ with log-uniform singular values in [1, cond].
[[nodiscard]] Operator conditioned_operator(Engine& rng, Eigen::Index rows, Eigen::Index cols, double cond);

struct PovmShape {
  Eigen::Index dim = 3;
  std::size_t atoms = 5;
  double rank_deficient_fraction = 0.0;  // chance an atom gets a random lower rank
  double null_fraction = 0.0;            // chance an atom is zero
};

/// Random atoms at random frequencies in (−π, π].
[[nodiscard]] AtomicTracePovm povm(Engine& rng, const PovmShape& shape);
/// Random atoms on the given frequencies.
[[nodiscard]] AtomicTracePovm povm_on(Engine& rng, const std::vector<double>& freqs, const PovmShape& shape);

[[nodiscard]] TransferFunction transfer(Engine& rng, const std::vector<double>& freqs, Eigen::Index out_dim,
                                        Eigen::Index in_dim);

/// Between 1 and max_taps taps at distinct lags in [−3, 3].
[[nodiscard]] FirFilter fir(Engine& rng, Eigen::Index out_dim, Eigen::Index in_dim, int max_taps = 5);

[[nodiscard]] int uniform_int(Engine& rng, int lo, int hi);
[[nodiscard]] double uniform_real(Engine& rng, double lo, double hi);

}  // namespace fspec::random
