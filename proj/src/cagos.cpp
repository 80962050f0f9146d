#include "fspec/cagos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "fspec/philox.hpp"

namespace fspec {

namespace {

template <typename Fn>
void parallel_for(Eigen::Index n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<Eigen::Index>(threads, std::max<Eigen::Index>(n, 1)));
  if (threads <= 1) {
    fn(Eigen::Index{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  const Eigen::Index chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const Eigen::Index begin = std::min<Eigen::Index>(n, t * chunk);
    const Eigen::Index end = std::min<Eigen::Index>(n, begin + chunk);
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

}  // namespace

CagosRealization::CagosRealization(AtomicTracePovm intensity, std::vector<Operator> samples)
    : intensity_(std::move(intensity)), samples_(std::move(samples)) {
  if (samples_.size() != intensity_.size()) {
    throw Error(ErrorKind::shape, "realization has " + std::to_string(samples_.size()) + " atoms, intensity has " +
                                      std::to_string(intensity_.size()));
  }
  const Eigen::Index r = samples_.front().cols();
  for (std::size_t j = 0; j < samples_.size(); ++j) {
    if (samples_[j].rows() != intensity_.dim() || samples_[j].cols() != r) {
      throw Error(ErrorKind::shape, "realization: sample block at atom " + std::to_string(j) + " has wrong shape");
    }
  }
}

CagosRealization sample_gaussian_cagos(const AtomicTracePovm& nu, Eigen::Index realizations, std::uint64_t seed,
                                       SamplingOptions options) {
  if (realizations < 1) throw Error(ErrorKind::sample_size, "need at least one realization");
  if (realizations > Eigen::Index{0xFFFFFFFF}) throw Error(ErrorKind::sample_size, "too many realizations");
  const Philox4x32 rng(seed);
  const Eigen::Index dim = nu.dim();
  std::vector<Operator> noise(nu.size(), Operator(dim, realizations));
  parallel_for(realizations, options.threads, [&](Eigen::Index begin, Eigen::Index end) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      for (Eigen::Index r = begin; r < end; ++r) {
        for (Eigen::Index i = 0; i < dim; ++i) {
          const Philox4x32::Counter ctr{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(r),
                                        static_cast<std::uint32_t>(j), 0u};
          noise[j](i, r) = complex_gaussian(rng(ctr));
        }
      }
    }
  });
  std::vector<Operator> samples;
  samples.reserve(nu.size());
  // Coefficient-wise product: column r does not depend on how many columns there are.
  for (std::size_t j = 0; j < nu.size(); ++j) samples.push_back(nu.sqrt_weight(j).lazyProduct(noise[j]));
  return {nu, std::move(samples)};
}

Operator evaluate_measure(const CagosRealization& w, std::span<const std::size_t> atoms) {
  Operator sum = Operator::Zero(w.dim(), w.realizations());
  for (auto j : atoms) {
    if (j >= w.size()) throw Error(ErrorKind::index, "atom " + std::to_string(j) + " out of range");
    sum += w.sample(j);
  }
  return sum;
}

Operator cagos_integral(const TransferFunction& phi, const CagosRealization& w) {
  const auto report = square_integrability_check(phi, w.intensity());
  if (!report.ok) throw Error(ErrorKind::domain, "cagos_integral: " + report.describe());
  Operator sum = Operator::Zero(phi.out_dim(), w.realizations());
  for (std::size_t j = 0; j < w.size(); ++j) sum += apply_at_atom(phi, j, w.sample(j));
  return sum;
}

ProcessSample synthesize_process(const CagosRealization& w, int period) {
  if (period <= 0) throw Error(ErrorKind::shape, "period must be positive");
  ProcessSample x{w.dim(), period, w.realizations(), {}};
  x.values.reserve(static_cast<std::size_t>(period));
  for (int t = 0; t < period; ++t) {
    Operator sum = Operator::Zero(w.dim(), w.realizations());
    for (std::size_t j = 0; j < w.size(); ++j) sum += std::polar(1.0, w.intensity().freq(j) * t) * w.sample(j);
    x.values.push_back(std::move(sum));
  }
  return x;
}

ProcessSample synthesize_real_process(const CagosRealization& w, int period) {
  auto x = synthesize_process(w, period);
  for (auto& v : x.values) v = (std::numbers::sqrt2 * v.real()).cast<Complex>();
  return x;
}

Operator empirical_gramian(const Operator& u, const Operator& v) {
  if (u.cols() != v.cols()) throw Error(ErrorKind::shape, "empirical_gramian: ensemble sizes differ");
  if (u.cols() < 2) throw Error(ErrorKind::sample_size, "empirical_gramian needs at least 2 realizations");
  const Eigen::Index n = u.cols();
  const Vector u_mean = u.rowwise().mean();
  const Vector v_mean = v.rowwise().mean();
  const Operator uc = u.colwise() - u_mean;
  const Operator vc = v.colwise() - v_mean;
  // Explicit loops keep the accumulation order symmetric in (u, v).
  Operator out(u.rows(), v.rows());
  for (Eigen::Index a = 0; a < u.rows(); ++a) {
    for (Eigen::Index b = 0; b < v.rows(); ++b) {
      Complex acc = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) acc += uc(a, r) * std::conj(vc(b, r));
      out(a, b) = acc / static_cast<double>(n);
    }
  }
  return out;
}

Operator OrthogonalIncrementPath::value_at(double lambda) const {
  const Eigen::Index rows = cumulative.empty() ? 0 : cumulative.front().rows();
  const Eigen::Index cols = cumulative.empty() ? 0 : cumulative.front().cols();
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), lambda + kFrequencyTolerance);
  if (it == breakpoints.begin()) return Operator::Zero(rows, cols);
  return cumulative[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

OrthogonalIncrementPath to_increment_path(const CagosRealization& w) {
  OrthogonalIncrementPath path;
  path.breakpoints = w.freqs();
  path.cumulative.reserve(w.size());
  Operator running = Operator::Zero(w.dim(), w.realizations());
  for (std::size_t j = 0; j < w.size(); ++j) {
    running += w.sample(j);
    path.cumulative.push_back(running);
  }
  return path;
}

CagosRealization from_increment_path(const OrthogonalIncrementPath& z, const AtomicTracePovm& intensity) {
  if (z.cumulative.size() != z.breakpoints.size()) throw Error(ErrorKind::shape, "path: one value per breakpoint");
  if (!same_frequencies(z.breakpoints, intensity.freqs())) {
    throw Error(ErrorKind::alignment, "path breakpoints do not match the intensity atoms");
  }
  std::vector<Operator> samples;
  samples.reserve(z.cumulative.size());
  for (std::size_t j = 0; j < z.cumulative.size(); ++j) {
    samples.push_back(j == 0 ? z.cumulative[0] : Operator(z.cumulative[j] - z.cumulative[j - 1]));
  }
  return {intensity, std::move(samples)};
}

}  // namespace fspec
