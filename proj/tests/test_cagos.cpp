#include <doctest.h>

#include <numbers>

#include "fspec/cagos.hpp"
#include "fspec/philox.hpp"
#include "fspec/random.hpp"
#include "fspec/spectral.hpp"
#include "helpers.hpp"

using namespace fspec;
using test::diag;
using test::max_abs;

namespace {

Philox4x32::Counter philox(Philox4x32::Counter ctr, std::uint32_t k0, std::uint32_t k1) {
  return Philox4x32((static_cast<std::uint64_t>(k1) << 32) | k0)(ctr);
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  CHECK(philox({0, 0, 0, 0}, 0, 0) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, 0xffffffff, 0xffffffff) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, 0xa4093822, 0x299f31d0) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("open_unit stays inside (0, 1)") {
  CHECK(open_unit(0, 0) > 0.0);
  CHECK(open_unit(0xffffffff, 0xffffffff) < 1.0);
}

TEST_CASE("sampling is reproducible and thread-count independent") {
  random::Engine rng(1);
  const auto nu = random::povm(rng, {3, 5, 0.3, 0.2});
  const auto a = sample_gaussian_cagos(nu, 257, 42, {1});
  const auto b = sample_gaussian_cagos(nu, 257, 42, {3});
  const auto c = sample_gaussian_cagos(nu, 257, 43, {1});
  for (std::size_t j = 0; j < nu.size(); ++j) {
    CHECK((a.sample(j).array() == b.sample(j).array()).all());
    if (!nu.is_null(j)) CHECK_FALSE((a.sample(j).array() == c.sample(j).array()).all());
  }
  // Realization r does not depend on how many realizations were requested.
  const auto prefix = sample_gaussian_cagos(nu, 10, 42, {1});
  for (std::size_t j = 0; j < nu.size(); ++j) CHECK((prefix.sample(j).array() == a.sample(j).leftCols(10).array()).all());
}

TEST_CASE("sampled atoms have the intensity as covariance and are uncorrelated") {
  random::Engine rng(2);
  const auto nu = random::povm(rng, {2, 3, 0.0, 0.0});
  constexpr Eigen::Index r = 60'000;
  const auto w = sample_gaussian_cagos(nu, r, 5);
  const double band = 5.0 / std::sqrt(static_cast<double>(r));
  for (std::size_t j = 0; j < nu.size(); ++j) {
    for (std::size_t k = 0; k < nu.size(); ++k) {
      const Operator expected = j == k ? nu.weight(j) : Operator(Operator::Zero(2, 2));
      CHECK(max_abs(empirical_gramian(w.sample(j), w.sample(k)) - expected) <
            band * std::sqrt(nu.mass(j) * nu.mass(k)));
    }
  }
}

TEST_CASE("complex Gaussian noise is circular with unit variance") {
  constexpr int n = 100'000;
  double power = 0.0;
  Complex pseudo = 0.0;
  Complex mean = 0.0;
  const Philox4x32 gen(9);
  for (int i = 0; i < n; ++i) {
    const Complex z = complex_gaussian(gen({static_cast<std::uint32_t>(i), 0, 0, 0}));
    power += std::norm(z);
    pseudo += z * z;
    mean += z;
  }
  CHECK(power / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(pseudo / double(n)) < 0.02);
  CHECK(std::abs(mean / double(n)) < 0.02);
}

TEST_CASE("empirical Gramian is exactly conjugate-symmetric and centered") {
  random::Engine rng(3);
  const Operator u = random::gaussian_operator(rng, 3, 50);
  const Operator v = random::gaussian_operator(rng, 2, 50);
  CHECK((empirical_gramian(u, v).array() == empirical_gramian(v, u).adjoint().array()).all());
  const Operator constant = Operator::Constant(2, 50, Complex(1.5, -2.0));
  CHECK(max_abs(empirical_gramian(constant, constant)) == 0.0);
  CHECK(test::thrown_kind([&] { (void)empirical_gramian(u.leftCols(1), v.leftCols(1)); }) == ErrorKind::sample_size);
  CHECK(test::thrown_kind([&] { (void)empirical_gramian(u, v.leftCols(10)); }) == ErrorKind::shape);
}

TEST_CASE("measure evaluation and the stochastic integral") {
  random::Engine rng(4);
  const auto nu = random::povm(rng, {2, 4, 0.0, 0.0});
  const auto w = sample_gaussian_cagos(nu, 6, 1);
  const std::vector<std::size_t> set{1, 3};
  CHECK(max_abs(evaluate_measure(w, set) - (w.sample(1) + w.sample(3))) == 0.0);
  const auto ind = TransferFunction::indicator(nu.freqs(), 2, Operator::Identity(2, 2));
  CHECK(max_abs(cagos_integral(ind, w) - w.sample(2)) == 0.0);

  // A partial Φ whose domain misses the support is not integrable.
  const std::vector<std::optional<Operator>> domains(nu.size(), Operator(diag({1, 0})));
  const TransferFunction partial(nu.freqs(), std::vector<Operator>(nu.size(), diag({1, 1})), domains);
  CHECK(test::thrown_kind([&] { (void)cagos_integral(partial, w); }) == ErrorKind::domain);
}

TEST_CASE("synthesized processes carry the autocovariance") {
  random::Engine rng(5);
  const auto nu = random::povm(rng, {2, 4, 0.0, 0.0});
  constexpr Eigen::Index r = 40'000;
  const auto w = sample_gaussian_cagos(nu, r, 11);
  const auto gamma = autocov_from_povm(nu, 3);
  const auto x = synthesize_process(w, 8);
  const auto xr = synthesize_real_process(w, 8);
  const double band = 5.0 * nu.total_mass() / std::sqrt(static_cast<double>(r));
  for (int h = 0; h <= 3; ++h) {
    const Operator cov = x.at(2 + h) * x.at(2).adjoint() / static_cast<double>(r);
    CHECK(max_abs(cov - gamma.at(h)) < band);
    const Operator real_cov = xr.at(2 + h) * xr.at(2).adjoint() / static_cast<double>(r);
    CHECK(max_abs(real_cov - gamma.at(h).real().cast<Complex>()) < 2.0 * band);
  }
  for (const auto& block : xr.values) CHECK(block.imag().cwiseAbs().maxCoeff() == 0.0);
  // X_t = Σ_j e^{iλ_j t} Z_j, checked at one realization.
  Vector expected = Vector::Zero(2);
  for (std::size_t j = 0; j < nu.size(); ++j) expected += std::polar(1.0, nu.freq(j) * 5) * w.sample(j).col(7);
  CHECK(max_abs(x.at(5).col(7) - expected) < 1e-13);
}

TEST_CASE("orthogonal increment path") {
  random::Engine rng(6);
  const auto nu = random::povm(rng, {2, 6, 0.3, 0.0});
  const auto w = sample_gaussian_cagos(nu, 16, 3);
  const auto path = to_increment_path(w);
  CHECK(path.breakpoints == nu.freqs());
  CHECK(max_abs(path.value_at(nu.freq(0) - 1e-6)) == 0.0);
  CHECK(max_abs(path.value_at(nu.freq(2) - 1e-6) - path.cumulative[1]) == 0.0);
  CHECK(max_abs(path.value_at(std::numbers::pi) - path.cumulative.back()) == 0.0);

  const auto back = from_increment_path(path, nu);
  const auto again = to_increment_path(back);
  for (std::size_t j = 0; j < nu.size(); ++j) {
    CHECK((again.cumulative[j].array() == path.cumulative[j].array()).all());
    CHECK(max_abs(back.sample(j) - w.sample(j)) <= 4.0 * 0x1.0p-52 * max_abs(path.cumulative[j]));
  }

  const auto other = random::povm(rng, {2, 6, 0.0, 0.0});
  CHECK(test::thrown_kind([&] { (void)from_increment_path(path, other); }) == ErrorKind::alignment);
}

TEST_CASE("sampling examples") {
  const AtomicTracePovm nu(2, {{-1.0, diag({0, 0})}, {1.0, diag({1, 1})}});
  const auto w = sample_gaussian_cagos(nu, 100, 4);
  CHECK(max_abs(w.sample(0)) == 0.0);

  constexpr Eigen::Index r = 100'000;
  const AtomicTracePovm scalar(1, {{0.0, diag({1})}});
  const auto s = sample_gaussian_cagos(scalar, r, 5);
  CHECK(std::abs(empirical_gramian(s.sample(0), s.sample(0))(0, 0) - 1.0) < 5.0 / std::sqrt(double(r)));

  const AtomicTracePovm two(2, {{-1.0, diag({1, 2})}, {1.0, diag({3, 1})}});
  const auto t = sample_gaussian_cagos(two, r, 6);
  CHECK(max_abs(empirical_gramian(t.sample(0), t.sample(1))) < 5.0 / std::sqrt(double(r)) * std::sqrt(3.0 * 4.0));
}

TEST_CASE("stochastic integral examples") {
  random::Engine rng(7);
  const auto nu = random::povm(rng, {3, 4, 0.3, 0.0});
  const auto w = sample_gaussian_cagos(nu, 5, 1);
  const Operator p = random::gaussian_operator(rng, 2, 3);
  CHECK(max_abs(cagos_integral(TransferFunction::indicator(nu.freqs(), 1, p), w) - p * w.sample(1)) == 0.0);
  CHECK(max_abs(cagos_integral(TransferFunction::zero(nu.freqs(), 2, 3), w)) == 0.0);

  constexpr Eigen::Index r = 50'000;
  const auto big = sample_gaussian_cagos(nu, r, 2);
  const auto phi = random::transfer(rng, nu.freqs(), 2, 3);
  const Operator u = cagos_integral(phi, big);
  const Operator g = gramian_inner(phi, phi, nu);
  CHECK(max_abs(empirical_gramian(u, u) - g) < 5.0 / std::sqrt(double(r)) * g.trace().real());
}

TEST_CASE("synthesis examples") {
  const double pi = std::numbers::pi;
  const AtomicTracePovm at_zero(2, {{0.0, diag({1, 1})}});
  const auto w0 = sample_gaussian_cagos(at_zero, 3, 1);
  const auto x0 = synthesize_process(w0, 5);
  for (int t = 0; t < 5; ++t) CHECK(max_abs(x0.at(t) - w0.sample(0)) == 0.0);

  const AtomicTracePovm at_pi(2, {{pi, diag({1, 1})}});
  const auto wp = sample_gaussian_cagos(at_pi, 3, 1);
  const auto xp = synthesize_process(wp, 5);
  for (int t = 0; t < 5; ++t) CHECK(max_abs(xp.at(t) - (t % 2 == 0 ? 1.0 : -1.0) * wp.sample(0)) < 1e-14);
}

TEST_CASE("empirical Gramian tracks the intensity") {
  random::Engine rng(8);
  const auto nu = random::povm(rng, {3, 1, 0.0, 0.0});
  constexpr Eigen::Index r = 50'000;
  const auto w = sample_gaussian_cagos(nu, r, 12);
  CHECK(max_abs(empirical_gramian(w.sample(0), w.sample(0)) - nu.weight(0)) < 5.0 / std::sqrt(double(r)) * nu.mass(0));
}

TEST_CASE("increment path of a single atom is a step") {
  const AtomicTracePovm nu(2, {{0.4, diag({1, 2})}});
  const auto w = sample_gaussian_cagos(nu, 4, 1);
  const auto path = to_increment_path(w);
  CHECK(max_abs(path.value_at(0.39)) == 0.0);
  CHECK(max_abs(path.value_at(0.4) - w.sample(0)) == 0.0);
  CHECK(max_abs(path.value_at(3.0) - w.sample(0)) == 0.0);
}
