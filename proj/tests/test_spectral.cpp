#include <doctest.h>

#include <numbers>

#include "fspec/cagos.hpp"
#include "fspec/random.hpp"
#include "fspec/spectral.hpp"
#include "helpers.hpp"

using namespace fspec;
using test::diag;
using test::max_abs;

TEST_CASE("single atom gives a pure harmonic autocovariance") {
  const double lambda = 0.7;
  const Operator w = diag({2, 1});
  const AtomicTracePovm nu(2, {{lambda, w}});
  const auto gamma = autocov_from_povm(nu, 5);
  for (int h = -5; h <= 5; ++h) {
    CHECK(max_abs(gamma.at(h) - std::polar(1.0, lambda * h) * w) < 1e-15);
  }
  CHECK(test::thrown_kind([&] { (void)gamma.at(6); }) == ErrorKind::coverage);
}

TEST_CASE("negative lags are adjoints") {
  random::Engine rng(4);
  const auto gamma = autocov_from_povm(random::povm(rng, {3, 6, 0.0, 0.0}), 4);
  for (int h = 1; h <= 4; ++h) CHECK(max_abs(gamma.at(-h) - gamma.at(h).adjoint()) == 0.0);
}

TEST_CASE("Fourier grid") {
  const auto g = fourier_grid(4);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == doctest::Approx(std::numbers::pi));
  CHECK(g[1] == doctest::Approx(-std::numbers::pi / 2));
  CHECK(g[2] == doctest::Approx(0.0));
  CHECK(g[3] == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("grid inversion recovers grid-supported measures for even and odd periods") {
  random::Engine rng(8);
  for (int period : {5, 7, 8, 16}) {
    const auto nu = random::povm_on(rng, fourier_grid(period), {3, 0, 0.3, 0.2});
    // Only lags 0..⌈M/2⌉ are given; the rest come from the grid periodicity.
    const auto gamma = autocov_from_povm(nu, period / 2 + 1);
    const auto rec = povm_from_autocov_grid(gamma, period);
    REQUIRE(rec.size() == nu.size());
    for (std::size_t j = 0; j < nu.size(); ++j) {
      CHECK(rec.freq(j) == doctest::Approx(nu.freq(j)));
      CHECK(max_abs(rec.weight(j) - nu.weight(j)) < 1e-12);
    }
  }
}

TEST_CASE("grid inversion reports missing lags and non-positive atoms") {
  const AutocovarianceSequence short_gamma(1, {diag({1}), diag({0.5})});
  CHECK(test::thrown_kind([&] { (void)povm_from_autocov_grid(short_gamma, 8); }) == ErrorKind::coverage);

  // Γ(0) = I₂, Γ(1) = 1.5·I₂ on M = 2: atom at 0 is 1.25·I₂, atom at π is −0.25·I₂.
  const AutocovarianceSequence bad(2, {diag({1, 1}), diag({1.5, 1.5})});
  try {
    (void)povm_from_autocov_grid(bad, 2);
    FAIL("accepted a sequence that is not of positive type");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_positive_type);
    CHECK(std::string(e.what()).rfind("not-positive-type", 0) == 0);
    CHECK(std::string(e.what()).find("k = 0") != std::string::npos);
  }
}

TEST_CASE("Γ(0) must be positive") {
  CHECK(test::thrown_kind([] { (void)AutocovarianceSequence(1, {diag({-1})}); }) == ErrorKind::not_positive_type);
}

TEST_CASE("positive type: block matrix, vectors and scalar coefficients") {
  random::Engine rng(9);
  const auto gamma = autocov_from_povm(random::povm(rng, {2, 4, 0.3, 0.0}), 10);
  const std::vector<int> times{0, 3, 4, 10};
  const Operator block = autocov_block_matrix(gamma, times);
  CHECK(block.rows() == 8);
  CHECK(max_abs(block.block(2, 0, 2, 2) - gamma.at(3)) == 0.0);
  CHECK(positive_type_check(gamma, times));
  std::vector<Vector> xs;
  std::vector<Complex> a;
  for (int i = 0; i < 4; ++i) {
    xs.push_back(random::gaussian_vector(rng, 2));
    a.push_back(random::gaussian_vector(rng, 1)(0));
  }
  CHECK(positive_type_check(gamma, times, xs));
  CHECK(hermitian_nnd_check(gamma, times, a));

  const AutocovarianceSequence bad(2, {diag({1, 1}), diag({1.5, 1.5})});
  const std::vector<int> pair{0, 1};
  CHECK_FALSE(positive_type_check(bad, pair));
  Vector x(2);
  x << 1.0, 0.0;
  const std::vector<Vector> opposite{x, Vector(-x)};
  CHECK_FALSE(positive_type_check(bad, pair, opposite));
}

TEST_CASE("empirical autocovariance of a simulated process") {
  random::Engine rng(10);
  const auto nu = random::povm(rng, {2, 3, 0.0, 0.0});
  constexpr Eigen::Index r = 40'000;
  const auto x = synthesize_process(sample_gaussian_cagos(nu, r, 77), 12);
  const auto est = empirical_autocov(x, 4);
  const auto exact = autocov_from_povm(nu, 4);
  CHECK(est.standard_error_scale == doctest::Approx(1.0 / std::sqrt(double(r))));
  for (int h = 0; h <= 4; ++h) {
    CHECK(max_abs(est.gamma.at(h) - exact.at(h)) < 5.0 * nu.total_mass() * est.standard_error_scale);
  }
  CHECK(test::thrown_kind([&] { (void)empirical_autocov(x, 12); }) == ErrorKind::coverage);
  const auto single = synthesize_process(sample_gaussian_cagos(nu, 1, 77), 12);
  CHECK(test::thrown_kind([&] { (void)empirical_autocov(single, 2); }) == ErrorKind::sample_size);
}

TEST_CASE("autocovariance examples") {
  random::Engine rng(40);
  const Operator p = random::psd_operator(rng, 2, 2);
  const auto constant = autocov_from_povm(AtomicTracePovm(2, {{0.0, p}}), 6);
  for (int h = 0; h <= 6; ++h) CHECK(max_abs(constant.at(h) - p) < 1e-15);

  const double half_pi = std::numbers::pi / 2;
  const auto cosine = autocov_from_povm(AtomicTracePovm(2, {{-half_pi, 0.5 * p}, {half_pi, 0.5 * p}}), 6);
  for (int h = 0; h <= 6; ++h) CHECK(max_abs(cosine.at(h) - std::cos(half_pi * h) * p) < 1e-15);

  const auto nu = random::povm(rng, {3, 6, 0.3, 0.2});
  CHECK(max_abs(autocov_from_povm(nu, 0).at(0) - nu.total()) < 1e-12 * nu.total_mass());
}

TEST_CASE("grid inversion examples") {
  const Operator p = diag({2, 1});
  const AutocovarianceSequence flat(2, {p, p, p, p});
  const auto rec = povm_from_autocov_grid(flat, 4);
  REQUIRE(rec.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const Operator expected = std::abs(rec.freq(k)) < 1e-12 ? p : Operator(Operator::Zero(2, 2));
    CHECK(max_abs(rec.weight(k) - expected) < 1e-15);
  }

  random::Engine rng(41);
  const auto nu = random::povm_on(rng, fourier_grid(8), {3, 0, 0.3, 0.2});
  const auto back = povm_from_autocov_grid(autocov_from_povm(nu, 7), 8);
  for (std::size_t k = 0; k < 8; ++k) CHECK(max_abs(back.weight(k) - nu.weight(k)) <= 1e-10);

  // |Γ(1)| exceeds Γ(0): rejected although lags 2 and 3 are not given.
  const AutocovarianceSequence bad(2, {diag({1, 1}), diag({2, 2})});
  CHECK(test::thrown_kind([&] { (void)povm_from_autocov_grid(bad, 4); }) == ErrorKind::not_positive_type);
}

TEST_CASE("positive type examples") {
  random::Engine rng(42);
  const auto gamma = autocov_from_povm(random::povm(rng, {2, 5, 0.3, 0.0}), 3);
  const std::vector<int> times{0, 1, 3};
  CHECK(positive_type_check(gamma, times));
  const std::vector<int> one{2};
  CHECK(positive_type_check(gamma, one) == psd_check(gamma.at(0), 1e-10));
  const std::vector<Complex> unit{1.0};
  CHECK(hermitian_nnd_check(gamma, one, unit) == psd_check(gamma.at(0), 1e-10));
  const AutocovarianceSequence bad(2, {diag({1, 1}), diag({1.5, 1.5})});
  const std::vector<int> pair{0, 1};
  const std::vector<Complex> opposite{1.0, -1.0};
  CHECK_FALSE(hermitian_nnd_check(bad, pair, opposite));
  // The block matrix has eigenvalue 1 − 1.5.
  Eigen::SelfAdjointEigenSolver<Operator> solver(autocov_block_matrix(bad, pair));
  CHECK(solver.eigenvalues()(0) == doctest::Approx(-0.5));
}

TEST_CASE("empirical autocovariance examples") {
  ProcessSample zero{2, 6, 3, std::vector<Operator>(6, Operator::Zero(2, 3))};
  const auto e = empirical_autocov(zero, 2);
  for (int h = 0; h <= 2; ++h) CHECK(max_abs(e.gamma.at(h)) == 0.0);

  constexpr Eigen::Index r = 50'000;
  const AtomicTracePovm unit(2, {{0.0, Operator(Operator::Identity(2, 2))}});
  const auto est = empirical_autocov(synthesize_process(sample_gaussian_cagos(unit, r, 3), 6), 3);
  for (int h = 0; h <= 3; ++h) {
    CHECK(max_abs(est.gamma.at(h) - Operator::Identity(2, 2)) < 5.0 / std::sqrt(double(r)));
  }
}
