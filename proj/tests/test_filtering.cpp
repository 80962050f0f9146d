#include <doctest.h>

#include "fspec/cagos.hpp"
#include "fspec/filtering.hpp"
#include "fspec/random.hpp"
#include "fspec/spectral.hpp"
#include "helpers.hpp"

using namespace fspec;
using test::diag;
using test::max_abs;

TEST_CASE("filtered samples and pushforward intensity") {
  random::Engine rng(1);
  const auto nu = random::povm(rng, {3, 4, 0.3, 0.2});
  const auto phi = random::transfer(rng, nu.freqs(), 2, 3);
  const auto w = sample_gaussian_cagos(nu, 5, 9);
  const auto y = apply_filter(phi, w);
  const auto pushed = pushforward_povm(phi, nu);
  for (std::size_t j = 0; j < nu.size(); ++j) {
    CHECK(max_abs(y.sample(j) - phi.op(j) * w.sample(j)) == 0.0);
    CHECK(max_abs(pushed.weight(j) - phi.op(j) * nu.weight(j) * phi.op(j).adjoint()) <
          1e-13 * std::max(1.0, nu.mass(j)) * std::pow(operator_norm(phi.op(j)), 2));
    CHECK(max_abs(y.intensity().weight(j) - pushed.weight(j)) == 0.0);
  }
}

TEST_CASE("filterability checks alignment and domains") {
  const AtomicTracePovm nu(2, {{-1.0, diag({1, 1})}, {1.0, diag({1, 0})}});
  CHECK(test::thrown_kind([&] { (void)check_filterable(TransferFunction::identity({-1.0, 2.0}, 2), nu); }) ==
        ErrorKind::alignment);
  const TransferFunction partial({-1.0, 1.0}, {diag({1, 1}), diag({1, 1})}, {std::nullopt, Operator(diag({1, 0}))});
  CHECK(check_filterable(partial, nu).ok);
  const TransferFunction wrong({-1.0, 1.0}, {diag({1, 1}), diag({1, 1})}, {Operator(diag({0, 1})), std::nullopt});
  CHECK_FALSE(check_filterable(wrong, nu).ok);
  CHECK(test::thrown_kind([&] { (void)pushforward_povm(wrong, nu); }) == ErrorKind::domain);
}

TEST_CASE("composition multiplies operators and restricts partial domains") {
  const std::vector<double> freqs{0.0};
  const TransferFunction phi(freqs, {diag({1, 2})});
  // Ψ defined only on span{e₀}: ΨΦ is defined on Φ⁻¹(span{e₀}) = span{e₀}.
  const TransferFunction psi(freqs, {diag({3, 3})}, {Operator(diag({1, 0}))});
  const auto c = compose_transfer(psi, phi);
  CHECK(max_abs(c.op(0) - diag({3, 6})) == 0.0);
  REQUIRE(c.is_partial(0));
  CHECK(max_abs(c.domain(0) - diag({1, 0})) < 1e-14);

  CHECK(test::thrown_kind([&] { (void)compose_transfer(TransferFunction::identity(freqs, 3), phi); }) ==
        ErrorKind::dimension);
  CHECK(test::thrown_kind([&] { (void)compose_transfer(TransferFunction::identity({1.0}, 2), phi); }) ==
        ErrorKind::alignment);
}

TEST_CASE("inversion on the support") {
  random::Engine rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto nu = random::povm(rng, {3, 4, 0.5, 0.2});
    std::vector<Operator> ops;
    for (std::size_t j = 0; j < nu.size(); ++j) ops.push_back(random::conditioned_operator(rng, 4, 3, 50.0));
    const TransferFunction phi(nu.freqs(), std::move(ops));
    const auto inv = invert_transfer(phi, nu);
    const auto w = sample_gaussian_cagos(nu, 6, 3);
    const auto back = apply_filter(inv, apply_filter(phi, w));
    for (std::size_t j = 0; j < nu.size(); ++j) {
      CHECK(max_abs(back.sample(j) - w.sample(j)) <= 1e-10 * std::max(1.0, max_abs(w.sample(j))));
      if (nu.is_null(j)) CHECK(max_abs(inv.op(j)) == 0.0);
    }
  }
}

TEST_CASE("strict and on-support injectivity differ on a rank-deficient operator") {
  // Φ kills e₁; the measure lives on e₀.
  const AtomicTracePovm nu(2, {{0.5, diag({2, 0})}});
  const TransferFunction phi({0.5}, {diag({3, 0})});
  const auto inv = invert_transfer(phi, nu, 1e-10, Injectivity::on_support);
  CHECK(max_abs(inv.op(0) - diag({1.0 / 3.0, 0})) < 1e-15);
  REQUIRE(inv.is_partial(0));
  CHECK(max_abs(inv.domain(0) - diag({1, 0})) < 1e-15);
  try {
    (void)invert_transfer(phi, nu, 1e-10, Injectivity::strict);
    FAIL("strict inversion accepted a singular operator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_invertible);
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
  // On a measure that charges the kernel, both modes refuse.
  const AtomicTracePovm full(2, {{0.5, diag({1, 1})}});
  CHECK(test::thrown_kind([&] { (void)invert_transfer(phi, full); }) == ErrorKind::not_invertible);
}

TEST_CASE("FIR transfer of a pure delay") {
  FirFilter delay;
  delay.taps.emplace(2, diag({1, 1}));
  const std::vector<double> freqs{-1.0, 0.3, 2.0};
  const auto phi = fir_to_transfer(delay, freqs);
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    CHECK(max_abs(phi.op(j) - std::polar(1.0, -2.0 * freqs[j]) * diag({1, 1})) < 1e-15);
  }
  CHECK(test::thrown_kind([&] { (void)fir_to_transfer(FirFilter{}, freqs); }) == ErrorKind::shape);
}

TEST_CASE("circular convolution shifts a process") {
  random::Engine rng(3);
  const auto nu = random::povm_on(rng, fourier_grid(6), {2, 0, 0.0, 0.0});
  const auto x = synthesize_process(sample_gaussian_cagos(nu, 3, 1), 6);
  FirFilter delay;
  delay.taps.emplace(1, diag({1, 1}));
  const auto y = apply_fir_time(delay, x);
  for (int t = 0; t < 6; ++t) CHECK(max_abs(y.at(t) - x.at((t + 5) % 6)) == 0.0);
}

TEST_CASE("modulation shifts the filtered process in time") {
  random::Engine rng(4);
  const auto nu = random::povm(rng, {2, 5, 0.0, 0.0});
  const auto phi = random::transfer(rng, nu.freqs(), 2, 2);
  const auto w = sample_gaussian_cagos(nu, 4, 2);
  const auto y = synthesize_process(apply_filter(phi, w), 10);
  const auto shifted = synthesize_process(apply_filter(modulate_transfer(phi, 3), w), 10);
  for (int t = 0; t + 3 < 10; ++t) CHECK(max_abs(shifted.at(t) - y.at(t + 3)) < 1e-12 * max_abs(y.at(t + 3)) + 1e-14);
}

TEST_CASE("filterability examples for inverses") {
  random::Engine rng(10);
  const auto nu = random::povm(rng, {3, 3, 0.0, 0.0});
  CHECK(check_filterable(random::transfer(rng, nu.freqs(), 2, 3), nu).ok);

  // Rank-deficient Φ: its inverse is only defined on Im Φ, which a full-rank ν escapes
  // but the pushforward ΦνΦᴴ does not.
  std::vector<Operator> ops;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    ops.push_back(random::gaussian_operator(rng, 3, 2) * random::gaussian_operator(rng, 2, 3));
  }
  const TransferFunction phi(nu.freqs(), ops);
  std::vector<Operator> inverses;
  std::vector<std::optional<Operator>> domains;
  for (const auto& op : ops) {
    const auto pi = pinv_on_range(op, 1e-10);
    inverses.push_back(pi.inverse);
    domains.push_back(pi.range_projector);
  }
  const TransferFunction inverse(nu.freqs(), inverses, domains);
  CHECK_FALSE(check_filterable(inverse, nu).ok);
  CHECK(check_filterable(inverse, pushforward_povm(phi, nu)).ok);
}

TEST_CASE("filter examples") {
  random::Engine rng(11);
  const auto nu = random::povm(rng, {3, 4, 0.3, 0.0});
  const auto w = sample_gaussian_cagos(nu, 5, 2);
  const auto same = apply_filter(TransferFunction::identity(nu.freqs(), 3), w);
  const auto picked = apply_filter(TransferFunction::indicator(nu.freqs(), 2, Operator::Identity(3, 3)), w);
  for (std::size_t j = 0; j < nu.size(); ++j) {
    CHECK(max_abs(same.sample(j) - w.sample(j)) == 0.0);
    CHECK(max_abs(picked.sample(j) - (j == 2 ? w.sample(j) : Operator(Operator::Zero(3, 5)))) == 0.0);
  }
}

TEST_CASE("pushforward examples") {
  random::Engine rng(12);
  const auto nu = random::povm(rng, {3, 4, 0.3, 0.2});
  const auto same = pushforward_povm(TransferFunction::identity(nu.freqs(), 3), nu);
  std::vector<Operator> unitaries;
  for (std::size_t j = 0; j < nu.size(); ++j) unitaries.push_back(random::haar_frame(rng, 3, 3));
  const auto rotated = pushforward_povm(TransferFunction(nu.freqs(), unitaries), nu);
  const auto phi = random::transfer(rng, nu.freqs(), 2, 3);
  const auto pushed = pushforward_povm(phi, nu);
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const double tol = 1e-13 * std::max(1.0, nu.mass(j));
    CHECK(max_abs(same.weight(j) - nu.weight(j)) < tol);
    CHECK(max_abs(rotated.weight(j) - unitaries[j] * nu.weight(j) * unitaries[j].adjoint()) < tol);
    CHECK(rotated.mass(j) == doctest::Approx(nu.mass(j)).epsilon(1e-12));
    CHECK(pushed.mass(j) == doctest::Approx((phi.op(j) * nu.sqrt_weight(j)).squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("composition with the identity") {
  random::Engine rng(13);
  const auto phi = random::transfer(rng, {-1.0, 0.5}, 2, 3);
  const auto c = compose_transfer(TransferFunction::identity(phi.freqs(), 2), phi);
  for (std::size_t j = 0; j < 2; ++j) CHECK(max_abs(c.op(j) - phi.op(j)) == 0.0);
  CHECK(c.is_total());
}

TEST_CASE("inverse of a unitary filter is its adjoint") {
  random::Engine rng(14);
  const auto nu = random::povm(rng, {3, 3, 0.0, 0.0});
  std::vector<Operator> unitaries;
  for (std::size_t j = 0; j < nu.size(); ++j) unitaries.push_back(random::haar_frame(rng, 3, 3));
  const auto inv = invert_transfer(TransferFunction(nu.freqs(), unitaries), nu);
  for (std::size_t j = 0; j < nu.size(); ++j) CHECK(max_abs(inv.op(j) - unitaries[j].adjoint()) < 1e-13);
}

TEST_CASE("FIR examples") {
  const std::vector<double> freqs{-2.0, 0.0, std::numbers::pi};
  const Operator p = diag({2, 3});
  FirFilter single;
  single.taps.emplace(0, p);
  const auto constant = fir_to_transfer(single, freqs);
  for (std::size_t j = 0; j < freqs.size(); ++j) CHECK(max_abs(constant.op(j) - p) == 0.0);

  FirFilter average;
  average.taps.emplace(0, 0.5 * diag({1, 1}));
  average.taps.emplace(1, 0.5 * diag({1, 1}));
  CHECK(max_abs(fir_to_transfer(average, freqs).op(2)) < 1e-15);

  random::Engine rng(15);
  const auto nu = random::povm_on(rng, fourier_grid(5), {2, 0, 0.0, 0.0});
  const auto x = synthesize_process(sample_gaussian_cagos(nu, 2, 1), 5);
  FirFilter identity;
  identity.taps.emplace(0, diag({1, 1}));
  const auto y = apply_fir_time(identity, x);
  for (int t = 0; t < 5; ++t) CHECK(max_abs(y.at(t) - x.at(t)) == 0.0);
}

TEST_CASE("modulation examples") {
  random::Engine rng(16);
  const auto phi = random::transfer(rng, {-2.0, 0.3, 1.0}, 2, 2);
  const auto none = modulate_transfer(phi, 0);
  const auto there_and_back = modulate_transfer(modulate_transfer(phi, 4), -4);
  for (std::size_t j = 0; j < phi.size(); ++j) {
    CHECK(max_abs(none.op(j) - phi.op(j)) == 0.0);
    // e^{iλh} e^{−iλh} is one only up to rounding of the two phase factors.
    CHECK(max_abs(there_and_back.op(j) - phi.op(j)) <= 4.0 * 0x1.0p-52 * max_abs(phi.op(j)));
  }
}
