#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hgcs/errors.hpp"
#include "hgcs/states.hpp"
#include "oracles.hpp"

using namespace hgcs;
using oracle::rel_err;

namespace {

double l2_distance(const FockAmplitudes& u, const FockAmplitudes& v) {
  double s = 0.0;
  for (std::size_t n = 0; n < u.amplitudes.size(); ++n) s += std::norm(u.amplitudes[n] - v.amplitudes[n]);
  return std::sqrt(s);
}

double mass(const FockAmplitudes& f) {
  double s = 0.0;
  for (const auto& c : f.amplitudes) s += std::norm(c);
  return s;
}

}  // namespace

TEST_CASE("rho") {
  CHECK(rho(ParamSet({1.7, 0.3}, {2.5}), 0) == 1.0);
  CHECK(rel_err(rho(ParamSet{}, 5), 120.0) <= 1e-14);
  CHECK(rel_err(rho(ParamSet({2.0}, {}), 3), 6.0 / (2.0 * 3.0 * 4.0)) <= 1e-14);
  const ParamSet ps({1.25, 0.5}, {3.5});
  for (int n = 0; n <= 30; ++n) {
    const long double want = oracle::factorial(n) * oracle::pochhammer(3.5, n) /
                             (oracle::pochhammer(1.25, n) * oracle::pochhammer(0.5, n));
    CHECK(rel_err(rho(ps, n), static_cast<double>(want)) <= 1e-12);
  }
  CHECK_THROWS_AS(rho(ParamSet{}, 400), OverflowError);
}

TEST_CASE("state construction enforces the domain") {
  CHECK_THROWS_AS(StateSpec::from_x(ParamSet({1.5}, {}), Parity::even, 1.0), DomainError);
  CHECK_THROWS_AS(StateSpec::from_x(ParamSet({1.5, 2.0}, {}), Parity::even, 0.2), DomainError);
  CHECK_NOTHROW(StateSpec::from_x(ParamSet({1.5, 2.0}, {}), Parity::even, 0.0));
  CHECK_THROWS_AS(StateSpec(ParamSet{}, Parity::odd, {0.0, 0.0}), DomainError);
  CHECK_NOTHROW(StateSpec::from_x(ParamSet({1.5}, {}), Parity::odd, 0.99));
}

TEST_CASE("fock amplitudes") {
  SUBCASE("vacuum") {
    const auto f = fock_amplitudes(StateSpec(ParamSet({2.0}, {1.0}), Parity::full, {0.0, 0.0}), 10);
    CHECK(f.amplitudes[0] == std::complex<double>(1.0, 0.0));
    for (int n = 1; n <= 10; ++n) CHECK(f.amplitudes[n] == std::complex<double>(0.0, 0.0));
  }
  SUBCASE("even coherent state") {
    const auto f = fock_amplitudes(StateSpec(ParamSet{}, Parity::even, {1.0, 0.0}), 30);
    for (int n = 0; 2 * n <= 30; ++n) {
      CHECK(rel_err(std::norm(f.amplitudes[2 * n]),
                    static_cast<double>(1.0L / (oracle::factorial(2 * n) * std::cosh(1.0L)))) <= 1e-13);
    }
  }
  SUBCASE("odd state normalization converges") {
    const StateSpec s(ParamSet({1.3}, {}), Parity::odd, {0.5, 0.0});
    double previous_gap = 1.0;
    for (int n_max : {3, 7, 15, 31, 63}) {
      const auto f = fock_amplitudes(s, n_max);
      const double gap = 1.0 - mass(f);
      CHECK(gap <= previous_gap);
      CHECK(gap <= f.tail_mass_bound + 1e-15);
      previous_gap = gap;
    }
    CHECK(previous_gap < 1e-13);
  }
  SUBCASE("default truncation certifies the tail") {
    const StateSpec s(ParamSet({0.8}, {2.0}), Parity::full, std::polar(2.0, 0.7));
    const auto f = fock_amplitudes(s);
    CHECK(f.n_max == default_truncation(s));
    CHECK(f.tail_mass_bound < 1e-13);
    CHECK(std::fabs(mass(f) - 1.0) < 1e-13);
  }
}

TEST_CASE("parity selection and normalization invariants on random states") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> param(0.3, 3.0), phase(-3.0, 3.0), unit(0.05, 0.95), wide(0.05, 3.0);
  const int shapes[][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 1}};
  for (int draw = 0; draw < 100; ++draw) {
    const auto [p, q] = shapes[draw % 5];
    std::vector<double> a(p), b(q);
    for (auto& v : a) v = param(rng);
    for (auto& v : b) v = param(rng);
    const double r = p == q + 1 ? std::sqrt(unit(rng)) : wide(rng);
    const Parity parity = draw % 3 == 0 ? Parity::full : (draw % 3 == 1 ? Parity::even : Parity::odd);
    const StateSpec s(ParamSet(a, b), parity, std::polar(r, phase(rng)));
    const auto f = fock_amplitudes(s);
    const double m = mass(f);
    INFO(s.params().to_string(), " x=", s.x(), " m-1=", m - 1.0, " tail=", f.tail_mass_bound, " n=", f.n_max);
    CHECK(m <= 1.0 + 1e-13);
    CHECK(m + f.tail_mass_bound >= 1.0 - 1e-13);
    for (int n = 0; n <= f.n_max; ++n) {
      if (parity == Parity::even && n % 2 == 1) CHECK(f.amplitudes[n] == std::complex<double>(0, 0));
      if (parity == Parity::odd && n % 2 == 0) CHECK(f.amplitudes[n] == std::complex<double>(0, 0));
    }
  }
}

TEST_CASE("label continuity") {
  const ParamSet ps({1.4}, {2.2});
  for (const auto z0 : {std::complex<double>(0.3, 0.1), std::complex<double>(-1.0, 0.5), std::complex<double>(0.0, 2.0)}) {
    for (Parity parity : {Parity::even, Parity::odd}) {
      const auto base = fock_amplitudes(StateSpec(ps, parity, z0), 80);
      double previous = 1.0;
      for (double delta : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const auto moved = fock_amplitudes(StateSpec(ps, parity, z0 + std::complex<double>(delta, -delta)), 80);
        const double d = l2_distance(base, moved);
        CHECK(d < 10.0 * delta);  // Lipschitz on this grid
        CHECK(d < previous);
        previous = d;
      }
    }
  }
}

TEST_CASE("photon distribution") {
  const ParamSet any({1.2}, {0.7});
  const auto even = StateSpec::from_x(any, Parity::even, 0.8);
  for (int n = 1; n < 20; n += 2) CHECK(photon_distribution(even, n) == 0.0);
  CHECK(rel_err(photon_distribution(StateSpec::from_x(ParamSet{}, Parity::even, 1.0), 0), 1.0 / std::cosh(1.0)) <= 1e-14);

  const auto full = StateSpec::from_x(ParamSet({1.4}, {2.2}), Parity::full, 0.6);
  double sum = 0.0;
  for (int n = 0; n <= 60; ++n) sum += photon_distribution(full, n);
  const auto f = fock_amplitudes(full, 60);
  CHECK(std::fabs(sum - 1.0) <= f.tail_mass_bound + 1e-14);
  CHECK(std::fabs(sum - 1.0) <= 1e-13);
  CHECK_THROWS_AS(photon_distribution(full, -1), ParameterError);
}

TEST_CASE("overlap") {
  const ParamSet ps({1.5}, {});
  const StateSpec e(ps, Parity::even, {0.4, 0.3});
  const StateSpec o(ps, Parity::odd, {0.4, 0.3});
  CHECK(overlap(e, o, 50).value == std::complex<double>(0.0, 0.0));
  CHECK(overlap(o, e, 50).value == std::complex<double>(0.0, 0.0));
  for (const auto& s : {e, o}) {
    const auto r = overlap(s, s, 200);
    CHECK(std::fabs(r.value.real() - 1.0) <= r.tail_bound + 1e-14);
    CHECK(std::fabs(r.value.imag()) <= 1e-15);
  }
  // ⟨z|-z⟩ for the canonical coherent state, summed coefficient by coefficient.
  const double z = 1.1, x = z * z;
  long double direct = 0.0L, power = 1.0L;
  for (int n = 0; n < 120; ++n) {
    direct += (n % 2 ? -power : power);
    power *= x / (n + 1);
  }
  direct /= std::exp(static_cast<long double>(x));
  const auto r = overlap(StateSpec(ParamSet{}, Parity::full, {z, 0.0}), StateSpec(ParamSet{}, Parity::full, {-z, 0.0}), 120);
  CHECK(rel_err(r.value.real(), static_cast<double>(direct)) <= 1e-12);
  CHECK(rel_err(r.value.real(), std::exp(-2 * x)) <= 1e-12);
  CHECK_THROWS_AS(overlap(e, StateSpec(ParamSet({1.6}, {}), Parity::even, {0.4, 0.3}), 10), ParameterError);
}

TEST_CASE("annihilation maps even and odd states into each other") {
  for (Parity parity : {Parity::even, Parity::odd}) {
    const StateSpec s(ParamSet({1.5}, {}), parity, std::polar(std::sqrt(0.3), 0.9));
    const auto [pref, image] = annihilate(s);
    REQUIRE(image.has_value());
    CHECK(image->parity() == (parity == Parity::even ? Parity::odd : Parity::even));
    CHECK(image->params() == ParamSet({2.5}, {}));
    const auto c = fock_amplitudes(s, 41);
    const auto d = fock_amplitudes(*image, 40);
    double err = 0.0;
    for (int n = 0; n <= 40; ++n) err += std::norm(std::sqrt(n + 1.0) * c.amplitudes[n + 1] - pref * d.amplitudes[n]);
    CHECK(std::sqrt(err) <= 1e-12);
    const auto dd = fock_amplitudes(*image, 400);
    CHECK(std::fabs(mass(dd) - 1.0) <= dd.tail_mass_bound + 1e-14);
  }
  const auto at_zero = annihilate(StateSpec(ParamSet({1.5}, {}), Parity::even, {0.0, 0.0}));
  CHECK(at_zero.prefactor == std::complex<double>(0.0, 0.0));
  CHECK_FALSE(at_zero.image.has_value());
  CHECK_THROWS_AS(annihilate(StateSpec(ParamSet{}, Parity::full, {0.5, 0.0})), ParityError);
}
