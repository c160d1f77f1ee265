#include "doctest.h"

#include "earq/link_budget.hpp"
#include "oracles.hpp"

#include <stdexcept>
#include <random>

using namespace earq;

TEST_CASE("noise_power") {
  CHECK(noise_power(15e3, 6.0) == doctest::Approx(oracle::kNoise15kHz6dB).epsilon(1e-12));
  CHECK(std::abs(noise_power(15e3, 6.0) - 2.39e-16) / 2.39e-16 < 0.01);
  CHECK(std::abs(noise_power(1.0, 0.0) - 4.004e-21) / 4.004e-21 < 0.001);
  CHECK_THROWS_AS(noise_power(0.0, 6.0), std::invalid_argument);
  CHECK_THROWS_AS(noise_power(-5.0, 6.0), std::invalid_argument);
}

TEST_CASE("bistatic_echo_power") {
  const LinkParams link{1e-4, 15e3, 6.0, 1.0, 24e9};
  const double p = bistatic_echo_power(link, 16, 16, 40, 40);
  CHECK(p == doctest::Approx(oracle::kEcho40m).epsilon(1e-12));
  CHECK(std::abs(p - 7.87e-16) / 7.87e-16 < 0.01);
  CHECK(bistatic_echo_power(link, 0, 16, 40, 40) == 0.0);
  CHECK(bistatic_echo_power(link, 16, 16, 80, 80) == doctest::Approx(p / 16).epsilon(1e-14));
  CHECK(bistatic_echo_power(link, 16, 16, 25, 70) == doctest::Approx(bistatic_echo_power(link, 16, 16, 70, 25)));
  CHECK_THROWS_AS(bistatic_echo_power(link, 16, 16, 0, 40), std::invalid_argument);
  CHECK_THROWS_AS(bistatic_echo_power(link, -1, 16, 40, 40), std::invalid_argument);
}

TEST_CASE("resi") {
  CHECK(resi(oracle::kEcho40m, oracle::kNoise15kHz6dB) == doctest::Approx(oracle::kResi40m).epsilon(1e-12));
  CHECK(std::abs(resi(7.87e-16, 2.39e-16) - 5.17) < 0.1);
  CHECK(resi(3e-16, 3e-16) == 0.0);
  CHECK(resi(0.0, 1e-16) == kResiFloorDb);
  CHECK(resi(1e-320, 1.0) == kResiFloorDb);
  CHECK_THROWS_AS(resi(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(resi(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("ue_snr") {
  const LinkParams link{1e-4, 15e3, 6.0, 1.0, 24e9};
  const double snr = ue_snr(link, 16, 40);
  CHECK(snr == doctest::Approx(oracle::kUeSnr40m).epsilon(1e-12));
  CHECK(ue_snr(link, 64, 40) - snr == doctest::Approx(10 * std::log10(4.0)).epsilon(1e-12));
  CHECK(snr - ue_snr(link, 16, 80) == doctest::Approx(10 * std::log10(4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(ue_snr(link, 16, 0), std::invalid_argument);
}

TEST_CASE("RESI monotonicity, scaling and dB antisymmetry") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int i = 0; i < 500; ++i) {
    LinkParams base{1e-4 * u(rng), 15e3, 6.0 * u(rng), u(rng), 24e9};
    const double gt = 8 * u(rng), gr = 8 * u(rng), rt = 30 * u(rng), rr = 30 * u(rng);
    const double ref = resi(bistatic_echo_power(base, gt, gr, rt, rr), noise_power(base.bandwidth_hz, base.noise_figure_db));
    auto at = [&](LinkParams l, double a, double b, double c, double d) {
      return resi(bistatic_echo_power(l, a, b, c, d), noise_power(l.bandwidth_hz, l.noise_figure_db));
    };
    LinkParams louder = base;
    louder.tx_power_w *= 1.1;
    CHECK(at(louder, gt, gr, rt, rr) > ref);
    LinkParams bigger = base;
    bigger.rcs_m2 *= 1.1;
    CHECK(at(bigger, gt, gr, rt, rr) > ref);
    LinkParams noisier = base;
    noisier.noise_figure_db += 0.5;
    CHECK(at(noisier, gt, gr, rt, rr) < ref);
    CHECK(at(base, gt * 1.1, gr, rt, rr) > ref);
    CHECK(at(base, gt, gr * 1.1, rt, rr) > ref);
    CHECK(at(base, gt, gr, rt * 1.1, rr) < ref);
    CHECK(at(base, gt, gr, rt, rr * 1.1) < ref);
    LinkParams tenfold = base;
    tenfold.tx_power_w *= 10;
    CHECK(at(tenfold, gt, gr, rt, rr) - ref == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(ue_snr(tenfold, gt, rt) - ue_snr(base, gt, rt) == doctest::Approx(10.0).epsilon(1e-9));

    const double a = u(rng) * 1e-15, b = u(rng) * 1e-16;
    CHECK(std::abs(resi(a, b) + resi(b, a)) < 1e-9);
  }
}
