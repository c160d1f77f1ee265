#pragma once

// Bistatic radar equation, thermal noise and the received echo strength
// indicator (RESI) used as the detection statistic.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace earq {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kReferenceTemperature = 290.0;  // K
inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kResiFloorDb = -300.0;

struct LinkParams {
  double tx_power_w = 1e-4;
  double bandwidth_hz = 15e3;
  double noise_figure_db = 6.0;
  double rcs_m2 = 1.0;
  double carrier_hz = 24e9;

  void validate() const {
    if (!(tx_power_w > 0)) throw std::invalid_argument("link.tx_power_w must be > 0");
    if (!(bandwidth_hz > 0)) throw std::invalid_argument("link.bandwidth_hz must be > 0");
    if (!(noise_figure_db >= 0)) throw std::invalid_argument("link.noise_figure_db must be >= 0");
    if (!(rcs_m2 > 0)) throw std::invalid_argument("link.rcs_m2 must be > 0");
    if (!(carrier_hz > 0)) throw std::invalid_argument("link.carrier_hz must be > 0");
  }
};

template <typename Scalar>
Scalar db_to_linear(Scalar db) {
  return std::pow(Scalar(10), db / Scalar(10));
}

template <typename Scalar>
Scalar wavelength(Scalar carrier_hz) {
  return Scalar(kSpeedOfLight) / carrier_hz;
}

/// kT0 B F.
template <typename Scalar>
Scalar noise_power(Scalar bandwidth_hz, Scalar noise_figure_db) {
  if (!(bandwidth_hz > 0)) throw std::invalid_argument("noise_power: bandwidth must be > 0");
  return Scalar(kBoltzmann) * Scalar(kReferenceTemperature) * bandwidth_hz * db_to_linear(noise_figure_db);
}

/// P_t G_t G_r lambda^2 sigma / ((4 pi)^3 r_tx^2 r_rx^2).
inline double bistatic_echo_power(const LinkParams& params, double gain_tx, double gain_rx, double r_tx,
                                  double r_rx) {
  if (!(r_tx > 0) || !(r_rx > 0)) throw std::invalid_argument("bistatic_echo_power: ranges must be > 0");
  if (gain_tx < 0 || gain_rx < 0) throw std::invalid_argument("bistatic_echo_power: gains must be >= 0");
  const double lambda = wavelength(params.carrier_hz);
  const double four_pi = 4.0 * std::numbers::pi;
  return params.tx_power_w * gain_tx * gain_rx * lambda * lambda * params.rcs_m2 /
         (four_pi * four_pi * four_pi * r_tx * r_tx * r_rx * r_rx);
}

/// Echo-to-noise ratio in dB, floored at kResiFloorDb.
template <typename Scalar>
Scalar resi(Scalar echo_power_w, Scalar noise_power_w) {
  if (!(noise_power_w > 0)) throw std::invalid_argument("resi: noise power must be > 0");
  if (echo_power_w < 0) throw std::invalid_argument("resi: echo power must be >= 0");
  if (echo_power_w == 0) return Scalar(kResiFloorDb);
  return std::max(Scalar(kResiFloorDb), Scalar(10) * std::log10(echo_power_w / noise_power_w));
}

/// Free-space SNR at an isotropic UE.
inline double ue_snr(const LinkParams& params, double gain_tx_toward_ue, double distance_m) {
  if (!(distance_m > 0)) throw std::invalid_argument("ue_snr: distance must be > 0");
  const double lambda = wavelength(params.carrier_hz);
  const double spread = 4.0 * std::numbers::pi * distance_m;
  const double rx = params.tx_power_w * gain_tx_toward_ue * lambda * lambda / (spread * spread);
  return resi(rx, noise_power(params.bandwidth_hz, params.noise_figure_db));
}

}  // namespace earq
