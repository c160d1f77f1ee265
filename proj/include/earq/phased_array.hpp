#pragma once

// Uniform linear array: array-factor power gain, 3-dB beamwidth and a
// narrow/wide steering codebook laid out on a uniform-in-sine grid.

#include "earq/geometry2d.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace earq {

template <typename Scalar>
struct ArrayConfig {
  int num_elements = 16;
  Scalar spacing_wavelengths = Scalar(0.5);
  Scalar carrier_hz = Scalar(24e9);
  Scalar boresight = Scalar(0);  // array normal, world frame
  Vec2<Scalar> position = Vec2<Scalar>::Zero();

  void validate() const {
    if (num_elements < 1) throw std::invalid_argument("array: num_elements must be >= 1");
    if (!(spacing_wavelengths > 0)) throw std::invalid_argument("array: spacing_wavelengths must be > 0");
    if (!(carrier_hz > 0)) throw std::invalid_argument("array: carrier_hz must be > 0");
    if (!std::isfinite(boresight) || !position.allFinite())
      throw std::invalid_argument("array: boresight/position must be finite");
  }
};

template <typename Scalar>
struct Beam {
  Scalar steer_angle;   // relative to boresight
  int active_elements;  // fewer elements -> wider, weaker beam
};

template <typename Scalar>
struct AngleInterval {
  Scalar min;
  Scalar max;
};

template <typename Scalar>
struct Codebook {
  std::vector<Beam<Scalar>> narrow_beams;
  std::vector<Beam<Scalar>> wide_beams;
  AngleInterval<Scalar> sector;

  std::size_t size() const { return narrow_beams.size() + wide_beams.size(); }
  std::size_t narrow_count() const { return narrow_beams.size(); }
  bool is_wide(std::size_t index) const { return index >= narrow_beams.size(); }

  /// Combined indexing: narrow tier first, then the wide tiers.
  const Beam<Scalar>& beam(std::size_t index) const {
    if (index < narrow_beams.size()) return narrow_beams[index];
    return wide_beams.at(index - narrow_beams.size());
  }
};

/// Uniform-weight array factor |AF|^2 / M; peaks at M when angle == steer.
template <typename Scalar>
Scalar array_gain(const ArrayConfig<Scalar>& config, const Beam<Scalar>& beam, Scalar angle) {
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
  if (std::abs(angle) > half_pi + Scalar(1e-12))
    throw std::invalid_argument("array_gain: angle outside the front half-plane");
  if (beam.active_elements < 1 || beam.active_elements > config.num_elements)
    throw std::invalid_argument("array_gain: active_elements out of range");

  const int m = beam.active_elements;
  const Scalar step = Scalar(2) * std::numbers::pi_v<Scalar> * config.spacing_wavelengths *
                      (std::sin(angle) - std::sin(beam.steer_angle));
  const Eigen::Array<Scalar, Eigen::Dynamic, 1> phase =
      Eigen::Array<Scalar, Eigen::Dynamic, 1>::LinSpaced(m, Scalar(0), Scalar(m - 1)) * step;
  const Scalar re = phase.cos().sum();
  const Scalar im = phase.sin().sum();
  return (re * re + im * im) / Scalar(m);
}

/// Gain toward a world-frame bearing. The back half-plane receives nothing.
template <typename Scalar>
Scalar gain_toward(const ArrayConfig<Scalar>& config, const Beam<Scalar>& beam, Scalar world_angle) {
  const Scalar rel = std::remainder(world_angle - config.boresight, Scalar(2) * std::numbers::pi_v<Scalar>);
  if (std::abs(rel) > std::numbers::pi_v<Scalar> / 2) return Scalar(0);
  return array_gain(config, beam, rel);
}

/// Width of the contiguous half-power region around the steering angle,
/// clipped to the front half-plane.
template <typename Scalar>
Scalar beamwidth_3db(const ArrayConfig<Scalar>& config, const Beam<Scalar>& beam) {
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
  const Scalar half_power = Scalar(beam.active_elements) / Scalar(2);
  auto above = [&](Scalar a) { return array_gain(config, beam, a) >= half_power; };

  auto edge = [&](Scalar direction) {
    constexpr Scalar coarse = Scalar(1e-3);
    Scalar inside = beam.steer_angle;
    for (;;) {
      Scalar next = inside + direction * coarse;
      if (direction * next >= half_pi) {
        const Scalar limit = direction * half_pi;
        if (above(limit)) return limit;
        next = limit;
      }
      if (!above(next)) {
        Scalar outside = next;
        while (std::abs(outside - inside) > Scalar(1e-9)) {
          const Scalar mid = (inside + outside) / 2;
          (above(mid) ? inside : outside) = mid;
        }
        return (inside + outside) / 2;
      }
      inside = next;
    }
  };
  return edge(Scalar(1)) - edge(Scalar(-1));
}

/// Steering angles whose sines sit at the cell centres of `count` equal cells
/// spanning [sin(min), sin(max)].
template <typename Scalar>
std::vector<Scalar> sine_grid(const AngleInterval<Scalar>& sector, std::size_t count) {
  const Scalar lo = std::sin(sector.min), hi = std::sin(sector.max);
  const Scalar cell = (hi - lo) / Scalar(count);
  std::vector<Scalar> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::asin(lo + (Scalar(i) + Scalar(0.5)) * cell);
  return out;
}

template <typename Scalar>
Codebook<Scalar> make_codebook(const ArrayConfig<Scalar>& config, const AngleInterval<Scalar>& sector,
                               std::size_t n_narrow, const std::vector<int>& wide_element_counts) {
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
  config.validate();
  if (n_narrow < 1) throw std::invalid_argument("make_codebook: n_narrow must be >= 1");
  if (!(sector.max > sector.min)) throw std::invalid_argument("make_codebook: empty sector");
  if (sector.min <= -half_pi || sector.max >= half_pi)
    throw std::invalid_argument("make_codebook: sector exceeds +/- pi/2 from boresight");

  Codebook<Scalar> book;
  book.sector = sector;
  for (Scalar a : sine_grid(sector, n_narrow)) book.narrow_beams.push_back({a, config.num_elements});

  const Scalar span = std::sin(sector.max) - std::sin(sector.min);
  for (int m : wide_element_counts) {
    if (m < 1 || m > config.num_elements)
      throw std::invalid_argument("make_codebook: wide element count out of range");
    // Broadside half-power width in sine space is constant across steering,
    // so this count keeps the wide tier gap-free.
    const Scalar width = beamwidth_3db(config, Beam<Scalar>{Scalar(0), m});
    const Scalar sine_width = Scalar(2) * std::sin(std::min(width, std::numbers::pi_v<Scalar>) / 2);
    const auto count = static_cast<std::size_t>(std::max(Scalar(1), std::ceil(span / sine_width - Scalar(1e-9))));
    for (Scalar a : sine_grid(sector, count)) book.wide_beams.push_back({a, m});
  }
  return book;
}

}  // namespace earq
