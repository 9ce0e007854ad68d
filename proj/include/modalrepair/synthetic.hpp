#pragma once

#include "modalrepair/tensor.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace modalrepair::synthetic {

struct WaveMode {
    double amplitude = 1.0;
    double k = 1.0;  ///< wavenumber along x
    double l = 1.0;  ///< wavenumber along y
    double q = 1.0;  ///< wavenumber along z
    double omega = 1.0;
    double phase = 0.0;
    std::size_t component = 0;
};

enum class Generator { StandingWaves, CylinderLike };

/// Parameters of an analytic snapshot dataset.
///
/// The grid spans [0, extent] on every axis, except y for the cylinder-like
/// wake which is centred on zero. Snapshot k sits at t = k * dt.
struct WaveSpec {
    Generator generator = Generator::StandingWaves;
    std::vector<WaveMode> modes;
    Shape grid;                  ///< 1 to 3 spatial axes
    std::vector<double> extents; ///< per axis; empty = all 1
    std::size_t components = 1;
    std::size_t snapshots = 1;
    double dt = 0.1;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    double mean_flow = 1.0;   ///< cylinder-like only
    double wake_width = 0.25; ///< cylinder-like only

    void validate() const;
};

/// v = sum_m A_m sin(k_m pi x) sin(l_m pi y) [sin(q_m pi z)] cos(omega_m t + phi_m) + noise.
/// Noiseless snapshot-matrix rank equals the number of modes.
Tensor generate_standing_waves(const WaveSpec& spec);

/// v = U0 + sum_m A_m exp(-(y/w)^2) cos(k_m x - omega_m t + phi_m) + noise.
/// Noiseless snapshot-matrix rank is 2 per non-zero mode, plus 1 for U0 != 0.
Tensor generate_cylinder_like(const WaveSpec& spec);

Tensor generate(const WaveSpec& spec);

/// Documented exact rank of the noiseless unfolded snapshot matrix.
std::size_t documented_rank(const WaveSpec& spec);

nlohmann::json to_json(const WaveSpec& spec);
/// Throws ArgumentError naming the offending field.
WaveSpec spec_from_json(const nlohmann::json& j);

}  // namespace modalrepair::synthetic
