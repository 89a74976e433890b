// SPDX-License-Identifier: Apache-2.0
//
// Uniform-linear-array steering vectors, single-path MIMO channel
// realizations, link budget and beamformed SNR evaluation.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "thzsim/rng.hpp"

namespace thzsim {

using cdouble = std::complex<double>;

// Nominal speed of light used for coherence-time and path-loss anchors.
inline constexpr double kSpeedOfLight = 3.0e8; // m/s

struct ArrayConfig {
    int num_antennas = 64;
    double spacing_ratio = 0.5; // antenna spacing d / wavelength
};

inline void validate(const ArrayConfig& cfg) {
    if (cfg.num_antennas < 2) {
        throw std::invalid_argument("ArrayConfig: num_antennas must be >= 2");
    }
    if (!(cfg.spacing_ratio > 0.0)) {
        throw std::invalid_argument("ArrayConfig: spacing_ratio must be > 0");
    }
}

// One hop's dominant spatial path. Angles are sine-angles (sin of the
// physical azimuth), so the implied rank-1 channel is
//   H = gain * a(aoa) * a(aod)^H.
struct ChannelRealization {
    double aod = 0.0; // sine-angle of departure, in [-1, 1]
    double aoa = 0.0; // sine-angle of arrival, in [-1, 1]
    cdouble gain{1.0, 0.0};
};

// Link-budget and matched-filter parameters for one hop.
//
// The SNR chain is referenced to the transmit side: transmit_snr_db is the
// transmit power over noise, path loss is free-space at reference_distance_m
// plus a 10*n*log10(d/d0) distance law, and matched_filter_length is the
// linear processing gain of the training correlator. Absolute SNR levels are
// therefore set by the matched_filter_length calibration.
struct LinkBudget {
    double distance_m = 30.0;
    double carrier_frequency_hz = 240e9;
    double path_loss_exponent = 2.02;
    double reference_distance_m = 1.0;
    double bandwidth_hz = 4e9;
    double noise_psd_dbm_hz = -204.0;
    double transmit_snr_db = 40.0;
    std::int64_t matched_filter_length = 33333; // samples, >= 1
};

inline void validate(const LinkBudget& budget) {
    if (!(budget.distance_m > 0.0)) {
        throw std::invalid_argument("LinkBudget: distance must be > 0");
    }
    if (!(budget.reference_distance_m > 0.0)) {
        throw std::invalid_argument("LinkBudget: reference distance must be > 0");
    }
    if (budget.matched_filter_length < 1) {
        throw std::invalid_argument("LinkBudget: matched_filter_length must be >= 1");
    }
    if (!(budget.carrier_frequency_hz > 0.0)) {
        throw std::invalid_argument("LinkBudget: carrier frequency must be > 0");
    }
}

// Array response vector a(theta), element k = exp(-j*2*pi*(d/lambda)*k*theta).
// The Euclidean norm is sqrt(N).
inline std::vector<cdouble> steering_vector(double theta, const ArrayConfig& cfg) {
    if (std::abs(theta) > 1.0) {
        throw std::domain_error("steering_vector: |theta| must be <= 1");
    }
    std::vector<cdouble> a(static_cast<std::size_t>(cfg.num_antennas));
    const double step = -2.0 * M_PI * cfg.spacing_ratio * theta;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double phase = step * static_cast<double>(k);
        a[k] = {std::cos(phase), std::sin(phase)};
    }
    return a;
}

// Draws one block-fading realization: gain ~ CN(0, sigma_beta^2) and both
// sine-angles uniform on the given range (the grid of a DFT codebook tiles
// sine-angle space uniformly, so the default prior weights all codewords
// equally).
inline ChannelRealization sample_channel(double sigma_beta, RandomStream& rng,
                                         double angle_lo = -1.0,
                                         double angle_hi = 1.0) {
    if (!(sigma_beta > 0.0)) {
        throw std::invalid_argument("sample_channel: sigma_beta must be > 0");
    }
    if (angle_lo < -1.0 || angle_hi > 1.0 || angle_lo >= angle_hi) {
        throw std::invalid_argument("sample_channel: need -1 <= angle_lo < angle_hi <= 1");
    }
    ChannelRealization ch;
    ch.gain = rng.cgauss(sigma_beta * sigma_beta);
    ch.aod = rng.uniform(angle_lo, angle_hi);
    ch.aoa = rng.uniform(angle_lo, angle_hi);
    return ch;
}

inline cdouble inner_product(std::span<const cdouble> x, std::span<const cdouble> y) {
    cdouble acc{0.0, 0.0};
    for (std::size_t k = 0; k < x.size(); ++k) {
        acc += std::conj(x[k]) * y[k];
    }
    return acc; // x^H y
}

inline double norm2(std::span<const cdouble> x) {
    double acc = 0.0;
    for (const cdouble& v : x) {
        acc += std::norm(v);
    }
    return acc;
}

namespace detail {

inline void check_unit_norm(std::span<const cdouble> v, const char* what) {
    if (std::abs(std::sqrt(norm2(v)) - 1.0) > 1e-6) {
        throw std::invalid_argument(std::string(what) + ": vector must have unit norm");
    }
}

} // namespace detail

// Complex beamformed channel response v^H H w for the rank-1 channel,
// computed as gain * (v^H a(aoa)) * (a(aod)^H w) without forming H.
inline cdouble beamformed_response(std::span<const cdouble> combiner,
                                   const ChannelRealization& ch,
                                   std::span<const cdouble> beamformer,
                                   const ArrayConfig& cfg) {
    detail::check_unit_norm(beamformer, "beamformed_response: beamformer");
    detail::check_unit_norm(combiner, "beamformed_response: combiner");
    const std::vector<cdouble> a_tx = steering_vector(ch.aod, cfg);
    const std::vector<cdouble> a_rx = steering_vector(ch.aoa, cfg);
    return ch.gain * inner_product(combiner, a_rx) * inner_product(a_tx, beamformer);
}

// |v^H H w|^2 for unit-norm beamformer/combiner (checked to 1e-6).
inline double beamformed_gain(std::span<const cdouble> combiner,
                              const ChannelRealization& ch,
                              std::span<const cdouble> beamformer,
                              const ArrayConfig& cfg) {
    return std::norm(beamformed_response(combiner, ch, beamformer, cfg));
}

// Free-space loss at the reference distance plus the exponent distance law.
inline double path_loss_db(const LinkBudget& budget) {
    const double ref_loss =
        20.0 * std::log10(4.0 * M_PI * budget.reference_distance_m *
                          budget.carrier_frequency_hz / kSpeedOfLight);
    return ref_loss + 10.0 * budget.path_loss_exponent *
                          std::log10(budget.distance_m / budget.reference_distance_m);
}

// Omnidirectional received power over noise at the matched-filter output
// (linear), i.e. the SNR obtained with beamforming gain 1.
inline double effective_snr_scale(const LinkBudget& budget) {
    const double omni_db = budget.transmit_snr_db - path_loss_db(budget);
    return std::pow(10.0, omni_db / 10.0) *
           static_cast<double>(budget.matched_filter_length);
}

// Post-combining SNR (linear) for a given beamforming gain |v^H H w|^2.
inline double received_snr(const LinkBudget& budget, double gain) {
    if (gain < 0.0) {
        throw std::invalid_argument("received_snr: gain must be >= 0");
    }
    return effective_snr_scale(budget) * gain;
}

} // namespace thzsim
