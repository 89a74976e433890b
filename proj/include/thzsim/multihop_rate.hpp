// SPDX-License-Identifier: Apache-2.0
//
// Frame sizing, training-overhead accounting, and per-hop / end-to-end
// spectral efficiency of a decode-and-forward multi-hop link.
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "thzsim/array_channel.hpp"

namespace thzsim {

// Transmission-block geometry: L slots of duration tau within one channel
// coherence interval.
struct FrameConfig {
    int slots = 108;              // L
    double slot_duration_s = 0.0; // tau
    double coherence_time_s = 0.0;
    double subcarrier_spacing_hz = 120e3;
    double max_speed_mps = 5.0 / 3.6;
    double carrier_frequency_hz = 240e9;
};

// Slots per block: tau = 1/SCS, T_c = c/(v*f_c) (inverse maximum Doppler),
// L = floor(T_c/tau). A one-part-per-billion nudge keeps exact integer
// ratios (e.g. the 240 GHz / 120 kHz / 5 km/h case) from flooring down.
inline int frame_slots(double carrier_frequency_hz, double subcarrier_spacing_hz,
                       double max_speed_mps) {
    if (!(max_speed_mps > 0.0) || !(carrier_frequency_hz > 0.0) ||
        !(subcarrier_spacing_hz > 0.0)) {
        throw std::invalid_argument("frame_slots: speed, carrier and SCS must be > 0");
    }
    const double coherence = kSpeedOfLight / (max_speed_mps * carrier_frequency_hz);
    const double ratio = coherence * subcarrier_spacing_hz;
    return static_cast<int>(std::floor(ratio * (1.0 + 1e-9)));
}

inline FrameConfig derive_frame(double carrier_frequency_hz,
                                double subcarrier_spacing_hz, double max_speed_mps) {
    FrameConfig f;
    f.carrier_frequency_hz = carrier_frequency_hz;
    f.subcarrier_spacing_hz = subcarrier_spacing_hz;
    f.max_speed_mps = max_speed_mps;
    f.slot_duration_s = 1.0 / subcarrier_spacing_hz;
    f.coherence_time_s = kSpeedOfLight / (max_speed_mps * carrier_frequency_hz);
    f.slots = frame_slots(carrier_frequency_hz, subcarrier_spacing_hz, max_speed_mps);
    return f;
}

// Linear chain of UEs u_src <-> ... <-> u_dst (polytree with maximum degree
// two). branching[k] is the per-level training-signal count s of UE k+1;
// distances_m[k] is the length of hop k.
struct MultiHopTopology {
    int ue_count = 3;
    std::vector<int> branching = {4, 4, 4};   // one per UE
    std::vector<double> distances_m = {30.0, 5.0}; // one per hop of the chain
    int src = 1; // endpoint i, 1-based
    int dst = 3; // endpoint j, 1-based

    int hop_count() const { return dst - src; }
};

inline void validate(const MultiHopTopology& topo) {
    if (topo.ue_count < 2) {
        throw std::invalid_argument("MultiHopTopology: need at least two UEs");
    }
    if (topo.branching.size() != static_cast<std::size_t>(topo.ue_count)) {
        throw std::invalid_argument("MultiHopTopology: one branching factor per UE");
    }
    if (topo.distances_m.size() != static_cast<std::size_t>(topo.ue_count - 1)) {
        throw std::invalid_argument("MultiHopTopology: one distance per hop");
    }
    if (topo.src < 1 || topo.dst > topo.ue_count || topo.src >= topo.dst) {
        throw std::invalid_argument("MultiHopTopology: endpoints must satisfy 1 <= i < j <= K");
    }
    for (int s : topo.branching) {
        if (s < 2) {
            throw std::invalid_argument("MultiHopTopology: branching factors must be >= 2");
        }
    }
    for (double d : topo.distances_m) {
        if (!(d > 0.0)) {
            throw std::invalid_argument("MultiHopTopology: distances must be > 0");
        }
    }
}

// Training levels per hop, one entry per hop of the (src, dst) chain.
using LevelVector = std::vector<int>;

// Deepest usable training level per hop: both endpoints of hop k must be
// able to resolve the level, so it is min over the endpoint codebook depths
// log_s(N).
inline std::vector<int> hop_max_levels(const MultiHopTopology& topo, int num_antennas) {
    validate(topo);
    auto depth = [num_antennas](int s) {
        int levels = 0;
        for (long long q = 1; q < num_antennas; q *= s) {
            ++levels;
            if (q * s > num_antennas) {
                throw std::invalid_argument(
                    "hop_max_levels: num_antennas must be a power of every branching factor");
            }
        }
        return levels;
    };
    std::vector<int> out;
    for (int k = topo.src; k < topo.dst; ++k) {
        out.push_back(std::min(depth(topo.branching[static_cast<std::size_t>(k - 1)]),
                               depth(topo.branching[static_cast<std::size_t>(k)])));
    }
    return out;
}

// Total training slots for the chain: hop k contributes (s_k + s_{k+1}) * m_k
// (s candidates per level on each side, trained sequentially under TDMA).
inline int training_overhead(const LevelVector& levels, const MultiHopTopology& topo) {
    validate(topo);
    if (levels.size() != static_cast<std::size_t>(topo.hop_count())) {
        throw std::invalid_argument("training_overhead: one level per hop required");
    }
    int total = 0;
    for (int k = 0; k < topo.hop_count(); ++k) {
        const int ue = topo.src + k; // 1-based UE on the near side of hop k
        const int s_near = topo.branching[static_cast<std::size_t>(ue - 1)];
        const int s_far = topo.branching[static_cast<std::size_t>(ue)];
        total += (s_near + s_far) * levels[static_cast<std::size_t>(k)];
    }
    return total;
}

enum class OutageMode {
    instantaneous, // indicator 1{snr >= threshold} from the realization
    expected       // externally supplied success probability
};

// Single-hop spectral efficiency: success * (1 - L'/L) * log2(1 + snr).
inline double single_hop_rate(double snr, int overhead_slots, int frame_slots,
                              double snr_threshold, OutageMode mode,
                              double success_probability = 1.0) {
    if (overhead_slots >= frame_slots) {
        throw std::invalid_argument("single_hop_rate: training overhead must be < frame slots");
    }
    if (snr < 0.0) {
        throw std::invalid_argument("single_hop_rate: snr must be >= 0");
    }
    const double success = mode == OutageMode::instantaneous
                               ? (snr >= snr_threshold ? 1.0 : 0.0)
                               : success_probability;
    const double prelog = 1.0 - static_cast<double>(overhead_slots) / frame_slots;
    return success * prelog * std::log2(1.0 + snr);
}

// End-to-end spectral efficiency of the decode-and-forward chain. The
// smallest per-hop SNR limits the rate; the prelog charges the total
// training overhead and splits the block across the hops.
inline double multihop_rate(std::span<const double> hop_snrs, const LevelVector& levels,
                            const MultiHopTopology& topo, int frame_slots,
                            double snr_threshold, OutageMode mode,
                            std::span<const double> success_probabilities = {}) {
    const int hops = topo.hop_count();
    if (hop_snrs.size() != static_cast<std::size_t>(hops)) {
        throw std::invalid_argument("multihop_rate: one SNR per hop required");
    }
    const int overhead = training_overhead(levels, topo);
    if (overhead >= frame_slots) {
        throw std::invalid_argument("multihop_rate: training overhead must be < frame slots");
    }
    double success = 1.0;
    double snr_min = hop_snrs[0];
    for (int k = 0; k < hops; ++k) {
        const double snr = hop_snrs[static_cast<std::size_t>(k)];
        if (snr < 0.0) {
            throw std::invalid_argument("multihop_rate: snr must be >= 0");
        }
        snr_min = std::min(snr_min, snr);
        if (mode == OutageMode::instantaneous) {
            success *= snr >= snr_threshold ? 1.0 : 0.0;
        } else {
            if (success_probabilities.size() != static_cast<std::size_t>(hops)) {
                throw std::invalid_argument(
                    "multihop_rate: expected mode needs one success probability per hop");
            }
            success *= success_probabilities[static_cast<std::size_t>(k)];
        }
    }
    const double prelog = 1.0 - static_cast<double>(overhead) / frame_slots;
    return success * prelog * std::log2(1.0 + snr_min) / hops;
}

// Feasibility of a training-level vector: every m_k within its hop's depth
// and total overhead strictly below the chain's slot allocation
// floor(L/(K-1)) * (j-i).
inline bool is_feasible(const LevelVector& levels, const MultiHopTopology& topo,
                        int frame_slots, const std::vector<int>& max_levels) {
    if (levels.size() != static_cast<std::size_t>(topo.hop_count()) ||
        max_levels.size() != levels.size()) {
        throw std::invalid_argument("is_feasible: one level and one depth per hop required");
    }
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (levels[k] < 1 || levels[k] > max_levels[k]) {
            return false;
        }
    }
    const int budget = (frame_slots / (topo.ue_count - 1)) * topo.hop_count();
    return training_overhead(levels, topo) < budget;
}

} // namespace thzsim
