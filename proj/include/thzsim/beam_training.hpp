// SPDX-License-Identifier: Apache-2.0
//
// Hierarchical beam training for one hop: s candidate beams per level on a
// decision tree, noisy matched-filter measurements, Neyman-Pearson
// detection, and slot accounting, truncated at a commanded level.
#pragma once

#include <cmath>
#include <complex>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "thzsim/array_channel.hpp"
#include "thzsim/codebook.hpp"
#include "thzsim/rng.hpp"

namespace thzsim {

// Neyman-Pearson energy detector operating on |y|^2 at the matched-filter
// output. noise_variance is the effective complex noise variance there; the
// signal scaling of `measure` is referenced to it.
struct DetectorConfig {
    double p_fa = 0.01;
    double noise_variance = 1.0;
};

inline void validate(const DetectorConfig& det) {
    if (!(det.p_fa > 0.0 && det.p_fa <= 1.0)) {
        throw std::invalid_argument("DetectorConfig: p_fa must be in (0, 1]");
    }
    if (det.noise_variance < 0.0) {
        throw std::invalid_argument("DetectorConfig: noise_variance must be >= 0");
    }
}

// Threshold eta with P(|y|^2 > eta | noise only) = p_fa for complex
// Gaussian noise: |y|^2 is exponential with mean noise_variance, so
// eta = -noise_variance * ln(p_fa).
inline double np_threshold(const DetectorConfig& det) {
    validate(det);
    return -det.noise_variance * std::log(det.p_fa);
}

// Result of training one hop up to `levels_used` tree levels.
struct TrainingOutcome {
    BeamIndex tx_beam;
    BeamIndex rx_beam;
    double post_snr = 0.0; // linear SNR with the selected beam pair
    int slots_used = 0;    // (s_tx + s_rx) * levels_used
    bool miss_detected = false;
    int levels_used = 0;
};

// One training-slot observation: sqrt(p_eff) * v^H H w + noise. The signal
// amplitude is referenced to unit noise variance (p_eff embeds path loss and
// matched-filter gain, so E|signal|^2 equals received_snr(budget, |v^H H w|^2)
// when noise_variance = 1). noise_variance = 0 gives the noiseless limit.
inline cdouble measure(std::span<const cdouble> beamformer,
                       std::span<const cdouble> combiner,
                       const ChannelRealization& ch, const LinkBudget& budget,
                       const ArrayConfig& cfg, double noise_variance,
                       RandomStream& rng) {
    const cdouble response = beamformed_response(combiner, ch, beamformer, cfg);
    const double amp = std::sqrt(effective_snr_scale(budget));
    return amp * response + rng.cgauss(noise_variance);
}

namespace detail {

// Per-level sweep over `candidates`, measuring sqrt(p_eff)*g + noise where
// g is the precomputed noiseless response of each candidate. Returns the
// argmax of |y|^2 (smallest index on ties) and whether it beat the
// detection threshold.
struct LevelPick {
    int winner = 0; // position within candidates
    bool detected = false;
};

inline LevelPick sweep_level(std::span<const cdouble> responses, double amp,
                             double noise_variance, double threshold,
                             RandomStream& rng, std::ostream* trace,
                             char side, int level,
                             std::span<const BeamIndex> candidates) {
    LevelPick pick;
    double best_power = -1.0;
    std::vector<double> powers(responses.size());
    for (std::size_t c = 0; c < responses.size(); ++c) {
        const cdouble y = amp * responses[c] + rng.cgauss(noise_variance);
        powers[c] = std::norm(y);
        if (powers[c] > best_power) {
            best_power = powers[c];
            pick.winner = static_cast<int>(c);
        }
    }
    pick.detected = best_power > threshold;
    if (trace != nullptr) {
        for (std::size_t c = 0; c < powers.size(); ++c) {
            *trace << side << ',' << level << ',' << candidates[c].index << ','
                   << powers[c] << ',' << (static_cast<int>(c) == pick.winner ? 1 : 0)
                   << ',' << (pick.detected && static_cast<int>(c) == pick.winner ? 1 : 0)
                   << '\n';
        }
    }
    return pick;
}

// Descends one side of the tree with the other side's spatial response
// fixed (other_factor = the complex gain contributed by the far end).
struct DescentResult {
    BeamIndex beam;
    bool missed = false;
};

inline DescentResult descend_side(const MultiResCodebook& book,
                                  std::span<const cdouble> own_steering,
                                  cdouble other_factor, int levels, double amp,
                                  double noise_variance, double threshold,
                                  RandomStream& rng, std::ostream* trace, char side) {
    DescentResult result;
    BeamIndex current{0, 1};
    for (int level = 1; level <= levels; ++level) {
        std::vector<BeamIndex> candidates;
        if (level == 1) {
            for (int i = 1; i <= book.codewords_at(1); ++i) {
                candidates.push_back({1, i});
            }
        } else {
            candidates = book.children(current);
        }
        std::vector<cdouble> responses(candidates.size());
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            // own side inner product: conj pairing depends on tx/rx role but
            // |response| statistics are symmetric; use a^H w convention.
            responses[c] =
                other_factor * inner_product(own_steering, book.codeword(candidates[c]));
        }
        const LevelPick pick =
            sweep_level(responses, amp, noise_variance, threshold, rng, trace, side,
                        level, candidates);
        if (!pick.detected) {
            result.missed = true;
        }
        current = candidates[static_cast<std::size_t>(pick.winner)];
    }
    result.beam = current;
    return result;
}

} // namespace detail

// Trains one hop up to `levels` tree levels.
//
// Transmitter phase first: the receiver listens with a deterministic
// single-element (omnidirectional) combiner while the transmitter sweeps s
// candidate codewords per level, keeping the argmax-|y|^2 winner (smallest
// index on ties). The receiver phase then mirrors the procedure with the
// transmitter locked to its selected codeword. Feedback of winner indices is
// assumed instantaneous and error-free and consumes no slots. A level whose
// winning measurement fails the Neyman-Pearson threshold flags the outcome
// as a miss but training continues with the argmax choice.
inline TrainingOutcome train_hop(const ChannelRealization& ch,
                                 const MultiResCodebook& tx_book,
                                 const MultiResCodebook& rx_book, int levels,
                                 const LinkBudget& budget, const DetectorConfig& det,
                                 RandomStream& rng, std::ostream* trace = nullptr) {
    if (levels < 1 || levels > std::min(tx_book.num_levels(), rx_book.num_levels())) {
        throw std::invalid_argument("train_hop: invalid number of training levels");
    }
    validate(det);
    const double threshold = np_threshold(det);
    const double amp = std::sqrt(effective_snr_scale(budget));

    const std::vector<cdouble> a_tx = steering_vector(ch.aod, tx_book.array());
    const std::vector<cdouble> a_rx = steering_vector(ch.aoa, rx_book.array());

    // Transmitter phase: omni reception contributes a_rx[0] = 1, so the
    // far-end factor reduces to the channel gain.
    const detail::DescentResult tx_pick = detail::descend_side(
        tx_book, a_tx, ch.gain, levels, amp, det.noise_variance, threshold, rng,
        trace, 't');

    // Receiver phase: transmitter fixed to its selected codeword.
    const cdouble tx_factor =
        ch.gain * inner_product(a_tx, tx_book.codeword(tx_pick.beam));
    const detail::DescentResult rx_pick = detail::descend_side(
        rx_book, a_rx, tx_factor, levels, amp, det.noise_variance, threshold, rng,
        trace, 'r');

    TrainingOutcome out;
    out.tx_beam = tx_pick.beam;
    out.rx_beam = rx_pick.beam;
    out.levels_used = levels;
    out.slots_used = (tx_book.branching() + rx_book.branching()) * levels;
    out.miss_detected = tx_pick.missed || rx_pick.missed;
    const double gain = std::norm(ch.gain) *
                        std::norm(inner_product(a_rx, rx_book.codeword(rx_pick.beam))) *
                        std::norm(inner_product(a_tx, tx_book.codeword(tx_pick.beam)));
    out.post_snr = received_snr(budget, gain);
    return out;
}

} // namespace thzsim
