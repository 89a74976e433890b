// SPDX-License-Identifier: Apache-2.0
//
// Phase-shifted DFT multi-resolution codebook and its s-way beam hierarchy.
#pragma once

#include <cmath>
#include <complex>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "thzsim/array_channel.hpp"

namespace thzsim {

// Node of the s-way beam decision tree. Levels and indices are 1-based:
// level m in 1..M, index i in 1..s^m.
struct BeamIndex {
    int level = 1;
    int index = 1;

    friend bool operator==(const BeamIndex&, const BeamIndex&) = default;
};

// All codeword levels for one array. Level m holds q_m = s^m unit-norm
// codewords of length N; level M = log_s(N) is a phase-rotated DFT grid.
//
// Codeword i at level m sums the steering vectors of its sine-angle block
//   theta_k = -1 + (2k - 1)/N,   (i-1)*N/q_m + 1 <= k <= i*N/q_m,
// each rotated by exp(j*omega_m*k). The per-element phase ramp omega_m
// flattens the gain ripple across the beam. After the sqrt(q_m)/N prefactor
// every codeword is renormalized to exactly unit norm.
class MultiResCodebook {
  public:
    MultiResCodebook() = default;

    const ArrayConfig& array() const { return array_; }
    int num_antennas() const { return array_.num_antennas; }
    int branching() const { return branching_; }
    int num_levels() const { return static_cast<int>(levels_.size()); }
    double phase_shift(int level) const { return phase_shifts_.at(level - 1); }

    int codewords_at(int level) const {
        return static_cast<int>(levels_.at(level - 1).size());
    }

    std::span<const cdouble> codeword(BeamIndex idx) const {
        return levels_.at(idx.level - 1).at(idx.index - 1);
    }

    // The s children of a beam node at the next level; their sine-angle
    // blocks partition the parent's block.
    std::vector<BeamIndex> children(BeamIndex idx) const {
        if (idx.level >= num_levels()) {
            throw std::out_of_range("MultiResCodebook::children: node is at the last level");
        }
        if (idx.index < 1 || idx.index > codewords_at(idx.level)) {
            throw std::out_of_range("MultiResCodebook::children: index out of range");
        }
        std::vector<BeamIndex> out;
        out.reserve(static_cast<std::size_t>(branching_));
        const int first = (idx.index - 1) * branching_ + 1;
        for (int c = 0; c < branching_; ++c) {
            out.push_back(BeamIndex{idx.level + 1, first + c});
        }
        return out;
    }

    BeamIndex parent(BeamIndex idx) const {
        if (idx.level <= 1) {
            throw std::out_of_range("MultiResCodebook::parent: node is at the root level");
        }
        return BeamIndex{idx.level - 1, (idx.index - 1) / branching_ + 1};
    }

    friend MultiResCodebook build_codebook(const ArrayConfig&, int, std::span<const double>);

  private:
    ArrayConfig array_;
    int branching_ = 2;
    std::vector<double> phase_shifts_;
    std::vector<std::vector<std::vector<cdouble>>> levels_;
};

// Builds the codebook for N antennas with an s-way hierarchy and one phase
// shift per level. N must be an exact power of s.
inline MultiResCodebook build_codebook(const ArrayConfig& cfg, int branching,
                                       std::span<const double> phase_shifts) {
    validate(cfg);
    if (branching < 2) {
        throw std::invalid_argument("build_codebook: branching factor must be >= 2");
    }
    const int n = cfg.num_antennas;
    int num_levels = 0;
    for (long long q = 1; q < n; q *= branching) {
        ++num_levels;
        if (q * branching > n) {
            throw std::invalid_argument(
                "build_codebook: num_antennas must be an exact power of the branching factor");
        }
    }
    if (num_levels == 0) {
        throw std::invalid_argument("build_codebook: need at least one level");
    }

    MultiResCodebook book;
    book.array_ = cfg;
    book.branching_ = branching;
    book.phase_shifts_.resize(static_cast<std::size_t>(num_levels));
    for (int m = 0; m < num_levels; ++m) {
        book.phase_shifts_[static_cast<std::size_t>(m)] =
            phase_shifts.size() == 1 ? phase_shifts[0]
                                     : phase_shifts[static_cast<std::size_t>(m)];
    }
    if (phase_shifts.size() != 1 &&
        phase_shifts.size() != static_cast<std::size_t>(num_levels)) {
        throw std::invalid_argument(
            "build_codebook: provide one phase shift or one per level");
    }

    book.levels_.resize(static_cast<std::size_t>(num_levels));
    int q = 1;
    for (int m = 1; m <= num_levels; ++m) {
        q *= branching;
        const int block = n / q;
        const double omega = book.phase_shifts_[static_cast<std::size_t>(m - 1)];
        auto& level = book.levels_[static_cast<std::size_t>(m - 1)];
        level.resize(static_cast<std::size_t>(q));
        for (int i = 1; i <= q; ++i) {
            std::vector<cdouble> w(static_cast<std::size_t>(n), cdouble{0.0, 0.0});
            for (int k = (i - 1) * block + 1; k <= i * block; ++k) {
                const double theta_k = -1.0 + (2.0 * k - 1.0) / n;
                const cdouble rot{std::cos(omega * k), std::sin(omega * k)};
                const std::vector<cdouble> a = steering_vector(theta_k, cfg);
                for (std::size_t el = 0; el < w.size(); ++el) {
                    w[el] += a[el] * rot;
                }
            }
            const double prefactor = std::sqrt(static_cast<double>(q)) / n;
            for (cdouble& v : w) {
                v *= prefactor;
            }
            // The prefactor normalizes exactly on the orthogonal DFT grid;
            // renormalize anyway so unit norm holds to machine precision.
            const double inv_norm = 1.0 / std::sqrt(norm2(w));
            for (cdouble& v : w) {
                v *= inv_norm;
            }
            level[static_cast<std::size_t>(i - 1)] = std::move(w);
        }
    }
    return book;
}

inline MultiResCodebook build_codebook(const ArrayConfig& cfg, int branching,
                                       double phase_shift) {
    const double shifts[1] = {phase_shift};
    return build_codebook(cfg, branching, std::span<const double>(shifts));
}

// Single-sided codeword power gain |a(theta)^H w|^2.
inline double codeword_gain(double theta, BeamIndex idx, const MultiResCodebook& book) {
    const std::vector<cdouble> a = steering_vector(theta, book.array());
    return std::norm(inner_product(a, book.codeword(idx)));
}

// Noiseless reference: the level-m codeword maximizing |a(theta)^H w|^2,
// ties broken toward the smallest index.
inline BeamIndex best_beam_oracle(double theta, int level, const MultiResCodebook& book) {
    const std::vector<cdouble> a = steering_vector(theta, book.array());
    int best = 1;
    double best_gain = -1.0;
    for (int i = 1; i <= book.codewords_at(level); ++i) {
        const double g = std::norm(inner_product(a, book.codeword({level, i})));
        if (g > best_gain) {
            best_gain = g;
            best = i;
        }
    }
    return BeamIndex{level, best};
}

// Noiseless greedy descent of the beam tree: at each level keep the child
// (at level 1: root codeword) with the largest gain toward theta.
inline BeamIndex descend_oracle(double theta, const MultiResCodebook& book) {
    const std::vector<cdouble> a = steering_vector(theta, book.array());
    BeamIndex current{0, 1};
    for (int level = 1; level <= book.num_levels(); ++level) {
        const int first = level == 1 ? 1 : (current.index - 1) * book.branching() + 1;
        int best = first;
        double best_gain = -1.0;
        for (int c = 0; c < book.branching(); ++c) {
            const BeamIndex cand{level, first + c};
            const double g = std::norm(inner_product(a, book.codeword(cand)));
            if (g > best_gain) {
                best_gain = g;
                best = cand.index;
            }
        }
        current = BeamIndex{level, best};
    }
    return current;
}

// CSV export with columns: level,index,antenna_element,real,imag.
inline void write_codebook_csv(const MultiResCodebook& book, std::ostream& os) {
    os << "level,index,antenna_element,real,imag\n";
    os.precision(17);
    for (int m = 1; m <= book.num_levels(); ++m) {
        for (int i = 1; i <= book.codewords_at(m); ++i) {
            const auto w = book.codeword({m, i});
            for (std::size_t el = 0; el < w.size(); ++el) {
                os << m << ',' << i << ',' << el << ',' << w[el].real() << ','
                   << w[el].imag() << '\n';
            }
        }
    }
}

} // namespace thzsim
