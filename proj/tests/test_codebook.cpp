// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "thzsim/codebook.hpp"

using namespace thzsim;
using Catch::Approx;

TEST_CASE("64-antenna 4-way codebook has three levels with q = 4, 16, 64") {
    const auto book = build_codebook({64, 0.5}, 4, 2.24);
    REQUIRE(book.num_levels() == 3);
    REQUIRE(book.codewords_at(1) == 4);
    REQUIRE(book.codewords_at(2) == 16);
    REQUIRE(book.codewords_at(3) == 64);
}

TEST_CASE("every codeword has unit norm") {
    const auto book = build_codebook({64, 0.5}, 4, 2.24);
    for (int m = 1; m <= book.num_levels(); ++m) {
        for (int i = 1; i <= book.codewords_at(m); ++i) {
            REQUIRE(norm2(book.codeword({m, i})) == Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("last level is a phase-rotated DFT grid beam") {
    const ArrayConfig cfg{64, 0.5};
    const auto book = build_codebook(cfg, 4, 2.24);
    for (int i : {1, 10, 33, 64}) {
        const double theta_i = -1.0 + (2.0 * i - 1.0) / 64.0;
        const auto a = steering_vector(theta_i, cfg);
        // |<a/sqrt(N), w_i>| = 1 iff w_i is proportional to a(theta_i)
        const double corr = std::abs(inner_product(a, book.codeword({3, i}))) / 8.0;
        REQUIRE(corr == Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("codebook construction validates the branching factor") {
    REQUIRE_THROWS_AS(build_codebook({48, 0.5}, 4, 2.24), std::invalid_argument);
    REQUIRE_THROWS_AS(build_codebook({64, 0.5}, 3, 2.24), std::invalid_argument);
    REQUIRE_THROWS_AS(build_codebook({64, 0.5}, 1, 2.24), std::invalid_argument);
    REQUIRE_NOTHROW(build_codebook({64, 0.5}, 8, 2.24));
    REQUIRE_NOTHROW(build_codebook({64, 0.5}, 2, 2.24));
}

TEST_CASE("per-level phase shifts are accepted") {
    const std::vector<double> shifts = {2.24, 1.0, 0.0};
    const auto book = build_codebook({64, 0.5}, 4, shifts);
    REQUIRE(book.phase_shift(1) == 2.24);
    REQUIRE(book.phase_shift(3) == 0.0);
    REQUIRE_THROWS_AS(build_codebook({64, 0.5}, 4, std::span<const double>(shifts.data(), 2)),
                      std::invalid_argument);
}

TEST_CASE("children indices partition the parent block") {
    const auto book = build_codebook({64, 0.5}, 4, 2.24);
    const auto kids1 = book.children({1, 1});
    REQUIRE(kids1.size() == 4);
    for (int c = 0; c < 4; ++c) {
        REQUIRE(kids1[static_cast<std::size_t>(c)].level == 2);
        REQUIRE(kids1[static_cast<std::size_t>(c)].index == c + 1);
    }
    const auto kids2 = book.children({2, 3});
    REQUIRE(kids2.front().index == 9);
    REQUIRE(kids2.back().index == 12);
    REQUIRE_THROWS_AS(book.children({3, 1}), std::out_of_range);
}

TEST_CASE("every node has exactly one parent whose children contain it") {
    const auto book = build_codebook({64, 0.5}, 4, 2.24);
    for (int m = 2; m <= 3; ++m) {
        for (int i = 1; i <= book.codewords_at(m); ++i) {
            const BeamIndex parent = book.parent({m, i});
            bool found = false;
            for (const BeamIndex& child : book.children(parent)) {
                if (child == BeamIndex{m, i}) {
                    found = true;
                }
            }
            REQUIRE(found);
        }
    }
}

TEST_CASE("best beam at the last level recovers the grid index") {
    const auto book = build_codebook({64, 0.5}, 4, 2.24);
    for (int k = 1; k <= 64; ++k) {
        const double theta_k = -1.0 + (2.0 * k - 1.0) / 64.0;
        REQUIRE(best_beam_oracle(theta_k, 3, book).index == k);
    }
}

TEST_CASE("argmax ties break toward the smallest index") {
    // N=2, s=2, omega=0: the two beams are mirror images, so theta = 0 is an
    // exact tie in floating point as well.
    const auto book = build_codebook({2, 0.5}, 2, 0.0);
    const double g1 = codeword_gain(0.0, {1, 1}, book);
    const double g2 = codeword_gain(0.0, {1, 2}, book);
    REQUIRE(g1 == g2);
    REQUIRE(best_beam_oracle(0.0, 1, book).index == 1);
}

TEST_CASE("level-1 winner covers the nearest grid point") {
    const auto book = build_codebook({64, 0.5}, 4, 2.24);
    RandomStream rng(2024);
    int hits = 0;
    const int n = 1000;
    for (int t = 0; t < n; ++t) {
        const double theta = rng.uniform(-1.0, 1.0);
        int nearest = 1;
        double best = 1e300;
        for (int k = 1; k <= 64; ++k) {
            const double d = std::abs(-1.0 + (2.0 * k - 1.0) / 64.0 - theta);
            if (d < best) {
                best = d;
                nearest = k;
            }
        }
        const int block_of_nearest = (nearest - 1) / 16 + 1;
        if (best_beam_oracle(theta, 1, book).index == block_of_nearest) {
            ++hits;
        }
    }
    REQUIRE(hits >= 950);
}

TEST_CASE("greedy descent matches exhaustive search for most angles") {
    const auto book = build_codebook({64, 0.5}, 4, 2.24);
    RandomStream rng(77);
    int agree = 0;
    const int n = 10000;
    for (int t = 0; t < n; ++t) {
        const double theta = rng.uniform(-1.0, 1.0);
        if (descend_oracle(theta, book) == best_beam_oracle(theta, 3, book)) {
            ++agree;
        }
    }
    REQUIRE(agree >= static_cast<int>(0.95 * n));
}

TEST_CASE("the documented phase shift flattens the level-1 beam") {
    const auto with_shift = build_codebook({64, 0.5}, 4, 2.24);
    const auto without = build_codebook({64, 0.5}, 4, 0.0);
    auto ripple = [](const MultiResCodebook& book, int beam) {
        const double lo = -1.0 + 0.5 * (beam - 1);
        double peak = 0.0;
        double trough = 1e300;
        for (int g = 0; g < 4096; ++g) {
            const double theta = lo + 0.5 * (g + 0.5) / 4096.0;
            const double gain = codeword_gain(theta, {1, beam}, book);
            peak = std::max(peak, gain);
            trough = std::min(trough, gain);
        }
        return peak / trough;
    };
    for (int beam = 1; beam <= 4; ++beam) {
        REQUIRE(ripple(with_shift, beam) < ripple(without, beam));
    }
}

TEST_CASE("level-M Gram matrix matches the DFT grid beams in magnitude") {
    const ArrayConfig cfg{64, 0.5};
    const auto book = build_codebook(cfg, 4, 2.24);
    std::vector<std::vector<cdouble>> dft;
    for (int i = 1; i <= 64; ++i) {
        auto a = steering_vector(-1.0 + (2.0 * i - 1.0) / 64.0, cfg);
        for (cdouble& x : a) {
            x *= 0.125;
        }
        dft.push_back(std::move(a));
    }
    for (int i = 1; i <= 64; ++i) {
        for (int j = 1; j <= 64; ++j) {
            const double gw =
                std::abs(inner_product(book.codeword({3, i}), book.codeword({3, j})));
            const double gd = std::abs(inner_product(dft[static_cast<std::size_t>(i - 1)],
                                                     dft[static_cast<std::size_t>(j - 1)]));
            REQUIRE(std::abs(gw - gd) < 1e-9);
        }
    }
}

TEST_CASE("codebook CSV export has one row per coefficient") {
    const auto book = build_codebook({16, 0.5}, 4, 2.24);
    std::ostringstream os;
    write_codebook_csv(book, os);
    const std::string text = os.str();
    std::size_t lines = 0;
    for (char c : text) {
        if (c == '\n') {
            ++lines;
        }
    }
    REQUIRE(lines == 1 + (4 + 16) * 16);
    REQUIRE(text.rfind("level,index,antenna_element,real,imag\n", 0) == 0);
}
