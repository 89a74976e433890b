// SPDX-License-Identifier: Apache-2.0
//
// Epsilon-decay multi-armed bandit over training-level vectors, plus the
// fixed and random baseline policies and regret accounting.
#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "thzsim/multihop_rate.hpp"
#include "thzsim/rng.hpp"

namespace thzsim {

// One bandit action: the number of reduced training levels per hop,
// l_k = M_k - m_k. The all-zero arm is full (conventional) training.
struct Arm {
    std::vector<int> reduced_levels;

    LevelVector training_levels(const std::vector<int>& max_levels) const {
        LevelVector m(reduced_levels.size());
        for (std::size_t k = 0; k < m.size(); ++k) {
            m[k] = max_levels[k] - reduced_levels[k];
        }
        return m;
    }

    std::string to_string() const {
        std::string s = "l=(";
        for (std::size_t k = 0; k < reduced_levels.size(); ++k) {
            s += std::to_string(reduced_levels[k]);
            if (k + 1 < reduced_levels.size()) {
                s += ' ';
            }
        }
        s += ')';
        return s;
    }

    friend auto operator<=>(const Arm&, const Arm&) = default;
};

// All feasible arms in lexicographic order of the reduced-level vector.
// Before filtering there are prod_k M_k candidates (l_k in 0..M_k-1); arms
// whose induced level vector violates the slot budget are dropped.
inline std::vector<Arm> enumerate_arms(const MultiHopTopology& topo, int frame_slots,
                                       const std::vector<int>& max_levels) {
    validate(topo);
    const std::size_t hops = static_cast<std::size_t>(topo.hop_count());
    if (max_levels.size() != hops) {
        throw std::invalid_argument("enumerate_arms: one codebook depth per hop required");
    }
    std::vector<Arm> arms;
    std::vector<int> current(hops, 0);
    while (true) {
        Arm arm{current};
        if (is_feasible(arm.training_levels(max_levels), topo, frame_slots, max_levels)) {
            arms.push_back(std::move(arm));
        }
        // odometer increment in lexicographic order
        std::size_t pos = hops;
        while (pos > 0) {
            --pos;
            if (++current[pos] < max_levels[pos]) {
                break;
            }
            current[pos] = 0;
            if (pos == 0) {
                if (arms.empty()) {
                    throw std::runtime_error("enumerate_arms: no feasible arm exists");
                }
                return arms;
            }
        }
    }
}

// Per-arm pull counts and running-average rewards plus the decaying
// exploration rate. Selection plays each arm once in order before the
// epsilon rule activates, so every running mean starts from one sample.
class BanditState {
  public:
    BanditState(std::size_t num_arms, double epsilon0)
        : pulls_(num_arms, 0), means_(num_arms, 0.0), epsilon_(epsilon0),
          epsilon0_(epsilon0) {
        if (num_arms == 0) {
            throw std::invalid_argument("BanditState: need at least one arm");
        }
        if (epsilon0 < 0.0 || epsilon0 > 1.0) {
            throw std::invalid_argument("BanditState: epsilon0 must be in [0, 1]");
        }
    }

    std::size_t num_arms() const { return means_.size(); }
    double epsilon() const { return epsilon_; }
    double epsilon0() const { return epsilon0_; }
    std::uint64_t trial() const { return t_; }
    std::span<const std::uint64_t> pulls() const { return pulls_; }
    std::span<const double> means() const { return means_; }

    // Arm with the highest running mean, smallest index on ties. Unpulled
    // arms count with mean 0.
    std::size_t best_mean_arm() const {
        std::size_t best = 0;
        for (std::size_t a = 1; a < means_.size(); ++a) {
            if (means_[a] > means_[best]) {
                best = a;
            }
        }
        return best;
    }

    // Epsilon-decay selection: exploit the best running mean with
    // probability 1 - epsilon_t, otherwise pick uniformly at random.
    // Increments the trial counter.
    std::size_t select_arm(RandomStream& rng) {
        ++t_;
        for (std::size_t a = 0; a < pulls_.size(); ++a) {
            if (pulls_[a] == 0) {
                return a; // forced round-robin pass over unpulled arms
            }
        }
        if (rng.uniform01() < epsilon_) {
            return static_cast<std::size_t>(rng.uniform_index(pulls_.size()));
        }
        return best_mean_arm();
    }

    // epsilon_t = epsilon_{t-1} * 1000 / (1000 + t), applied after the
    // trial counter has advanced.
    void update_epsilon() {
        if (t_ < 1) {
            throw std::logic_error("BanditState::update_epsilon: no trial selected yet");
        }
        epsilon_ *= 1000.0 / (1000.0 + static_cast<double>(t_));
    }

    // Incremental running-mean update for the played arm.
    void update_reward(std::size_t arm, double reward) {
        if (arm >= means_.size()) {
            throw std::out_of_range("BanditState::update_reward: arm out of range");
        }
        if (reward < 0.0) {
            throw std::invalid_argument("BanditState::update_reward: reward must be >= 0");
        }
        ++pulls_[arm];
        means_[arm] += (reward - means_[arm]) / static_cast<double>(pulls_[arm]);
    }

    // CSV snapshot: arm,pulls,mean,epsilon,t
    void write_snapshot_csv(std::ostream& os, std::span<const Arm> arms) const {
        os << "arm,pulls,mean,epsilon,t\n";
        os.precision(17);
        for (std::size_t a = 0; a < means_.size(); ++a) {
            os << arms[a].to_string() << ',' << pulls_[a] << ',' << means_[a] << ','
               << epsilon_ << ',' << t_ << '\n';
        }
    }

  private:
    std::vector<std::uint64_t> pulls_;
    std::vector<double> means_;
    double epsilon_;
    double epsilon0_;
    std::uint64_t t_ = 0;
};

// Cumulative regret series zeta(1..T) from per-trial expected rewards of the
// played arms against the best arm's expected reward.
inline std::vector<double> cumulative_regret(std::span<const double> played_means,
                                             double optimal_mean) {
    std::vector<double> zeta(played_means.size());
    double acc = 0.0;
    for (std::size_t t = 0; t < played_means.size(); ++t) {
        acc += optimal_mean - played_means[t];
        zeta[t] = acc;
    }
    return zeta;
}

enum class PolicyKind { dynamic, fixed, random };

inline const char* to_string(PolicyKind p) {
    switch (p) {
    case PolicyKind::dynamic:
        return "dynamic";
    case PolicyKind::fixed:
        return "fixed";
    case PolicyKind::random:
        return "random";
    }
    return "unknown";
}

inline PolicyKind policy_from_string(const std::string& s) {
    if (s == "dynamic") {
        return PolicyKind::dynamic;
    }
    if (s == "fixed") {
        return PolicyKind::fixed;
    }
    if (s == "random") {
        return PolicyKind::random;
    }
    throw std::invalid_argument("unknown policy: " + s);
}

} // namespace thzsim
