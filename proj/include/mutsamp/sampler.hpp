#pragma once

// Mutant sampling: uniform selection without replacement, and weighted
// selection where each mutant carries the inverse of its class's mutant
// count and is drawn by roulette wheel. Both are deterministic per seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mutsamp/result.hpp"
#include "mutsamp/rng.hpp"

namespace mutsamp {

enum class Approach { uniform, weighted };

inline std::string_view approach_name(Approach a) {
    return a == Approach::uniform ? "uniform" : "weighted";
}

enum class WeightBasis { mutants, loc };

struct SampleConfig {
    Approach approach = Approach::uniform;
    double rate = 1.0; // fraction in (0, 1]
    std::uint64_t seed = 0;
    WeightBasis weight_basis = WeightBasis::mutants;
};

struct SampleSet {
    SampleConfig config;
    std::set<std::int64_t> mutant_ids;
    std::int64_t target_size = 0;
};

class SampleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// N = round(rate * total), floored at 1 for any positive rate.
inline std::int64_t sample_size(std::size_t total, double rate) {
    std::int64_t n = std::llround(rate * static_cast<double>(total));
    if (n < 1) n = 1;
    if (n > static_cast<std::int64_t>(total)) n = static_cast<std::int64_t>(total);
    return n;
}

namespace detail {

inline void check_sample_pre(const ResultSet& rs, const SampleConfig& config) {
    if (rs.total_results() == 0) throw SampleError("cannot sample an empty result set");
    if (!(config.rate > 0.0) || config.rate > 1.0)
        throw SampleError("sampling rate must be in (0, 1]");
}

// Fenwick tree over per-mutant weights; find_prefix implements the roulette
// cumulative scan (first index whose running weight sum exceeds r) in
// O(log n).
class WeightWheel {
  public:
    explicit WeightWheel(const std::vector<double>& weights)
        : n_(weights.size()), tree_(weights.size() + 1, 0.0) {
        for (std::size_t i = 0; i < n_; ++i) tree_[i + 1] = weights[i];
        for (std::size_t i = 1; i <= n_; ++i) {
            std::size_t parent = i + (i & (~i + 1));
            if (parent <= n_) tree_[parent] += tree_[i];
        }
        std::size_t highest = 1;
        while (highest * 2 <= n_) highest *= 2;
        highest_bit_ = highest;
    }

    double total() const {
        double sum = 0.0;
        for (std::size_t k = n_; k > 0; k -= k & (~k + 1)) sum += tree_[k];
        return sum;
    }

    // Largest count of leading weights whose sum is <= r; the element at that
    // (0-based) index is the one the cumulative scan stops on.
    std::size_t find_prefix(double r) const {
        std::size_t idx = 0;
        double remaining = r;
        for (std::size_t step = highest_bit_; step > 0; step /= 2) {
            std::size_t next = idx + step;
            if (next <= n_ && tree_[next] <= remaining) {
                idx = next;
                remaining -= tree_[next];
            }
        }
        return idx < n_ ? idx : n_ - 1;
    }

    void remove(std::size_t i, double weight) {
        for (std::size_t k = i + 1; k <= n_; k += k & (~k + 1)) tree_[k] -= weight;
    }

  private:
    std::size_t n_;
    std::size_t highest_bit_;
    std::vector<double> tree_;
};

} // namespace detail

// Equiprobable selection of N distinct mutant ids (partial Fisher-Yates).
inline SampleSet uniform_sample(const ResultSet& rs, const SampleConfig& config) {
    detail::check_sample_pre(rs, config);
    std::vector<std::int64_t> ids = rs.result_ids();
    const std::int64_t n = sample_size(ids.size(), config.rate);
    Rng rng(config.seed);
    SampleSet sample;
    sample.config = config;
    sample.target_size = n;
    for (std::int64_t i = 0; i < n; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(i) + rng.bounded(ids.size() - static_cast<std::size_t>(i));
        std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
        sample.mutant_ids.insert(ids[static_cast<std::size_t>(i)]);
    }
    return sample;
}

// Per-mutant weights: 1 / (mutant count of the owning class), so every
// class's total weight is exactly 1. The loc basis divides by the class's
// recorded line count instead.
inline std::map<std::int64_t, double> class_weights(const ResultSet& rs,
                                                    WeightBasis basis = WeightBasis::mutants) {
    std::map<std::int64_t, double> weights;
    for (const auto& [cls, results] : rs.records) {
        double denom;
        if (basis == WeightBasis::mutants) {
            denom = static_cast<double>(results.size());
        } else {
            std::int64_t loc = 0;
            for (const MutantResult& r : results) {
                auto it = rs.mutant_catalog.find(r.mutant_id);
                if (it != rs.mutant_catalog.end()) loc = std::max(loc, it->second.class_loc);
            }
            if (loc <= 0)
                throw SampleError("store records no class size (loc) for class '" + cls +
                                  "'; use the mutants weight basis");
            denom = static_cast<double>(loc);
        }
        for (const MutantResult& r : results) weights[r.mutant_id] = 1.0 / denom;
    }
    return weights;
}

// Roulette-wheel selection without replacement: each spin draws r in
// [0, remaining weight) and takes the first mutant whose cumulative weight
// exceeds r; the chosen mutant leaves the wheel with its weight.
inline SampleSet weighted_sample(const ResultSet& rs, const SampleConfig& config) {
    detail::check_sample_pre(rs, config);
    std::vector<std::int64_t> ids = rs.result_ids();
    const std::int64_t n = sample_size(ids.size(), config.rate);

    SampleSet sample;
    sample.config = config;
    sample.target_size = n;
    if (static_cast<std::size_t>(n) == ids.size()) {
        sample.mutant_ids.insert(ids.begin(), ids.end());
        return sample;
    }

    std::map<std::int64_t, double> weight_by_id = class_weights(rs, config.weight_basis);
    std::vector<double> weights(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) weights[i] = weight_by_id.at(ids[i]);

    detail::WeightWheel wheel(weights);
    Rng rng(config.seed);
    for (std::int64_t drawn = 0; drawn < n; ++drawn) {
        const double r = rng.next_double() * wheel.total();
        std::size_t idx = wheel.find_prefix(r);
        if (weights[idx] == 0.0) {
            // Float round-off landed on an already-removed slot; take the
            // nearest remaining one.
            std::size_t lo = idx, hi = idx;
            while (true) {
                if (hi + 1 < ids.size() && weights[++hi] > 0.0) { idx = hi; break; }
                if (lo > 0 && weights[--lo] > 0.0) { idx = lo; break; }
                if (lo == 0 && hi + 1 >= ids.size()) throw SampleError("wheel exhausted");
            }
        }
        sample.mutant_ids.insert(ids[idx]);
        wheel.remove(idx, weights[idx]);
        weights[idx] = 0.0;
    }
    return sample;
}

inline SampleSet draw_sample(const ResultSet& rs, const SampleConfig& config) {
    return config.approach == Approach::uniform ? uniform_sample(rs, config)
                                                : weighted_sample(rs, config);
}

} // namespace mutsamp
