#pragma once

// Synthetic result sets with controlled class count, class-size distribution
// and per-class kill probability. Kills are independent Bernoulli draws, so
// these stores validate the sampling and statistics machinery, not
// real-project constants.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mutsamp/result.hpp"
#include "mutsamp/rng.hpp"

namespace mutsamp {

struct ConstantSize {
    std::int64_t count = 1;
};
struct UniformSize {
    std::int64_t lo = 1, hi = 1; // inclusive
};
struct LognormalSize {
    double mu = 0.0, sigma = 1.0; // parameters of the underlying normal
};
using SizeDistribution = std::variant<ConstantSize, UniformSize, LognormalSize>;

struct SynthSpec {
    std::int64_t class_count = 1;
    SizeDistribution size_distribution = ConstantSize{1};
    std::vector<double> adequacy{1.0}; // one shared value, or one per class
    std::uint64_t seed = 0;
};

class SynthError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::int64_t draw_class_size(const SizeDistribution& dist, Rng& rng) {
    if (const auto* c = std::get_if<ConstantSize>(&dist)) {
        if (c->count < 1) throw SynthError("constant class size must be >= 1");
        return c->count;
    }
    if (const auto* u = std::get_if<UniformSize>(&dist)) {
        if (u->lo < 1 || u->hi < u->lo) throw SynthError("uniform size bounds invalid");
        return u->lo + static_cast<std::int64_t>(
                           rng.bounded(static_cast<std::uint64_t>(u->hi - u->lo + 1)));
    }
    const auto& ln = std::get<LognormalSize>(dist);
    if (ln.sigma <= 0.0) throw SynthError("lognormal sigma must be positive");
    const double v = std::exp(ln.mu + ln.sigma * rng.next_normal());
    std::int64_t size = std::llround(v);
    return size < 1 ? 1 : size;
}

inline std::string synth_class_name(std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "class%04lld", static_cast<long long>(index));
    return buf;
}

} // namespace detail

// Deterministic per seed: per class, the size is drawn first, then one kill
// draw per mutant, so two specs differing only in adequacy share the same
// class-size structure for the same seed.
inline ResultSet generate_synthetic(const SynthSpec& spec) {
    if (spec.class_count < 1) throw SynthError("class_count must be >= 1");
    if (spec.adequacy.empty()) throw SynthError("adequacy must have at least one value");
    if (spec.adequacy.size() != 1 &&
        spec.adequacy.size() != static_cast<std::size_t>(spec.class_count))
        throw SynthError("adequacy list must have one value or one per class");
    for (double a : spec.adequacy)
        if (a < 0.0 || a > 1.0) throw SynthError("adequacy values must lie in [0, 1]");

    Rng rng(spec.seed);
    ResultSet rs;
    rs.project_id = "synthetic";
    std::int64_t next_id = 1;
    for (std::int64_t c = 0; c < spec.class_count; ++c) {
        const std::string cls = detail::synth_class_name(c + 1);
        const std::int64_t size = detail::draw_class_size(spec.size_distribution, rng);
        const double adequacy =
            spec.adequacy.size() == 1 ? spec.adequacy[0] : spec.adequacy[static_cast<std::size_t>(c)];
        for (std::int64_t k = 0; k < size; ++k) {
            Mutant m;
            m.id = next_id++;
            m.class_name = cls;
            m.file_path = cls;
            m.point.op = MutationOperator::aor_b;
            m.point.token_index = static_cast<std::size_t>(m.id);
            m.point.replacement_text = "-";
            m.point.line = static_cast<int>(k + 1);
            m.original_text = "+";
            m.class_loc = size;
            rs.mutant_catalog.emplace(m.id, m);

            MutantResult r;
            r.mutant_id = m.id;
            r.class_name = cls;
            r.status = rng.next_double() < adequacy ? MutantStatus::killed : MutantStatus::survived;
            r.duration_ms = 0;
            rs.records[cls].push_back(std::move(r));
        }
    }
    if (rs.total_results() == 0) throw SynthError("spec produced zero mutants");
    return rs;
}

} // namespace mutsamp
