#pragma once

// Mutation-coverage analysis: per-class and pooled coverage, correlation of
// sampled against full coverage vectors, rate sweeps, and acceptable
// sampling rates. Build-error results never count; timeouts count as killed;
// equivalent overrides are honored only on request.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mutsamp/result.hpp"
#include "mutsamp/sampler.hpp"
#include "mutsamp/stats.hpp"

namespace mutsamp {

class AnalysisError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct AnalysisOptions {
    bool honor_overrides = false;   // drop results whose equivalent_override is set
    bool include_unsampled = true;  // keep classes the sample missed, at coverage 0
};

struct CoverageEntry {
    std::string class_name;
    double coverage = 0.0;
    std::int64_t considered = 0;    // results in the denominator
    bool zero_denominator = false;
};

struct CoverageVector {
    std::vector<CoverageEntry> entries; // sorted by class_name
};

namespace detail {

inline bool result_considered(const MutantResult& r, const AnalysisOptions& opts) {
    if (r.status == MutantStatus::build_error) return false;
    if (opts.honor_overrides && r.equivalent_override) return false;
    return true;
}

inline bool result_killed(const MutantResult& r) {
    return r.status == MutantStatus::killed || r.status == MutantStatus::timeout;
}

} // namespace detail

// killed / total over the considered results of one class; zero considered
// results yield coverage 0 with the zero-denominator flag.
inline CoverageEntry class_coverage(std::span<const MutantResult> results,
                                    const AnalysisOptions& opts = {}) {
    CoverageEntry entry;
    std::int64_t killed = 0;
    for (const MutantResult& r : results) {
        if (!detail::result_considered(r, opts)) continue;
        ++entry.considered;
        if (detail::result_killed(r)) ++killed;
    }
    if (entry.considered == 0) {
        entry.zero_denominator = true;
        entry.coverage = 0.0;
    } else {
        entry.coverage = static_cast<double>(killed) / static_cast<double>(entry.considered);
    }
    return entry;
}

// One entry per class with at least one result in the full set. When a sample
// is given, each class's results are restricted to the sampled ids; classes
// the sample missed stay in the vector at coverage 0 unless
// include_unsampled is off.
inline CoverageVector coverage_vector(const ResultSet& rs,
                                      const std::set<std::int64_t>* sample = nullptr,
                                      const AnalysisOptions& opts = {}) {
    CoverageVector vec;
    for (const auto& [cls, results] : rs.records) {
        if (results.empty()) continue;
        std::vector<MutantResult> chosen;
        std::size_t sampled_count = 0;
        if (sample) {
            for (const MutantResult& r : results)
                if (sample->count(r.mutant_id)) {
                    chosen.push_back(r);
                    ++sampled_count;
                }
            if (sampled_count == 0 && !opts.include_unsampled) continue;
        }
        CoverageEntry entry =
            class_coverage(sample ? std::span<const MutantResult>(chosen)
                                  : std::span<const MutantResult>(results),
                           opts);
        entry.class_name = cls;
        vec.entries.push_back(std::move(entry));
    }
    return vec;
}

// Pooled killed/total over every considered result (not the mean of class
// coverages).
inline double project_coverage(const ResultSet& rs,
                               const std::set<std::int64_t>* sample = nullptr,
                               const AnalysisOptions& opts = {}) {
    std::int64_t killed = 0, considered = 0;
    for (const auto& [cls, results] : rs.records) {
        for (const MutantResult& r : results) {
            if (sample && !sample->count(r.mutant_id)) continue;
            if (!detail::result_considered(r, opts)) continue;
            ++considered;
            if (detail::result_killed(r)) ++killed;
        }
    }
    if (considered == 0) throw AnalysisError("no considered mutants for project coverage");
    return static_cast<double>(killed) / static_cast<double>(considered);
}

inline double distance(double full_coverage, double sample_coverage) {
    if (full_coverage < 0.0 || full_coverage > 1.0 || sample_coverage < 0.0 ||
        sample_coverage > 1.0)
        throw AnalysisError("coverage values must lie in [0, 1]");
    return std::abs(full_coverage - sample_coverage);
}

struct RepresentativenessPoint {
    double rate = 0.0;          // sampling rate as a fraction
    double pearson_mean = 0.0;
    double kendall_mean = 0.0;
    double distance_mean = 0.0;
    int repetitions = 0;
    int undefined_count = 0;    // repetitions excluded from the means
};

// Draws `repetitions` samples with seeds config.seed + 0 .. + repetitions-1,
// correlates each sampled coverage vector against the full one, and averages.
// A sample covering every mutant is the full set itself: rho = tau = 1 and
// distance = 0 exactly. Repetitions with a degenerate (constant) vector are
// excluded from the means and counted.
inline RepresentativenessPoint representativeness(const ResultSet& rs, SampleConfig config,
                                                  int repetitions,
                                                  const AnalysisOptions& opts = {}) {
    if (repetitions < 1) throw AnalysisError("repetitions must be >= 1");

    const CoverageVector full_vec = coverage_vector(rs, nullptr, opts);
    const double full_cov = project_coverage(rs, nullptr, opts);
    const std::size_t universe = rs.total_results();

    RepresentativenessPoint point;
    point.rate = config.rate;
    point.repetitions = repetitions;

    double sum_rho = 0.0, sum_tau = 0.0, sum_dist = 0.0;
    int correlation_defined = 0;
    int distance_defined = 0;
    for (int rep = 0; rep < repetitions; ++rep) {
        SampleConfig rep_config = config;
        rep_config.seed = config.seed + static_cast<std::uint64_t>(rep);
        SampleSet sample = draw_sample(rs, rep_config);

        if (sample.mutant_ids.size() == universe) {
            sum_rho += 1.0;
            sum_tau += 1.0;
            ++correlation_defined;
            ++distance_defined; // distance contribution is exactly 0
            continue;
        }

        const CoverageVector sample_vec = coverage_vector(rs, &sample.mutant_ids, opts);

        std::vector<double> full_values, sample_values;
        full_values.reserve(sample_vec.entries.size());
        sample_values.reserve(sample_vec.entries.size());
        std::size_t fi = 0;
        for (const CoverageEntry& se : sample_vec.entries) {
            while (fi < full_vec.entries.size() && full_vec.entries[fi].class_name != se.class_name)
                ++fi;
            if (fi == full_vec.entries.size()) break;
            full_values.push_back(full_vec.entries[fi].coverage);
            sample_values.push_back(se.coverage);
        }

        std::optional<double> rho, tau;
        if (full_values.size() >= 2) {
            rho = pearson_rho(full_values, sample_values);
            tau = kendall_tau_b(full_values, sample_values);
        }
        if (rho && tau) {
            sum_rho += *rho;
            sum_tau += *tau;
            ++correlation_defined;
        } else {
            ++point.undefined_count;
        }

        bool sample_has_considered = false;
        for (const CoverageEntry& se : sample_vec.entries)
            if (!se.zero_denominator) {
                sample_has_considered = true;
                break;
            }
        if (sample_has_considered) {
            sum_dist += distance(full_cov, project_coverage(rs, &sample.mutant_ids, opts));
            ++distance_defined;
        }
    }

    if (correlation_defined == 0)
        throw AnalysisError("correlation undefined in every repetition (constant coverage)");
    point.pearson_mean = sum_rho / correlation_defined;
    point.kendall_mean = sum_tau / correlation_defined;
    point.distance_mean = distance_defined > 0 ? sum_dist / distance_defined : 0.0;
    return point;
}

enum class CorrelationMetric { rho, tau };

// Smallest rate from which the metric stays above the critical point for all
// larger rates; empty when even rate 100 fails (possible only for
// critical >= 1).
inline std::optional<int> acceptable_rate(const std::vector<RepresentativenessPoint>& points,
                                          CorrelationMetric metric, double critical) {
    std::optional<int> best;
    std::vector<const RepresentativenessPoint*> sorted;
    sorted.reserve(points.size());
    for (const RepresentativenessPoint& p : points) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(), [](const RepresentativenessPoint* a,
                                               const RepresentativenessPoint* b) {
        return a->rate < b->rate;
    });
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        const double value =
            metric == CorrelationMetric::rho ? (*it)->pearson_mean : (*it)->kendall_mean;
        if (value > critical)
            best = static_cast<int>(std::llround((*it)->rate * 100.0));
        else
            break;
    }
    return best;
}

struct ClassStats {
    std::int64_t class_count = 0;
    double mu = 0.0;    // mean per-class mutant count
    double sigma = 0.0; // population standard deviation
};

inline ClassStats class_stats(const ResultSet& rs) {
    ClassStats stats;
    std::vector<double> sizes;
    for (const auto& [cls, results] : rs.records)
        if (!results.empty()) sizes.push_back(static_cast<double>(results.size()));
    stats.class_count = static_cast<std::int64_t>(sizes.size());
    if (sizes.empty()) throw AnalysisError("result set has no classes with mutants");
    double sum = 0.0;
    for (double s : sizes) sum += s;
    stats.mu = sum / static_cast<double>(sizes.size());
    double var = 0.0;
    for (double s : sizes) var += (s - stats.mu) * (s - stats.mu);
    stats.sigma = std::sqrt(var / static_cast<double>(sizes.size()));
    return stats;
}

struct SweepReport {
    Approach approach = Approach::uniform;
    std::vector<RepresentativenessPoint> points; // rates 1..100%
    std::optional<int> acceptable_rate_rho;
    std::optional<int> acceptable_rate_tau;
    ClassStats stats;
    std::uint64_t seed = 0;
    int repetitions = 0;
    double critical = 0.75;
};

// Full 1%..100% sweep. Each rate gets its own block of repetition seeds
// (seed + (rate-1) * repetitions), so any point is reproducible in
// isolation and evaluation order cannot change the result.
inline SweepReport sweep(const ResultSet& rs, Approach approach, std::uint64_t seed,
                         int repetitions = 10, double critical = 0.75,
                         const AnalysisOptions& opts = {},
                         WeightBasis weight_basis = WeightBasis::mutants) {
    if (rs.total_results() == 0) throw AnalysisError("result set is empty");
    SweepReport report;
    report.approach = approach;
    report.seed = seed;
    report.repetitions = repetitions;
    report.critical = critical;
    report.stats = class_stats(rs);
    report.points.reserve(100);
    for (int rate = 1; rate <= 100; ++rate) {
        SampleConfig config;
        config.approach = approach;
        config.rate = static_cast<double>(rate) / 100.0;
        config.seed = seed + static_cast<std::uint64_t>(rate - 1) *
                                 static_cast<std::uint64_t>(repetitions);
        config.weight_basis = weight_basis;
        report.points.push_back(representativeness(rs, config, repetitions, opts));
    }
    report.acceptable_rate_rho = acceptable_rate(report.points, CorrelationMetric::rho, critical);
    report.acceptable_rate_tau = acceptable_rate(report.points, CorrelationMetric::tau, critical);
    return report;
}

namespace detail {

inline std::string format_fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

inline std::string format_rate(const std::optional<int>& rate) {
    return rate ? std::to_string(*rate) : std::string("never");
}

} // namespace detail

// Curve CSV: one row per rate. The leading '#' lines carry provenance and
// the informational p<0.01 coefficient thresholds for the vector size.
inline void write_sweep_csv(const SweepReport& report, std::ostream& out) {
    out << "# approach=" << approach_name(report.approach) << " seed=" << report.seed
        << " repetitions=" << report.repetitions
        << " critical=" << detail::format_fixed(report.critical, 2) << "\n";
    const std::size_t n = static_cast<std::size_t>(report.stats.class_count);
    out << "# classes=" << n;
    if (auto r = pearson_significance_threshold(n, kZForP01))
        out << " p01_min_abs_rho=" << detail::format_fixed(*r, 4);
    if (auto t = kendall_significance_threshold(n, kZForP01))
        out << " p01_min_abs_tau=" << detail::format_fixed(*t, 4);
    out << "\n";
    out << "rate,pearson_mean,kendall_mean,distance_mean,undefined_count\n";
    for (const RepresentativenessPoint& p : report.points) {
        out << std::llround(p.rate * 100.0) << ',' << detail::format_fixed(p.pearson_mean) << ','
            << detail::format_fixed(p.kendall_mean) << ',' << detail::format_fixed(p.distance_mean)
            << ',' << p.undefined_count << "\n";
    }
}

inline void write_sweep_summary_csv(const std::vector<SweepReport>& reports, std::ostream& out) {
    if (!reports.empty()) {
        out << "# seed=" << reports.front().seed << " repetitions=" << reports.front().repetitions
            << " critical=" << detail::format_fixed(reports.front().critical, 2) << "\n";
    }
    out << "approach,acceptable_rate_rho,acceptable_rate_tau,class_count,mu,sigma\n";
    for (const SweepReport& r : reports) {
        out << approach_name(r.approach) << ',' << detail::format_rate(r.acceptable_rate_rho)
            << ',' << detail::format_rate(r.acceptable_rate_tau) << ',' << r.stats.class_count
            << ',' << detail::format_fixed(r.stats.mu) << ',' << detail::format_fixed(r.stats.sigma)
            << "\n";
    }
}

} // namespace mutsamp
