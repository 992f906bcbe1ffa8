#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <vector>

#include "mutsamp/analysis.hpp"
#include "mutsamp/synthgen.hpp"

using namespace mutsamp;

namespace {

MutantResult result_of(std::int64_t id, const std::string& cls, MutantStatus status,
                       bool override_flag = false) {
    MutantResult r;
    r.mutant_id = id;
    r.class_name = cls;
    r.status = status;
    r.equivalent_override = override_flag;
    return r;
}

// Builds a ResultSet from per-class status lists.
ResultSet build_rs(const std::vector<std::pair<std::string, std::vector<MutantStatus>>>& classes) {
    ResultSet rs;
    rs.project_id = "test";
    std::int64_t next_id = 1;
    for (const auto& [cls, statuses] : classes) {
        for (MutantStatus status : statuses) {
            Mutant m;
            m.id = next_id;
            m.class_name = cls;
            m.file_path = cls;
            rs.mutant_catalog.emplace(m.id, m);
            rs.records[cls].push_back(result_of(next_id, cls, status));
            ++next_id;
        }
    }
    return rs;
}

constexpr auto K = MutantStatus::killed;
constexpr auto S = MutantStatus::survived;
constexpr auto T = MutantStatus::timeout;
constexpr auto B = MutantStatus::build_error;

} // namespace

TEST_CASE("class coverage is killed over considered") {
    auto rs = build_rs({{"A", {K, K, K, S}}});
    CHECK(class_coverage(rs.records.at("A")).coverage == doctest::Approx(0.75));
}

TEST_CASE("empty class carries the zero-denominator flag") {
    std::vector<MutantResult> none;
    auto entry = class_coverage(none);
    CHECK(entry.coverage == 0.0);
    CHECK(entry.zero_denominator);
}

TEST_CASE("timeouts kill, build errors vanish from both sides") {
    auto rs = build_rs({{"A", {K, K, T, S, B}}});
    auto entry = class_coverage(rs.records.at("A"));
    CHECK(entry.considered == 4);
    CHECK(entry.coverage == doctest::Approx(0.75));
}

TEST_CASE("equivalent overrides are excluded only when honored") {
    ResultSet rs = build_rs({{"A", {K, S, S}}});
    rs.records.at("A")[1].equivalent_override = true; // a survived mutant marked equivalent
    AnalysisOptions honor;
    honor.honor_overrides = true;
    CHECK(class_coverage(rs.records.at("A")).coverage == doctest::Approx(1.0 / 3.0));
    CHECK(class_coverage(rs.records.at("A"), honor).coverage == doctest::Approx(0.5));
}

TEST_CASE("coverage vector keeps the full-set class universe") {
    auto rs = build_rs({{"A", {K, K}}, {"B", {S, K}}, {"C", {K}}});
    auto full = coverage_vector(rs);
    REQUIRE(full.entries.size() == 3);
    CHECK(full.entries[0].class_name == "A");
    CHECK(full.entries[2].class_name == "C");

    // sample hits only A and B; C stays with coverage 0 and the flag
    std::set<std::int64_t> sample{1, 3};
    auto sampled = coverage_vector(rs, &sample);
    REQUIRE(sampled.entries.size() == 3);
    CHECK(sampled.entries[2].class_name == "C");
    CHECK(sampled.entries[2].coverage == 0.0);
    CHECK(sampled.entries[2].zero_denominator);

    AnalysisOptions drop;
    drop.include_unsampled = false;
    auto reduced = coverage_vector(rs, &sample, drop);
    REQUIRE(reduced.entries.size() == 2);
    CHECK(reduced.entries[0].class_name == "A");
    CHECK(reduced.entries[1].class_name == "B");
}

TEST_CASE("sample equal to the full set reproduces the full vector") {
    auto rs = build_rs({{"A", {K, S}}, {"B", {K}}});
    std::set<std::int64_t> all{1, 2, 3};
    auto full = coverage_vector(rs);
    auto sampled = coverage_vector(rs, &all);
    REQUIRE(full.entries.size() == sampled.entries.size());
    for (std::size_t i = 0; i < full.entries.size(); ++i)
        CHECK(full.entries[i].coverage == sampled.entries[i].coverage);
}

TEST_CASE("project coverage pools mutants rather than averaging classes") {
    auto rs = build_rs({{"A", {K, K, K, S}}, {"B", {K, S}}});
    CHECK(project_coverage(rs) == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("project coverage equals the mutant-weighted mean of class coverages") {
    SynthSpec spec;
    spec.class_count = 12;
    spec.size_distribution = LognormalSize{2.0, 1.0};
    spec.adequacy = {0.7};
    spec.seed = 99;
    ResultSet rs = generate_synthetic(spec);
    auto vec = coverage_vector(rs);
    double weighted = 0.0;
    std::int64_t total = 0;
    for (const auto& entry : vec.entries) {
        weighted += entry.coverage * static_cast<double>(entry.considered);
        total += entry.considered;
    }
    CHECK(std::abs(project_coverage(rs) - weighted / static_cast<double>(total)) < 1e-12);
}

TEST_CASE("distance is the absolute difference with domain checks") {
    CHECK(distance(0.80, 0.78) == doctest::Approx(0.02));
    CHECK(distance(0.5, 0.5) == 0.0);
    CHECK(distance(0.0, 1.0) == 1.0);
    CHECK_THROWS_AS(distance(-0.1, 0.5), AnalysisError);
    CHECK_THROWS_AS(distance(0.5, 1.5), AnalysisError);
}

TEST_CASE("rate 1.0 representativeness is exact") {
    auto rs = build_rs({{"A", {K, S}}, {"B", {K, K}}, {"C", {S}}});
    SampleConfig config{Approach::uniform, 1.0, 11};
    auto point = representativeness(rs, config, 3);
    CHECK(point.pearson_mean == 1.0);
    CHECK(point.kendall_mean == 1.0);
    CHECK(point.distance_mean == 0.0);
    CHECK(point.undefined_count == 0);
}

TEST_CASE("representativeness is reproducible for a fixed seed") {
    SynthSpec spec;
    spec.class_count = 8;
    spec.size_distribution = UniformSize{2, 14};
    spec.adequacy = {0.6};
    spec.seed = 5;
    ResultSet rs = generate_synthetic(spec);
    SampleConfig config{Approach::weighted, 0.4, 12345};
    auto a = representativeness(rs, config, 5);
    auto b = representativeness(rs, config, 5);
    CHECK(a.pearson_mean == b.pearson_mean);
    CHECK(a.kendall_mean == b.kendall_mean);
    CHECK(a.distance_mean == b.distance_mean);
}

TEST_CASE("mean distance matches the exhaustive hypergeometric oracle") {
    // two classes, 12 mutants, 8 killed; at rate 0.5 all C(12,6) samples are
    // equally likely and the exact mean distance is 10/99
    auto rs = build_rs({{"A", {K, K, S, S}}, {"B", {K, K, K, K, K, K, S, S}}});
    REQUIRE(rs.total_results() == 12);
    CHECK(project_coverage(rs) == doctest::Approx(8.0 / 12.0));
    SampleConfig config{Approach::uniform, 0.5, 1060000};
    auto point = representativeness(rs, config, 10000);
    CHECK(std::abs(point.distance_mean - 10.0 / 99.0) < 5e-4);
}

TEST_CASE("acceptable rate demands the metric stay above the critical point") {
    auto mk = [](int rate, double rho) {
        RepresentativenessPoint p;
        p.rate = rate / 100.0;
        p.pearson_mean = rho;
        p.kendall_mean = rho;
        return p;
    };
    std::vector<RepresentativenessPoint> points;
    for (int rate = 1; rate <= 100; ++rate) {
        double rho = rate < 41 ? 0.60 : 0.80;
        points.push_back(mk(rate, rho));
    }
    CHECK(acceptable_rate(points, CorrelationMetric::rho, 0.75) == 41);

    // crosses at 30 but dips at 35: the dip pushes the answer to 36
    for (auto& p : points) {
        const int rate = static_cast<int>(std::llround(p.rate * 100));
        p.pearson_mean = rate >= 30 ? 0.80 : 0.60;
        if (rate == 35) p.pearson_mean = 0.73;
    }
    CHECK(acceptable_rate(points, CorrelationMetric::rho, 0.75) == 36);

    // unreachable threshold
    CHECK_FALSE(acceptable_rate(points, CorrelationMetric::rho, 1.5).has_value());
}

TEST_CASE("class stats count, mean and population deviation") {
    auto rs = build_rs({{"A", {K, K, K, K, K, K, K, K, K, K}},
                        {"B", {S, S, S, S, S, S, S, S, S, S}},
                        {"C", {K, S, K, S, K, S, K, S, K, S}}});
    auto stats = class_stats(rs);
    CHECK(stats.class_count == 3);
    CHECK(stats.mu == doctest::Approx(10.0));
    CHECK(stats.sigma == doctest::Approx(0.0));

    auto rs2 = build_rs({{"A", {K}}, {"B", {K, S, K}}});
    auto stats2 = class_stats(rs2);
    CHECK(stats2.class_count == 2);
    CHECK(stats2.mu == doctest::Approx(2.0));
    CHECK(stats2.sigma == doctest::Approx(1.0));
}

TEST_CASE("sweep endpoint is exact and sweeps are reproducible") {
    SynthSpec spec;
    spec.class_count = 6;
    spec.size_distribution = UniformSize{3, 9};
    spec.adequacy = {0.5};
    spec.seed = 21;
    ResultSet rs = generate_synthetic(spec);

    auto report = sweep(rs, Approach::weighted, 777, 3);
    REQUIRE(report.points.size() == 100);
    const auto& last = report.points.back();
    CHECK(last.rate == doctest::Approx(1.0));
    CHECK(last.pearson_mean == 1.0);
    CHECK(last.kendall_mean == 1.0);
    CHECK(last.distance_mean == 0.0);

    auto again = sweep(rs, Approach::weighted, 777, 3);
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        CHECK(report.points[i].pearson_mean == again.points[i].pearson_mean);
        CHECK(report.points[i].kendall_mean == again.points[i].kendall_mean);
        CHECK(report.points[i].distance_mean == again.points[i].distance_mean);
    }
    CHECK(report.acceptable_rate_rho == again.acceptable_rate_rho);
}

TEST_CASE("sweep csv uses the frozen column layout") {
    SynthSpec spec;
    spec.class_count = 5;
    spec.size_distribution = ConstantSize{10};
    spec.adequacy = {0.6};
    spec.seed = 3;
    ResultSet rs = generate_synthetic(spec);
    auto report = sweep(rs, Approach::uniform, 42, 8);

    std::ostringstream curve;
    write_sweep_csv(report, curve);
    const std::string text = curve.str();
    CHECK(text.find("rate,pearson_mean,kendall_mean,distance_mean,undefined_count\n") !=
          std::string::npos);
    CHECK(text.find("# approach=uniform seed=42") != std::string::npos);
    CHECK(text.find("\n100,1.000000,1.000000,0.000000,0\n") != std::string::npos);

    std::ostringstream summary;
    write_sweep_summary_csv({report}, summary);
    CHECK(summary.str().find("approach,acceptable_rate_rho,acceptable_rate_tau,class_count,mu,"
                             "sigma\n") != std::string::npos);
    CHECK(summary.str().find("uniform,") != std::string::npos);
}

TEST_CASE("critical point moves acceptable rates but never the curves") {
    SynthSpec spec;
    spec.class_count = 10;
    spec.size_distribution = UniformSize{4, 12};
    spec.adequacy = {0.6};
    spec.seed = 13;
    ResultSet rs = generate_synthetic(spec);
    auto strict = sweep(rs, Approach::uniform, 55, 5, 0.75);
    auto stricter = sweep(rs, Approach::uniform, 55, 5, 0.9);
    REQUIRE(strict.points.size() == stricter.points.size());
    for (std::size_t i = 0; i < strict.points.size(); ++i) {
        CHECK(strict.points[i].pearson_mean == stricter.points[i].pearson_mean);
        CHECK(strict.points[i].kendall_mean == stricter.points[i].kendall_mean);
        CHECK(strict.points[i].distance_mean == stricter.points[i].distance_mean);
    }
    REQUIRE(strict.acceptable_rate_rho.has_value());
    REQUIRE(stricter.acceptable_rate_rho.has_value());
    CHECK(*stricter.acceptable_rate_rho >= *strict.acceptable_rate_rho);
}

TEST_CASE("constant coverage makes every repetition undefined") {
    auto rs = build_rs({{"A", {K, K}}, {"B", {K, K}}, {"C", {K, K}}});
    SampleConfig config{Approach::uniform, 0.5, 9};
    CHECK_THROWS_AS(representativeness(rs, config, 4), AnalysisError);
}
