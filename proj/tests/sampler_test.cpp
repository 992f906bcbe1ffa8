#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "mutsamp/sampler.hpp"
#include "mutsamp/synthgen.hpp"

using namespace mutsamp;

namespace {

// Result set with the given class sizes; kills are irrelevant to sampling.
ResultSet sized_classes(const std::vector<std::int64_t>& sizes) {
    ResultSet rs;
    rs.project_id = "test";
    std::int64_t next_id = 1;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        std::string cls = "class" + std::to_string(c);
        for (std::int64_t k = 0; k < sizes[c]; ++k) {
            Mutant m;
            m.id = next_id++;
            m.class_name = cls;
            m.file_path = cls;
            m.class_loc = 100 * static_cast<std::int64_t>(c + 1);
            rs.mutant_catalog.emplace(m.id, m);
            MutantResult r;
            r.mutant_id = m.id;
            r.class_name = cls;
            r.status = MutantStatus::survived;
            rs.records[cls].push_back(r);
        }
    }
    return rs;
}

} // namespace

TEST_CASE("uniform sample honors the size contract") {
    ResultSet rs = sized_classes({100});
    SampleConfig config{Approach::uniform, 0.10, 42};
    SampleSet s = uniform_sample(rs, config);
    CHECK(s.target_size == 10);
    CHECK(s.mutant_ids.size() == 10);
}

TEST_CASE("rate 1.0 selects everything for both approaches") {
    ResultSet rs = sized_classes({9, 1});
    for (Approach approach : {Approach::uniform, Approach::weighted}) {
        SampleConfig config{approach, 1.0, 7};
        SampleSet s = draw_sample(rs, config);
        CHECK(s.mutant_ids.size() == 10);
    }
}

TEST_CASE("sample size rounds and floors at one") {
    CHECK(sample_size(100, 0.10) == 10);
    CHECK(sample_size(100, 0.004) == 1);
    CHECK(sample_size(3, 1.0) == 3);
    CHECK(sample_size(1000, 0.005) == 5);
}

TEST_CASE("same seed reproduces the same sample") {
    ResultSet rs = sized_classes({40, 25, 5});
    for (Approach approach : {Approach::uniform, Approach::weighted}) {
        SampleConfig config{approach, 0.3, 20240817};
        CHECK(draw_sample(rs, config).mutant_ids == draw_sample(rs, config).mutant_ids);
        SampleConfig other = config;
        other.seed += 1;
        CHECK(draw_sample(rs, other).mutant_ids != draw_sample(rs, config).mutant_ids);
    }
}

TEST_CASE("class weights are the inverse of class size") {
    ResultSet rs = sized_classes({9, 1});
    auto weights = class_weights(rs);
    REQUIRE(weights.size() == 10);
    double class0 = 0.0, class1 = 0.0;
    for (const auto& [id, w] : weights) {
        if (rs.mutant_catalog.at(id).class_name == "class0") {
            CHECK(w == doctest::Approx(1.0 / 9.0));
            class0 += w;
        } else {
            CHECK(w == doctest::Approx(1.0));
            class1 += w;
        }
    }
    CHECK(class0 == doctest::Approx(1.0));
    CHECK(class1 == doctest::Approx(1.0));
}

TEST_CASE("singleton classes degenerate to uniform weights") {
    ResultSet rs = sized_classes({1, 1, 1, 1});
    for (const auto& [id, w] : class_weights(rs)) CHECK(w == doctest::Approx(1.0));
}

TEST_CASE("loc weight basis divides by recorded class size") {
    ResultSet rs = sized_classes({2, 2});
    auto weights = class_weights(rs, WeightBasis::loc);
    for (const auto& [id, w] : weights) {
        const auto& m = rs.mutant_catalog.at(id);
        CHECK(w == doctest::Approx(1.0 / static_cast<double>(m.class_loc)));
    }
}

TEST_CASE("samples never contain duplicates") {
    ResultSet rs = sized_classes({17, 3, 30, 1, 9});
    for (Approach approach : {Approach::uniform, Approach::weighted}) {
        for (double rate : {0.05, 0.33, 0.8, 1.0}) {
            SampleConfig config{approach, rate, 99};
            SampleSet s = draw_sample(rs, config);
            // std::set enforces uniqueness; the size contract proves no draw
            // was swallowed by a duplicate
            CHECK(s.mutant_ids.size() == static_cast<std::size_t>(s.target_size));
        }
    }
}

TEST_CASE("empty result set cannot be sampled") {
    ResultSet rs;
    SampleConfig config{Approach::uniform, 0.5, 1};
    CHECK_THROWS_AS(uniform_sample(rs, config), SampleError);
    config.approach = Approach::weighted;
    CHECK_THROWS_AS(weighted_sample(rs, config), SampleError);
}

TEST_CASE("two-class wheel picks the singleton half the time") {
    // classes of 9 and 1 mutants: both have total weight 1, so a single
    // draw hits the singleton with probability 1/2
    ResultSet rs = sized_classes({9, 1});
    const std::int64_t singleton_id = 10;
    int hits = 0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        SampleConfig config{Approach::weighted, 0.1, 5000 + static_cast<std::uint64_t>(i)};
        SampleSet s = weighted_sample(rs, config); // N = 1
        REQUIRE(s.mutant_ids.size() == 1);
        if (s.mutant_ids.count(singleton_id)) ++hits;
    }
    const double freq = static_cast<double>(hits) / draws;
    CHECK(freq == doctest::Approx(0.5).epsilon(0.025));
}

TEST_CASE("first-draw class marginals are uniform over classes") {
    // for N=1 every class is hit with probability 1/(number of classes),
    // whatever the size distribution
    ResultSet rs = sized_classes({12, 1, 30, 4});
    std::map<std::string, int> hits;
    const int draws = 40000;
    for (int i = 0; i < draws; ++i) {
        SampleConfig config{Approach::weighted, 0.01, 777000 + static_cast<std::uint64_t>(i)};
        SampleSet s = weighted_sample(rs, config);
        REQUIRE(s.mutant_ids.size() == 1);
        hits[rs.mutant_catalog.at(*s.mutant_ids.begin()).class_name]++;
    }
    const double expected = 0.25;
    const double sigma = std::sqrt(expected * (1 - expected) / draws);
    for (const auto& [cls, count] : hits) {
        const double freq = static_cast<double>(count) / draws;
        CAPTURE(cls);
        CHECK(std::abs(freq - expected) < 4 * sigma);
    }
}

TEST_CASE("wheel selections match a literal cumulative-scan roulette") {
    ResultSet rs = sized_classes({7, 3, 1, 12, 5, 2, 9});
    const std::vector<std::int64_t> ids = rs.result_ids();
    auto weight_by_id = class_weights(rs);
    for (std::uint64_t seed = 4000; seed < 4200; ++seed) {
        for (double rate : {0.15, 0.4, 0.85}) {
            SampleConfig config{Approach::weighted, rate, seed};
            SampleSet fast = weighted_sample(rs, config);

            // reference: naive scan, fresh total each spin, chosen weight zeroed
            std::vector<double> weights;
            weights.reserve(ids.size());
            for (std::int64_t id : ids) weights.push_back(weight_by_id.at(id));
            Rng rng(seed);
            std::set<std::int64_t> picked;
            const std::int64_t n = sample_size(ids.size(), rate);
            if (static_cast<std::size_t>(n) == ids.size()) {
                picked.insert(ids.begin(), ids.end());
            } else {
                for (std::int64_t k = 0; k < n; ++k) {
                    double total = 0.0;
                    for (double w : weights) total += w;
                    const double r = rng.next_double() * total;
                    double cumulative = 0.0;
                    std::size_t idx = ids.size() - 1;
                    for (std::size_t i = 0; i < ids.size(); ++i) {
                        cumulative += weights[i];
                        if (cumulative > r) {
                            idx = i;
                            break;
                        }
                    }
                    while (weights[idx] == 0.0 && idx > 0) --idx;
                    picked.insert(ids[idx]);
                    weights[idx] = 0.0;
                }
            }
            CAPTURE(seed);
            CAPTURE(rate);
            CHECK(fast.mutant_ids == picked);
        }
    }
}

TEST_CASE("uniform marginals match the rate at desk scale") {
    ResultSet rs = sized_classes({50});
    const double rate = 0.2;
    const int seeds = 20000;
    std::map<std::int64_t, int> counts;
    for (int i = 0; i < seeds; ++i) {
        SampleConfig config{Approach::uniform, rate, 31337 + static_cast<std::uint64_t>(i)};
        for (std::int64_t id : uniform_sample(rs, config).mutant_ids) counts[id]++;
    }
    const double sigma = std::sqrt(rate * (1 - rate) / seeds);
    for (const auto& [id, count] : counts) {
        const double freq = static_cast<double>(count) / seeds;
        CAPTURE(id);
        CHECK(std::abs(freq - rate) < 4 * sigma);
    }
}
