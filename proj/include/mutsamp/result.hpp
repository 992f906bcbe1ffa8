#pragma once

// Execution verdicts and the in-memory view of a project's full mutant set.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mutsamp/mutant.hpp"

namespace mutsamp {

enum class MutantStatus {
    killed,
    survived,
    timeout,
    build_error,
};

inline std::string_view status_name(MutantStatus s) {
    switch (s) {
    case MutantStatus::killed:      return "killed";
    case MutantStatus::survived:    return "survived";
    case MutantStatus::timeout:     return "timeout";
    case MutantStatus::build_error: return "build-error";
    }
    return "?";
}

inline std::optional<MutantStatus> status_from_name(std::string_view name) {
    if (name == "killed") return MutantStatus::killed;
    if (name == "survived") return MutantStatus::survived;
    if (name == "timeout") return MutantStatus::timeout;
    if (name == "build-error") return MutantStatus::build_error;
    return std::nullopt;
}

struct MutantResult {
    std::int64_t mutant_id = 0;
    std::string class_name;
    MutantStatus status = MutantStatus::survived;
    std::int64_t duration_ms = 0;
    bool equivalent_override = false; // set only via explicit override records
};

// Complete mapping class -> results plus the mutant catalog. Maps keep
// classes and ids in deterministic order.
struct ResultSet {
    std::string project_id;
    std::map<std::string, std::vector<MutantResult>> records;
    std::map<std::int64_t, Mutant> mutant_catalog;

    std::size_t total_results() const {
        std::size_t n = 0;
        for (const auto& [cls, results] : records) n += results.size();
        return n;
    }

    // Ascending ids of all mutants that have a result: the sampling universe.
    std::vector<std::int64_t> result_ids() const {
        std::vector<std::int64_t> ids;
        ids.reserve(total_results());
        for (const auto& [cls, results] : records)
            for (const MutantResult& r : results) ids.push_back(r.mutant_id);
        std::sort(ids.begin(), ids.end());
        return ids;
    }
};

} // namespace mutsamp
