#pragma once

// Shared loaders for the bundled two-table scenarios.

#include <algorithm>
#include <set>
#include <utility>

#include "test_support.hpp"
#include "typematch/csv.hpp"
#include "typematch/pipeline.hpp"

namespace testing_support {

struct Scenario {
    typematch::Table source;
    typematch::Table target;
};

inline Scenario noisy_scenario() {
    return {typematch::load_table_file(data_path("noisy_source.csv"), true),
            typematch::load_table_file(data_path("noisy_target.csv"), true)};
}

inline Scenario clean_scenario() {
    return {typematch::load_table_file(data_path("clean_source.csv"), true),
            typematch::load_table_file(data_path("clean_target.csv"), true)};
}

inline typematch::MatchResult run_with(const Scenario& s, typematch::TypeProvider& provider, const std::string& matchers) {
    typematch::CandidateCache cache;
    typematch::MatchConfig config;
    config.matchers = typematch::parse_matcher_list(matchers);
    return typematch::run_match(s.source, s.target, &provider, cache, config);
}

inline std::set<std::pair<std::size_t, std::size_t>> pair_set(const typematch::MatchResult& r) {
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (const auto& c : r.candidates) out.insert({c.source, c.target});
    return out;
}

inline const typematch::MatchCandidate* find_pair(const typematch::MatchResult& r, std::size_t s, std::size_t t) {
    const auto it = std::find_if(r.candidates.begin(), r.candidates.end(),
                                 [&](const typematch::MatchCandidate& c) { return c.source == s && c.target == t; });
    return it == r.candidates.end() ? nullptr : &*it;
}

} // namespace testing_support
