#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "typematch/reconciliation.hpp"
#include "typematch/stats.hpp"
#include "typematch/table.hpp"
#include "typematch/type_profile.hpp"

namespace typematch {

enum class MatcherId { name, cosine, pearson, spearman };

inline constexpr MatcherId kAllMatchers[] = {MatcherId::name, MatcherId::cosine, MatcherId::pearson,
                                             MatcherId::spearman};

std::string_view to_string(MatcherId id);
MatcherId matcher_from_string(std::string_view s);
/// Comma-separated list, e.g. "name,cosine,pearson". Duplicates collapse.
std::vector<MatcherId> parse_matcher_list(std::string_view csv);

bool is_type_matcher(MatcherId id);

struct MatcherScore {
    MatcherId matcher = MatcherId::name;
    std::optional<double> value; // nullopt: the matcher abstained

    bool skipped() const { return !value.has_value(); }
    bool operator==(const MatcherScore&) const = default;
};

struct MatchCandidate {
    std::size_t source = 0;
    std::size_t target = 0;
    std::vector<MatcherScore> scores; // in configured matcher order
    double combined = 0.0;

    std::optional<double> score(MatcherId id) const;
    bool operator==(const MatchCandidate&) const = default;
};

struct Correspondence {
    std::size_t source = 0;
    std::size_t target = 0;
    double score = 0.0;

    bool operator==(const Correspondence&) const = default;
};

/// One-to-one set of accepted correspondences.
struct Mapping {
    std::vector<Correspondence> pairs;

    bool empty() const { return pairs.empty(); }
    std::optional<std::size_t> target_of(std::size_t source) const;
    std::optional<std::size_t> source_of(std::size_t target) const;
    /// UsageError if any source or target appears twice.
    void check_one_to_one() const;
};

inline constexpr double kDefaultThreshold = 0.5;

struct MatchConfig {
    std::vector<MatcherId> matchers{std::begin(kAllMatchers), std::end(kAllMatchers)};
    double threshold = kDefaultThreshold;
    std::map<MatcherId, double> weights; // missing entries weigh 1
    TieStrategy ties = TieStrategy::average;

    double weight(MatcherId id) const;
    bool uses_type_matchers() const;
};

/// What a type matcher needs to know about one column.
struct TypedColumn {
    ColumnKind kind = ColumnKind::text;
    ColumnTypeProfile profile;
};

/// Edit distance over Unicode code points.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// 1 - levenshtein / max length on ASCII-lowercased headers; nullopt when
/// either header is absent.
std::optional<double> name_similarity(const std::optional<std::string>& h1,
                                      const std::optional<std::string>& h2);

/// Cosine, Pearson or Spearman score in [0,1]; nullopt when either column
/// is numeric/date or has no type evidence. Correlations below zero map
/// to 0.
std::optional<double> type_matcher_score(MatcherId algorithm, const TypedColumn& source, const TypedColumn& target,
                                         TieStrategy ties = TieStrategy::average);

/// Scores every (source, target) column pair with the enabled matchers.
/// `source_annotations` / `target_annotations` must cover every text
/// column when a type matcher is enabled. Pairs where every matcher
/// abstained, or whose combined score is below the threshold, are
/// dropped. Sorted by combined descending, then source, then target.
std::vector<MatchCandidate> match_tables(const Table& source, const Table& target,
                                         std::span<const ColumnAnnotation> source_annotations,
                                         std::span<const ColumnAnnotation> target_annotations,
                                         const MatchConfig& config);

/// Greedy one-to-one proposal over candidates in match_tables order.
Mapping assign(std::span<const MatchCandidate> candidates);

struct MatchResult {
    std::vector<MatcherId> matchers;
    std::vector<MatchCandidate> candidates;
    Mapping mapping;
};

/// {"pairs": [{"source", "target", "scores": {...}, "combined"}], "mapping": [[s, t], ...]}
nlohmann::ordered_json match_result_to_json(const MatchResult& result);
/// The canonical serialized form shared by every output path.
std::string render_match_json(const MatchResult& result);

/// Reads a mapping document: either {"mapping": [[s, t], ...]} (optionally
/// with the "pairs" of a match output, used to recover scores) or a bare
/// [[s, t], ...] array. Pairs without a known score get 1.
Mapping mapping_from_json(const nlohmann::json& doc);

} // namespace typematch
