#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "typematch/type_profile.hpp"

namespace typematch {

/// z for a 0.95 confidence level.
inline constexpr double kDefaultWilsonZ = 1.96;
inline constexpr std::size_t kDefaultTopLabels = 3;

/// Lower bound of the Wilson score interval for a Bernoulli proportion
/// p_hat observed over n trials:
///
///   (p + z^2/2n - z*sqrt(p(1-p)/n + z^2/4n^2)) / (1 + z^2/n)
///
/// Requires 0 <= p_hat <= 1, n >= 1, z > 0 (UsageError otherwise). The
/// result lies in [0, p_hat].
double wilson_score(double p_hat, std::size_t n, double z = kDefaultWilsonZ);

struct LabelSuggestion {
    std::string label;
    std::string type_id;
    double wilson = 0.0;
    std::size_t support_n = 0;
    double p_hat = 0.0;
};

/// Ranks the profile's types as header candidates. Every candidate score
/// is divided by the column's largest score so that each type's mean
/// score p_hat lies in [0,1]; n is the number of scores the type received.
/// Returns the top_m suggestions by Wilson bound (ties by type id).
/// Throws EmptyProfileError on an empty profile.
std::vector<LabelSuggestion> suggest_labels(const ColumnTypeProfile& profile, double z = kDefaultWilsonZ,
                                            std::size_t top_m = kDefaultTopLabels);

/// {"column": int, "suggestions": [{"label", "type_id", "wilson", "n"}]}
nlohmann::ordered_json labels_to_json(std::size_t column, const std::vector<LabelSuggestion>& suggestions);

} // namespace typematch
