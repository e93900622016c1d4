#include "typematch/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "typematch/error.hpp"

namespace typematch {

double wilson_score(double p_hat, std::size_t n, double z) {
    if (!(p_hat >= 0.0 && p_hat <= 1.0)) throw UsageError("wilson_score: p_hat must lie in [0,1]");
    if (n < 1) throw UsageError("wilson_score: n must be at least 1");
    if (!(z > 0.0)) throw UsageError("wilson_score: z must be positive");

    const double nn = static_cast<double>(n);
    const double z2 = z * z;
    const double spread = z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn));
    const double w = (p_hat + z2 / (2.0 * nn) - spread) / (1.0 + z2 / nn);
    // Rounding can push the bound a few ulps outside [0, p_hat].
    return std::clamp(w, 0.0, p_hat);
}

std::vector<LabelSuggestion> suggest_labels(const ColumnTypeProfile& profile, double z, std::size_t top_m) {
    if (profile.empty()) throw EmptyProfileError("cannot label a column without type candidates");

    const double max_score = profile.all_scores.empty()
                                 ? 0.0
                                 : *std::max_element(profile.all_scores.begin(), profile.all_scores.end());

    std::vector<LabelSuggestion> out;
    out.reserve(profile.per_type_scores.size());
    for (const auto& [type, scores] : profile.per_type_scores) {
        if (scores.empty()) continue;
        const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
        const double p_hat = max_score > 0.0 ? std::clamp(mean / max_score, 0.0, 1.0) : 0.0;

        LabelSuggestion s;
        s.type_id = type;
        const auto name = profile.type_names.find(type);
        s.label = name != profile.type_names.end() && !name->second.empty() ? name->second : type;
        s.support_n = scores.size();
        s.p_hat = p_hat;
        s.wilson = wilson_score(p_hat, scores.size(), z);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const LabelSuggestion& a, const LabelSuggestion& b) {
        if (a.wilson != b.wilson) return a.wilson > b.wilson;
        return a.type_id < b.type_id;
    });
    if (out.size() > top_m) out.resize(top_m);
    return out;
}

nlohmann::ordered_json labels_to_json(std::size_t column, const std::vector<LabelSuggestion>& suggestions) {
    using oj = nlohmann::ordered_json;
    oj list = oj::array();
    for (const auto& s : suggestions) {
        oj item;
        item["label"] = s.label;
        item["type_id"] = s.type_id;
        item["wilson"] = s.wilson;
        item["n"] = s.support_n;
        list.push_back(std::move(item));
    }
    oj doc;
    doc["column"] = column;
    doc["suggestions"] = std::move(list);
    return doc;
}

} // namespace typematch
