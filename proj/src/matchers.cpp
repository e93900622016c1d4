#include "typematch/matchers.hpp"

#include <algorithm>
#include <set>

#include "typematch/error.hpp"

namespace typematch {

std::string_view to_string(MatcherId id) {
    switch (id) {
    case MatcherId::name: return "name";
    case MatcherId::cosine: return "cosine";
    case MatcherId::pearson: return "pearson";
    case MatcherId::spearman: return "spearman";
    }
    return "name";
}

MatcherId matcher_from_string(std::string_view s) {
    for (auto id : kAllMatchers)
        if (to_string(id) == s) return id;
    throw UsageError("unknown matcher '" + std::string(s) + "' (expected name, cosine, pearson or spearman)");
}

std::vector<MatcherId> parse_matcher_list(std::string_view csv) {
    std::vector<MatcherId> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const auto comma = csv.find(',', start);
        const auto item = trim(csv.substr(start, comma == std::string_view::npos ? csv.npos : comma - start));
        if (!item.empty()) {
            const auto id = matcher_from_string(item);
            if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw UsageError("no matchers selected");
    return out;
}

bool is_type_matcher(MatcherId id) { return id != MatcherId::name; }

std::optional<double> MatchCandidate::score(MatcherId id) const {
    for (const auto& s : scores)
        if (s.matcher == id) return s.value;
    return std::nullopt;
}

std::optional<std::size_t> Mapping::target_of(std::size_t source) const {
    for (const auto& p : pairs)
        if (p.source == source) return p.target;
    return std::nullopt;
}

std::optional<std::size_t> Mapping::source_of(std::size_t target) const {
    for (const auto& p : pairs)
        if (p.target == target) return p.source;
    return std::nullopt;
}

void Mapping::check_one_to_one() const {
    std::set<std::size_t> sources;
    std::set<std::size_t> targets;
    for (const auto& p : pairs) {
        if (!sources.insert(p.source).second)
            throw UsageError("source column " + std::to_string(p.source) + " is mapped twice");
        if (!targets.insert(p.target).second)
            throw UsageError("target column " + std::to_string(p.target) + " is mapped twice");
    }
}

double MatchConfig::weight(MatcherId id) const {
    const auto it = weights.find(id);
    return it == weights.end() ? 1.0 : it->second;
}

bool MatchConfig::uses_type_matchers() const {
    return std::any_of(matchers.begin(), matchers.end(), is_type_matcher);
}

namespace {

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        const auto b = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        char32_t cp = b;
        if (b >= 0xF0 && b < 0xF8) { len = 4; cp = b & 0x07; }
        else if (b >= 0xE0) { len = 3; cp = b & 0x0F; }
        else if (b >= 0xC0) { len = 2; cp = b & 0x1F; }
        if (len > 1 && i + len <= s.size()) {
            bool ok = true;
            for (std::size_t k = 1; k < len; ++k) {
                const auto cb = static_cast<unsigned char>(s[i + k]);
                if ((cb & 0xC0) != 0x80) { ok = false; break; }
                cp = (cp << 6) | (cb & 0x3F);
            }
            if (ok) {
                out.push_back(cp);
                i += len;
                continue;
            }
        }
        // Stray byte: keep it as its own symbol.
        out.push_back(b);
        ++i;
    }
    return out;
}

char32_t fold(char32_t c) { return (c >= U'A' && c <= U'Z') ? c - U'A' + U'a' : c; }

} // namespace

namespace {

std::size_t edit_distance(const std::u32string& s, const std::u32string& t) {
    std::vector<std::size_t> row(t.size() + 1);
    for (std::size_t j = 0; j <= t.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= s.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= t.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (s[i - 1] == t[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[t.size()];
}

std::u32string folded(std::string_view header) {
    auto u = decode_utf8(trim(header));
    for (auto& c : u) c = fold(c);
    return u;
}

} // namespace

std::size_t levenshtein(std::string_view a, std::string_view b) {
    return edit_distance(decode_utf8(a), decode_utf8(b));
}

std::optional<double> name_similarity(const std::optional<std::string>& h1, const std::optional<std::string>& h2) {
    if (!h1 || !h2) return std::nullopt;
    const auto a = folded(*h1);
    const auto b = folded(*h2);
    const auto longest = std::max(a.size(), b.size());
    if (longest == 0) return std::nullopt;
    return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
}

std::optional<double> type_matcher_score(MatcherId algorithm, const TypedColumn& source, const TypedColumn& target,
                                         TieStrategy ties) {
    if (!is_type_matcher(algorithm)) throw UsageError("name matcher is not a type matcher");
    if (source.kind != ColumnKind::text || target.kind != ColumnKind::text) return std::nullopt;
    if (source.profile.empty() || target.profile.empty()) return std::nullopt;

    switch (algorithm) {
    case MatcherId::cosine:
        return cosine_similarity(source.profile.vector(), target.profile.vector());
    case MatcherId::pearson:
    case MatcherId::spearman: {
        const auto arrays = build_profile_arrays(source.profile, target.profile);
        // A correlation needs at least two aligned entries.
        if (arrays.types.size() < 2) return std::nullopt;
        const double r = algorithm == MatcherId::pearson ? pearson(arrays.x, arrays.y)
                                                         : spearman(arrays.x, arrays.y, ties);
        return std::clamp(r, 0.0, 1.0);
    }
    case MatcherId::name: break;
    }
    return std::nullopt;
}

namespace {

std::vector<TypedColumn> typed_columns(const Table& table, std::span<const ColumnAnnotation> annotations,
                                       bool need_profiles) {
    std::vector<TypedColumn> out(table.column_count());
    for (const auto& c : table.columns) out[c.position].kind = c.kind;
    std::vector<bool> covered(table.column_count(), false);
    for (const auto& a : annotations) {
        if (a.position >= table.column_count())
            throw UsageError("annotation for column " + std::to_string(a.position) + " of table '" + table.name +
                             "' which has " + std::to_string(table.column_count()) + " columns");
        if (out[a.position].kind != ColumnKind::text) continue;
        out[a.position].profile = build_profile(a);
        covered[a.position] = true;
    }
    if (need_profiles) {
        for (const auto& c : table.columns)
            if (c.kind == ColumnKind::text && !covered[c.position])
                throw UsageError("text column " + std::to_string(c.position) + " of table '" + table.name +
                                 "' has no reconciliation annotation");
    }
    return out;
}

bool candidate_order(const MatchCandidate& a, const MatchCandidate& b) {
    if (a.combined != b.combined) return a.combined > b.combined;
    if (a.source != b.source) return a.source < b.source;
    return a.target < b.target;
}

} // namespace

std::vector<MatchCandidate> match_tables(const Table& source, const Table& target,
                                         std::span<const ColumnAnnotation> source_annotations,
                                         std::span<const ColumnAnnotation> target_annotations,
                                         const MatchConfig& config) {
    if (config.matchers.empty()) throw UsageError("no matchers enabled");
    if (!(config.threshold >= 0.0 && config.threshold <= 1.0))
        throw UsageError("threshold must lie in [0,1]");
    for (auto id : config.matchers)
        if (!(config.weight(id) > 0.0)) throw UsageError("matcher weights must be positive");

    const bool need_profiles = config.uses_type_matchers();
    const auto src_cols = typed_columns(source, source_annotations, need_profiles);
    const auto tgt_cols = typed_columns(target, target_annotations, need_profiles);

    std::vector<MatchCandidate> out;
    for (const auto& s : source.columns) {
        for (const auto& t : target.columns) {
            MatchCandidate cand;
            cand.source = s.position;
            cand.target = t.position;
            double weighted = 0.0;
            double total_weight = 0.0;
            for (auto id : config.matchers) {
                MatcherScore ms{id, std::nullopt};
                if (id == MatcherId::name) ms.value = name_similarity(s.header, t.header);
                else ms.value = type_matcher_score(id, src_cols[s.position], tgt_cols[t.position], config.ties);
                if (ms.value) {
                    weighted += config.weight(id) * *ms.value;
                    total_weight += config.weight(id);
                }
                cand.scores.push_back(ms);
            }
            if (total_weight == 0.0) continue;
            cand.combined = std::clamp(weighted / total_weight, 0.0, 1.0);
            if (cand.combined < config.threshold) continue;
            out.push_back(std::move(cand));
        }
    }
    std::sort(out.begin(), out.end(), candidate_order);
    return out;
}

Mapping assign(std::span<const MatchCandidate> candidates) {
    std::vector<MatchCandidate> ordered(candidates.begin(), candidates.end());
    std::stable_sort(ordered.begin(), ordered.end(), candidate_order);
    Mapping m;
    std::set<std::size_t> used_sources;
    std::set<std::size_t> used_targets;
    for (const auto& c : ordered) {
        if (used_sources.contains(c.source) || used_targets.contains(c.target)) continue;
        used_sources.insert(c.source);
        used_targets.insert(c.target);
        m.pairs.push_back({c.source, c.target, c.combined});
    }
    return m;
}

nlohmann::ordered_json match_result_to_json(const MatchResult& result) {
    using oj = nlohmann::ordered_json;
    oj pairs = oj::array();
    for (const auto& c : result.candidates) {
        oj scores = oj::object();
        for (const auto& s : c.scores) {
            if (s.value) scores[std::string(to_string(s.matcher))] = *s.value;
            else scores[std::string(to_string(s.matcher))] = "skipped";
        }
        oj pair;
        pair["source"] = c.source;
        pair["target"] = c.target;
        pair["scores"] = std::move(scores);
        pair["combined"] = c.combined;
        pairs.push_back(std::move(pair));
    }
    oj mapping = oj::array();
    for (const auto& p : result.mapping.pairs) mapping.push_back(oj::array({p.source, p.target}));
    oj doc;
    doc["pairs"] = std::move(pairs);
    doc["mapping"] = std::move(mapping);
    return doc;
}

std::string render_match_json(const MatchResult& result) { return match_result_to_json(result).dump(2) + "\n"; }

Mapping mapping_from_json(const nlohmann::json& doc) {
    try {
        const nlohmann::json* list = &doc;
        std::map<std::pair<std::size_t, std::size_t>, double> known;
        if (doc.is_object()) {
            list = &doc.at("mapping");
            if (const auto pairs = doc.find("pairs"); pairs != doc.end()) {
                for (const auto& p : *pairs)
                    known[{p.at("source").get<std::size_t>(), p.at("target").get<std::size_t>()}] =
                        p.at("combined").get<double>();
            }
        }
        if (!list->is_array()) throw UsageError("mapping must be an array of [source, target] pairs");
        Mapping m;
        for (const auto& item : *list) {
            if (!item.is_array() || item.size() < 2)
                throw UsageError("mapping entry must be [source, target]");
            Correspondence c{item[0].get<std::size_t>(), item[1].get<std::size_t>(), 1.0};
            if (item.size() >= 3) c.score = item[2].get<double>();
            else if (const auto it = known.find({c.source, c.target}); it != known.end()) c.score = it->second;
            m.pairs.push_back(c);
        }
        m.check_one_to_one();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed mapping document: ") + e.what());
    }
}

} // namespace typematch
