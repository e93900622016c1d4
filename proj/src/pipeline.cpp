#include "typematch/pipeline.hpp"

#include "typematch/error.hpp"

namespace typematch {

std::vector<ColumnAnnotation> annotate_table(TypeProvider& provider, const Table& table, CandidateCache& cache,
                                             const AnnotateOptions& options) {
    std::vector<ColumnAnnotation> out;
    for (const auto& c : table.columns)
        if (c.kind == ColumnKind::text) out.push_back(annotate_column(provider, c, cache, options));
    return out;
}

MatchResult run_match(const Table& source, const Table& target, TypeProvider* provider, CandidateCache& cache,
                      const MatchConfig& config, const AnnotateOptions& options) {
    std::vector<ColumnAnnotation> src_ann;
    std::vector<ColumnAnnotation> tgt_ann;
    if (config.uses_type_matchers()) {
        if (!provider) throw UsageError("type matchers need a reconciliation provider");
        src_ann = annotate_table(*provider, source, cache, options);
        tgt_ann = annotate_table(*provider, target, cache, options);
    }
    MatchResult result;
    result.matchers = config.matchers;
    result.candidates = match_tables(source, target, src_ann, tgt_ann, config);
    result.mapping = assign(result.candidates);
    return result;
}

std::vector<LabelSuggestion> label_column(TypeProvider& provider, const Table& table, std::size_t column,
                                          CandidateCache& cache, const AnnotateOptions& options, double z,
                                          std::size_t top_m) {
    const auto& col = table.column(column);
    const auto annotation = annotate_column(provider, col, cache, options);
    return suggest_labels(build_profile(annotation), z, top_m);
}

} // namespace typematch
