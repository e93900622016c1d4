#pragma once

#include <cstddef>
#include <vector>

#include "typematch/labeling.hpp"
#include "typematch/matchers.hpp"
#include "typematch/reconciliation.hpp"
#include "typematch/table.hpp"

namespace typematch {

/// Annotations for every text column of the table, in column order.
std::vector<ColumnAnnotation> annotate_table(TypeProvider& provider, const Table& table, CandidateCache& cache,
                                             const AnnotateOptions& options = {});

/// Reconciles (when a type matcher is enabled), scores and assigns.
/// `provider` may be null when only the name matcher runs.
MatchResult run_match(const Table& source, const Table& target, TypeProvider* provider, CandidateCache& cache,
                      const MatchConfig& config, const AnnotateOptions& options = {});

std::vector<LabelSuggestion> label_column(TypeProvider& provider, const Table& table, std::size_t column,
                                          CandidateCache& cache, const AnnotateOptions& options = {},
                                          double z = kDefaultWilsonZ, std::size_t top_m = kDefaultTopLabels);

} // namespace typematch
