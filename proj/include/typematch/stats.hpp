#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace typematch {

/// How tied values share ranks. `average` is the natural-ranking default.
enum class TieStrategy {
    average,    // mean of the spanned ranks
    minimum,    // lowest spanned rank
    maximum,    // highest spanned rank
    dense,      // consecutive ranks, no gaps after ties
    sequential, // first occurrence ranks first
};

std::string_view to_string(TieStrategy s);
TieStrategy tie_strategy_from_string(std::string_view s);

/// Sample Pearson correlation r. Arrays must have equal length >= 2
/// of finite values (UsageError otherwise). Zero variance on either side
/// yields 0.
double pearson(std::span<const double> x, std::span<const double> y);

/// Ascending ranks starting at 1. NaN input is a UsageError.
std::vector<double> rank(std::span<const double> values, TieStrategy ties = TieStrategy::average);

/// Pearson correlation of the rank-transformed arrays.
double spearman(std::span<const double> x, std::span<const double> y,
                TieStrategy ties = TieStrategy::average);

} // namespace typematch
