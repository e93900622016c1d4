#include "typematch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "typematch/error.hpp"

namespace typematch {

std::string_view to_string(TieStrategy s) {
    switch (s) {
    case TieStrategy::average: return "average";
    case TieStrategy::minimum: return "minimum";
    case TieStrategy::maximum: return "maximum";
    case TieStrategy::dense: return "dense";
    case TieStrategy::sequential: return "sequential";
    }
    return "average";
}

TieStrategy tie_strategy_from_string(std::string_view s) {
    for (auto t : {TieStrategy::average, TieStrategy::minimum, TieStrategy::maximum, TieStrategy::dense,
                   TieStrategy::sequential})
        if (to_string(t) == s) return t;
    throw UsageError("unknown tie strategy '" + std::string(s) + "'");
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw UsageError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    if (x.size() < 2) throw UsageError("pearson: need at least two paired values");
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(x.begin(), x.end(), finite) || !std::all_of(y.begin(), y.end(), finite))
        throw UsageError("pearson: non-finite input");

    const auto n = static_cast<double>(x.size());
    const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;

    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

std::vector<double> rank(std::span<const double> values, TieStrategy ties) {
    for (double v : values)
        if (std::isnan(v)) throw UsageError("rank: NaN input");

    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(values.size());
    std::size_t dense_rank = 0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        // Positions i..j (0-based) share one value; their natural ranks are i+1..j+1.
        ++dense_rank;
        for (std::size_t p = i; p <= j; ++p) {
            double r = 0.0;
            switch (ties) {
            case TieStrategy::average: r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0; break;
            case TieStrategy::minimum: r = static_cast<double>(i + 1); break;
            case TieStrategy::maximum: r = static_cast<double>(j + 1); break;
            case TieStrategy::dense: r = static_cast<double>(dense_rank); break;
            case TieStrategy::sequential: r = static_cast<double>(p + 1); break;
            }
            ranks[order[p]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y, TieStrategy ties) {
    if (x.size() != y.size())
        throw UsageError("spearman: length mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    const auto rx = rank(x, ties);
    const auto ry = rank(y, ties);
    return pearson(rx, ry);
}

} // namespace typematch
