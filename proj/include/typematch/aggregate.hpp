#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "typematch/table.hpp"

namespace typematch {

enum class AggregateFn { sum, avg, count, min, max };

std::string_view to_string(AggregateFn fn);
AggregateFn aggregate_fn_from_string(std::string_view s);

struct AggregationSpec {
    std::size_t x_column = 0; // group key
    std::size_t y_column = 0; // values; must be numeric unless fn is count
    AggregateFn fn = AggregateFn::sum;
};

struct SeriesPoint {
    std::string key;
    double value = 0.0;

    bool operator==(const SeriesPoint&) const = default;
};

/// Groups rows by the x cell text and reduces the parseable y values of
/// each group. Unparseable y cells are skipped. `count` counts rows. For
/// avg/min/max a group with no parseable value is left out. Sorted by key.
std::vector<SeriesPoint> aggregate(const Table& table, const AggregationSpec& spec);

/// {"series": [{"key": str, "value": number}]}
nlohmann::ordered_json series_to_json(const std::vector<SeriesPoint>& series);

} // namespace typematch
