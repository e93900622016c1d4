#include "typematch/aggregate.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "typematch/error.hpp"
#include "typematch/kind.hpp"

namespace typematch {

std::string_view to_string(AggregateFn fn) {
    switch (fn) {
    case AggregateFn::sum: return "sum";
    case AggregateFn::avg: return "avg";
    case AggregateFn::count: return "count";
    case AggregateFn::min: return "min";
    case AggregateFn::max: return "max";
    }
    return "sum";
}

AggregateFn aggregate_fn_from_string(std::string_view s) {
    for (auto fn : {AggregateFn::sum, AggregateFn::avg, AggregateFn::count, AggregateFn::min, AggregateFn::max})
        if (to_string(fn) == s) return fn;
    throw UsageError("unknown aggregate function '" + std::string(s) + "' (expected sum, avg, count, min or max)");
}

namespace {

struct Group {
    std::size_t rows = 0;
    std::size_t values = 0;
    double sum = 0.0;
    std::optional<double> lo;
    std::optional<double> hi;
};

} // namespace

std::vector<SeriesPoint> aggregate(const Table& table, const AggregationSpec& spec) {
    const auto& x = table.column(spec.x_column);
    const auto& y = table.column(spec.y_column);
    if (spec.fn != AggregateFn::count && y.kind != ColumnKind::numeric)
        throw UsageError("column " + std::to_string(spec.y_column) + " is " + std::string(to_string(y.kind)) +
                         "; " + std::string(to_string(spec.fn)) + " needs a numeric column");

    std::map<std::string, Group> groups;
    for (std::size_t r = 0; r < table.row_count; ++r) {
        auto& g = groups[x.cells[r]];
        ++g.rows;
        const auto v = parse_number(y.cells[r]);
        if (!v) continue;
        ++g.values;
        g.sum += *v;
        g.lo = g.lo ? std::min(*g.lo, *v) : *v;
        g.hi = g.hi ? std::max(*g.hi, *v) : *v;
    }

    std::vector<SeriesPoint> out;
    for (const auto& [key, g] : groups) {
        switch (spec.fn) {
        case AggregateFn::count: out.push_back({key, static_cast<double>(g.rows)}); break;
        case AggregateFn::sum: out.push_back({key, g.sum}); break;
        case AggregateFn::avg:
            if (g.values) out.push_back({key, g.sum / static_cast<double>(g.values)});
            break;
        case AggregateFn::min:
            if (g.lo) out.push_back({key, *g.lo});
            break;
        case AggregateFn::max:
            if (g.hi) out.push_back({key, *g.hi});
            break;
        }
    }
    return out;
}

nlohmann::ordered_json series_to_json(const std::vector<SeriesPoint>& series) {
    using oj = nlohmann::ordered_json;
    oj list = oj::array();
    for (const auto& p : series) {
        oj item;
        item["key"] = p.key;
        item["value"] = p.value;
        list.push_back(std::move(item));
    }
    oj doc;
    doc["series"] = std::move(list);
    return doc;
}

} // namespace typematch
