#include "typematch/merge.hpp"

#include "typematch/error.hpp"
#include "typematch/kind.hpp"

namespace typematch {

std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::source_only: return "source-only";
    case Provenance::target_only: return "target-only";
    case Provenance::merged: return "merged";
    }
    return "merged";
}

MergedTable merge_tables(const Table& source, const Table& target, const Mapping& mapping, bool include_unmatched) {
    for (const auto& p : mapping.pairs) {
        if (p.source >= source.column_count())
            throw UsageError("mapping references source column " + std::to_string(p.source) + " but '" +
                             source.name + "' has " + std::to_string(source.column_count()) + " columns");
        if (p.target >= target.column_count())
            throw UsageError("mapping references target column " + std::to_string(p.target) + " but '" +
                             target.name + "' has " + std::to_string(target.column_count()) + " columns");
    }
    mapping.check_one_to_one();

    MergedTable out;
    auto& t = out.table;
    t.name = source.name + "+" + target.name;
    t.row_count = source.row_count + target.row_count;

    const auto add_column = [&](const std::optional<std::string>& header, const std::vector<Cell>* upper,
                                const std::vector<Cell>* lower, Provenance prov) {
        Column c;
        c.position = t.columns.size();
        c.header = header;
        c.cells.reserve(t.row_count);
        if (upper) c.cells.insert(c.cells.end(), upper->begin(), upper->end());
        else c.cells.resize(source.row_count);
        if (lower) c.cells.insert(c.cells.end(), lower->begin(), lower->end());
        else c.cells.resize(t.row_count);
        c.kind = infer_column_kind(c);
        t.columns.push_back(std::move(c));
        out.provenance.push_back(prov);
    };

    for (const auto& s : source.columns) {
        if (const auto tgt = mapping.target_of(s.position)) {
            add_column(s.header, &s.cells, &target.columns[*tgt].cells, Provenance::merged);
        } else if (include_unmatched) {
            add_column(s.header, &s.cells, nullptr, Provenance::source_only);
        }
    }
    if (include_unmatched) {
        for (const auto& c : target.columns)
            if (!mapping.source_of(c.position)) add_column(c.header, nullptr, &c.cells, Provenance::target_only);
    }
    t.validate();
    return out;
}

} // namespace typematch
