#pragma once

#include <string_view>
#include <vector>

#include "typematch/matchers.hpp"
#include "typematch/table.hpp"

namespace typematch {

enum class Provenance { source_only, target_only, merged };

std::string_view to_string(Provenance p);

struct MergedTable {
    Table table;
    std::vector<Provenance> provenance; // one per column
};

/// Union of two tables: source rows first, then target rows. Each mapped
/// pair becomes one column (source header) holding the source cells
/// followed by the target cells. With include_unmatched, unmatched columns
/// of either table are kept and padded with empty cells on the other
/// table's rows. Column order is source order, then unmatched target
/// columns in target order.
MergedTable merge_tables(const Table& source, const Table& target, const Mapping& mapping,
                         bool include_unmatched = true);

} // namespace typematch
