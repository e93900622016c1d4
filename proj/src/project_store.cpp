#include "typematch/project_store.hpp"

#include <random>

#include "typematch/csv.hpp"
#include "typematch/error.hpp"

namespace typematch {

using nlohmann::json;

json table_to_json(const Table& table) {
    json headers = json::array();
    json kinds = json::array();
    for (const auto& c : table.columns) {
        headers.push_back(c.header ? json(*c.header) : json(nullptr));
        kinds.push_back(std::string(to_string(c.kind)));
    }
    json rows = json::array();
    for (std::size_t r = 0; r < table.row_count; ++r) rows.push_back(table.row(r));
    return json{{"name", table.name}, {"headers", headers}, {"kinds", kinds}, {"rows", rows}};
}

Table table_from_json(const json& doc) {
    try {
        std::vector<std::optional<std::string>> headers;
        for (const auto& h : doc.at("headers")) {
            if (h.is_null()) headers.emplace_back();
            else headers.emplace_back(h.get<std::string>());
        }
        std::vector<ColumnKind> kinds;
        for (const auto& k : doc.at("kinds")) kinds.push_back(column_kind_from_string(k.get<std::string>()));
        const auto rows = doc.at("rows").get<std::vector<std::vector<std::string>>>();
        if (kinds.size() != headers.size())
            throw UsageError("project document has " + std::to_string(headers.size()) + " headers but " +
                             std::to_string(kinds.size()) + " kinds");
        for (const auto& r : rows)
            if (r.size() != headers.size()) throw UsageError("project document is not rectangular");
        return Table::from_rows(doc.at("name").get<std::string>(), std::move(headers), rows, std::move(kinds));
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed project document: ") + e.what());
    }
}

bool is_valid_document_id(std::string_view id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_';
        if (!ok) return false;
    }
    return true;
}

std::string make_document_id(std::string_view prefix) {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    static constexpr char hex[] = "0123456789abcdef";
    std::string id(prefix);
    auto bits = rng();
    for (int i = 0; i < 16; ++i, bits >>= 4) id.push_back(hex[bits & 0xf]);
    return id;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    write_file(tmp, contents);
    std::filesystem::rename(tmp, path);
}

ProjectStore::ProjectStore(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
}

std::filesystem::path ProjectStore::path_for(const std::string& id) const { return root_ / (id + ".json"); }

std::string ProjectStore::save(const Table& table) {
    table.validate();
    const auto body = table_to_json(table).dump(2);
    std::lock_guard lock(mutex_);
    std::string id;
    do {
        id = make_document_id("p");
    } while (std::filesystem::exists(path_for(id)));
    write_file_atomic(path_for(id), body);
    return id;
}

Table ProjectStore::load(const std::string& id) const {
    if (!contains(id)) throw NotFoundError("unknown project '" + id + "'");
    std::string text;
    {
        std::lock_guard lock(mutex_);
        text = read_file(path_for(id));
    }
    try {
        return table_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
        throw Error("corrupt project '" + id + "': " + e.what());
    }
}

bool ProjectStore::contains(const std::string& id) const {
    if (!is_valid_document_id(id)) return false;
    std::lock_guard lock(mutex_);
    return std::filesystem::exists(path_for(id));
}

} // namespace typematch
