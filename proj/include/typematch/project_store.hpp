#pragma once

#include <filesystem>
#include <mutex>
#include <string>

#include <json.hpp>

#include "typematch/table.hpp"

namespace typematch {

/// {"name": str, "headers": [str|null], "kinds": [str], "rows": [[str]]}
nlohmann::json table_to_json(const Table& table);
Table table_from_json(const nlohmann::json& doc);

/// True for ids made only of [A-Za-z0-9_-]; anything else is never stored.
bool is_valid_document_id(std::string_view id);

/// A directory of project documents, one JSON file per table.
class ProjectStore {
public:
    explicit ProjectStore(std::filesystem::path root);

    std::string save(const Table& table);
    Table load(const std::string& id) const;
    bool contains(const std::string& id) const;

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path path_for(const std::string& id) const;

    std::filesystem::path root_;
    mutable std::mutex mutex_;
};

/// Random 16-hex-digit id with the given prefix.
std::string make_document_id(std::string_view prefix);

/// Writes via a temporary file and rename so readers never see a partial
/// document.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace typematch
