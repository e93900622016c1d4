#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "typematch/table.hpp"

namespace typematch {

struct TypeCandidate {
    std::string type_id;
    std::string display_name;
    double score = 0.0;

    bool operator==(const TypeCandidate&) const = default;
};

struct CellAnnotation {
    std::size_t row = 0;
    std::string cell_text;
    std::vector<TypeCandidate> candidates; // score descending, unique type ids

    bool operator==(const CellAnnotation&) const = default;
};

struct ColumnAnnotation {
    std::size_t position = 0;
    std::vector<CellAnnotation> cells; // one per non-empty cell, row order

    bool operator==(const ColumnAnnotation&) const = default;
};

inline constexpr int kDefaultCandidatesPerCell = 5;

/// Source of ranked type candidates for a piece of cell text.
/// Implementations must be safe to call from several threads at once.
class TypeProvider {
public:
    virtual ~TypeProvider() = default;

    /// Stable identity used to key cached results.
    virtual std::string id() const = 0;

    /// Raw provider answer for `text`, at most `limit` entries if the
    /// provider honors limits. Unknown text yields an empty list.
    virtual std::vector<TypeCandidate> search(const std::string& text, int limit) = 0;
};

/// Offline provider backed by a JSON document
/// {"entries": {"<cell text>": [{"id", "name", "score"}, ...]}}.
/// Lookup is case-insensitive (ASCII folding) on trimmed text.
class FixtureProvider final : public TypeProvider {
public:
    explicit FixtureProvider(const nlohmann::json& doc, std::string id = "fixture");
    static FixtureProvider from_file(const std::filesystem::path& path);

    std::string id() const override { return id_; }
    std::vector<TypeCandidate> search(const std::string& text, int limit) override;

    std::size_t entry_count() const { return entries_.size(); }

private:
    std::string id_;
    std::map<std::string, std::vector<TypeCandidate>, std::less<>> entries_;
};

/// Client for `GET <base>/search?query=<text>&limit=<k>` answering
/// {"result": [{"id", "name", "score"}, ...]}.
class HttpProvider final : public TypeProvider {
public:
    explicit HttpProvider(std::string base_url,
                          std::chrono::milliseconds timeout = std::chrono::seconds(10));

    std::string id() const override { return "http:" + base_url_; }
    std::vector<TypeCandidate> search(const std::string& text, int limit) override;

private:
    std::string base_url_;
    std::string origin_;      // scheme://host[:port]
    std::string path_prefix_; // path below the origin, no trailing slash
    std::chrono::milliseconds timeout_;
};

/// Parses `fixture:<path>` or `http:<url>`.
std::unique_ptr<TypeProvider> make_provider(std::string_view spec);

/// Env var naming an HTTP provider base URL when no explicit spec is given.
inline constexpr const char* kProviderUrlEnv = "TYPEMATCH_PROVIDER_URL";

/// Parses a provider answer body in the HTTP wire format. Throws
/// ProtocolError when the shape is wrong.
std::vector<TypeCandidate> parse_provider_response(std::string_view body);

/// Normalized top-k candidates for one cell: duplicates merged by summed
/// score, sorted by score descending (ties by type id), truncated to k.
std::vector<TypeCandidate> fetch_candidates(TypeProvider& provider, std::string_view cell_text, int k);

/// Thread-safe memo of fetch_candidates results keyed by
/// (provider id, trimmed cell text, k). Optionally persisted as JSON.
class CandidateCache {
public:
    std::optional<std::vector<TypeCandidate>> find(const std::string& provider_id, std::string_view text,
                                                   int k) const;
    void insert(const std::string& provider_id, std::string_view text, int k,
                std::vector<TypeCandidate> candidates);

    std::size_t size() const;
    void clear();

    void load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

private:
    struct Key {
        std::string provider;
        std::string text;
        int k;
        auto operator<=>(const Key&) const = default;
    };

    mutable std::shared_mutex mutex_;
    std::map<Key, std::vector<TypeCandidate>> entries_;
};

struct AnnotateOptions {
    int k = kDefaultCandidatesPerCell;
    std::size_t max_in_flight = 8;
};

/// One CellAnnotation per non-empty cell of a text column. Each distinct
/// cell text is requested from the provider at most once; cached answers
/// are reused. On a provider error no further requests are started and the
/// first error is rethrown once in-flight requests finish.
ColumnAnnotation annotate_column(TypeProvider& provider, const Column& column, CandidateCache& cache,
                                 const AnnotateOptions& options = {});

nlohmann::json candidates_to_json(const std::vector<TypeCandidate>& candidates);

} // namespace typematch
