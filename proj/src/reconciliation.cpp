#include "typematch/reconciliation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>
#include <unordered_set>

#include <httplib.h>

#include "typematch/csv.hpp"
#include "typematch/error.hpp"
#include "typematch/project_store.hpp"

namespace typematch {

using nlohmann::json;

namespace {

std::string fold_case(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

TypeCandidate candidate_from_json(const json& item) {
    if (!item.is_object()) throw ProtocolError("candidate is not an object");
    const auto id = item.find("id");
    const auto score = item.find("score");
    if (id == item.end() || !id->is_string() || id->get_ref<const std::string&>().empty())
        throw ProtocolError("candidate without a non-empty string id");
    if (score == item.end() || !score->is_number())
        throw ProtocolError("candidate '" + id->get<std::string>() + "' has no numeric score");
    TypeCandidate c;
    c.type_id = id->get<std::string>();
    c.score = score->get<double>();
    if (!std::isfinite(c.score) || c.score < 0.0)
        throw ProtocolError("candidate '" + c.type_id + "' has a negative or non-finite score");
    const auto name = item.find("name");
    if (name != item.end() && !name->is_null()) {
        if (!name->is_string()) throw ProtocolError("candidate '" + c.type_id + "' has a non-string name");
        c.display_name = name->get<std::string>();
    } else {
        c.display_name = c.type_id;
    }
    return c;
}

std::vector<TypeCandidate> candidates_from_json(const json& arr) {
    if (!arr.is_array()) throw ProtocolError("candidate list is not an array");
    std::vector<TypeCandidate> out;
    out.reserve(arr.size());
    for (const auto& item : arr) out.push_back(candidate_from_json(item));
    return out;
}

} // namespace

json candidates_to_json(const std::vector<TypeCandidate>& candidates) {
    json arr = json::array();
    for (const auto& c : candidates) arr.push_back({{"id", c.type_id}, {"name", c.display_name}, {"score", c.score}});
    return arr;
}

// FixtureProvider

FixtureProvider::FixtureProvider(const json& doc, std::string id) : id_(std::move(id)) {
    const auto entries = doc.find("entries");
    if (!doc.is_object() || entries == doc.end() || !entries->is_object())
        throw ProtocolError("fixture document must have an \"entries\" object");
    for (const auto& [text, list] : entries->items()) {
        auto& slot = entries_[fold_case(trim(text))];
        auto parsed = candidates_from_json(list);
        slot.insert(slot.end(), parsed.begin(), parsed.end());
    }
}

FixtureProvider FixtureProvider::from_file(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ProtocolError("fixture '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return FixtureProvider(doc, "fixture:" + path.filename().string());
}

std::vector<TypeCandidate> FixtureProvider::search(const std::string& text, int limit) {
    const auto it = entries_.find(fold_case(trim(text)));
    if (it == entries_.end()) return {};
    auto out = it->second;
    if (limit > 0 && out.size() > static_cast<std::size_t>(limit)) {
        // Provider-side limit applies to its own ranking.
        std::stable_sort(out.begin(), out.end(),
                         [](const TypeCandidate& a, const TypeCandidate& b) { return a.score > b.score; });
        out.resize(static_cast<std::size_t>(limit));
    }
    return out;
}

// HttpProvider

HttpProvider::HttpProvider(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {
    while (base_url_.ends_with('/')) base_url_.pop_back();
    constexpr std::string_view scheme = "http://";
    if (!base_url_.starts_with(scheme))
        throw UsageError("provider URL must start with http:// (got '" + base_url_ + "')");
    const auto slash = base_url_.find('/', scheme.size());
    origin_ = base_url_.substr(0, slash);
    path_prefix_ = slash == std::string::npos ? std::string{} : base_url_.substr(slash);
    if (origin_.size() == scheme.size()) throw UsageError("provider URL has no host: '" + base_url_ + "'");
}

std::vector<TypeCandidate> HttpProvider::search(const std::string& text, int limit) {
    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Params params{{"query", text}, {"limit", std::to_string(limit)}};
    auto res = client.Get(path_prefix_ + "/search", params, httplib::Headers{{"Accept", "application/json"}});
    if (!res) throw TransportError("provider " + base_url_ + " unreachable: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw TransportError("provider " + base_url_ + " answered HTTP " + std::to_string(res->status));
    return parse_provider_response(res->body);
}

std::vector<TypeCandidate> parse_provider_response(std::string_view body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::parse_error& e) {
        throw ProtocolError(std::string("provider response is not JSON: ") + e.what());
    }
    const auto result = doc.is_object() ? doc.find("result") : doc.end();
    if (result == doc.end()) throw ProtocolError("provider response has no \"result\" member");
    return candidates_from_json(*result);
}

std::unique_ptr<TypeProvider> make_provider(std::string_view spec) {
    if (spec.starts_with("fixture:"))
        return std::make_unique<FixtureProvider>(FixtureProvider::from_file(std::string(spec.substr(8))));
    if (spec.starts_with("http:")) {
        auto rest = std::string(spec.substr(5));
        // Accept both "http:http://host" and plain "http://host".
        if (rest.starts_with("//")) rest = "http:" + rest;
        return std::make_unique<HttpProvider>(std::move(rest));
    }
    throw UsageError("provider must be fixture:<path> or http:<url> (got '" + std::string(spec) + "')");
}

// fetch_candidates

std::vector<TypeCandidate> fetch_candidates(TypeProvider& provider, std::string_view cell_text, int k) {
    if (k < 1) throw UsageError("candidate limit k must be positive");
    const auto text = trim(cell_text);
    if (text.empty()) throw UsageError("cannot reconcile blank cell text");

    auto raw = provider.search(std::string(text), k);

    std::vector<TypeCandidate> merged;
    for (auto& c : raw) {
        if (c.type_id.empty()) throw ProtocolError("provider returned a candidate without a type id");
        if (!std::isfinite(c.score) || c.score < 0.0)
            throw ProtocolError("provider returned an invalid score for '" + c.type_id + "'");
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const TypeCandidate& m) { return m.type_id == c.type_id; });
        if (it == merged.end()) merged.push_back(std::move(c));
        else it->score += c.score;
    }
    std::sort(merged.begin(), merged.end(), [](const TypeCandidate& a, const TypeCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.type_id < b.type_id;
    });
    if (merged.size() > static_cast<std::size_t>(k)) merged.resize(static_cast<std::size_t>(k));
    return merged;
}

// CandidateCache

std::optional<std::vector<TypeCandidate>> CandidateCache::find(const std::string& provider_id,
                                                               std::string_view text, int k) const {
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(Key{provider_id, std::string(trim(text)), k});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void CandidateCache::insert(const std::string& provider_id, std::string_view text, int k,
                            std::vector<TypeCandidate> candidates) {
    std::unique_lock lock(mutex_);
    entries_.insert_or_assign(Key{provider_id, std::string(trim(text)), k}, std::move(candidates));
}

std::size_t CandidateCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

void CandidateCache::clear() {
    std::unique_lock lock(mutex_);
    entries_.clear();
}

void CandidateCache::load(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return;
    json doc;
    try {
        doc = json::parse(read_file(path));
        std::unique_lock lock(mutex_);
        for (const auto& e : doc.at("entries"))
            entries_.insert_or_assign(
                Key{e.at("provider").get<std::string>(), e.at("text").get<std::string>(), e.at("k").get<int>()},
                candidates_from_json(e.at("candidates")));
    } catch (const json::exception& e) {
        throw Error("cache file '" + path.string() + "' is malformed: " + e.what());
    }
}

void CandidateCache::save(const std::filesystem::path& path) const {
    json entries = json::array();
    {
        std::shared_lock lock(mutex_);
        for (const auto& [key, candidates] : entries_)
            entries.push_back({{"provider", key.provider},
                               {"text", key.text},
                               {"k", key.k},
                               {"candidates", candidates_to_json(candidates)}});
    }
    write_file_atomic(path, json{{"entries", entries}}.dump(1));
}

// annotate_column

ColumnAnnotation annotate_column(TypeProvider& provider, const Column& column, CandidateCache& cache,
                                 const AnnotateOptions& options) {
    if (column.kind != ColumnKind::text)
        throw UsageError("column " + std::to_string(column.position) + " is " +
                         std::string(to_string(column.kind)) + "; only text columns are reconciled");
    if (options.k < 1) throw UsageError("candidate limit k must be positive");

    const auto provider_id = provider.id();
    std::vector<std::string> pending;
    std::unordered_set<std::string> seen;
    for (const auto& cell : column.cells) {
        auto text = std::string(trim(cell));
        if (text.empty() || !seen.insert(text).second) continue;
        if (cache.find(provider_id, text, options.k)) continue;
        pending.push_back(std::move(text));
    }

    std::vector<std::vector<TypeCandidate>> fetched(pending.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const auto work = [&] {
        while (!stop.load()) {
            const auto i = next.fetch_add(1);
            if (i >= pending.size()) return;
            try {
                fetched[i] = fetch_candidates(provider, pending[i], options.k);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                stop.store(true);
            }
        }
    };

    const auto workers = std::min(std::max<std::size_t>(options.max_in_flight, 1), pending.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    }
    if (first_error) std::rethrow_exception(first_error);

    for (std::size_t i = 0; i < pending.size(); ++i)
        cache.insert(provider_id, pending[i], options.k, std::move(fetched[i]));

    ColumnAnnotation out;
    out.position = column.position;
    for (std::size_t r = 0; r < column.cells.size(); ++r) {
        const auto text = trim(column.cells[r]);
        if (text.empty()) continue;
        auto cached = cache.find(provider_id, text, options.k);
        out.cells.push_back(CellAnnotation{r, column.cells[r], cached ? std::move(*cached) : std::vector<TypeCandidate>{}});
    }
    return out;
}

} // namespace typematch
