#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "typematch/matchers.hpp"
#include "typematch/project_store.hpp"
#include "typematch/reconciliation.hpp"

namespace httplib {
class Server;
}

namespace typematch {

enum class Decision { pending, accepted, rejected, edited };

std::string_view to_string(Decision d);
Decision decision_from_string(std::string_view s);

/// One entry of a session's append-only decision log.
struct DecisionEvent {
    std::size_t source = 0;
    std::size_t target = 0;
    Decision decision = Decision::pending;
    std::optional<std::size_t> edited_target; // set for Decision::edited
    bool add = false;                         // user-added pair the matcher missed
};

struct PairState {
    std::size_t source = 0;
    std::size_t target = 0;
    std::optional<double> combined; // absent for user-added pairs
    Decision decision = Decision::pending;
    std::optional<std::size_t> edited_target;
    bool user_added = false;

    std::size_t effective_target() const { return edited_target.value_or(target); }
    bool is_accepted() const { return decision == Decision::accepted || decision == Decision::edited; }
};

struct Session {
    std::string id;
    std::string source_project;
    std::string target_project;
    MatchConfig config;
    AnnotateOptions annotate;
    std::string status = "ready";
    nlohmann::ordered_json matches; // canonical match document
    std::vector<DecisionEvent> log;
    std::optional<std::string> merged_project;

    /// Pair states obtained by replaying the log over the candidates.
    std::vector<PairState> replay() const;
    std::string matches_text() const;
};

nlohmann::ordered_json session_to_document(const Session& s);
Session session_from_document(const nlohmann::ordered_json& doc);

struct ServiceReply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Transport-independent core of the HTTP API. Every method maps library
/// errors onto status codes: 400 usage, 404 unknown id, 502 provider
/// failure, 500 otherwise.
class Service {
public:
    Service(std::filesystem::path data_dir, std::shared_ptr<TypeProvider> provider, AnnotateOptions defaults = {});

    ServiceReply create_project(std::string_view csv, std::string name, bool has_header);
    ServiceReply get_project(const std::string& id);
    ServiceReply create_session(std::string_view body);
    ServiceReply get_session(const std::string& id);
    ServiceReply get_matches(const std::string& id);
    ServiceReply post_decision(const std::string& id, std::string_view body);
    ServiceReply merge(const std::string& id, std::string_view body);
    ServiceReply aggregate(const std::string& project_id, const std::string& x, const std::string& y,
                           const std::string& fn);
    ServiceReply labels(const std::string& project_id, const std::string& column, const std::string& top);

    ProjectStore& projects() { return projects_; }

private:
    struct Slot {
        std::mutex mutex;
        Session session;
    };

    std::shared_ptr<Slot> find_session(const std::string& id);
    void persist(const Session& s) const;
    std::filesystem::path session_path(const std::string& id) const;
    nlohmann::ordered_json session_view(const Session& s) const;

    ProjectStore projects_;
    std::filesystem::path sessions_dir_;
    std::shared_ptr<TypeProvider> provider_;
    AnnotateOptions defaults_;
    CandidateCache cache_;

    std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

/// Registers the REST routes on an httplib server.
void mount_routes(httplib::Server& server, Service& service);

} // namespace typematch
