#include "typematch/service.hpp"

#include <algorithm>
#include <charconv>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "typematch/aggregate.hpp"
#include "typematch/csv.hpp"
#include "typematch/error.hpp"
#include "typematch/labeling.hpp"
#include "typematch/merge.hpp"
#include "typematch/pipeline.hpp"

namespace typematch {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Decision d) {
    switch (d) {
    case Decision::pending: return "pending";
    case Decision::accepted: return "accepted";
    case Decision::rejected: return "rejected";
    case Decision::edited: return "edited";
    }
    return "pending";
}

Decision decision_from_string(std::string_view s) {
    for (auto d : {Decision::pending, Decision::accepted, Decision::rejected, Decision::edited})
        if (to_string(d) == s) return d;
    throw UsageError("unknown decision '" + std::string(s) + "'");
}

namespace {

json config_to_json(const MatchConfig& config, const AnnotateOptions& annotate) {
    json matchers = json::array();
    for (auto m : config.matchers) matchers.push_back(std::string(to_string(m)));
    json weights = json::object();
    for (const auto& [m, w] : config.weights) weights[std::string(to_string(m))] = w;
    return json{{"matchers", matchers},
                {"threshold", config.threshold},
                {"weights", weights},
                {"ties", std::string(to_string(config.ties))},
                {"k", annotate.k}};
}

void config_from_json(const json& doc, MatchConfig& config, AnnotateOptions& annotate) {
    if (doc.is_null()) return;
    if (!doc.is_object()) throw UsageError("config must be an object");
    if (const auto m = doc.find("matchers"); m != doc.end()) {
        if (m->is_string()) {
            config.matchers = parse_matcher_list(m->get<std::string>());
        } else {
            config.matchers.clear();
            for (const auto& item : *m) {
                const auto id = matcher_from_string(item.get<std::string>());
                if (std::find(config.matchers.begin(), config.matchers.end(), id) == config.matchers.end())
                    config.matchers.push_back(id);
            }
            if (config.matchers.empty()) throw UsageError("no matchers selected");
        }
    }
    if (const auto t = doc.find("threshold"); t != doc.end()) config.threshold = t->get<double>();
    if (const auto w = doc.find("weights"); w != doc.end())
        for (const auto& [name, value] : w->items()) config.weights[matcher_from_string(name)] = value.get<double>();
    if (const auto t = doc.find("ties"); t != doc.end()) config.ties = tie_strategy_from_string(t->get<std::string>());
    if (const auto k = doc.find("k"); k != doc.end()) annotate.k = k->get<int>();
    if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) throw UsageError("threshold must lie in [0,1]");
    if (annotate.k < 1) throw UsageError("k must be positive");
}

json event_to_json(const DecisionEvent& e) {
    json j{{"source", e.source}, {"target", e.target}, {"decision", std::string(to_string(e.decision))}};
    if (e.edited_target) j["edited_target"] = *e.edited_target;
    if (e.add) j["add"] = true;
    return j;
}

DecisionEvent event_from_json(const json& j) {
    DecisionEvent e;
    e.source = j.at("source").get<std::size_t>();
    e.target = j.at("target").get<std::size_t>();
    e.decision = decision_from_string(j.at("decision").get<std::string>());
    if (const auto t = j.find("edited_target"); t != j.end()) e.edited_target = t->get<std::size_t>();
    e.add = j.value("add", false);
    return e;
}

std::size_t parse_index(const std::string& text, const char* what) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw UsageError(std::string("query parameter '") + what + "' must be a non-negative integer");
    return v;
}

ServiceReply json_reply(int status, const json& body) { return {status, body.dump(2) + "\n"}; }
ServiceReply json_reply(int status, const ordered_json& body) { return {status, body.dump(2) + "\n"}; }

ServiceReply error_reply(int status, std::string_view message) {
    return json_reply(status, json{{"error", message}});
}

template <typename F>
ServiceReply guarded(F&& f) {
    try {
        return f();
    } catch (const NotFoundError& e) {
        return error_reply(404, e.what());
    } catch (const TransportError& e) {
        return error_reply(502, e.what());
    } catch (const ProtocolError& e) {
        return error_reply(502, e.what());
    } catch (const UsageError& e) {
        return error_reply(400, e.what());
    } catch (const ParseError& e) {
        return error_reply(400, e.what());
    } catch (const EmptyTableError& e) {
        return error_reply(400, e.what());
    } catch (const EmptyProfileError& e) {
        return error_reply(400, e.what());
    } catch (const json::exception& e) {
        return error_reply(400, std::string("malformed request body: ") + e.what());
    } catch (const std::exception& e) {
        spdlog::error("internal error: {}", e.what());
        return error_reply(500, e.what());
    }
}

json parse_body(std::string_view body) {
    if (trim(body).empty()) return json::object();
    return json::parse(body);
}

} // namespace

std::vector<PairState> Session::replay() const {
    std::vector<PairState> states;
    for (const auto& p : matches.at("pairs")) {
        PairState st;
        st.source = p.at("source").get<std::size_t>();
        st.target = p.at("target").get<std::size_t>();
        st.combined = p.at("combined").get<double>();
        states.push_back(st);
    }
    for (const auto& e : log) {
        auto it = std::find_if(states.begin(), states.end(),
                               [&](const PairState& s) { return s.source == e.source && s.target == e.target; });
        if (it == states.end()) {
            PairState added;
            added.source = e.source;
            added.target = e.target;
            added.user_added = true;
            states.push_back(added);
            it = std::prev(states.end());
        }
        it->decision = e.decision;
        it->edited_target = e.decision == Decision::edited ? e.edited_target : std::nullopt;
    }
    return states;
}

std::string Session::matches_text() const { return matches.dump(2) + "\n"; }

ordered_json session_to_document(const Session& s) {
    // Ordered so the stored match document keeps its rendered key order.
    ordered_json log = ordered_json::array();
    for (const auto& e : s.log) log.push_back(ordered_json::parse(event_to_json(e).dump()));
    ordered_json doc;
    doc["id"] = s.id;
    doc["source"] = s.source_project;
    doc["target"] = s.target_project;
    doc["config"] = ordered_json::parse(config_to_json(s.config, s.annotate).dump());
    doc["status"] = s.status;
    doc["matches"] = s.matches;
    doc["log"] = std::move(log);
    doc["merged"] = s.merged_project ? ordered_json(*s.merged_project) : ordered_json(nullptr);
    return doc;
}

Session session_from_document(const ordered_json& doc) {
    Session s;
    s.id = doc.at("id").get<std::string>();
    s.source_project = doc.at("source").get<std::string>();
    s.target_project = doc.at("target").get<std::string>();
    config_from_json(json::parse(doc.at("config").dump()), s.config, s.annotate);
    s.status = doc.value("status", "ready");
    s.matches = doc.at("matches");
    for (const auto& e : doc.at("log")) s.log.push_back(event_from_json(json::parse(e.dump())));
    if (const auto m = doc.find("merged"); m != doc.end() && !m->is_null()) s.merged_project = m->get<std::string>();
    return s;
}

Service::Service(std::filesystem::path data_dir, std::shared_ptr<TypeProvider> provider, AnnotateOptions defaults)
    : projects_(data_dir / "projects"),
      sessions_dir_(data_dir / "sessions"),
      provider_(std::move(provider)),
      defaults_(defaults) {
    std::filesystem::create_directories(sessions_dir_);
}

std::filesystem::path Service::session_path(const std::string& id) const { return sessions_dir_ / (id + ".json"); }

void Service::persist(const Session& s) const {
    write_file_atomic(session_path(s.id), session_to_document(s).dump(2));
}

std::shared_ptr<Service::Slot> Service::find_session(const std::string& id) {
    std::lock_guard lock(sessions_mutex_);
    if (const auto it = sessions_.find(id); it != sessions_.end()) return it->second;
    if (!is_valid_document_id(id) || !std::filesystem::exists(session_path(id)))
        throw NotFoundError("unknown session '" + id + "'");
    auto slot = std::make_shared<Slot>();
    slot->session = session_from_document(ordered_json::parse(read_file(session_path(id))));
    sessions_.emplace(id, slot);
    return slot;
}

ordered_json Service::session_view(const Session& s) const {
    ordered_json pairs = ordered_json::array();
    for (const auto& p : s.replay()) {
        ordered_json item;
        item["source"] = p.source;
        item["target"] = p.target;
        item["combined"] = p.combined ? ordered_json(*p.combined) : ordered_json(nullptr);
        item["decision"] = std::string(to_string(p.decision));
        if (p.edited_target) item["edited_target"] = *p.edited_target;
        item["user_added"] = p.user_added;
        pairs.push_back(std::move(item));
    }
    ordered_json view;
    view["id"] = s.id;
    view["source"] = s.source_project;
    view["target"] = s.target_project;
    view["status"] = s.status;
    view["config"] = ordered_json::parse(config_to_json(s.config, s.annotate).dump());
    view["pairs"] = std::move(pairs);
    view["decisions"] = s.log.size();
    view["merged"] = s.merged_project ? ordered_json(*s.merged_project) : ordered_json(nullptr);
    return view;
}

ServiceReply Service::create_project(std::string_view csv, std::string name, bool has_header) {
    return guarded([&] {
        const auto table = load_table(csv, has_header, name.empty() ? "project" : std::move(name));
        const auto id = projects_.save(table);
        return json_reply(201, json{{"id", id}, {"rows", table.row_count}, {"columns", table.column_count()}});
    });
}

ServiceReply Service::get_project(const std::string& id) {
    return guarded([&] { return json_reply(200, table_to_json(projects_.load(id))); });
}

ServiceReply Service::create_session(std::string_view body) {
    return guarded([&] {
        const auto req = parse_body(body);
        Session s;
        s.source_project = req.at("source").get<std::string>();
        s.target_project = req.at("target").get<std::string>();
        s.annotate = defaults_;
        config_from_json(req.value("config", json(nullptr)), s.config, s.annotate);

        const auto source = projects_.load(s.source_project);
        const auto target = projects_.load(s.target_project);
        if (s.config.uses_type_matchers() && !provider_)
            throw UsageError("type matchers requested but the service has no reconciliation provider");

        const auto result = run_match(source, target, provider_.get(), cache_, s.config, s.annotate);
        s.matches = match_result_to_json(result);
        s.status = "ready";

        auto slot = std::make_shared<Slot>();
        {
            std::lock_guard lock(sessions_mutex_);
            do {
                s.id = make_document_id("s");
            } while (sessions_.contains(s.id) || std::filesystem::exists(session_path(s.id)));
            slot->session = std::move(s);
            sessions_.emplace(slot->session.id, slot);
        }
        std::lock_guard lock(slot->mutex);
        persist(slot->session);
        return json_reply(201, session_view(slot->session));
    });
}

ServiceReply Service::get_session(const std::string& id) {
    return guarded([&] {
        auto slot = find_session(id);
        std::lock_guard lock(slot->mutex);
        return json_reply(200, session_view(slot->session));
    });
}

ServiceReply Service::get_matches(const std::string& id) {
    return guarded([&] {
        auto slot = find_session(id);
        std::lock_guard lock(slot->mutex);
        return ServiceReply{200, slot->session.matches_text()};
    });
}

ServiceReply Service::post_decision(const std::string& id, std::string_view body) {
    return guarded([&] {
        auto slot = find_session(id);
        const auto req = parse_body(body);
        const auto& pair = req.at("pair");
        if (!pair.is_array() || pair.size() != 2) throw UsageError("pair must be [source, target]");

        DecisionEvent e;
        e.source = pair[0].get<std::size_t>();
        e.target = pair[1].get<std::size_t>();
        e.decision = decision_from_string(req.at("decision").get<std::string>());
        e.add = req.value("add", false);
        if (e.decision == Decision::edited) {
            if (!req.contains("target")) throw UsageError("an edited decision needs a \"target\" column");
            e.edited_target = req.at("target").get<std::size_t>();
        }

        std::lock_guard lock(slot->mutex);
        auto& s = slot->session;
        const auto states = s.replay();
        const bool known = std::any_of(states.begin(), states.end(), [&](const PairState& p) {
            return p.source == e.source && p.target == e.target;
        });
        if (!known || e.edited_target) {
            const auto source = projects_.load(s.source_project);
            const auto target = projects_.load(s.target_project);
            if (!known) {
                if (!e.add)
                    throw UsageError("pair [" + std::to_string(e.source) + ", " + std::to_string(e.target) +
                                     "] is not a candidate; set \"add\": true to add it");
                if (e.source >= source.column_count() || e.target >= target.column_count())
                    throw UsageError("added pair references a column outside the tables");
            }
            if (e.edited_target && *e.edited_target >= target.column_count())
                throw UsageError("edited target column is outside the target table");
        }
        e.add = !known;
        s.log.push_back(e);
        persist(s);
        return json_reply(200, session_view(s));
    });
}

ServiceReply Service::merge(const std::string& id, std::string_view body) {
    return guarded([&] {
        auto slot = find_session(id);
        const auto req = parse_body(body);
        const bool include_unmatched = req.value("include_unmatched", true);

        std::lock_guard lock(slot->mutex);
        auto& s = slot->session;
        Mapping mapping;
        for (const auto& p : s.replay())
            if (p.is_accepted()) mapping.pairs.push_back({p.source, p.effective_target(), p.combined.value_or(1.0)});
        if (mapping.empty()) throw UsageError("merge needs at least one accepted pair");

        const auto source = projects_.load(s.source_project);
        const auto target = projects_.load(s.target_project);
        const auto merged = merge_tables(source, target, mapping, include_unmatched);
        const auto project = projects_.save(merged.table);
        s.merged_project = project;
        persist(s);
        return json_reply(201, json{{"project", project},
                                    {"rows", merged.table.row_count},
                                    {"columns", merged.table.column_count()}});
    });
}

ServiceReply Service::aggregate(const std::string& project_id, const std::string& x, const std::string& y,
                                const std::string& fn) {
    return guarded([&] {
        const auto table = projects_.load(project_id);
        AggregationSpec spec;
        spec.x_column = parse_index(x, "x");
        spec.y_column = parse_index(y, "y");
        spec.fn = aggregate_fn_from_string(fn.empty() ? "sum" : fn);
        return json_reply(200, series_to_json(typematch::aggregate(table, spec)));
    });
}

ServiceReply Service::labels(const std::string& project_id, const std::string& column, const std::string& top) {
    return guarded([&] {
        const auto table = projects_.load(project_id);
        const auto col = parse_index(column, "column");
        const auto top_m = top.empty() ? kDefaultTopLabels : parse_index(top, "top");
        if (!provider_) throw UsageError("labeling needs a reconciliation provider");
        const auto suggestions = label_column(*provider_, table, col, cache_, defaults_, kDefaultWilsonZ, top_m);
        return json_reply(200, labels_to_json(col, suggestions));
    });
}

void mount_routes(httplib::Server& server, Service& service) {
    const auto send = [](httplib::Response& res, const ServiceReply& reply) {
        res.status = reply.status;
        res.set_content(reply.body, reply.content_type);
    };
    const auto param = [](const httplib::Request& req, const char* key) {
        return req.has_param(key) ? req.get_param_value(key) : std::string{};
    };

    server.Post("/projects", [&, send, param](const httplib::Request& req, httplib::Response& res) {
        const auto header_flag = param(req, "has_header");
        const bool has_header = header_flag.empty() || header_flag == "true" || header_flag == "1";
        send(res, service.create_project(req.body, param(req, "name"), has_header));
    });
    server.Get(R"(/projects/([A-Za-z0-9_-]+))", [&, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.get_project(req.matches[1]));
    });
    server.Get(R"(/projects/([A-Za-z0-9_-]+)/aggregate)",
               [&, send, param](const httplib::Request& req, httplib::Response& res) {
                   send(res, service.aggregate(req.matches[1], param(req, "x"), param(req, "y"), param(req, "fn")));
               });
    server.Get(R"(/projects/([A-Za-z0-9_-]+)/labels)",
               [&, send, param](const httplib::Request& req, httplib::Response& res) {
                   send(res, service.labels(req.matches[1], param(req, "column"), param(req, "top")));
               });
    server.Post("/sessions", [&, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.create_session(req.body));
    });
    server.Get(R"(/sessions/([A-Za-z0-9_-]+))", [&, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.get_session(req.matches[1]));
    });
    server.Get(R"(/sessions/([A-Za-z0-9_-]+)/matches)",
               [&, send](const httplib::Request& req, httplib::Response& res) {
                   send(res, service.get_matches(req.matches[1]));
               });
    server.Post(R"(/sessions/([A-Za-z0-9_-]+)/decisions)",
                [&, send](const httplib::Request& req, httplib::Response& res) {
                    send(res, service.post_decision(req.matches[1], req.body));
                });
    server.Post(R"(/sessions/([A-Za-z0-9_-]+)/merge)",
                [&, send](const httplib::Request& req, httplib::Response& res) {
                    send(res, service.merge(req.matches[1], req.body));
                });

    server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
    });
}

} // namespace typematch
