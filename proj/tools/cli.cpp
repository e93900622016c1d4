#include "cli.hpp"

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "typematch/aggregate.hpp"
#include "typematch/csv.hpp"
#include "typematch/error.hpp"
#include "typematch/merge.hpp"
#include "typematch/pipeline.hpp"
#include "typematch/service.hpp"

namespace typematch::cli {

namespace {

struct ProviderArgs {
    std::string spec;
    std::string cache_path;
    int k = kDefaultCandidatesPerCell;
    std::size_t concurrency = 8;
    double timeout_s = 10.0;

    void attach(CLI::App& app) {
        app.add_option("--provider", spec, "Reconciliation provider: fixture:<path> or http:<url>");
        app.add_option("-k,--candidates", k, "Candidate types kept per cell")->check(CLI::PositiveNumber);
        app.add_option("--cache", cache_path, "On-disk candidate cache (JSON), read and updated");
        app.add_option("--concurrency", concurrency, "Provider requests in flight")->check(CLI::PositiveNumber);
        app.add_option("--timeout", timeout_s, "Per-request timeout in seconds")->check(CLI::PositiveNumber);
    }

    /// Null when no provider is configured anywhere.
    std::shared_ptr<TypeProvider> make() const {
        if (!spec.empty()) {
            if (spec.starts_with("http:")) {
                auto rest = spec.substr(5);
                if (rest.starts_with("//")) rest = "http:" + rest;
                return std::make_shared<HttpProvider>(
                    rest, std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000)));
            }
            return std::shared_ptr<TypeProvider>(make_provider(spec));
        }
        if (const char* url = std::getenv(kProviderUrlEnv); url && *url)
            return std::make_shared<HttpProvider>(
                url, std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000)));
        return nullptr;
    }

    AnnotateOptions options() const { return AnnotateOptions{k, concurrency}; }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") out << text;
    else write_file(path, text);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Schema matching with rich-type reconciliation", "typematch"};
    app.require_subcommand(1);
    app.fallthrough();
    bool has_header = true;
    app.add_flag("--has-header,!--no-header", has_header, "First CSV record is a header row (default on)");

    // match
    auto* match = app.add_subcommand("match", "Score column correspondences between two CSV tables");
    std::string src_path, tgt_path, output, matchers = "name,cosine,pearson,spearman", ties = "average";
    double threshold = kDefaultThreshold;
    ProviderArgs match_provider;
    match->add_option("source", src_path, "Source CSV")->required()->check(CLI::ExistingFile);
    match->add_option("target", tgt_path, "Target CSV")->required()->check(CLI::ExistingFile);
    match->add_option("--matchers", matchers, "Comma-separated: name,cosine,pearson,spearman");
    match->add_option("--threshold", threshold, "Drop pairs whose combined score is below this")
        ->check(CLI::Range(0.0, 1.0));
    match->add_option("--ties", ties, "Rank tie strategy for spearman");
    match->add_option("-o,--output", output, "Output JSON file (default stdout)");
    match_provider.attach(*match);

    // label
    auto* label = app.add_subcommand("label", "Suggest header labels for a column");
    std::string label_path, label_output;
    std::size_t label_col = 0;
    std::size_t top = kDefaultTopLabels;
    double z = kDefaultWilsonZ;
    ProviderArgs label_provider;
    label->add_option("table", label_path, "CSV table")->required()->check(CLI::ExistingFile);
    label->add_option("--column", label_col, "Column position (0-based)")->required();
    label->add_option("--top", top, "Number of suggestions")->check(CLI::PositiveNumber);
    label->add_option("--z", z, "Wilson z value")->check(CLI::PositiveNumber);
    label->add_option("-o,--output", label_output, "Output JSON file (default stdout)");
    label_provider.attach(*label);

    // merge
    auto* merge = app.add_subcommand("merge", "Union two tables under a column mapping");
    std::string merge_src, merge_tgt, mapping_path, merge_output;
    bool matched_only = false;
    merge->add_option("source", merge_src, "Source CSV")->required()->check(CLI::ExistingFile);
    merge->add_option("target", merge_tgt, "Target CSV")->required()->check(CLI::ExistingFile);
    merge->add_option("--mapping", mapping_path, "Mapping JSON (match output or [[s,t],...])")
        ->required()
        ->check(CLI::ExistingFile);
    merge->add_flag("--matched-only", matched_only, "Drop columns that are not in the mapping");
    merge->add_option("-o,--output", merge_output, "Output CSV file (default stdout)");

    // aggregate
    auto* agg = app.add_subcommand("aggregate", "Group a table by one column and reduce another");
    std::string agg_path, agg_output, fn = "sum";
    std::size_t x = 0, y = 0;
    agg->add_option("table", agg_path, "CSV table")->required()->check(CLI::ExistingFile);
    agg->add_option("--x", x, "Group-key column")->required();
    agg->add_option("--y", y, "Value column")->required();
    agg->add_option("--fn", fn, "sum, avg, count, min or max");
    agg->add_option("-o,--output", agg_output, "Output JSON file (default stdout)");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP review service");
    std::string host = "127.0.0.1", data_dir = "typematch-data";
    int port = 8080;
    ProviderArgs serve_provider;
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Listen port")->check(CLI::Range(1, 65535));
    serve->add_option("--data-dir", data_dir, "Directory for project and session documents");
    serve_provider.attach(*serve);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front())
            err << sub->help();
        return kExitUsage;
    }

    try {
        if (match->parsed()) {
            MatchConfig config;
            config.matchers = parse_matcher_list(matchers);
            config.threshold = threshold;
            config.ties = tie_strategy_from_string(ties);
            const auto source = load_table_file(src_path, has_header);
            const auto target = load_table_file(tgt_path, has_header);
            auto provider = match_provider.make();
            if (config.uses_type_matchers() && !provider)
                throw UsageError(std::string("type matchers need --provider or ") + kProviderUrlEnv);
            CandidateCache cache;
            if (!match_provider.cache_path.empty()) cache.load(match_provider.cache_path);
            const auto result = run_match(source, target, provider.get(), cache, config, match_provider.options());
            if (!match_provider.cache_path.empty()) cache.save(match_provider.cache_path);
            emit(render_match_json(result), output, out);
        } else if (label->parsed()) {
            const auto table = load_table_file(label_path, has_header);
            auto provider = label_provider.make();
            if (!provider) throw UsageError(std::string("labeling needs --provider or ") + kProviderUrlEnv);
            CandidateCache cache;
            if (!label_provider.cache_path.empty()) cache.load(label_provider.cache_path);
            const auto suggestions =
                label_column(*provider, table, label_col, cache, label_provider.options(), z, top);
            if (!label_provider.cache_path.empty()) cache.save(label_provider.cache_path);
            emit(labels_to_json(label_col, suggestions).dump(2) + "\n", label_output, out);
        } else if (merge->parsed()) {
            const auto source = load_table_file(merge_src, has_header);
            const auto target = load_table_file(merge_tgt, has_header);
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(read_file(mapping_path));
            } catch (const nlohmann::json::parse_error& e) {
                throw UsageError(std::string("mapping file is not JSON: ") + e.what());
            }
            const auto merged = merge_tables(source, target, mapping_from_json(doc), !matched_only);
            emit(to_csv(merged.table, true), merge_output, out);
        } else if (agg->parsed()) {
            const auto table = load_table_file(agg_path, has_header);
            const auto series = aggregate(table, AggregationSpec{x, y, aggregate_fn_from_string(fn)});
            emit(series_to_json(series).dump(2) + "\n", agg_output, out);
        } else if (serve->parsed()) {
            Service service(data_dir, serve_provider.make(), serve_provider.options());
            httplib::Server server;
            mount_routes(server, service);
            spdlog::info("typematch service listening on {}:{} (data in {})", host, port, data_dir);
            if (!server.listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NotFoundError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace typematch::cli
