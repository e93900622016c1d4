// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "cli.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "scenario.hpp"
#include "typematch/csv.hpp"
#include "typematch/labeling.hpp"
#include "typematch/merge.hpp"
#include "typematch/service.hpp"
#include "typematch/stats.hpp"

using namespace typematch;
using namespace testing_support;
using nlohmann::json;

namespace {

// Tolerances and budgets.
constexpr double kOracleTol = 1e-9;
constexpr double kExampleTol6 = 1e-6;
constexpr double kExampleTol9 = 1e-9;
constexpr double kInvarianceTol = 1e-12;
constexpr int kOracleTrials = 1000;
constexpr double kOracleBudgetS = 10.0;
constexpr double kPropertyBudgetS = 30.0;
constexpr double kScenarioBudgetS = 30.0;
constexpr double kTypeMatcherFloor = 0.9;

/// Collects failures; each check adds a note when it does not hold.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 8) failures_.push_back(what);
        if (!ok) ++failed_;
    }
    void near(double got, double want, double tol, const std::string& what) {
        std::ostringstream os;
        os.precision(12);
        os << what << ": got " << got << " want " << want << " +- " << tol;
        expect(std::fabs(got - want) <= tol, os.str());
    }
    bool ok() const { return failed_ == 0; }
    std::size_t checks() const { return checks_; }
    std::string summary() const {
        std::string s;
        for (const auto& f : failures_) s += "\n    " + f;
        return s;
    }

private:
    std::size_t checks_ = 0;
    std::size_t failed_ = 0;
    std::vector<std::string> failures_;
};

TypeVector vec(const std::map<std::string, double>& w) {
    TypeVector v;
    for (const auto& [k, x] : w) v.add(k, x);
    return v;
}

void math_oracles(Checker& c) {
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_int_distribution<std::size_t> len(2, 20);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> trials(1, 5000);
    for (int t = 0; t < kOracleTrials; ++t) {
        const auto a = generators::random_sparse(rng, 20), b = generators::random_sparse(rng, 20);
        c.near(cosine_similarity(vec(a), vec(b)), static_cast<double>(oracle::dense_cosine(a, b)), kOracleTol, "cosine");

        const auto n = len(rng);
        const auto x = generators::random_values(rng, n, t % 3 == 0);
        const auto y = generators::random_values(rng, n, t % 5 == 0);
        c.near(pearson(x, y), static_cast<double>(oracle::standard_score_pearson(x, y)), kOracleTol, "pearson");
        c.near(spearman(x, y), static_cast<double>(oracle::spearman(x, y)), kOracleTol, "spearman");
        const auto r = rank(x);
        const auto ro = oracle::counting_rank(x);
        for (std::size_t i = 0; i < n; ++i) c.near(r[i], ro[i], kOracleTol, "rank");

        const double p = unit(rng);
        const auto m = trials(rng);
        c.near(wilson_score(p, m), static_cast<double>(oracle::wilson_lower_root(p, m, 1.96L)), kOracleTol, "wilson");
    }

    // Worked examples. The cosine value is the dense evaluation
    // 0.78 / sqrt(1.73 * 0.52).
    const double cosine_example = 0.78 / std::sqrt(1.73 * 0.52);
    c.near(cosine_similarity(vec({{"A", 1.3}, {"B", 0.2}}), vec({{"A", 0.6}, {"C", 0.4}})), 0.822375, kExampleTol6,
           "cosine example");
    c.near(cosine_example, 0.822375, kExampleTol6, "cosine example, dense evaluation");
    const std::vector<double> px{2, 0, 1, 3}, py{1, 0, 0, 2};
    c.near(pearson(px, py), 0.943880, kExampleTol6, "pearson example");
    const std::vector<double> sx{1, 2, 3, 4}, sy{1, 3, 2, 4};
    c.near(spearman(sx, sy), 0.8, kExampleTol9, "spearman example");
    c.near(wilson_score(0.5, 10), 0.236589, kExampleTol6, "wilson example");
    c.expect(rank(std::vector<double>{1, 2, 2, 3}) == std::vector<double>{1, 2.5, 2.5, 4}, "rank example");
    c.expect(wilson_score(0.0, 10) == 0.0, "wilson zero");
    c.expect(wilson_score(1.0, 1000000) >= 0.999, "wilson limit");
}

void property_suite(Checker& c) {
    std::mt19937_64 rng(0xBEEF);
    std::uniform_real_distribution<double> scale(0.01, 100.0), shift(-100.0, 100.0);
    std::uniform_int_distribution<std::size_t> len(2, 20);

    for (int t = 0; t < 1000; ++t) {
        const auto v = vec(generators::random_sparse(rng, 10)), w = vec(generators::random_sparse(rng, 10));
        const double cvw = cosine_similarity(v, w);
        c.near(cosine_similarity(v.scaled(scale(rng)), w), cvw, kInvarianceTol, "cosine scale invariance");
        c.expect(cvw == cosine_similarity(w, v), "cosine symmetry");

        const auto n = len(rng);
        const auto x = generators::random_values(rng, n, t % 4 == 0);
        const auto y = generators::random_values(rng, n, t % 3 == 0);
        const double a = scale(rng), b = shift(rng);
        std::vector<double> ax(n), mono(n);
        for (std::size_t i = 0; i < n; ++i) {
            ax[i] = a * x[i] + b;
            mono[i] = std::exp(x[i]) + x[i] * x[i] * x[i];
        }
        c.near(pearson(ax, y), pearson(x, y), kInvarianceTol, "pearson affine invariance");
        c.expect(spearman(x, y) == pearson(rank(x), rank(y)), "spearman == pearson of ranks");
        c.expect(spearman(mono, y) == spearman(x, y), "spearman monotone invariance");
    }

    for (int pi = 0; pi <= 50; ++pi) {
        const double p = pi / 50.0;
        double prev = -1.0;
        for (std::size_t n = 1; n <= 200; ++n) {
            const double w = wilson_score(p, n);
            c.expect(w >= 0.0 && w <= p, "wilson bounds");
            if (p > 0.0) c.expect(w >= prev, "wilson monotone in n");
            if (pi > 0) c.expect(w >= wilson_score((pi - 1) / 50.0, n), "wilson monotone in p");
            prev = w;
        }
    }

    MatchConfig all;
    all.threshold = 0.0;
    for (int t = 0; t < 500; ++t) {
        const auto s = generators::random_annotated_table(rng, "s");
        const auto g = generators::random_annotated_table(rng, "t");
        const auto fwd = match_tables(s.table, g.table, s.annotations, g.annotations, all);
        const auto rev = match_tables(g.table, s.table, g.annotations, s.annotations, all);
        c.expect(fwd.size() == rev.size(), "swap keeps the candidate set");
        for (const auto& m : fwd) {
            c.expect(m.combined >= 0.0 && m.combined <= 1.0, "combined in [0,1]");
            for (const auto& sc : m.scores)
                if (sc.value) c.expect(*sc.value >= 0.0 && *sc.value <= 1.0, "matcher output in [0,1]");
            const auto it = std::find_if(rev.begin(), rev.end(), [&](const MatchCandidate& r) {
                return r.source == m.target && r.target == m.source;
            });
            c.expect(it != rev.end() && it->scores == m.scores, "pair-score symmetry under table swap");
        }
    }
}

void scenario_criteria(Checker& c) {
    auto fx = scenario_fixture();
    const auto noisy = noisy_scenario();
    using P = std::set<std::pair<std::size_t, std::size_t>>;
    const P name_pairs{{0, 0}, {3, 3}};
    const P cosine_pairs{{0, 0}, {1, 1}, {3, 3}};
    const P pearson_pairs{{0, 0}, {1, 1}, {2, 2}, {3, 3}};

    const auto a = run_with(noisy, fx, "name");
    c.expect(pair_set(a) == name_pairs, "(a) name-only pairs are Cost<->Cost and Airport Code<->Airport");
    const auto* cost = find_pair(a, 3, 3);
    c.expect(cost && cost->combined == 1.0, "(a) Cost<->Cost scores 1.0");
    c.expect(pair_set(run_with(noisy, fx, "name,cosine")) == cosine_pairs, "(b) cosine adds unnamed<->Pays");
    c.expect(pair_set(run_with(noisy, fx, "name,cosine,pearson")) == pearson_pairs,
             "(c) pearson adds Organization<->OR_Idx");

    const auto all = run_with(noisy, fx, "name,cosine,pearson,spearman");
    const auto* airport = find_pair(all, 0, 0);
    const bool d = airport && airport->score(MatcherId::spearman) && airport->score(MatcherId::cosine) &&
                   airport->score(MatcherId::pearson) &&
                   *airport->score(MatcherId::spearman) < *airport->score(MatcherId::cosine) &&
                   *airport->score(MatcherId::spearman) < *airport->score(MatcherId::pearson);
    c.expect(d, "(d) airport pair: spearman below cosine and pearson");

    const auto clean = run_with(clean_scenario(), fx, "cosine,pearson,spearman");
    const auto* country = find_pair(clean, 0, 0);
    c.expect(country != nullptr, "(e) clean country pair present");
    if (country)
        for (auto m : {MatcherId::cosine, MatcherId::pearson, MatcherId::spearman})
            c.expect(country->score(m).value_or(0.0) >= kTypeMatcherFloor,
                     "(e) clean country pair " + std::string(to_string(m)) + " >= 0.9");
}

void labeling_criterion(Checker& c) {
    auto fx = scenario_fixture();
    CandidateCache cache;
    const auto clean = clean_scenario();
    c.expect(!clean.target.column(1).header, "labeled column is unnamed");
    const auto s = label_column(fx, clean.target, 1, cache, {}, kDefaultWilsonZ, 50);
    std::size_t org = s.size(), organism = s.size();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].type_id == "/organization/organization") org = i;
        if (s[i].type_id == "/biology/organism_classification") organism = i;
    }
    c.expect(org == 0, "organization type ranks first");
    c.expect(organism < s.size() && org < organism, "organization outranks organism classification");
}

void merge_criterion(Checker& c) {
    const auto s = noisy_scenario();
    Mapping full;
    for (std::size_t i = 0; i < 4; ++i) full.pairs.push_back({i, i, 1.0});
    const auto merged = merge_tables(s.source, s.target, full).table;
    c.expect(merged.row_count == 10, "10 rows");
    c.expect(merged.column_count() == 4, "4 columns");
    c.expect(merged.column_count() == 4 &&
                 merged.column(3).cells == std::vector<Cell>{"123.2", "232.12", "321.7", "354.64", "243.8", "201.41",
                                                             "90.5", "198", "211.27", "55.99"},
             "concatenated Cost values");

    const auto csv = to_csv(merged, true);
    c.expect(to_csv(load_table(csv, true, merged.name), true) == csv, "merged CSV round-trips bit-identically");
    for (const auto* file : {"noisy_source.csv", "noisy_target.csv", "clean_source.csv", "clean_target.csv"}) {
        const auto bytes = read_file(data_path(file));
        c.expect(to_csv(load_table(bytes, true, file), true) == bytes,
                 std::string(file) + " round-trips bit-identically");
    }
}

void cli_api_equivalence(Checker& c) {
    TempDir dir;
    const std::string matchers = "name,cosine,pearson,spearman";
    const auto cli_out = (dir / "cli.json").string();
    std::ostringstream out, err;
    const int code = cli::run({"match", data_path("noisy_source.csv").string(), data_path("noisy_target.csv").string(),
                               "--matchers", matchers, "--provider",
                               "fixture:" + data_path("reconciliation.json").string(), "-o", cli_out},
                              out, err);
    c.expect(code == cli::kExitOk, "cli match exits 0: " + err.str());
    if (code != cli::kExitOk) return;
    const auto cli_bytes = read_file(cli_out);

    Service service(dir / "service", std::make_shared<FixtureProvider>(scenario_fixture()));
    httplib::Server server;
    mount_routes(server, service);
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    const auto post_csv = [&](const char* file) -> std::string {
        auto r = client.Post(std::string("/projects?name=") + file, read_file(data_path(file)), "text/csv");
        if (!r || r->status != 201) return {};
        return json::parse(r->body).at("id").get<std::string>();
    };
    const auto src = post_csv("noisy_source.csv");
    const auto tgt = post_csv("noisy_target.csv");
    c.expect(!src.empty() && !tgt.empty(), "projects created over HTTP");

    std::string api_bytes;
    auto s = client.Post("/sessions", json{{"source", src}, {"target", tgt}, {"config", {{"matchers", matchers}}}}.dump(),
                         "application/json");
    c.expect(s && s->status == 201, "session created over HTTP");
    if (s && s->status == 201) {
        const auto sid = json::parse(s->body).at("id").get<std::string>();
        if (auto m = client.Get("/sessions/" + sid + "/matches"); m && m->status == 200) api_bytes = m->body;
    }
    server.stop();
    worker.join();

    c.expect(!api_bytes.empty(), "matches fetched over HTTP");
    c.expect(api_bytes == cli_bytes, "CLI and API match JSON are byte-identical (" + std::to_string(cli_bytes.size()) +
                                         " vs " + std::to_string(api_bytes.size()) + " bytes)");
}

struct Criterion {
    const char* name;
    std::function<void(Checker&)> body;
    double budget_s; // 0: no runtime bound
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {"math oracles: cosine/pearson/spearman/rank/wilson vs reference, worked examples", math_oracles, kOracleBudgetS},
        {"property suite: invariances, bounds, ranges, swap symmetry", property_suite, kPropertyBudgetS},
        {"scenario fixture: matcher sets (a)-(c), spearman ordering (d), clean floor (e)", scenario_criteria,
         kScenarioBudgetS},
        {"labeling: organization type ranks first on the unnamed column", labeling_criterion, 0.0},
        {"merge: 10x4 union with concatenated Cost, CSV round-trip", merge_criterion, 0.0},
        {"cli/api equivalence: match JSON byte-identical", cli_api_equivalence, 0.0},
    };

    int failed = 0;
    for (const auto& crit : criteria) {
        Checker checker;
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            crit.body(checker);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = crit.budget_s == 0.0 || secs < crit.budget_s;
        const bool pass = error.empty() && checker.ok() && in_budget;
        if (!pass) ++failed;

        std::printf("[%s] %s (%zu checks, %.0f ms)\n", pass ? "PASS" : "FAIL", crit.name, checker.checks(),
                    secs * 1000.0);
        if (!error.empty()) std::printf("    exception: %s\n", error.c_str());
        if (!in_budget) std::printf("    over budget: %.2f s >= %.0f s\n", secs, crit.budget_s);
        if (!checker.ok()) std::printf("%s\n", checker.summary().c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
