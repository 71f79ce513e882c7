// epa: command-line front end for the equal-predictive-ability tests,
// the bandwidth tradeoff diagnostic and the Monte Carlo study.

#include "epa/dm_tests.hpp"
#include "epa/io.hpp"
#include "epa/mc.hpp"
#include "epa/report.hpp"
#include "epa/tradeoff.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct DataFlags {
    std::string path;
    std::string realized;
    std::string forecast1;
    std::string forecast2;
    std::string d_col;
    std::string date_col;
    std::string from;
    std::string to;
    std::string na_policy = "drop";
    std::string loss = "squared";
};

void add_data_flags(CLI::App* app, DataFlags& f) {
    app->add_option("--data", f.path, "CSV file with a header row")->required()->check(CLI::ExistingFile);
    app->add_option("--realized", f.realized, "Realization column");
    app->add_option("--forecast1", f.forecast1, "First forecast column");
    app->add_option("--forecast2", f.forecast2, "Second forecast column");
    app->add_option("--d-col", f.d_col, "Column holding a precomputed loss differential");
    app->add_option("--date-col", f.date_col, "Date column used by --from/--to");
    app->add_option("--from", f.from, "First date kept (string comparison)");
    app->add_option("--to", f.to, "Last date kept (string comparison)");
    app->add_option("--na-policy", f.na_policy, "drop or zero")->check(CLI::IsMember({"drop", "zero"}));
    app->add_option("--loss", f.loss, "squared or absolute")->check(CLI::IsMember({"squared", "absolute"}));
}

epa::LossSeries load_differential(const DataFlags& f, std::map<std::string, std::string>& params) {
    params["data"] = f.path;
    params["na_policy"] = f.na_policy;
    std::optional<epa::io::DateRange> dates;
    if (!f.from.empty() || !f.to.empty()) {
        if (f.date_col.empty()) throw std::invalid_argument("--from/--to need --date-col");
    }
    if (!f.date_col.empty()) {
        dates = epa::io::DateRange{f.date_col, std::nullopt, std::nullopt};
        if (!f.from.empty()) dates->from = f.from;
        if (!f.to.empty()) dates->to = f.to;
        params["date_col"] = f.date_col;
        params["from"] = f.from;
        params["to"] = f.to;
    }
    const epa::io::NaPolicy policy = epa::io::parse_na_policy(f.na_policy);
    const epa::io::CsvTable table = epa::io::read_csv(f.path);
    if (!f.d_col.empty()) {
        params["d_col"] = f.d_col;
        return epa::LossSeries(epa::io::load_series(table, f.d_col, policy, dates));
    }
    if (f.realized.empty() || f.forecast1.empty() || f.forecast2.empty()) {
        throw std::invalid_argument("give --d-col, or all of --realized, --forecast1 and --forecast2");
    }
    params["realized"] = f.realized;
    params["forecast1"] = f.forecast1;
    params["forecast2"] = f.forecast2;
    params["loss"] = f.loss;
    const epa::io::ForecastDataset data =
        epa::io::load_csv(table, {{f.forecast1, f.forecast2}, f.realized, policy, dates});
    return data.differential(0, 1, epa::parse_loss(f.loss));
}

template <typename T>
std::vector<T> split_list(const std::vector<std::string>& items) {
    std::vector<T> out;
    for (const auto& s : items) {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size() || v < 1) throw std::invalid_argument("expected a positive integer, got '" + s + "'");
        out.push_back(static_cast<T>(v));
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

struct TestFlags {
    DataFlags data;
    std::string method = "all";
    int h = 1;
    std::optional<int> M;
    std::string mopt;
    std::optional<int> B;
    std::optional<int> m;
    int q = 2;
    double cl = epa::kDefaultLevel;
    bool json = false;
    std::string out;
};

int run_test(const TestFlags& f) {
    epa::report::RunManifest manifest;
    manifest.command = "test";
    epa::LossSeries d = load_differential(f.data, manifest.parameters);
    manifest.parameters["method"] = f.method;
    manifest.parameters["h"] = std::to_string(f.h);
    manifest.parameters["q"] = std::to_string(f.q);
    manifest.parameters["cl"] = epa::report::format_double(f.cl);
    if (f.M) manifest.parameters["M"] = std::to_string(*f.M);
    if (!f.mopt.empty()) manifest.parameters["mopt"] = f.mopt;
    if (f.B) manifest.parameters["B"] = std::to_string(*f.B);
    if (f.m) manifest.parameters["m"] = std::to_string(*f.m);
    manifest.parameters["P"] = std::to_string(d.size());

    std::optional<epa::BandwidthRule> rule;
    if (!f.mopt.empty()) rule = epa::parse_bandwidth_rule(f.mopt);

    std::vector<std::string> methods;
    if (f.method == "all") {
        methods = {"r", "m", "nw", "fb", "ewc", "wpe", "im"};
    } else {
        methods = {f.method};
    }

    std::vector<epa::TestOutcome> outcomes;
    int failures = 0;
    for (const std::string& name : methods) {
        try {
            if (name == "r") {
                outcomes.push_back(epa::dm_test_r(d, f.h, f.cl));
            } else if (name == "m") {
                outcomes.push_back(epa::dm_test_m(d, f.h, f.cl));
            } else if (name == "nw") {
                outcomes.push_back(epa::dm_test_bt(d, f.M, rule.value_or(epa::BandwidthRule::Kind::nw1994), f.cl));
            } else if (name == "nwl") {
                outcomes.push_back(epa::dm_test_bt(d, f.M, rule.value_or(epa::BandwidthRule::Kind::llsw), f.cl));
            } else if (name == "fb") {
                outcomes.push_back(epa::dm_test_bt_fb(d, f.M, rule.value_or(epa::BandwidthRule::Kind::llsw), f.cl));
            } else if (name == "ewc") {
                outcomes.push_back(epa::dm_test_ewc_fb(d, f.B, f.cl));
            } else if (name == "wpe") {
                outcomes.push_back(epa::dm_test_wpe_fb(d, f.m, f.cl));
            } else if (name == "im") {
                outcomes.push_back(epa::dm_test_im(d, f.q, f.cl));
            }
        } catch (const std::exception& e) {
            if (methods.size() == 1) throw;
            std::cerr << "epa test: " << name << ": " << e.what() << '\n';
            ++failures;
        }
    }

    json results = json::array();
    for (const auto& o : outcomes) results.push_back(epa::report::to_json(o));
    const json doc{{"manifest", epa::report::to_json(manifest)}, {"results", results}};
    if (f.json) {
        std::cout << doc.dump(2) << '\n';
    } else {
        for (const auto& o : outcomes) std::cout << epa::report::text_row(o) << '\n';
    }
    if (!f.out.empty()) {
        fs::create_directories(f.out);
        write_file(fs::path(f.out) / "test.json", doc.dump(2) + "\n");
    }
    return failures == 0 ? 0 : 1;
}

struct TradeoffFlags {
    DataFlags data;
    int n_sim = 5000;
    std::vector<std::string> grid;
    int grid_size = 20;
    std::optional<int> max_ar_order;
    std::uint64_t seed = 20240101;
    unsigned threads = 0;
    std::string out;
    bool svg = true;
};

int run_tradeoff(const TradeoffFlags& f) {
    epa::report::RunManifest manifest;
    manifest.command = "tradeoff";
    manifest.seed = f.seed;
    const epa::LossSeries d = load_differential(f.data, manifest.parameters);

    epa::TradeoffConfig config;
    config.n_sim = f.n_sim;
    config.alternative_grid_size = f.grid_size;
    config.seed = f.seed;
    config.max_ar_order = f.max_ar_order;
    config.workers = f.threads;
    config.bandwidth_grid = split_list<int>(f.grid);
    manifest.parameters["n_sim"] = std::to_string(f.n_sim);
    manifest.parameters["grid_size"] = std::to_string(f.grid_size);
    if (f.max_ar_order) manifest.parameters["max_ar_order"] = std::to_string(*f.max_ar_order);
    if (!f.grid.empty()) {
        std::string joined;
        for (const auto& g : f.grid) joined += (joined.empty() ? "" : ",") + g;
        manifest.parameters["grid"] = joined;
    }

    const epa::TradeoffCurve curve = epa::build_tradeoff_curve(d, config);
    const std::string csv = epa::report::tradeoff_csv(curve);
    if (curve.model.fell_back) {
        std::cerr << "epa tradeoff: AIC-selected AR model was nonstationary; using order " << curve.model.order
                  << '\n';
    }
    if (f.out.empty()) {
        std::cout << csv;
        return 0;
    }
    fs::create_directories(f.out);
    write_file(fs::path(f.out) / "tradeoff.csv", csv);
    write_file(fs::path(f.out) / "tradeoff.json", epa::report::tradeoff_json(curve, manifest).dump(2) + "\n");
    if (f.svg) {
        try {
            write_file(fs::path(f.out) / "tradeoff.svg", epa::report::tradeoff_svg(curve));
        } catch (const std::exception& e) {
            std::cerr << "epa tradeoff: SVG not written: " << e.what() << '\n';
        }
    }
    std::cout << csv;
    return 0;
}

struct McFlags {
    std::vector<std::string> families{"ucr", "cr"};
    std::vector<std::string> hs{"1", "3", "12"};
    std::vector<std::string> Rs{"25", "75", "125", "175"};
    std::vector<std::string> R_tildes{"25", "75", "125", "175"};
    std::vector<std::string> Ps{"25", "75", "125", "175", "1000"};
    std::vector<std::string> methods;
    std::size_t n_reps = 5000;
    std::uint64_t seed = 20240101;
    double cl = epa::kDefaultLevel;
    unsigned threads = 0;
    std::string out;
};

std::string join(const std::vector<std::string>& items) {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : ",") + i;
    return s;
}

int run_mc(const McFlags& f) {
    std::vector<epa::mc::Family> families;
    for (const auto& name : f.families) families.push_back(epa::mc::parse_family(name));
    std::vector<epa::mc::McMethod> methods;
    for (const auto& name : f.methods) methods.push_back(epa::mc::parse_mc_method(name));
    if (methods.empty()) methods = epa::mc::all_methods();

    const auto grid = epa::mc::factorial_grid(families, split_list<int>(f.hs), split_list<int>(f.Rs),
                                              split_list<int>(f.R_tildes), split_list<std::size_t>(f.Ps));
    if (grid.empty()) throw std::invalid_argument("empty Monte Carlo grid");

    epa::report::RunManifest manifest;
    manifest.command = "mc";
    manifest.seed = f.seed;
    manifest.parameters = {{"families", join(f.families)}, {"h", join(f.hs)},
                           {"R", join(f.Rs)},              {"Rtilde", join(f.R_tildes)},
                           {"P", join(f.Ps)},              {"n_reps", std::to_string(f.n_reps)},
                           {"cl", epa::report::format_double(f.cl)}};
    std::vector<std::string> method_names;
    for (auto m : methods) method_names.push_back(epa::mc::label(m));
    manifest.parameters["methods"] = join(method_names);

    const epa::mc::ExperimentResult result = epa::mc::run_experiment(grid, methods, f.n_reps, f.cl, f.seed, f.threads);

    fs::create_directories(f.out);
    json degenerate = json::array();
    for (const auto& [key, cell] : result.cells) {
        for (std::size_t s = 0; s < methods.size(); ++s) {
            if (cell.tallies[s].degenerate == 0) continue;
            degenerate.push_back({{"family", epa::mc::to_string(key.family)},
                                  {"R", key.R},
                                  {"R_tilde", key.R_tilde},
                                  {"h", key.h},
                                  {"P", key.P},
                                  {"method", epa::mc::label(methods[s])},
                                  {"count", cell.tallies[s].degenerate}});
        }
    }
    for (auto family : families) {
        for (auto metric : {epa::report::McMetric::size, epa::report::McMetric::power}) {
            for (auto method : methods) {
                write_file(fs::path(f.out) / epa::report::mc_matrix_filename(family, metric, method),
                           epa::report::mc_matrix_csv(result, family, metric, method));
            }
        }
    }
    const json doc{{"manifest", epa::report::to_json(manifest)}, {"degenerate_replications", degenerate}};
    write_file(fs::path(f.out) / "manifest.json", doc.dump(2) + "\n");
    std::cerr << "epa mc: " << grid.size() << " designs x " << f.n_reps << " replications written to " << f.out
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equal predictive ability tests for forecast comparison"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.set_version_flag("--version", epa::report::kSoftwareVersion);

    TestFlags test;
    auto* test_cmd = app.add_subcommand("test", "Run one or all tests on a loss differential");
    add_data_flags(test_cmd, test.data);
    test_cmd->add_option("--method", test.method, "r, m, nw, nwl, fb, ewc, wpe, im or all")
        ->check(CLI::IsMember({"r", "m", "nw", "nwl", "fb", "ewc", "wpe", "im", "all"}));
    test_cmd->add_option("--h", test.h, "Forecast horizon for r and m (truncation h-1)");
    test_cmd->add_option("--M", test.M, "Bartlett bandwidth for nw, nwl and fb");
    test_cmd->add_option("--mopt", test.mopt, "Bartlett bandwidth rule: llsw, nw1994, textbook, ci or 1-4");
    test_cmd->add_option("--B", test.B, "EWC bandwidth");
    test_cmd->add_option("--m", test.m, "WPE bandwidth");
    test_cmd->add_option("--q", test.q, "IM blocks");
    test_cmd->add_option("--cl", test.cl, "Significance level");
    test_cmd->add_flag("--json", test.json, "Print JSON instead of text rows");
    test_cmd->add_option("--out", test.out, "Directory for test.json");

    TradeoffFlags tradeoff;
    auto* tradeoff_cmd = app.add_subcommand("tradeoff", "Size distortion and power loss across Bartlett bandwidths");
    add_data_flags(tradeoff_cmd, tradeoff.data);
    tradeoff_cmd->add_option("--n-sim", tradeoff.n_sim, "Simulated series per bandwidth");
    tradeoff_cmd->add_option("--grid", tradeoff.grid, "Bandwidths, comma separated")->delimiter(',');
    tradeoff_cmd->add_option("--grid-size", tradeoff.grid_size, "Number of alternatives");
    tradeoff_cmd->add_option("--max-ar-order", tradeoff.max_ar_order, "Largest AR order considered");
    tradeoff_cmd->add_option("--seed", tradeoff.seed, "Random seed");
    tradeoff_cmd->add_option("--threads", tradeoff.threads, "Worker threads (0 = all cores)");
    tradeoff_cmd->add_option("--out", tradeoff.out, "Directory for tradeoff.csv, .json and .svg");
    tradeoff_cmd->add_flag("!--no-svg", tradeoff.svg, "Skip the SVG plot");

    McFlags mc;
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo size and size-corrected power");
    mc_cmd->add_option("--families", mc.families, "ucr, cr")->delimiter(',');
    mc_cmd->add_option("--h", mc.hs, "Horizons")->delimiter(',');
    mc_cmd->add_option("--R", mc.Rs, "Serial-correlation ranges")->delimiter(',');
    mc_cmd->add_option("--Rtilde", mc.R_tildes, "Rolling windows")->delimiter(',');
    mc_cmd->add_option("--P", mc.Ps, "Evaluation sample sizes")->delimiter(',');
    mc_cmd->add_option("--methods", mc.methods, "Subset of DM-R, DM-M, ..., DM-IM10")->delimiter(',');
    mc_cmd->add_option("--n-reps", mc.n_reps, "Replications per design");
    mc_cmd->add_option("--seed", mc.seed, "Random seed");
    mc_cmd->add_option("--cl", mc.cl, "Significance level");
    mc_cmd->add_option("--threads", mc.threads, "Worker threads (0 = all cores)");
    mc_cmd->add_option("--out", mc.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (test_cmd->parsed()) return run_test(test);
        if (tradeoff_cmd->parsed()) return run_tradeoff(tradeoff);
        if (mc_cmd->parsed()) return run_mc(mc);
    } catch (const std::exception& e) {
        std::cerr << "epa: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
