// ngdlab: runs the negative-group-delay amplifier scenarios and writes CSV
// traces plus a JSON summary per run.
//
// Exit codes: 0 success (a detector that never fires is a success),
//             1 configuration error, 2 numerical failure.

#include "ngd/config.hpp"
#include "ngd/error.hpp"
#include "ngd/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out = "ngd_out";
    std::vector<std::string> sets;
    std::optional<double> dt;
    std::string span;
    std::string sweep;
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "Key-value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    sub->add_option("--set", o.sets, "Override a configuration key (key=value, repeatable)");
    sub->add_option("--dt", o.dt, "Grid step in seconds");
    sub->add_option("--span", o.span, "Grid span as t_start,t_end in seconds");
    sub->add_option("--sweep", o.sweep, "Run once per value: key=v1,v2,... (runs concurrently)");
}

std::vector<ngd::ConfigEntry> overrides_from(const Options& o) {
    std::vector<ngd::ConfigEntry> out;
    for (const auto& s : o.sets) out.push_back(ngd::parse_override(s));
    if (o.dt) out.push_back({"dt", std::to_string(*o.dt), "--dt", 0});
    if (!o.span.empty()) {
        const auto comma = o.span.find(',');
        if (comma == std::string::npos) throw ngd::ConfigError("--span: expected t_start,t_end");
        out.push_back({"t_start", o.span.substr(0, comma), "--span", 0});
        out.push_back({"t_end", o.span.substr(comma + 1), "--span", 0});
    }
    return out;
}

void write_run(const fs::path& dir, const ngd::RunSummary& run) {
    fs::create_directories(dir);
    for (const auto& f : run.files) std::ofstream(dir / f.name, std::ios::binary) << f.content;
    std::ofstream(dir / "summary.json", std::ios::binary) << run.summary.dump(2) << '\n';
}

void print_run(const ngd::RunSummary& run, const fs::path& dir) {
    const auto& s = run.summary;
    std::cout << "scenario  " << s["scenario"].get<std::string>() << "  (ngdlab " << s["version"].get<std::string>()
              << ", " << s["simd_backend"].get<std::string>() << ")\n";
    std::cout << "parameters " << s["parameters"].dump() << '\n';
    if (s.contains("grid")) std::cout << "grid       " << s["grid"].dump() << '\n';
    for (const auto& [k, v] : s["results"].items()) {
        if (v.is_array() || v.is_object()) continue;
        std::cout << "  " << k << " = " << v.dump() << '\n';
    }
    std::cout << "wrote " << (dir / "summary.json").string() << '\n';
}

int run(ngd::ScenarioKind kind, const Options& o) {
    std::vector<ngd::ConfigEntry> file_entries;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw ngd::ConfigError("cannot open " + o.config);
        file_entries = ngd::parse_key_values(in, o.config);
    }
    const auto overrides = overrides_from(o);

    if (o.sweep.empty()) {
        const auto cfg = ngd::load_config(file_entries, overrides);
        const auto result = ngd::run_scenario(kind, cfg);
        write_run(o.out, result);
        print_run(result, o.out);
        return 0;
    }

    const auto base = ngd::parse_override(o.sweep);
    std::vector<ngd::RunConfig> configs;
    std::stringstream ss(base.value);
    std::string value;
    while (std::getline(ss, value, ',')) {
        auto ov = overrides;
        ov.push_back({base.key, value, "--sweep", 0});
        configs.push_back(ngd::load_config(file_entries, ov));
    }

    std::vector<std::future<ngd::RunSummary>> jobs;
    for (const auto& c : configs)
        jobs.push_back(std::async(std::launch::async, [kind, c] { return ngd::run_scenario(kind, c); }));

    nlohmann::json merged = nlohmann::json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto result = jobs[i].get();
        const fs::path dir = fs::path(o.out) / ("sweep_" + std::to_string(i));
        write_run(dir, result);
        print_run(result, dir);
        merged.push_back(result.summary);
    }
    fs::create_directories(o.out);
    std::ofstream(fs::path(o.out) / "sweep_summary.json", std::ios::binary) << merged.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Negative group delay amplifier and causal-loop feedback laboratory"};
    app.set_version_flag("--version", std::string(ngd::tool_version()));
    app.require_subcommand(1);

    Options opts;
    const std::vector<std::pair<std::string, std::string>> subs = {
        {"open-loop", "Open-loop response and group delay of the smooth pulse"},
        {"feedback", "Self-consistent solution of the threshold-triggered feedback loop"},
        {"sweep", "Detector bank with decreasing thresholds and front extrapolation"},
        {"calibrate", "Gain that produces the configured group advance t0"},
        {"kk-check", "Kramers-Kronig consistency of the transfer function"},
    };
    for (const auto& [name, help] : subs) add_common(app.add_subcommand(name, help), opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const auto kind = ngd::parse_scenario(app.get_subcommands().front()->get_name());
    try {
        return run(*kind, opts);
    } catch (const ngd::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const ngd::Error& e) {
        if (e.code() == ngd::Errc::InvalidArgument) {
            std::cerr << "configuration error: " << e.what() << '\n';
            return 1;
        }
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
