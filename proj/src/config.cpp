#include "ngd/config.hpp"

#include "ngd/error.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <sstream>

namespace ngd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string where(const ConfigEntry& e) {
    if (e.line > 0) return e.source + ":" + std::to_string(e.line) + ": key '" + e.key + "'";
    return e.source + ": key '" + e.key + "'";
}

double number(const ConfigEntry& e) {
    const std::string v = trim(e.value);
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
        throw ConfigError(where(e) + ": expected a number, got '" + e.value + "'");
    return x;
}

double positive(const ConfigEntry& e) {
    const double x = number(e);
    if (!(x > 0.0)) throw ConfigError(where(e) + ": must be positive");
    return x;
}

double non_negative(const ConfigEntry& e) {
    const double x = number(e);
    if (!(x >= 0.0)) throw ConfigError(where(e) + ": must be non-negative");
    return x;
}

std::vector<double> number_list(const ConfigEntry& e) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        ConfigEntry one = e;
        one.value = item;
        out.push_back(positive(one));
    }
    if (out.empty()) throw ConfigError(where(e) + ": empty list");
    return out;
}

}  // namespace

std::vector<ConfigEntry> parse_key_values(std::istream& in, const std::string& source) {
    std::vector<ConfigEntry> entries;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string text = trim(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(line) + ": expected 'key = value', got '" + text + "'");
        ConfigEntry e{trim(text.substr(0, eq)), trim(text.substr(eq + 1)), source, line};
        if (e.key.empty()) throw ConfigError(source + ":" + std::to_string(line) + ": missing key");
        entries.push_back(std::move(e));
    }
    return entries;
}

ConfigEntry parse_override(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set: expected key=value, got '" + text + "'");
    return {trim(text.substr(0, eq)), trim(text.substr(eq + 1)), "--set", 0};
}

void apply(RunConfig& cfg, const std::vector<ConfigEntry>& entries) {
    for (const auto& e : entries) {
        const auto& k = e.key;
        if (k == "g0") {
            cfg.g0 = non_negative(e);
            cfg.t0.reset();
        } else if (k == "t0") {
            cfg.t0 = non_negative(e);
            cfg.g0.reset();
        } else if (k == "gamma") {
            cfg.gamma = positive(e);
        } else if (k == "omega_r") {
            cfg.omega_r = positive(e);
        } else if (k == "omega_r_units") {
            const auto u = parse_frequency_units(trim(e.value));
            if (!u) throw ConfigError(where(e) + ": expected 'angular' or 'cyclic', got '" + e.value + "'");
            cfg.omega_r_units = *u;
        } else if (k == "v0") {
            cfg.pulse.v0 = positive(e);
        } else if (k == "tf") {
            cfg.pulse.tf = positive(e);
        } else if (k == "omega_c") {
            cfg.pulse.omega_c = non_negative(e);
        } else if (k == "s0") {
            cfg.s0 = positive(e);
        } else if (k == "dt") {
            cfg.dt = positive(e);
        } else if (k == "t_start") {
            cfg.t_start = number(e);
        } else if (k == "t_end") {
            cfg.t_end = number(e);
        } else if (k == "residual_tolerance") {
            cfg.residual_tolerance = positive(e);
        } else if (k == "thresholds") {
            cfg.thresholds = number_list(e);
        } else if (k == "sweep_target") {
            const std::string v = trim(e.value);
            if (v != "input" && v != "output")
                throw ConfigError(where(e) + ": expected 'input' or 'output', got '" + e.value + "'");
            cfg.sweep_target = v;
        } else if (k == "fit_points") {
            const double x = positive(e);
            if (x != std::floor(x) || x < 3) throw ConfigError(where(e) + ": must be an integer >= 3");
            cfg.fit_points = static_cast<std::size_t>(x);
        } else if (k == "kk_omega_max_factor") {
            cfg.kk_omega_max_factor = positive(e);
        } else if (k == "kk_spacing") {
            cfg.kk_spacing = positive(e);
        } else {
            throw ConfigError(where(e) + ": unknown key");
        }
    }
}

RunConfig load_config(const std::vector<ConfigEntry>& file_entries, const std::vector<ConfigEntry>& overrides) {
    RunConfig cfg;
    bool file_g0 = false, file_t0 = false;
    for (const auto& e : file_entries) {
        file_g0 |= e.key == "g0";
        file_t0 |= e.key == "t0";
    }
    if (file_g0 && file_t0) {
        const auto& e = file_entries.front();
        throw ConfigError(e.source + ": keys 'g0' and 't0' are mutually exclusive; set exactly one");
    }
    apply(cfg, file_entries);
    apply(cfg, overrides);
    if (cfg.g0.has_value() == cfg.t0.has_value())
        throw ConfigError("exactly one of 'g0' and 't0' must be set");
    return cfg;
}

AmplifierParams RunConfig::amplifier() const {
    AmplifierParams p;
    p.gamma = gamma;
    p.omega_r = angular_frequency(omega_r, omega_r_units);
    p.omega_r_units = omega_r_units;
    p.t0 = t0;
    p.g0 = g0 ? *g0 : calibrate_g0(p.gamma, p.omega_r, *t0);
    p.validate();
    return p;
}

TimeGrid RunConfig::grid() const {
    const double a = t_start.value_or(-3.0 * pulse.tf);
    const double b = t_end.value_or(12.0 * pulse.tf);
    if (!(b > a)) throw ConfigError("grid span: t_end must exceed t_start");
    return TimeGrid::spanning(a, b, dt);
}

std::vector<double> RunConfig::resolved_thresholds() const {
    if (!thresholds.empty()) return thresholds;
    std::vector<double> out;
    for (int n = 1; n <= 8; ++n) out.push_back(pulse.v0 * std::pow(10.0, -0.5 * n));
    return out;
}

}  // namespace ngd
