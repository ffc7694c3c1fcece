#pragma once

#include "ngd/amplifier.hpp"
#include "ngd/signal.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ngd {

/// Malformed or inconsistent configuration. The message names the key and,
/// for file entries, the source and line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConfigEntry {
    std::string key;
    std::string value;
    std::string source;  ///< file name or "--set"
    int line = 0;        ///< 0 for command-line entries
};

/// `key = value` lines; `#` starts a comment; blank lines are ignored.
[[nodiscard]] std::vector<ConfigEntry> parse_key_values(std::istream& in, const std::string& source);

/// `key=value` from the command line.
[[nodiscard]] ConfigEntry parse_override(const std::string& text);

/// Every setting a scenario may use. Defaults reproduce the published
/// circuit: gamma = 15 1/s, omega_r = 51 Hz, 2.94 ms group advance, a 41 ms
/// cos^2 pulse and a 1.12 V0 detector threshold.
struct RunConfig {
    InputPulseSpec pulse;

    std::optional<double> g0;
    std::optional<double> t0 = 2.94e-3;
    double gamma = 15.0;
    double omega_r = 51.0;  ///< as configured, see omega_r_units
    FrequencyUnits omega_r_units = FrequencyUnits::Cyclic;

    double s0 = 1.12;
    double dt = 1e-5;
    std::optional<double> t_start;  ///< default -3 tf
    std::optional<double> t_end;    ///< default 12 tf
    double residual_tolerance = 1e-6;

    std::vector<double> thresholds;  ///< empty: 10^(-n/2) v0, n = 1..8
    std::string sweep_target = "output";
    std::size_t fit_points = 4;

    double kk_omega_max_factor = 100.0;  ///< omega_max in units of omega_r
    double kk_spacing = 2.0;             ///< rad/s between frequency samples

    /// The amplifier with omega_r converted to rad/s and g0 calibrated from
    /// t0 when t0 is the configured quantity.
    [[nodiscard]] AmplifierParams amplifier() const;
    [[nodiscard]] TimeGrid grid() const;
    [[nodiscard]] std::vector<double> resolved_thresholds() const;
};

/// Applies entries in order (later wins). Setting g0 clears t0 and vice
/// versa, so a command-line override of either replaces the file's choice.
void apply(RunConfig& cfg, const std::vector<ConfigEntry>& entries);

[[nodiscard]] RunConfig load_config(const std::vector<ConfigEntry>& file_entries,
                                    const std::vector<ConfigEntry>& overrides);

}  // namespace ngd
