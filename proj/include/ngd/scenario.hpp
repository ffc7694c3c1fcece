#pragma once

#include "ngd/config.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ngd {

enum class ScenarioKind { OpenLoop, Feedback, ThresholdSweep, Calibrate, KkCheck };

[[nodiscard]] std::string_view to_string(ScenarioKind k) noexcept;
[[nodiscard]] std::optional<ScenarioKind> parse_scenario(std::string_view subcommand) noexcept;

struct OutputFile {
    std::string name;
    std::string content;
};

/// One scenario run: the JSON summary plus any CSV traces, not yet written.
struct RunSummary {
    nlohmann::json summary;
    std::vector<OutputFile> files;
};

[[nodiscard]] std::string_view tool_version() noexcept;

[[nodiscard]] RunSummary run_open_loop(const RunConfig& cfg);
[[nodiscard]] RunSummary run_feedback(const RunConfig& cfg);
[[nodiscard]] RunSummary run_threshold_sweep(const RunConfig& cfg);
[[nodiscard]] RunSummary run_calibrate(const RunConfig& cfg);
[[nodiscard]] RunSummary run_kk_check(const RunConfig& cfg);

[[nodiscard]] RunSummary run_scenario(ScenarioKind kind, const RunConfig& cfg);

}  // namespace ngd
