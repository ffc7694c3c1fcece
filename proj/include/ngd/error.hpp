#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ngd {

enum class Errc {
    InvalidArgument,
    PeakAtBoundary,
    AllZero,
    NoCrossing,
    SingleCrossing,
    StartsAboveThreshold,
    Grazing,
    GridTooCoarse,
    ZeroResponse,
    Unreachable,
    InconsistentTrigger,
    ResidualTooLarge,
    NoDetection,
    InsufficientData,
};

[[nodiscard]] constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::PeakAtBoundary: return "PeakAtBoundary";
        case Errc::AllZero: return "AllZero";
        case Errc::NoCrossing: return "NoCrossing";
        case Errc::SingleCrossing: return "SingleCrossing";
        case Errc::StartsAboveThreshold: return "StartsAboveThreshold";
        case Errc::Grazing: return "Grazing";
        case Errc::GridTooCoarse: return "GridTooCoarse";
        case Errc::ZeroResponse: return "ZeroResponse";
        case Errc::Unreachable: return "Unreachable";
        case Errc::InconsistentTrigger: return "InconsistentTrigger";
        case Errc::ResidualTooLarge: return "ResidualTooLarge";
        case Errc::NoDetection: return "NoDetection";
        case Errc::InsufficientData: return "InsufficientData";
    }
    return "Unknown";
}

/// Failure of a numerical operation. `code()` identifies the condition so
/// callers (and the CLI exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace ngd
