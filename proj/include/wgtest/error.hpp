#ifndef WGTEST_ERROR_HPP
#define WGTEST_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace wgtest {

enum class ErrorCode {
    NonSquare,
    AsymmetryBeyondTolerance,
    NonFiniteEntry,
    EmptyInput,
    OddN,
    NonPositiveParameter,
    InvalidProbability,
    OddSampleSize,
    TooFewSamples,
    DimensionMismatch,
    SampleSizeMismatch,
    InvalidAlpha,
    DegenerateModel,
    InvalidScenarioParams,
    IoError,
    MixedDimensions,
    UnequalWithSplitOnly,
    AllNA,
    ConfigError,
    InvalidArgument,
};

inline constexpr std::string_view code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::AsymmetryBeyondTolerance: return "AsymmetryBeyondTolerance";
        case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::OddN: return "OddN";
        case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
        case ErrorCode::InvalidProbability: return "InvalidProbability";
        case ErrorCode::OddSampleSize: return "OddSampleSize";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SampleSizeMismatch: return "SampleSizeMismatch";
        case ErrorCode::InvalidAlpha: return "InvalidAlpha";
        case ErrorCode::DegenerateModel: return "DegenerateModel";
        case ErrorCode::InvalidScenarioParams: return "InvalidScenarioParams";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::MixedDimensions: return "MixedDimensions";
        case ErrorCode::UnequalWithSplitOnly: return "UnequalWithSplitOnly";
        case ErrorCode::AllNA: return "AllNA";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a stable code plus a human message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace wgtest

#endif
