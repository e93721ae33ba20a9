#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace electrify {

// Every failure the library reports carries one of these categories so the
// CLI and the HTTP service can surface a machine-parsable reason.
enum class ErrorCategory {
    MissingFile,
    MalformedRow,
    DanglingReference,
    UnknownRouteName,
    DegenerateSegment,
    GradeOutOfRange,
    MissingGeoData,
    ProviderUnavailable,
    PartialCoverage,
    ZeroDistanceCycle,
    NonUniformTimestep,
    NegativeSpeed,
    InvalidCycle,
    EmptyGradeSource,
    NonConvergence,
    NoTrips,
    ZeroCycleLength,
    ModelMissing,
    NonPositiveSpeed,
    NonPositiveFE,
    AllZeroImpacts,
    WriteFailure,
    InvalidParameter,
    InvalidInput,
};

constexpr std::string_view to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::MissingFile: return "MissingFile";
        case ErrorCategory::MalformedRow: return "MalformedRow";
        case ErrorCategory::DanglingReference: return "DanglingReference";
        case ErrorCategory::UnknownRouteName: return "UnknownRouteName";
        case ErrorCategory::DegenerateSegment: return "DegenerateSegment";
        case ErrorCategory::GradeOutOfRange: return "GradeOutOfRange";
        case ErrorCategory::MissingGeoData: return "MissingGeoData";
        case ErrorCategory::ProviderUnavailable: return "ProviderUnavailable";
        case ErrorCategory::PartialCoverage: return "PartialCoverage";
        case ErrorCategory::ZeroDistanceCycle: return "ZeroDistanceCycle";
        case ErrorCategory::NonUniformTimestep: return "NonUniformTimestep";
        case ErrorCategory::NegativeSpeed: return "NegativeSpeed";
        case ErrorCategory::InvalidCycle: return "InvalidCycle";
        case ErrorCategory::EmptyGradeSource: return "EmptyGradeSource";
        case ErrorCategory::NonConvergence: return "NonConvergence";
        case ErrorCategory::NoTrips: return "NoTrips";
        case ErrorCategory::ZeroCycleLength: return "ZeroCycleLength";
        case ErrorCategory::ModelMissing: return "ModelMissing";
        case ErrorCategory::NonPositiveSpeed: return "NonPositiveSpeed";
        case ErrorCategory::NonPositiveFE: return "NonPositiveFE";
        case ErrorCategory::AllZeroImpacts: return "AllZeroImpacts";
        case ErrorCategory::WriteFailure: return "WriteFailure";
        case ErrorCategory::InvalidParameter: return "InvalidParameter";
        case ErrorCategory::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(std::string(to_string(category)) + ": " + message),
          category_(category),
          detail_(message) {}

    ErrorCategory category() const noexcept { return category_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCategory category_;
    std::string detail_;
};

}  // namespace electrify
