#pragma once

#include <stdexcept>
#include <string>

namespace havmon {

// Error taxonomy shared by all modules. Each throw site picks the code
// that names the violated precondition; the message carries context
// (file, line, segment, operation) where the caller provides it.
enum class Errc {
    // signal-core
    NonFiniteSample,
    EmptyInput,
    WindowLongerThanSeries,
    InvalidFactor,
    RateMismatch,
    // iso-weighting
    RateTooLow,
    EmptySegment,
    NegativeComponent,
    NonPositiveDuration,
    InvalidThresholds,
    // sysid
    UnstableModel,
    NonInvertibleNoiseModel,
    InsufficientData,
    DegenerateInput,
    FrequencyOutOfRange,
    ConstantReference,
    LengthMismatch,
    // stats
    ZeroVarianceDifferences,
    TooFewPairs,
    ConstantPredictor,
    ConstantResponse,
    TooFewPoints,
    InvalidDegreesOfFreedom,
    // synth
    InvalidSpec,
    UnstableStage,
    RateTooHigh,
    // io-cli
    ParseError,
    MetadataMissing,
    NonUniformTime,
    UnknownFormat,
    IoError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace havmon
