#include "havmon/errors.hpp"

namespace havmon {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NonFiniteSample: return "NonFiniteSample";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::WindowLongerThanSeries: return "WindowLongerThanSeries";
        case Errc::InvalidFactor: return "InvalidFactor";
        case Errc::RateMismatch: return "RateMismatch";
        case Errc::RateTooLow: return "RateTooLow";
        case Errc::EmptySegment: return "EmptySegment";
        case Errc::NegativeComponent: return "NegativeComponent";
        case Errc::NonPositiveDuration: return "NonPositiveDuration";
        case Errc::InvalidThresholds: return "InvalidThresholds";
        case Errc::UnstableModel: return "UnstableModel";
        case Errc::NonInvertibleNoiseModel: return "NonInvertibleNoiseModel";
        case Errc::InsufficientData: return "InsufficientData";
        case Errc::DegenerateInput: return "DegenerateInput";
        case Errc::FrequencyOutOfRange: return "FrequencyOutOfRange";
        case Errc::ConstantReference: return "ConstantReference";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::ZeroVarianceDifferences: return "ZeroVarianceDifferences";
        case Errc::TooFewPairs: return "TooFewPairs";
        case Errc::ConstantPredictor: return "ConstantPredictor";
        case Errc::ConstantResponse: return "ConstantResponse";
        case Errc::TooFewPoints: return "TooFewPoints";
        case Errc::InvalidDegreesOfFreedom: return "InvalidDegreesOfFreedom";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::UnstableStage: return "UnstableStage";
        case Errc::RateTooHigh: return "RateTooHigh";
        case Errc::ParseError: return "ParseError";
        case Errc::MetadataMissing: return "MetadataMissing";
        case Errc::NonUniformTime: return "NonUniformTime";
        case Errc::UnknownFormat: return "UnknownFormat";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace havmon
