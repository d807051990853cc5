#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace castnet {

enum class ErrorCode {
    MissingColumn,
    RowArity,
    BadValue,
    DuplicateKey,
    DanglingReference,
    EmptyInput,
    NodeOutOfRange,
    TooFewNodes,
    EmptyGraph,
    UnknownActor,
    AmbiguousActor,
    CandidateExplosion,
    InvalidArgument,
    Io,
    CacheFormat,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::RowArity: return "RowArity";
    case ErrorCode::BadValue: return "BadValue";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::UnknownActor: return "UnknownActor";
    case ErrorCode::AmbiguousActor: return "AmbiguousActor";
    case ErrorCode::CandidateExplosion: return "CandidateExplosion";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::CacheFormat: return "CacheFormat";
    }
    return "Unknown";
}

/// Every failure raised by castnet carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace castnet
