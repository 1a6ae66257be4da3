#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dps {

enum class ErrorCode {
    InvalidBlockSize,
    DoubleFill,
    FieldIndexOutOfRange,
    RegionMismatch,
    IncompleteRead,
    CyclicStructure,
    ShapeConflict,
    UnresolvedShape,
    UnknownCtor,
    LeafTypeMismatch,
    UseAfterConsume,
    UnfilledHoles,
    SelfPlug,
    LinearityLeak,
    OracleMismatch,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidBlockSize: return "InvalidBlockSize";
    case ErrorCode::DoubleFill: return "DoubleFill";
    case ErrorCode::FieldIndexOutOfRange: return "FieldIndexOutOfRange";
    case ErrorCode::RegionMismatch: return "RegionMismatch";
    case ErrorCode::IncompleteRead: return "IncompleteRead";
    case ErrorCode::CyclicStructure: return "CyclicStructure";
    case ErrorCode::ShapeConflict: return "ShapeConflict";
    case ErrorCode::UnresolvedShape: return "UnresolvedShape";
    case ErrorCode::UnknownCtor: return "UnknownCtor";
    case ErrorCode::LeafTypeMismatch: return "LeafTypeMismatch";
    case ErrorCode::UseAfterConsume: return "UseAfterConsume";
    case ErrorCode::UnfilledHoles: return "UnfilledHoles";
    case ErrorCode::SelfPlug: return "SelfPlug";
    case ErrorCode::LinearityLeak: return "LinearityLeak";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
    }
    return "Unknown";
}

/// Thrown by every library operation that rejects its input. Operations
/// validate before mutating, so a thrown Error leaves all handles and region
/// contents as they were.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
    throw Error(code, detail);
}

} // namespace dps
