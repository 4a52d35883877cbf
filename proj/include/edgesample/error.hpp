#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edgesample {

enum class ErrorCode {
    SelfLoop,
    DuplicateEdge,
    NonPositiveWeight,
    NodeOutOfRange,
    EmptyEdgeSet,
    InvalidEdgeId,
    NotSymmetric,
    DimensionMismatch,
    BadBandwidth,
    RangeTooSmall,
    SizeLimit,
    SizeTooLarge,
    Disconnected,
    DegenerateEmbedding,
    KMismatch,
    ParseError,
    AsymmetricInput,
    FormatError,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::EmptyEdgeSet: return "EmptyEdgeSet";
    case ErrorCode::InvalidEdgeId: return "InvalidEdgeId";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadBandwidth: return "BadBandwidth";
    case ErrorCode::RangeTooSmall: return "RangeTooSmall";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::SizeTooLarge: return "SizeTooLarge";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::DegenerateEmbedding: return "DegenerateEmbedding";
    case ErrorCode::KMismatch: return "KMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library. The code identifies the failure class;
/// the message carries the context (edge ids, line numbers, sizes).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace edgesample
