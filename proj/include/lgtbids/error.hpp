#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lgtbids {

enum class ErrorCode {
  // topology
  NoBaseStation,
  DuplicateBaseStation,
  DuplicateNode,
  DuplicateEdge,
  DanglingEdge,
  InvalidNode,
  InvalidEdge,
  UnreachableNode,
  IntraLayerEdge,
  UnknownLeaveId,
  UnknownNode,
  IsBaseStation,
  NoInboundEdge,
  // channel
  InvalidChannelParams,
  NonPositiveDistance,
  NegativeDepth,
  NegativeSnr,
  NonPositivePower,
  AchievedLossOutOfRange,
  // attack
  UnknownTarget,
  InapplicableAttack,
  InvalidAttack,
  // detector
  MissingBudget,
  InvalidEnvelope,
  InvalidProbability,
  // metrics
  FlagTruthMismatch,
  LengthMismatch,
  // scenario / io
  SyntaxError,
  ValidationError,
  UnknownKey,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoBaseStation: return "NoBaseStation";
    case ErrorCode::DuplicateBaseStation: return "DuplicateBaseStation";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::DanglingEdge: return "DanglingEdge";
    case ErrorCode::InvalidNode: return "InvalidNode";
    case ErrorCode::InvalidEdge: return "InvalidEdge";
    case ErrorCode::UnreachableNode: return "UnreachableNode";
    case ErrorCode::IntraLayerEdge: return "IntraLayerEdge";
    case ErrorCode::UnknownLeaveId: return "UnknownLeaveId";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::IsBaseStation: return "IsBaseStation";
    case ErrorCode::NoInboundEdge: return "NoInboundEdge";
    case ErrorCode::InvalidChannelParams: return "InvalidChannelParams";
    case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorCode::NegativeDepth: return "NegativeDepth";
    case ErrorCode::NegativeSnr: return "NegativeSnr";
    case ErrorCode::NonPositivePower: return "NonPositivePower";
    case ErrorCode::AchievedLossOutOfRange: return "AchievedLossOutOfRange";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::InapplicableAttack: return "InapplicableAttack";
    case ErrorCode::InvalidAttack: return "InvalidAttack";
    case ErrorCode::MissingBudget: return "MissingBudget";
    case ErrorCode::InvalidEnvelope: return "InvalidEnvelope";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::FlagTruthMismatch: return "FlagTruthMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Library exception. `subjects` names the offending node ids, file paths or
/// fields, sorted where the producer has a natural order.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> subjects = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message),
        subjects_(std::move(subjects)) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }
  const std::vector<std::string>& subjects() const noexcept { return subjects_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::vector<std::string> subjects_;
};

namespace detail {

inline std::string join(const std::vector<std::string>& items, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace detail

}  // namespace lgtbids
