#pragma once

#include <stdexcept>
#include <string>

namespace polyccd {

enum class ErrorCode {
  InvalidArgument,
  DuplicateSamples,
  NearSingular,
  RankDeficient,
  IdenticallyZero,
  FreeFallSingularity,
  ZeroSpeed,
  NotApproximable,
  Schema,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::DuplicateSamples: return "duplicate sample times";
    case ErrorCode::NearSingular: return "near-singular system";
    case ErrorCode::RankDeficient: return "rank deficient";
    case ErrorCode::IdenticallyZero: return "identically zero";
    case ErrorCode::FreeFallSingularity: return "free-fall singularity";
    case ErrorCode::ZeroSpeed: return "zero speed";
    case ErrorCode::NotApproximable: return "not approximable";
    case ErrorCode::Schema: return "schema error";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polyccd
