#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stereodepth {

enum class ErrorKind {
  MalformedHeader,
  UnsupportedMaxval,
  TruncatedPayload,
  DimensionMismatch,
  ConfigInvalid,
  SceneInvalid,
  SceneParse,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedHeader: return "malformed header";
    case ErrorKind::UnsupportedMaxval: return "unsupported maxval";
    case ErrorKind::TruncatedPayload: return "truncated payload";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::ConfigInvalid: return "invalid config";
    case ErrorKind::SceneInvalid: return "invalid scene";
    case ErrorKind::SceneParse: return "scene parse error";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown error";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace stereodepth
