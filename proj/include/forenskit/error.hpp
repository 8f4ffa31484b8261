#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace forenskit {

enum class ErrorCode {
  InvalidArgument,
  OutOfBounds,
  UnknownPartition,
  UnknownTarget,
  ManifestInvalid,
  Parse,
  GateRejected,
  UnsignedBootNotAllowed,
  LiveOsRequired,
  DigestMismatch,
  AccessDenied,
  UnknownMethod,
  UnknownDescriptor,
  UnknownChannel,
  MissingSection,
  DeclaredEffectsMismatch,
  ValidationFailed,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the plan parser; carries a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(ErrorCode::Parse, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// Raised for malformed fixture manifests; path is a JSON-pointer-like
/// location such as "apps[1].encrypted_files[0].key_location".
class ManifestError : public Error {
 public:
  ManifestError(const std::string& path, const std::string& message)
      : Error(ErrorCode::ManifestInvalid, path + ": " + message), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace forenskit
