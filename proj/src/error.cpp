#include "forenskit/error.hpp"

namespace forenskit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::OutOfBounds: return "out-of-bounds";
    case ErrorCode::UnknownPartition: return "unknown-partition";
    case ErrorCode::UnknownTarget: return "unknown-target";
    case ErrorCode::ManifestInvalid: return "manifest-invalid";
    case ErrorCode::Parse: return "parse-error";
    case ErrorCode::GateRejected: return "gate-rejected";
    case ErrorCode::UnsignedBootNotAllowed: return "unsigned-boot-not-allowed";
    case ErrorCode::LiveOsRequired: return "live-os-required";
    case ErrorCode::DigestMismatch: return "digest-mismatch";
    case ErrorCode::AccessDenied: return "access-denied";
    case ErrorCode::UnknownMethod: return "unknown-method";
    case ErrorCode::UnknownDescriptor: return "unknown-descriptor";
    case ErrorCode::UnknownChannel: return "unknown-channel";
    case ErrorCode::MissingSection: return "missing-section";
    case ErrorCode::DeclaredEffectsMismatch: return "declared-effects-mismatch";
    case ErrorCode::ValidationFailed: return "validation-failed";
    case ErrorCode::Io: return "io-error";
  }
  return "unknown";
}

}  // namespace forenskit
