#pragma once

#include "forenskit/bytes.hpp"

namespace forenskit {

enum class CipherDirection { Encrypt, Decrypt };

/// Keyed keystream XOR. Keystream block i is SHA-256(key || le64(i)); the
/// transform is its own inverse. This is a fixture cipher, not cryptography.
/// Throws Error(InvalidArgument) for an empty key.
Bytes encrypt_decrypt(ByteView data, ByteView key, CipherDirection direction);

}  // namespace forenskit
