#include "forenskit/cipher.hpp"

#include "forenskit/digest.hpp"
#include "forenskit/error.hpp"

namespace forenskit {

Bytes encrypt_decrypt(ByteView data, ByteView key, CipherDirection) {
  if (key.empty()) throw Error(ErrorCode::InvalidArgument, "empty key");
  Bytes out(data.begin(), data.end());
  std::uint64_t counter = 0;
  for (std::size_t pos = 0; pos < out.size(); pos += 32, ++counter) {
    std::uint8_t ctr[8];
    for (int i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>(counter >> (8 * i));
    Digest block = Hasher().update(key).update(ByteView(ctr, 8)).finish();
    for (std::size_t i = 0; i < 32 && pos + i < out.size(); ++i) out[pos + i] ^= block.bytes[i];
  }
  return out;
}

}  // namespace forenskit
