#pragma once

#include <string>
#include <string_view>

#include "forenskit/bytes.hpp"

namespace forenskit {

inline constexpr std::string_view kDefaultDigestAlgorithm = "sha256";

/// Streaming digest over an OpenSSL message digest. The algorithm is chosen
/// by name and must produce exactly 256 bits.
class Hasher {
 public:
  explicit Hasher(std::string_view algorithm = kDefaultDigestAlgorithm);
  ~Hasher();
  Hasher(const Hasher&) = delete;
  Hasher& operator=(const Hasher&) = delete;

  Hasher& update(ByteView data);
  Hasher& update(std::string_view text);
  Digest finish();

 private:
  struct Impl;
  Impl* impl_;
};

Digest compute_digest(ByteView data,
                      std::string_view algorithm = kDefaultDigestAlgorithm);
Digest compute_digest(std::string_view text,
                      std::string_view algorithm = kDefaultDigestAlgorithm);

/// True when `algorithm` names a supported 256-bit digest.
bool digest_algorithm_supported(std::string_view algorithm);

}  // namespace forenskit
