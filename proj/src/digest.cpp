#include "forenskit/digest.hpp"

#include <openssl/evp.h>

#include <cstring>

#include "forenskit/error.hpp"

namespace forenskit {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

const EVP_MD* lookup(std::string_view algorithm) {
  const EVP_MD* md = EVP_get_digestbyname(std::string(algorithm).c_str());
  if (md == nullptr || EVP_MD_size(md) != 32) return nullptr;
  return md;
}

}  // namespace

std::string to_hex(ByteView b) {
  std::string out;
  out.reserve(b.size() * 2);
  for (std::uint8_t v : b) {
    out.push_back(kHexDigits[v >> 4]);
    out.push_back(kHexDigits[v & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0)
      throw Error(ErrorCode::InvalidArgument, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

Digest Digest::from_hex(std::string_view hex) {
  Bytes raw = forenskit::from_hex(hex);
  if (raw.size() != 32)
    throw Error(ErrorCode::InvalidArgument, "digest must be 32 bytes");
  Digest d;
  std::memcpy(d.bytes.data(), raw.data(), 32);
  return d;
}

struct Hasher::Impl {
  EVP_MD_CTX* ctx = nullptr;
};

Hasher::Hasher(std::string_view algorithm) : impl_(new Impl) {
  const EVP_MD* md = lookup(algorithm);
  if (md == nullptr) {
    delete impl_;
    throw Error(ErrorCode::InvalidArgument,
                "unsupported digest algorithm: " + std::string(algorithm));
  }
  impl_->ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(impl_->ctx, md, nullptr);
}

Hasher::~Hasher() {
  EVP_MD_CTX_free(impl_->ctx);
  delete impl_;
}

Hasher& Hasher::update(ByteView data) {
  if (!data.empty()) EVP_DigestUpdate(impl_->ctx, data.data(), data.size());
  return *this;
}

Hasher& Hasher::update(std::string_view text) {
  if (!text.empty()) EVP_DigestUpdate(impl_->ctx, text.data(), text.size());
  return *this;
}

Digest Hasher::finish() {
  Digest d;
  unsigned int len = 0;
  EVP_DigestFinal_ex(impl_->ctx, d.bytes.data(), &len);
  return d;
}

Digest compute_digest(ByteView data, std::string_view algorithm) {
  return Hasher(algorithm).update(data).finish();
}

Digest compute_digest(std::string_view text, std::string_view algorithm) {
  return Hasher(algorithm).update(text).finish();
}

bool digest_algorithm_supported(std::string_view algorithm) {
  return lookup(algorithm) != nullptr;
}

}  // namespace forenskit
