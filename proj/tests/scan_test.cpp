#include <random>

#include <gtest/gtest.h>

#include "forenskit/scan.hpp"
#include "support.hpp"

namespace forenskit {
namespace {

Bytes random_text(std::mt19937_64& rng, std::size_t n, int alphabet) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>('a' + rng() % alphabet);
  return b;
}

std::vector<std::size_t> naive_find(const Bytes& hay, const Bytes& needle) {
  std::vector<std::size_t> out;
  if (needle.empty() || needle.size() > hay.size()) return out;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i)
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<long>(i))) out.push_back(i);
  return out;
}

TEST(Scan, FindAllMatchesNaiveAndSerial) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    Bytes hay = random_text(rng, rng() % 200000, 3);
    Bytes needle = random_text(rng, rng() % 5, 3);
    auto expected = naive_find(hay, needle);
    EXPECT_EQ(scan::find_all_serial(hay, needle), expected);
    EXPECT_EQ(scan::find_all(hay, needle), expected);
  }
}

TEST(Scan, OverlappingMatches) {
  Bytes hay = testing::bytes_of("aaaa");
  EXPECT_EQ(scan::find_all(hay, testing::bytes_of("aa")), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(scan::find_all(hay, Bytes{}).empty());
}

TEST(Scan, RegexParallelEqualsSerial) {
  std::mt19937_64 rng(22);
  const std::regex re("ab+c?");
  for (int i = 0; i < 20; ++i) {
    std::vector<Bytes> segs;
    for (std::size_t s = 0, n = rng() % 64; s < n; ++s) segs.push_back(random_text(rng, rng() % 3000, 3));
    std::vector<ByteView> views(segs.begin(), segs.end());
    auto serial = scan::regex_scan_serial(views, re);
    EXPECT_EQ(scan::regex_scan(views, re), serial);
    for (const auto& m : serial) {
      ASSERT_LT(m.segment, segs.size());
      std::string hit(segs[m.segment].begin() + static_cast<long>(m.offset),
                      segs[m.segment].begin() + static_cast<long>(m.offset + m.length));
      EXPECT_TRUE(std::regex_match(hit, re)) << hit;
    }
  }
}

TEST(Scan, DigestAllParallelEqualsSerialAndOracle) {
  std::mt19937_64 rng(23);
  std::vector<Bytes> bufs;
  for (int i = 0; i < 50; ++i) bufs.push_back(random_text(rng, rng() % 40000, 26));
  std::vector<ByteView> views(bufs.begin(), bufs.end());
  auto par = scan::digest_all(views, "sha256");
  EXPECT_EQ(par, scan::digest_all_serial(views, "sha256"));
  for (std::size_t i = 0; i < bufs.size(); ++i) EXPECT_EQ(par[i].hex(), testing::oracle_sha256_hex(bufs[i]));
  EXPECT_GE(scan::max_threads(), 1);
}

}  // namespace
}  // namespace forenskit
