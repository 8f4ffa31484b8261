#include <gtest/gtest.h>

#include "forenskit/device.hpp"
#include "forenskit/error.hpp"
#include "forenskit/fixtures.hpp"
#include "support.hpp"

namespace forenskit {
namespace {

using testing::oracle_sha256_hex;

TEST(Device, BuildIsDeterministicPerSeed) {
  FixtureManifest m = generate_manifest(5, 3);
  EXPECT_EQ(Device::build(m, 1).serialize(), Device::build(m, 1).serialize());
  EXPECT_NE(Device::build(m, 1).serialize(), Device::build(m, 2).serialize());
}

TEST(Device, SerializeRoundTrip) {
  Device d = Device::build(testing::default_fixture(), 7);
  d.write_region(d.resolve(RegionRef::parse("@bootloader.live_boot")), to_bytes("1"), "t");
  d.load_live_os(to_bytes("os"));
  Device back = Device::deserialize(d.serialize());
  EXPECT_TRUE(back == d);
  EXPECT_EQ(back.ledger(), d.ledger());
  EXPECT_EQ(back.named_regions(), d.named_regions());
  EXPECT_TRUE(back.live_os_resident());
  EXPECT_THROW(Device::deserialize(to_bytes("garbage")), Error);
}

TEST(Device, PartitionDigestsMatchIndependentHash) {
  Device d = Device::build(testing::default_fixture(), 7);
  for (const auto& name : d.partition_names())
    EXPECT_EQ(d.digest(name).hex(), oracle_sha256_hex(d.partition(name))) << name;
}

TEST(Device, LedgerRecordsEffectiveWritesOnly) {
  Device d = Device::build(testing::default_fixture(), 7);
  const Region r = d.resolve(RegionRef::parse("@bootloader.live_boot"));
  const Bytes current = d.read_region(r);
  EXPECT_FALSE(d.write_region(r, current, "same").has_value());
  EXPECT_TRUE(d.ledger().empty());

  const std::string before = oracle_sha256_hex(current);
  auto rec = d.write_region(r, to_bytes("1"), "flip");
  ASSERT_TRUE(rec.has_value());
  EXPECT_EQ(rec->region, r);
  EXPECT_EQ(rec->before_digest.hex(), before);
  EXPECT_EQ(rec->after_digest.hex(), oracle_sha256_hex(d.read_region(r)));
  EXPECT_EQ(d.ledger().size(), 1u);
  EXPECT_EQ(d.config_param("live_boot"), '1');
  EXPECT_EQ(d.ledger_diff(0).size(), 1u);
  EXPECT_TRUE(d.ledger_diff(d.last_seq()).empty());
}

TEST(Device, BoundsAndUnknownPartitions) {
  Device d = Device::build(testing::default_fixture(), 7);
  const auto size = d.partition("system").size();
  try {
    d.read_region({"system", size - 1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfBounds);
  }
  try {
    d.read_region({"nosuch", 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownPartition);
  }
}

TEST(Device, NamedRegionsAndEvidentialMap) {
  Device d = Device::build(testing::default_fixture(), 7);
  for (const char* name : {"framework.sigcheck", "framework.hook", "system.su",
                           "bootloader.live_boot", "bootloader.verity"}) {
    Region r = d.resolve(RegionRef::parse(std::string("@") + name));
    EXPECT_EQ(r, d.named_regions().at(name));
    EXPECT_FALSE(d.is_evidential(r)) << name;
  }
  EXPECT_TRUE(d.is_evidential({"userdata", 0, 1}));
  EXPECT_FALSE(d.has_partition("sdcard"));

  EXPECT_TRUE(d.signature_check_active());
  d.write_region(d.resolve(RegionRef::parse("@framework.sigcheck")), to_bytes("0"), "t");
  EXPECT_FALSE(d.signature_check_active());
}

TEST(Device, RebootClearsVolatileState) {
  Device d = Device::build(testing::default_fixture(), 7);
  d.set_allow_unsigned_boot(true);
  d.load_live_os(to_bytes("live"));
  const auto flash = d.digest_all();
  d.reboot();
  EXPECT_FALSE(d.live_os_resident());
  EXPECT_FALSE(d.bootloader().allow_unsigned_boot);
  EXPECT_TRUE(d.memory().empty());
  EXPECT_EQ(d.digest_all(), flash);
}

TEST(Device, CopiesAreIndependent) {
  Device a = Device::build(testing::default_fixture(), 7);
  Device b = a;
  b.write_region(b.resolve(RegionRef::parse("@system.su")),
                 Bytes(b.named_regions().at("system.su").length, 1), "t");
  EXPECT_FALSE(a == b);
  EXPECT_TRUE(a.ledger().empty());
}

}  // namespace
}  // namespace forenskit
