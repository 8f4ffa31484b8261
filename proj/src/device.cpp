#include "forenskit/device.hpp"

#include <algorithm>
#include <random>

#include "forenskit/cipher.hpp"
#include "forenskit/error.hpp"
#include "forenskit/layout.hpp"
#include "forenskit/scan.hpp"

namespace forenskit {

using nlohmann::json;

namespace {

constexpr std::size_t kBlock = 4096;
constexpr std::size_t kRawPartitionSize = 4 * kBlock;
constexpr std::size_t kBootloaderSize = 512;
constexpr std::string_view kNoiseAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789 ";

class Layouter {
 public:
  explicit Layouter(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t next(std::uint64_t bound) { return bound == 0 ? 0 : rng_() % bound; }

  std::string noise(std::size_t n) {
    std::string s(n, ' ');
    for (auto& c : s) c = kNoiseAlphabet[next(kNoiseAlphabet.size())];
    return s;
  }

  Bytes raw(std::size_t n) {
    Bytes b(n);
    for (auto& v : b) v = static_cast<std::uint8_t>(rng_() & 0xff);
    return b;
  }

 private:
  std::mt19937_64 rng_;
};

// Ordered path -> body builder so that later sources (PII entries, key
// locations) append to files declared earlier.
class FileSet {
 public:
  std::string& body(const std::string& path) {
    auto it = index_.find(path);
    if (it != index_.end()) return files_[it->second].second;
    index_[path] = files_.size();
    files_.emplace_back(path, std::string());
    return files_.back().second;
  }
  void append_marker(const std::string& path, const std::string& marker) {
    std::string& b = body(path);
    if (!b.empty()) b += '\n';
    b += marker;
  }
  bool contains(const std::string& path) const { return index_.count(path) != 0; }
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, std::string>> files_;
};

Region region_in_file(const std::vector<layout::VolumeFile>& files, std::string_view partition,
                      std::string_view path, std::size_t offset_in_body, std::size_t length) {
  for (const auto& f : files)
    if (f.path == path) return {std::string(partition), f.offset + offset_in_body, length};
  throw Error(ErrorCode::UnknownTarget, "layout missing " + std::string(path));
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}
  std::uint64_t u(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t(data_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  Bytes take(std::uint64_t n) {
    need(n);
    Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
              data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (pos_ + n > data_.size())
      throw Error(ErrorCode::InvalidArgument, "truncated device snapshot");
  }
  ByteView data_;
  std::size_t pos_ = 0;
};

json region_json(const Region& r) {
  return {{"store", r.store}, {"offset", r.offset}, {"length", r.length}};
}
Region region_from(const json& j) {
  return {j.at("store").get<std::string>(), j.at("offset").get<std::uint64_t>(),
          j.at("length").get<std::uint64_t>()};
}

Bytes json_bytes(const json& j) { return to_bytes(j.dump()); }

}  // namespace

Device Device::build(const FixtureManifest& manifest, std::uint64_t seed,
                     std::string digest_algorithm) {
  validate_manifest(manifest);
  if (!digest_algorithm_supported(digest_algorithm))
    throw Error(ErrorCode::InvalidArgument, "unsupported digest algorithm " + digest_algorithm);

  Device d;
  d.digest_algorithm_ = std::move(digest_algorithm);
  Layouter rng(seed);

  // userdata (and sdcard) ----------------------------------------------------
  layout::VolumeWriter userdata("userdata");
  layout::VolumeWriter sdcard("sdcard");

  for (const AppFixture& app : manifest.apps) {
    const std::string root = layout::private_dir(app.app_id);
    FileSet priv;
    for (const FileEntry& f : app.private_files) {
      std::string& body = priv.body(root + f.path);
      body = f.content;
      for (const PlantedItem& item : f.planted)
        priv.append_marker(root + f.path, layout::render_marker(item.kind, item.label, item.value));
    }
    for (const PiiEntry& p : manifest.pii)
      if (p.app_id == app.app_id)
        priv.append_marker(root + p.path, layout::render_marker("PII", p.label, p.value));
    for (const AppFixture& other : manifest.apps)
      for (const EncryptedFile& e : other.encrypted_files)
        if (e.key_location.app_id == app.app_id)
          priv.append_marker(root + e.key_location.path,
                             layout::render_marker("EncryptionKey", e.key_id, e.key));

    const std::uint64_t blobs = rng.next(3);
    for (std::uint64_t i = 0; i < blobs; ++i) {
      const std::string blob = root + "files/blob_" + std::to_string(i) + ".dat";
      std::string noise = rng.noise(64 + rng.next(448));
      if (!priv.contains(blob)) priv.body(blob) = std::move(noise);
    }

    for (const auto& [path, body] : priv.files()) userdata.add(path, body);

    for (const DatabaseFixture& db : app.databases) {
      std::vector<layout::DbTableSpec> tables;
      for (const TableFixture& t : db.tables) {
        layout::DbTableSpec spec{t.name, {}};
        for (const RecordFixture& r : t.records) spec.records.push_back({r.id, r.fields});
        tables.push_back(std::move(spec));
      }
      userdata.add(root + "databases/" + db.name + ".fdb", layout::render_database(tables));
    }

    layout::VolumeWriter& ext = manifest.sdcard_present ? sdcard : userdata;
    const std::string ext_root = manifest.sdcard_present ? layout::sdcard_dir(app.app_id)
                                                         : layout::emulated_dir(app.app_id);
    for (const FileEntry& f : app.external_files) ext.add(ext_root + f.path, f.content);
    for (const EncryptedFile& e : app.encrypted_files) {
      Bytes cipher = encrypt_decrypt(to_bytes(e.plaintext), to_bytes(e.key),
                                     CipherDirection::Encrypt);
      layout::KeyRef ref{e.key_location.app_id, e.key_location.path, e.key_id};
      ext.add(ext_root + e.path, layout::render_encrypted(ref, cipher));
    }

    if (app.package) {
      auto lines = [](const std::vector<PlantedItem>& items) {
        std::vector<std::string> out;
        for (const auto& i : items) out.push_back(layout::render_marker(i.kind, i.label, i.value));
        return out;
      };
      std::vector<layout::SemanticsLine> sem;
      for (const auto& s : app.package->semantics) sem.push_back({s.subject, s.meaning});
      userdata.add(layout::package_path(app.app_id),
                   layout::render_package(lines(app.package->code), lines(app.package->heap), sem));
    }
  }
  userdata.add("/data/system/packages.list", rng.noise(128 + rng.next(256)));

  const Bytes pad = to_bytes(rng.noise(257));
  d.partitions_["userdata"] = userdata.finish(kBlock * (1 + rng.next(2)), kBlock, pad);
  if (manifest.sdcard_present) {
    sdcard.add("/sdcard/DCIM/.thumbnails/index", rng.noise(96 + rng.next(160)));
    d.partitions_["sdcard"] = sdcard.finish(kBlock, kBlock, pad);
  }

  // boot / recovery ----------------------------------------------------------
  for (const char* name : {"boot", "recovery"}) {
    Bytes img = rng.raw(kRawPartitionSize);
    std::copy_n("ANDROID!", 8, img.begin());
    d.partitions_[name] = std::move(img);
  }

  // system -------------------------------------------------------------------
  layout::VolumeWriter system("system");
  system.add("/system/build.prop", "ro.product.model=fsk-sim\nro.build.id=" + rng.noise(8) + "\n");
  const std::string fw_head = std::string(layout::kFrameworkMagic) + "\nsigcheck=";
  std::string framework = fw_head + "1\nhook=" + std::string(layout::kHookSlotSize, '\0') + "\n";
  system.add(layout::kFrameworkPath, framework);
  system.add(layout::kSuSlotPath, std::string(layout::kSuSlotSize, '\0'));
  d.partitions_["system"] = system.finish(2 * kBlock, kBlock, pad);
  const auto sys_files = system.files();
  d.named_regions_["framework.sigcheck"] =
      region_in_file(sys_files, "system", layout::kFrameworkPath, fw_head.size(), 1);
  d.named_regions_["framework.hook"] = region_in_file(
      sys_files, "system", layout::kFrameworkPath, fw_head.size() + 7, layout::kHookSlotSize);
  d.named_regions_["system.su"] =
      region_in_file(sys_files, "system", layout::kSuSlotPath, 0, layout::kSuSlotSize);

  // bootloader configuration -------------------------------------------------
  std::string bl = std::string(layout::kBootloaderMagic) + "\nlive_boot=0\nverity=1\n";
  d.named_regions_["bootloader.live_boot"] = {"bootloader", bl.find("live_boot=") + 10, 1};
  d.named_regions_["bootloader.verity"] = {"bootloader", bl.find("verity=") + 7, 1};
  Bytes blb = to_bytes(bl);
  blb.resize(kBootloaderSize, 0);
  d.partitions_["bootloader"] = std::move(blb);

  for (const auto& [name, data] : d.partitions_)
    if (layout::evidential_partition(name)) d.evidential_.push_back({name, 0, data.size()});

  d.bootloader_.signed_keys = {"oem-release-key"};
  d.accounts_ = manifest.accounts;
  for (const ChannelFixture& c : manifest.channels) {
    auto& msgs = d.channels_[c.name];
    for (const auto& m : c.messages) msgs.push_back(to_bytes(m));
  }
  return d;
}

bool Device::has_partition(std::string_view name) const {
  return partitions_.find(std::string(name)) != partitions_.end();
}

std::vector<std::string> Device::partition_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : partitions_) out.push_back(name);
  return out;
}

const Bytes& Device::partition(std::string_view name) const {
  auto it = partitions_.find(std::string(name));
  if (it == partitions_.end())
    throw Error(ErrorCode::UnknownPartition, "unknown partition " + std::string(name));
  return it->second;
}

Bytes Device::read_region(const Region& region) const {
  const Bytes& p = partition(region.store);
  if (region.offset > p.size() || region.length > p.size() - region.offset)
    throw Error(ErrorCode::OutOfBounds, "region out of bounds: " + region.to_string());
  auto first = p.begin() + static_cast<std::ptrdiff_t>(region.offset);
  return Bytes(first, first + static_cast<std::ptrdiff_t>(region.length));
}

std::optional<ChangeRecord> Device::write_region(const Region& region, ByteView bytes,
                                                 std::string_view cause) {
  if (bytes.size() != region.length)
    throw Error(ErrorCode::InvalidArgument, "write length does not match region");
  Bytes before = read_region(region);
  if (std::equal(before.begin(), before.end(), bytes.begin(), bytes.end())) return std::nullopt;
  Bytes& p = partitions_.at(region.store);
  std::copy(bytes.begin(), bytes.end(), p.begin() + static_cast<std::ptrdiff_t>(region.offset));
  ChangeRecord rec{next_seq_++,
                   clock_,
                   region,
                   compute_digest(before, digest_algorithm_),
                   compute_digest(bytes, digest_algorithm_),
                   std::string(cause)};
  ledger_.push_back(rec);
  return rec;
}

Digest Device::digest(std::string_view name) const {
  return compute_digest(partition(name), digest_algorithm_);
}

std::map<std::string, Digest> Device::digest_all() const {
  std::vector<ByteView> views;
  for (const auto& [_, data] : partitions_) views.emplace_back(data);
  auto digests = scan::digest_all(views, digest_algorithm_);
  std::map<std::string, Digest> out;
  std::size_t i = 0;
  for (const auto& [name, _] : partitions_) out[name] = digests[i++];
  return out;
}

Region Device::resolve(const RegionRef& ref) const {
  switch (ref.form()) {
    case RegionRef::Form::Partition:
      return {ref.name(), 0, partition(ref.name()).size()};
    case RegionRef::Form::Range: {
      Region r{ref.name(), ref.offset(), ref.length()};
      const Bytes& p = partition(r.store);
      if (r.offset > p.size() || r.length > p.size() - r.offset)
        throw Error(ErrorCode::OutOfBounds, "region out of bounds: " + ref.text());
      return r;
    }
    case RegionRef::Form::File: {
      auto f = layout::find_file(partition(ref.name()), ref.path());
      if (!f) throw Error(ErrorCode::UnknownTarget, "no such file: " + ref.text());
      return {ref.name(), f->offset, f->length};
    }
    case RegionRef::Form::Named: {
      auto it = named_regions_.find(ref.name());
      if (it == named_regions_.end())
        throw Error(ErrorCode::UnknownTarget, "unknown named region: " + ref.text());
      return it->second;
    }
    default:
      throw Error(ErrorCode::InvalidArgument, "not a device region: " + ref.text());
  }
}

bool Device::is_evidential(const Region& region) const {
  return std::any_of(evidential_.begin(), evidential_.end(),
                     [&](const Region& e) { return e.intersects(region); });
}

std::vector<ChangeRecord> Device::ledger_diff(std::uint64_t since_seq) const {
  std::vector<ChangeRecord> out;
  for (const auto& rec : ledger_)
    if (rec.seq > since_seq) out.push_back(rec);
  return out;
}

char Device::config_param(std::string_view name) const {
  auto it = named_regions_.find("bootloader." + std::string(name));
  if (it == named_regions_.end())
    throw Error(ErrorCode::UnknownTarget, "unknown bootloader parameter " + std::string(name));
  return static_cast<char>(partitions_.at("bootloader")[it->second.offset]);
}

void Device::load_live_os(Bytes image) {
  memory_ = std::move(image);
  live_os_resident_ = !memory_.empty();
}

void Device::reboot() {
  memory_.clear();
  live_os_resident_ = false;
  bootloader_.allow_unsigned_boot = false;
}

bool Device::signature_check_active() const {
  const Region& r = named_regions_.at("framework.sigcheck");
  return partitions_.at(r.store)[r.offset] != '0';
}

bool Device::has_channel(std::string_view name) const {
  return channels_.find(std::string(name)) != channels_.end();
}

const std::vector<Bytes>& Device::channel(std::string_view name) const {
  auto it = channels_.find(std::string(name));
  if (it == channels_.end())
    throw Error(ErrorCode::UnknownChannel, "unknown channel " + std::string(name));
  return it->second;
}

std::vector<std::string> Device::channel_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : channels_) out.push_back(name);
  return out;
}

DeviceSnapshot Device::snapshot() const {
  return {partitions_, digest_all(),          memory_,   bootloader_,
          live_os_resident_, signature_check_active(), accounts_};
}

Bytes Device::serialize() const {
  std::map<std::string, Bytes> sections;
  for (const auto& [name, data] : partitions_) sections["partition/" + name] = data;
  sections["memory"] = memory_;

  json boot{{"locked", bootloader_.locked},
            {"allow_unsigned_boot", bootloader_.allow_unsigned_boot},
            {"live_os_resident", live_os_resident_},
            {"signed_keys", bootloader_.signed_keys}};
  sections["bootloader"] = json_bytes(boot);
  sections["accounts"] = json_bytes(manifest_to_json(FixtureManifest{{}, accounts_, {}, {}, false})["accounts"]);

  json channels = json::object();
  for (const auto& [name, msgs] : channels_) {
    json arr = json::array();
    for (const auto& m : msgs) arr.push_back(to_hex(m));
    channels[name] = arr;
  }
  sections["channels"] = json_bytes(channels);

  json ledger = json::array();
  for (const auto& r : ledger_)
    ledger.push_back({{"seq", r.seq},
                      {"tick", r.tick},
                      {"region", region_json(r.region)},
                      {"before", r.before_digest.hex()},
                      {"after", r.after_digest.hex()},
                      {"cause", r.cause}});
  sections["ledger"] = json_bytes(ledger);

  json named = json::object();
  for (const auto& [name, r] : named_regions_) named[name] = region_json(r);
  json evid = json::array();
  for (const auto& r : evidential_) evid.push_back(region_json(r));
  sections["meta"] = json_bytes({{"clock", clock_},
                                 {"next_seq", next_seq_},
                                 {"digest_algorithm", digest_algorithm_},
                                 {"named_regions", named},
                                 {"evidential", evid}});

  Bytes out = to_bytes("FSKD1");
  put_u32(out, static_cast<std::uint32_t>(sections.size()));
  for (const auto& [name, data] : sections) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    put_u64(out, data.size());
    out.insert(out.end(), data.begin(), data.end());
  }
  return out;
}

Device Device::deserialize(ByteView data) {
  if (data.size() < 5 || to_string(data.first(5)) != "FSKD1")
    throw Error(ErrorCode::InvalidArgument, "not an FSKD1 device snapshot");
  Reader r(data.subspan(5));
  std::map<std::string, Bytes> sections;
  auto count = r.u(4);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string name = to_string(r.take(r.u(4)));
    sections[name] = r.take(r.u(8));
  }
  if (!r.done()) throw Error(ErrorCode::InvalidArgument, "trailing bytes in device snapshot");

  auto section_json = [&](const char* name) {
    auto it = sections.find(name);
    if (it == sections.end())
      throw Error(ErrorCode::InvalidArgument, std::string("snapshot lacks section ") + name);
    return json::parse(to_string(it->second));
  };

  Device d;
  try {
    for (auto& [name, bytes] : sections)
      if (name.rfind("partition/", 0) == 0) d.partitions_[name.substr(10)] = bytes;
    d.memory_ = sections.at("memory");
    json boot = section_json("bootloader");
    d.bootloader_.locked = boot.at("locked").get<bool>();
    d.bootloader_.allow_unsigned_boot = boot.at("allow_unsigned_boot").get<bool>();
    d.live_os_resident_ = boot.at("live_os_resident").get<bool>();
    d.bootloader_.signed_keys = boot.at("signed_keys").get<std::set<std::string>>();
    json accounts = section_json("accounts");
    d.accounts_ = manifest_from_json(json{{"accounts", accounts}}).accounts;
    json channels = section_json("channels");
    for (auto it = channels.begin(); it != channels.end(); ++it)
      for (const auto& m : *it) d.channels_[it.key()].push_back(from_hex(m.get<std::string>()));
    for (const auto& rec : section_json("ledger"))
      d.ledger_.push_back({rec.at("seq").get<std::uint64_t>(), rec.at("tick").get<std::uint64_t>(),
                           region_from(rec.at("region")),
                           Digest::from_hex(rec.at("before").get<std::string>()),
                           Digest::from_hex(rec.at("after").get<std::string>()),
                           rec.at("cause").get<std::string>()});
    json meta = section_json("meta");
    d.clock_ = meta.at("clock").get<std::uint64_t>();
    d.next_seq_ = meta.at("next_seq").get<std::uint64_t>();
    d.digest_algorithm_ = meta.at("digest_algorithm").get<std::string>();
    for (auto it = meta.at("named_regions").begin(); it != meta.at("named_regions").end(); ++it)
      d.named_regions_[it.key()] = region_from(*it);
    for (const auto& e : meta.at("evidential")) d.evidential_.push_back(region_from(e));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("corrupt device snapshot: ") + e.what());
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::InvalidArgument, "corrupt device snapshot: missing section");
  }
  return d;
}

}  // namespace forenskit
