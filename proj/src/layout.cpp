#include "forenskit/layout.hpp"

#include <charconv>

#include "forenskit/scan.hpp"

namespace forenskit::layout {

namespace {

std::string_view as_text(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

void append(Bytes& out, std::string_view s) { out.insert(out.end(), s.begin(), s.end()); }

// Line starting at `pos`, without its newline; npos-terminated lines run to
// the end of the buffer.
std::string_view line_at(std::string_view text, std::size_t pos, std::size_t& next) {
  std::size_t nl = text.find('\n', pos);
  if (nl == std::string_view::npos) {
    next = text.size();
    return text.substr(pos);
  }
  next = nl + 1;
  return text.substr(pos, nl - pos);
}

bool label_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '-' || c == '.';
}

}  // namespace

std::string private_dir(std::string_view app_id) {
  return std::string(kPrivateRoot) + std::string(app_id) + "/";
}
std::string sdcard_dir(std::string_view app_id) {
  return std::string(kSdcardRoot) + std::string(app_id) + "/";
}
std::string emulated_dir(std::string_view app_id) {
  return std::string(kEmulatedRoot) + std::string(app_id) + "/";
}
std::string package_path(std::string_view app_id) {
  return std::string(kAppRoot) + std::string(app_id) + "/base.fapk";
}

// ---------------------------------------------------------------------------

VolumeWriter::VolumeWriter(std::string partition) {
  append(data_, kVolumeMagic);
  append(data_, " ");
  append(data_, partition);
  append(data_, "\n");
}

void VolumeWriter::add(std::string_view path, ByteView body) {
  append(data_, "@F ");
  append(data_, path);
  append(data_, " ");
  append(data_, std::to_string(body.size()));
  append(data_, "\n");
  files_.push_back({std::string(path), data_.size(), body.size()});
  data_.insert(data_.end(), body.begin(), body.end());
  append(data_, "\n");
}

Bytes VolumeWriter::finish(std::size_t min_size, std::size_t align, const Bytes& filler) {
  append(data_, "@END\n");
  std::size_t size = std::max(min_size, data_.size());
  if (align > 1) size = (size + align - 1) / align * align;
  std::size_t i = 0;
  while (data_.size() < size) {
    data_.push_back(filler.empty() ? 0 : filler[i % filler.size()]);
    ++i;
  }
  return std::move(data_);
}

VolumeListing list_files(ByteView partition) {
  VolumeListing listing;
  std::string_view text = as_text(partition);
  std::size_t pos = 0;
  std::string_view header = line_at(text, 0, pos);
  if (header.substr(0, kVolumeMagic.size()) != kVolumeMagic) return listing;
  while (pos < text.size()) {
    std::size_t next = 0;
    std::string_view line = line_at(text, pos, next);
    if (line == "@END") {
      listing.well_formed = true;
      return listing;
    }
    if (line.substr(0, 3) != "@F ") return listing;
    std::string_view rest = line.substr(3);
    std::size_t space = rest.rfind(' ');
    if (space == std::string_view::npos) return listing;
    std::uint64_t size = 0;
    std::string_view num = rest.substr(space + 1);
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), size);
    if (ec != std::errc() || p != num.data() + num.size()) return listing;
    if (next + size + 1 > text.size()) return listing;
    listing.files.push_back({std::string(rest.substr(0, space)), next, size});
    pos = next + size + 1;
  }
  return listing;
}

std::optional<VolumeFile> find_file(ByteView partition, std::string_view path) {
  for (auto& f : list_files(partition).files)
    if (f.path == path) return f;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string render_marker(std::string_view kind, std::string_view label,
                          std::string_view value) {
  std::string out(kMarkerOpen);
  out += kind;
  if (!label.empty()) {
    out += '/';
    out += label;
  }
  out += '=';
  out += value;
  out += kMarkerClose;
  return out;
}

bool valid_marker_value(std::string_view value) {
  for (char c : value)
    if (c == '>' || c == '\n' || c == '\r' || c == '\t') return false;
  return true;
}

bool valid_marker_label(std::string_view label) {
  for (char c : label)
    if (!label_char(c)) return false;
  return true;
}

std::vector<Marker> find_markers(ByteView data) {
  std::vector<Marker> out;
  std::string_view text = as_text(data);
  for (std::size_t start : scan::find_all(data, to_bytes(kMarkerOpen))) {
    std::size_t p = start + kMarkerOpen.size();
    std::size_t eq = text.find('=', p);
    if (eq == std::string_view::npos) continue;
    std::string_view head = text.substr(p, eq - p);
    std::string_view kind = head;
    std::string_view label;
    if (auto slash = head.find('/'); slash != std::string_view::npos) {
      kind = head.substr(0, slash);
      label = head.substr(slash + 1);
    }
    bool ok = !kind.empty();
    for (char c : kind) ok = ok && label_char(c);
    ok = ok && valid_marker_label(label);
    if (!ok) continue;
    std::size_t close = text.find(kMarkerClose, eq + 1);
    if (close == std::string_view::npos) continue;
    std::string_view value = text.substr(eq + 1, close - eq - 1);
    if (!valid_marker_value(value)) continue;
    out.push_back({std::string(kind), std::string(label), std::string(value), start,
                   eq + 1, close + kMarkerClose.size() - start});
  }
  return out;
}

// ---------------------------------------------------------------------------

bool valid_db_token(std::string_view s) {
  for (char c : s)
    if (c == '\t' || c == '\n' || c == '\r') return false;
  return true;
}

std::string render_database(const std::vector<DbTableSpec>& tables) {
  std::string out(kDatabaseMagic);
  out += '\n';
  for (const auto& table : tables) {
    out += "T " + table.name + "\n";
    for (const auto& rec : table.records) {
      out += "R " + rec.id;
      for (const auto& [k, v] : rec.fields) out += "\t" + k + "=" + v;
      out += '\n';
    }
  }
  return out;
}

DbParse parse_database(ByteView file) {
  DbParse result;
  std::string_view text = as_text(file);
  std::size_t pos = 0;
  std::string_view header = line_at(text, 0, pos);
  if (header != kDatabaseMagic) {
    result.errors.push_back({1, "missing database header"});
    return result;
  }
  std::string table;
  std::size_t line_no = 1;
  while (pos < text.size()) {
    std::size_t next = 0;
    const std::size_t line_start = pos;
    std::string_view line = line_at(text, pos, next);
    ++line_no;
    pos = next;
    if (line.empty()) continue;
    if (line.substr(0, 2) == "T ") {
      table = std::string(line.substr(2));
      continue;
    }
    if (line.substr(0, 2) != "R ") {
      result.errors.push_back({line_no, "unrecognised line"});
      continue;
    }
    if (table.empty()) {
      result.errors.push_back({line_no, "record outside any table"});
      continue;
    }
    DbRecord rec;
    rec.table = table;
    rec.offset = line_start;
    rec.length = line.size();
    bool ok = true;
    std::size_t field_start = 2;
    std::size_t tab = line.find('\t', field_start);
    rec.id = std::string(line.substr(field_start, tab - field_start));
    if (rec.id.empty()) ok = false;
    while (ok && tab != std::string_view::npos) {
      field_start = tab + 1;
      tab = line.find('\t', field_start);
      std::string_view field = line.substr(field_start, tab == std::string_view::npos
                                                            ? std::string_view::npos
                                                            : tab - field_start);
      auto eq = field.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        ok = false;
        break;
      }
      std::string key(field.substr(0, eq));
      if (rec.fields.count(key)) {
        ok = false;
        break;
      }
      rec.fields[key] = {std::string(field.substr(eq + 1)), line_start + field_start + eq + 1};
    }
    if (!ok) {
      result.errors.push_back({line_no, "malformed record"});
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

// ---------------------------------------------------------------------------

std::string render_package(const std::vector<std::string>& code_lines,
                           const std::vector<std::string>& heap_lines,
                           const std::vector<SemanticsLine>& semantics) {
  std::string out(kPackageMagic);
  out += "\n[code]\n";
  for (const auto& l : code_lines) out += l + "\n";
  out += "[heap]\n";
  for (const auto& l : heap_lines) out += l + "\n";
  out += "[semantics]\n";
  for (const auto& s : semantics) out += "S " + s.subject + "\t" + s.meaning + "\n";
  out += "[end]\n";
  return out;
}

std::optional<PackageLayout> parse_package(ByteView file) {
  std::string_view text = as_text(file);
  std::size_t pos = 0;
  if (line_at(text, 0, pos) != kPackageMagic) return std::nullopt;
  PackageLayout layout;
  std::optional<PackageSection>* current = nullptr;
  bool in_semantics = false;
  std::size_t section_start = 0;
  auto close = [&](std::size_t end) {
    if (current) *current = PackageSection{section_start, end - section_start};
    current = nullptr;
  };
  while (pos < text.size()) {
    std::size_t next = 0;
    std::string_view line = line_at(text, pos, next);
    if (line.size() >= 2 && line.front() == '[' && line.back() == ']') {
      close(pos);
      in_semantics = false;
      if (line == "[code]") current = &layout.code;
      else if (line == "[heap]") current = &layout.heap;
      else if (line == "[semantics]") in_semantics = true;
      else if (line == "[end]") break;
      section_start = next;
    } else if (in_semantics && line.substr(0, 2) == "S ") {
      std::string_view body = line.substr(2);
      auto tab = body.find('\t');
      if (tab != std::string_view::npos)
        layout.semantics.push_back({std::string(body.substr(0, tab)),
                                    std::string(body.substr(tab + 1))});
    }
    pos = next;
  }
  close(pos);
  return layout;
}

// ---------------------------------------------------------------------------

std::string KeyRef::to_string() const { return app_id + ":" + path + "#" + key_id; }

Bytes render_encrypted(const KeyRef& ref, ByteView ciphertext) {
  Bytes out;
  append(out, kEncryptedMagic);
  append(out, "\nkeyref=");
  append(out, ref.to_string());
  append(out, "\n");
  out.insert(out.end(), ciphertext.begin(), ciphertext.end());
  return out;
}

std::optional<EncryptedLayout> parse_encrypted(ByteView file) {
  std::string_view text = as_text(file);
  std::size_t pos = 0;
  if (line_at(text, 0, pos) != kEncryptedMagic) return std::nullopt;
  std::size_t next = 0;
  std::string_view ref = line_at(text, pos, next);
  if (ref.substr(0, 7) != "keyref=" || next > text.size()) return std::nullopt;
  ref.remove_prefix(7);
  auto colon = ref.find(':');
  auto hash = ref.rfind('#');
  if (colon == std::string_view::npos || hash == std::string_view::npos || hash < colon)
    return std::nullopt;
  EncryptedLayout layout;
  layout.key_ref = {std::string(ref.substr(0, colon)),
                    std::string(ref.substr(colon + 1, hash - colon - 1)),
                    std::string(ref.substr(hash + 1))};
  layout.ciphertext_offset = next;
  layout.ciphertext_length = text.size() - next;
  return layout;
}

// ---------------------------------------------------------------------------

const std::vector<NamedRegionSpec>& named_region_specs() {
  static const std::vector<NamedRegionSpec> specs{
      {"bootloader.live_boot", "bootloader", 1, "0"},
      {"bootloader.verity", "bootloader", 1, "1"},
      {"framework.sigcheck", "system", 1, "1"},
      {"framework.hook", "system", kHookSlotSize, ""},
      {"system.su", "system", kSuSlotSize, ""},
  };
  return specs;
}

const NamedRegionSpec* find_named_region(std::string_view name) {
  for (const auto& s : named_region_specs())
    if (s.name == name) return &s;
  return nullptr;
}

bool evidential_partition(std::string_view partition) {
  return partition == "userdata" || partition == "sdcard" || partition == "boot" ||
         partition == "recovery";
}

}  // namespace forenskit::layout
