#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace forenskit {

/// A concrete byte range inside one named device store (partition).
struct Region {
  std::string store;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;

  std::uint64_t end() const { return offset + length; }
  bool intersects(const Region& other) const;
  bool covers(const Region& other) const;
  /// "store@offset+length"
  std::string to_string() const;

  auto operator<=>(const Region&) const = default;
};

/// Symbolic reference to data, as written in plans and invocations.
///
///   userdata                 whole partition
///   userdata@128+64          byte range
///   userdata:/data/data/x/f  file body inside a partition volume
///   @framework.sigcheck      well-known named region
///   image:userdata           collected image on the workstation
///   workstation:<name>       any workstation item
///   channel:<name>           device communication channel
class RegionRef {
 public:
  enum class Form { Partition, Range, File, Named, Image, Workstation, Channel };

  RegionRef() = default;
  /// Throws Error(InvalidArgument) on malformed text.
  static RegionRef parse(std::string_view text);
  static RegionRef of(const Region& region);

  Form form() const { return form_; }
  const std::string& text() const { return text_; }
  /// Partition, image, workstation item, channel or symbol name.
  const std::string& name() const { return name_; }
  const std::string& path() const { return path_; }
  std::uint64_t offset() const { return offset_; }
  std::uint64_t length() const { return length_; }

  /// True when the reference names something on the device rather than on
  /// the workstation.
  bool on_device() const {
    return form_ != Form::Image && form_ != Form::Workstation;
  }

  bool operator==(const RegionRef& o) const { return text_ == o.text_; }
  auto operator<=>(const RegionRef& o) const { return text_ <=> o.text_; }

 private:
  Form form_ = Form::Partition;
  std::string text_;
  std::string name_;
  std::string path_;
  std::uint64_t offset_ = 0;
  std::uint64_t length_ = 0;
};

}  // namespace forenskit
