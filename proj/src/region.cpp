#include "forenskit/region.hpp"

#include <charconv>

#include "forenskit/error.hpp"

namespace forenskit {

namespace {

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

std::uint64_t parse_u64(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw Error(ErrorCode::InvalidArgument,
                "bad number in region reference: " + std::string(whole));
  return v;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::InvalidArgument,
              "malformed region reference: '" + std::string(text) + "'");
}

}  // namespace

bool Region::intersects(const Region& other) const {
  if (store != other.store || length == 0 || other.length == 0) return false;
  return offset < other.end() && other.offset < end();
}

bool Region::covers(const Region& other) const {
  if (store != other.store) return false;
  return offset <= other.offset && other.end() <= end();
}

std::string Region::to_string() const {
  return store + "@" + std::to_string(offset) + "+" + std::to_string(length);
}

RegionRef RegionRef::parse(std::string_view text) {
  RegionRef r;
  r.text_ = std::string(text);
  auto prefixed = [&](std::string_view prefix, Form form) {
    if (text.substr(0, prefix.size()) != prefix) return false;
    std::string_view rest = text.substr(prefix.size());
    if (!valid_name(rest)) bad(text);
    r.form_ = form;
    r.name_ = std::string(rest);
    return true;
  };
  if (text.empty()) bad(text);
  if (text.front() == '@') {
    if (!valid_name(text.substr(1))) bad(text);
    r.form_ = Form::Named;
    r.name_ = std::string(text.substr(1));
    return r;
  }
  if (prefixed("image:", Form::Image) || prefixed("workstation:", Form::Workstation) ||
      prefixed("channel:", Form::Channel))
    return r;

  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    std::string_view part = text.substr(0, colon);
    std::string_view path = text.substr(colon + 1);
    if (!valid_name(part) || path.empty() || path.front() != '/') bad(text);
    for (char c : path)
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '"' || c == '=' ||
          c == ',' || c == '#' || c == '\\' || c == '{' || c == '}')
        bad(text);
    r.form_ = Form::File;
    r.name_ = std::string(part);
    r.path_ = std::string(path);
    return r;
  }
  if (auto at = text.find('@'); at != std::string_view::npos) {
    std::string_view part = text.substr(0, at);
    std::string_view span = text.substr(at + 1);
    auto plus = span.find('+');
    if (!valid_name(part) || plus == std::string_view::npos) bad(text);
    r.form_ = Form::Range;
    r.name_ = std::string(part);
    r.offset_ = parse_u64(span.substr(0, plus), text);
    r.length_ = parse_u64(span.substr(plus + 1), text);
    return r;
  }
  if (!valid_name(text)) bad(text);
  r.form_ = Form::Partition;
  r.name_ = std::string(text);
  return r;
}

RegionRef RegionRef::of(const Region& region) { return parse(region.to_string()); }

}  // namespace forenskit
