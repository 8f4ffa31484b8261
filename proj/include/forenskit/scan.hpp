#pragma once

// Data-parallel scanning kernels used by forensic examination. Every kernel
// has a `_serial` reference that the parallel version must match exactly;
// tests compare the two and bench/scan_bench.cpp times them.

#include <cstddef>
#include <regex>
#include <string>
#include <vector>

#include "forenskit/bytes.hpp"

namespace forenskit::scan {

/// Offsets of every (possibly overlapping) occurrence of `needle`, ascending.
/// An empty needle matches nothing.
std::vector<std::size_t> find_all_serial(ByteView haystack, ByteView needle);
std::vector<std::size_t> find_all(ByteView haystack, ByteView needle);

struct Match {
  std::size_t segment = 0;  // index into the segment list
  std::size_t offset = 0;   // offset within the segment
  std::size_t length = 0;

  bool operator==(const Match&) const = default;
};

/// Non-overlapping regex matches in each segment independently, ordered by
/// (segment, offset). Segments are typically file bodies of a volume.
std::vector<Match> regex_scan_serial(const std::vector<ByteView>& segments,
                                     const std::regex& pattern);
std::vector<Match> regex_scan(const std::vector<ByteView>& segments,
                              const std::regex& pattern);

/// Digest of every buffer, in input order.
std::vector<Digest> digest_all_serial(const std::vector<ByteView>& buffers,
                                      std::string_view algorithm);
std::vector<Digest> digest_all(const std::vector<ByteView>& buffers,
                               std::string_view algorithm);

/// Worker count the parallel kernels will use.
int max_threads();

}  // namespace forenskit::scan
