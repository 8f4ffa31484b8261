#include "forenskit/scan.hpp"

#include <omp.h>

#include <algorithm>
#include <functional>

#include "forenskit/digest.hpp"

namespace forenskit::scan {

namespace {

// Below this size the thread fan-out costs more than it saves.
constexpr std::size_t kMinParallelBytes = 1 << 16;

void find_in_range(ByteView haystack, ByteView needle, std::size_t begin,
                   std::size_t end, std::vector<std::size_t>& out) {
  // Match starts are restricted to [begin, end); the match itself may run
  // past `end`.
  const auto first = haystack.begin() + static_cast<std::ptrdiff_t>(begin);
  const std::size_t stop = std::min(haystack.size(), end + needle.size() - 1);
  const auto last = haystack.begin() + static_cast<std::ptrdiff_t>(stop);
  const std::boyer_moore_horspool_searcher searcher(needle.begin(), needle.end());
  auto it = first;
  while (true) {
    auto [m, m_end] = searcher(it, last);
    if (m == last) break;
    std::size_t pos = static_cast<std::size_t>(m - haystack.begin());
    if (pos >= end) break;
    out.push_back(pos);
    it = m + 1;
  }
}

std::vector<Match> regex_segment(std::size_t index, ByteView segment,
                                 const std::regex& pattern) {
  std::vector<Match> out;
  const char* begin = reinterpret_cast<const char*>(segment.data());
  const char* end = begin + segment.size();
  for (std::cregex_iterator it(begin, end, pattern), stop; it != stop; ++it) {
    if (it->length(0) == 0) continue;
    out.push_back({index, static_cast<std::size_t>(it->position(0)),
                   static_cast<std::size_t>(it->length(0))});
  }
  return out;
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

std::vector<std::size_t> find_all_serial(ByteView haystack, ByteView needle) {
  std::vector<std::size_t> out;
  if (needle.empty() || needle.size() > haystack.size()) return out;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<std::ptrdiff_t>(i)))
      out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> find_all(ByteView haystack, ByteView needle) {
  std::vector<std::size_t> out;
  if (needle.empty() || needle.size() > haystack.size()) return out;
  const std::size_t starts = haystack.size() - needle.size() + 1;
  if (haystack.size() < kMinParallelBytes) {
    find_in_range(haystack, needle, 0, starts, out);
    return out;
  }

  const int chunks = std::max(1, omp_get_max_threads()) * 4;
  const std::size_t chunk = (starts + static_cast<std::size_t>(chunks) - 1) /
                            static_cast<std::size_t>(chunks);
  std::vector<std::vector<std::size_t>> partial(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(dynamic, 1)
  for (int c = 0; c < chunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * chunk;
    if (begin >= starts) continue;
    const std::size_t end = std::min(starts, begin + chunk);
    find_in_range(haystack, needle, begin, end, partial[static_cast<std::size_t>(c)]);
  }

  for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<Match> regex_scan_serial(const std::vector<ByteView>& segments,
                                     const std::regex& pattern) {
  std::vector<Match> out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    auto part = regex_segment(i, segments[i], pattern);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<Match> regex_scan(const std::vector<ByteView>& segments,
                              const std::regex& pattern) {
  const auto n = static_cast<std::ptrdiff_t>(segments.size());
  std::vector<std::vector<Match>> partial(segments.size());

  // std::regex matching is const and re-entrant on a shared pattern.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    partial[idx] = regex_segment(idx, segments[idx], pattern);
  }

  std::vector<Match> out;
  for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<Digest> digest_all_serial(const std::vector<ByteView>& buffers,
                                      std::string_view algorithm) {
  std::vector<Digest> out;
  out.reserve(buffers.size());
  for (const auto& b : buffers) out.push_back(compute_digest(b, algorithm));
  return out;
}

std::vector<Digest> digest_all(const std::vector<ByteView>& buffers,
                               std::string_view algorithm) {
  std::vector<Digest> out(buffers.size());
  const auto n = static_cast<std::ptrdiff_t>(buffers.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = compute_digest(buffers[idx], algorithm);
  }
  return out;
}

}  // namespace forenskit::scan
