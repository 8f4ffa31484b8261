#include <random>
#include <regex>

#include <benchmark/benchmark.h>

#include "forenskit/scan.hpp"

namespace {

using forenskit::Bytes;
using forenskit::ByteView;

Bytes noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>('a' + rng() % 26);
  return out;
}

std::vector<Bytes> segments(std::size_t count, std::size_t size) {
  std::vector<Bytes> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(noise(size, i));
  return out;
}

std::vector<ByteView> views(const std::vector<Bytes>& segs) {
  return {segs.begin(), segs.end()};
}

const Bytes kNeedle{'a', 'b', 'c'};

void BM_FindAllSerial(benchmark::State& state) {
  Bytes hay = noise(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(forenskit::scan::find_all_serial(hay, kNeedle));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}

void BM_FindAll(benchmark::State& state) {
  Bytes hay = noise(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(forenskit::scan::find_all(hay, kNeedle));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}

void BM_RegexScanSerial(benchmark::State& state) {
  auto segs = segments(static_cast<std::size_t>(state.range(0)), 4096);
  auto v = views(segs);
  std::regex re("ab[c-f]+");
  for (auto _ : state) benchmark::DoNotOptimize(forenskit::scan::regex_scan_serial(v, re));
}

void BM_RegexScan(benchmark::State& state) {
  auto segs = segments(static_cast<std::size_t>(state.range(0)), 4096);
  auto v = views(segs);
  std::regex re("ab[c-f]+");
  for (auto _ : state) benchmark::DoNotOptimize(forenskit::scan::regex_scan(v, re));
}

void BM_DigestAllSerial(benchmark::State& state) {
  auto segs = segments(static_cast<std::size_t>(state.range(0)), 65536);
  auto v = views(segs);
  for (auto _ : state) benchmark::DoNotOptimize(forenskit::scan::digest_all_serial(v, "sha256"));
  state.SetBytesProcessed(state.iterations() * state.range(0) * 65536);
}

void BM_DigestAll(benchmark::State& state) {
  auto segs = segments(static_cast<std::size_t>(state.range(0)), 65536);
  auto v = views(segs);
  for (auto _ : state) benchmark::DoNotOptimize(forenskit::scan::digest_all(v, "sha256"));
  state.SetBytesProcessed(state.iterations() * state.range(0) * 65536);
}

}  // namespace

BENCHMARK(BM_FindAllSerial)->Arg(1 << 16)->Arg(1 << 22);
BENCHMARK(BM_FindAll)->Arg(1 << 16)->Arg(1 << 22);
BENCHMARK(BM_RegexScanSerial)->Arg(16)->Arg(256);
BENCHMARK(BM_RegexScan)->Arg(16)->Arg(256);
BENCHMARK(BM_DigestAllSerial)->Arg(8)->Arg(64);
BENCHMARK(BM_DigestAll)->Arg(8)->Arg(64);

BENCHMARK_MAIN();
