#pragma once

#include <cstdint>

#include "forenskit/manifest.hpp"

namespace forenskit {

/// Random well-formed manifest with `apps` apps. Deterministic in `seed`;
/// exercises every plantable artifact class, encrypted external files with
/// keys in (possibly another app's) private storage, databases, packages with
/// semantics entries, accounts and channels.
FixtureManifest generate_manifest(std::uint64_t seed, std::size_t apps);

}  // namespace forenskit
