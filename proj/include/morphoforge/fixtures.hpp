#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morphoforge/corpus.hpp"

namespace morpho::fixtures {

// Deterministic bundled datasets, sized and proportioned like the originals
// so the full pipeline can run without the released data.
struct FixtureSet {
  std::vector<corpus::BlendInstance> knight;       // 400, 4 non-derivable
  std::vector<corpus::BlendInstance> blind;        // 1224, 93 non-derivable
  std::vector<corpus::ClippingRecord> clippings;   // 576
  std::vector<corpus::ReduplicativePair> redups;   // 337
};

FixtureSet make_fixtures(const std::vector<std::string>& words,
                         std::uint64_t seed);

// Writes d_knight.tsv, d_blind.tsv, clippings.tsv, reduplicatives.tsv.
void write_fixtures(const FixtureSet& set, const std::string& dir);

}  // namespace morpho::fixtures
