#pragma once

#include <cstdint>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morphoforge/corpus.hpp"
#include "morphoforge/rankers.hpp"
#include "morphoforge/transducer.hpp"

namespace morpho::clippings {

enum class ClipMode {
  Naive,
  Phone,
  Phone1Syl,
  Phone2Syl,
  PhoneOracle,
  Graph,
  G2PGold,
};

std::string clip_mode_name(ClipMode mode);
ClipMode clip_mode_from_name(const std::string& name);  // throws ArgumentError

// Generative clipping model: a clip-type multinomial, a syllable-count
// multinomial for the phoneme-space variants, and a ridge regressor that
// predicts grapheme length for the grapheme-space variant.
struct ClipModel {
  std::map<corpus::ClipType, double> theta;  // Back / Fore / Compound
  std::map<int, double> pi;                  // syllable count of the clipping
  rankers::LengthModel length;               // |source| -> |clipping|

  nlohmann::ordered_json to_json() const;
  static ClipModel from_json(const nlohmann::ordered_json& j);
};

// Fits theta, pi, and the length regressor from the non-Irregular records.
// pi uses the pronunciation of each gold clipping; the regressor uses
// (|source|, |gold|) grapheme lengths with spaces excluded. Throws FitError
// when no regular record is present.
ClipModel fit_clip_model(const std::vector<corpus::ClippingRecord>& records,
                         const phon::Phonologizer& phonologizer);

// Produces one clipping for `word`, deterministic in `seed`. `gold` is
// required for PhoneOracle and G2PGold. Inputs containing a space take the
// compound path in the Phone family and Graph modes.
std::string predict_clipping(const ClipModel& model,
                             const phon::Phonologizer& phonologizer,
                             const std::string& word, ClipMode mode,
                             const std::optional<std::string>& gold,
                             std::uint64_t seed);

}  // namespace morpho::clippings
