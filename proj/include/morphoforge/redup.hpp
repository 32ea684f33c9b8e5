#pragma once

#include <cstdint>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "morphoforge/corpus.hpp"

namespace morpho::redup {

enum class RedupType { Duplicate, VowelEx, ConEx, Unmodeled };
enum class RedupMode { Model, Let, LetCond };

std::string redup_type_name(RedupType t);
RedupType redup_type_from_name(const std::string& name);
std::string redup_mode_name(RedupMode m);
RedupMode redup_mode_from_name(const std::string& name);

// a e i o u; y counts as a consonant.
bool is_redup_vowel(char c);

// Duplicate: identical. VowelEx / ConEx: equal length, exactly one differing
// position, and that position is the first vowel / first consonant of the
// base. Everything else is Unmodeled.
RedupType classify_pair(const std::string& base, const std::string& redup);

struct RedupModel {
  std::map<RedupType, double> theta;           // Duplicate / VowelEx / ConEx
  std::map<char, std::map<char, double>> phi;  // vowel -> replacement dist
  std::map<char, std::map<char, double>> psi;  // consonant -> replacement
  std::size_t unmodeled_count = 0;

  nlohmann::ordered_json to_json() const;
  static RedupModel from_json(const nlohmann::ordered_json& j);
};

// MLE over the classified pairs; Unmodeled pairs are counted but excluded.
// Throws FitError when nothing is modeled.
RedupModel fit_redup_model(const std::vector<corpus::ReduplicativePair>& pairs);

struct RedupSample {
  std::string word;
  RedupType type = RedupType::Duplicate;
};

// Deterministic in `seed`. Model samples a type from theta (Duplicate
// removed and renormalized when allow_dup is off) and substitutes at the
// first vowel / first consonant; when the sampled type has no usable
// replacement distribution it falls back to Duplicate, or with allow_dup
// off to the other exchange type and finally to a uniform same-class
// replacement. Let and LetCond are the baseline generators.
RedupSample generate_redup(const RedupModel& model, const std::string& base,
                           bool allow_dup, RedupMode mode, std::uint64_t seed);

}  // namespace morpho::redup
