#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace morpho::phon {

// Fixed 39-symbol ARPAbet inventory, stress digits stripped.
// Ids are stable: 0..14 vowels, 15..38 consonants.
constexpr int kNumPhonemes = 39;
constexpr int kNumVowels = 15;

using PhonemeSeq = std::vector<int>;

int phoneme_id(const std::string& symbol);          // throws on unknown
std::optional<int> try_phoneme_id(const std::string& symbol);
const std::string& phoneme_name(int id);
bool is_vowel(int id);

// "K AE1 P T AH0 N" -> ids, stress digits stripped.
PhonemeSeq parse_phoneme_seq(const std::string& text);
std::string phoneme_seq_to_string(const PhonemeSeq& seq);

// Articulatory feature agreement within a class, in [0,1].
double feature_overlap(int a, int b);

// Substitution score: 1 for identical, 0.2 + 0.7*overlap within a class,
// 0.1 across classes. Gap penalty -0.5.
double substitution_score(int a, int b);
constexpr double kGapPenalty = -0.5;

// Needleman-Wunsch global alignment score under the matrix above.
double alignment_score(const PhonemeSeq& a, const PhonemeSeq& b);

// Normalized to [0,1] by the larger self-alignment score.
double mir_seq(const PhonemeSeq& a, const PhonemeSeq& b);

int syllable_count(const PhonemeSeq& p);

enum class ClipDirection { Back, Fore };

// Back: everything before the (l+1)-th vowel. Fore: suffix starting at the
// l-th-from-last vowel, extended left through the longest legal onset
// cluster. l >= syllable count returns the input unchanged.
PhonemeSeq clip_phoneme_seq(const PhonemeSeq& p, int l, ClipDirection dir);

// True when the consonant cluster is a legal English word onset.
bool is_legal_onset(const PhonemeSeq& cluster);

class PronLexicon {
 public:
  static PronLexicon load(const std::string& path);

  // First variant wins; case-insensitive; nullptr when absent.
  const PhonemeSeq* lookup(const std::string& word) const;
  const std::vector<PhonemeSeq>* lookup_all(const std::string& word) const;

  std::vector<std::string> words() const;  // sorted, lowercase
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::vector<PhonemeSeq>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::vector<PhonemeSeq>> entries_;
};

}  // namespace morpho::phon
