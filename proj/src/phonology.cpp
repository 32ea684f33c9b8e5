#include "morphoforge/phonology.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "morphoforge/errors.hpp"
#include "morphoforge/util.hpp"

namespace morpho::phon {

namespace {

enum Height { High, MidH, Low };
enum Backness { Front, Central, Back };
enum Place { Bilabial, Labiodental, Dental, Alveolar, Postalveolar,
             Palatal, Velar, Glottal };
enum Manner { Stop, Fricative, Affricate, Nasal, Lateral, Approximant,
              Glide };

struct PhonemeInfo {
  const char* symbol;
  bool vowel;
  // vowels: height, backness, rounded, tense; consonants: place, manner,
  // voiced, 0
  int f0, f1, f2, f3;
};

constexpr std::array<PhonemeInfo, kNumPhonemes> kInventory{{
    {"AA", true, Low, Back, 0, 1},
    {"AE", true, Low, Front, 0, 0},
    {"AH", true, MidH, Central, 0, 0},
    {"AO", true, Low, Back, 1, 1},
    {"AW", true, Low, Central, 1, 1},
    {"AY", true, Low, Central, 0, 1},
    {"EH", true, MidH, Front, 0, 0},
    {"ER", true, MidH, Central, 0, 1},
    {"EY", true, MidH, Front, 0, 1},
    {"IH", true, High, Front, 0, 0},
    {"IY", true, High, Front, 0, 1},
    {"OW", true, MidH, Back, 1, 1},
    {"OY", true, MidH, Back, 0, 1},
    {"UH", true, High, Back, 1, 0},
    {"UW", true, High, Back, 1, 1},
    {"B", false, Bilabial, Stop, 1, 0},
    {"CH", false, Postalveolar, Affricate, 0, 0},
    {"D", false, Alveolar, Stop, 1, 0},
    {"DH", false, Dental, Fricative, 1, 0},
    {"F", false, Labiodental, Fricative, 0, 0},
    {"G", false, Velar, Stop, 1, 0},
    {"HH", false, Glottal, Fricative, 0, 0},
    {"JH", false, Postalveolar, Affricate, 1, 0},
    {"K", false, Velar, Stop, 0, 0},
    {"L", false, Alveolar, Lateral, 1, 0},
    {"M", false, Bilabial, Nasal, 1, 0},
    {"N", false, Alveolar, Nasal, 1, 0},
    {"NG", false, Velar, Nasal, 1, 0},
    {"P", false, Bilabial, Stop, 0, 0},
    {"R", false, Alveolar, Approximant, 1, 0},
    {"S", false, Alveolar, Fricative, 0, 0},
    {"SH", false, Postalveolar, Fricative, 0, 0},
    {"T", false, Alveolar, Stop, 0, 0},
    {"TH", false, Dental, Fricative, 0, 0},
    {"V", false, Labiodental, Fricative, 1, 0},
    {"W", false, Bilabial, Glide, 1, 0},
    {"Y", false, Palatal, Glide, 1, 0},
    {"Z", false, Alveolar, Fricative, 1, 0},
    {"ZH", false, Postalveolar, Fricative, 1, 0},
}};

const std::map<std::string, int>& symbol_index() {
  static const std::map<std::string, int> index = [] {
    std::map<std::string, int> m;
    for (int i = 0; i < kNumPhonemes; ++i) m[kInventory[i].symbol] = i;
    return m;
  }();
  return index;
}

std::string strip_stress(const std::string& token) {
  std::string out;
  for (char c : token)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(
          std::toupper(static_cast<unsigned char>(c))));
  return out;
}

// Legal English onsets beyond single consonants.
const std::set<std::vector<int>>& onset_clusters() {
  static const std::set<std::vector<int>> clusters = [] {
    auto seq = [](const char* text) { return parse_phoneme_seq(text); };
    std::set<std::vector<int>> s;
    for (const char* c :
         {"P L", "P R", "P Y", "B L", "B R", "B Y", "T R", "T W", "D R",
          "D W", "K L", "K R", "K W", "K Y", "G L", "G R", "G W", "G Y",
          "F L", "F R", "F Y", "V Y", "TH R", "TH W", "SH R", "S P", "S T",
          "S K", "S M", "S N", "S L", "S W", "S F", "M Y", "N Y", "HH Y",
          "S P L", "S P R", "S P Y", "S T R", "S K R", "S K W", "S K Y"})
      s.insert(seq(c));
    return s;
  }();
  return clusters;
}

}  // namespace

int phoneme_id(const std::string& symbol) {
  auto id = try_phoneme_id(symbol);
  if (!id) throw ArgumentError("unknown phoneme symbol: " + symbol);
  return *id;
}

std::optional<int> try_phoneme_id(const std::string& symbol) {
  const auto& index = symbol_index();
  auto it = index.find(strip_stress(symbol));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

const std::string& phoneme_name(int id) {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& info : kInventory) v.emplace_back(info.symbol);
    return v;
  }();
  if (id < 0 || id >= kNumPhonemes)
    throw ArgumentError("phoneme id out of range");
  return names[static_cast<std::size_t>(id)];
}

bool is_vowel(int id) {
  if (id < 0 || id >= kNumPhonemes)
    throw ArgumentError("phoneme id out of range");
  return kInventory[static_cast<std::size_t>(id)].vowel;
}

PhonemeSeq parse_phoneme_seq(const std::string& text) {
  PhonemeSeq out;
  for (const auto& tok : split(text, ' ')) {
    if (tok.empty()) continue;
    out.push_back(phoneme_id(tok));
  }
  return out;
}

std::string phoneme_seq_to_string(const PhonemeSeq& seq) {
  std::vector<std::string> names;
  names.reserve(seq.size());
  for (int id : seq) names.push_back(phoneme_name(id));
  return join(names, " ");
}

double feature_overlap(int a, int b) {
  const auto& pa = kInventory[static_cast<std::size_t>(a)];
  const auto& pb = kInventory[static_cast<std::size_t>(b)];
  if (pa.vowel != pb.vowel) return 0.0;
  int shared = (pa.f0 == pb.f0) + (pa.f1 == pb.f1) + (pa.f2 == pb.f2);
  int total = 3;
  if (pa.vowel) {
    shared += (pa.f3 == pb.f3);
    total = 4;
  }
  return static_cast<double>(shared) / total;
}

double substitution_score(int a, int b) {
  if (a == b) return 1.0;
  if (is_vowel(a) != is_vowel(b)) return 0.1;
  return 0.2 + 0.7 * feature_overlap(a, b);
}

double alignment_score(const PhonemeSeq& a, const PhonemeSeq& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<double> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j)
    prev[j] = kGapPenalty * static_cast<double>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = kGapPenalty * static_cast<double>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = std::max({prev[j - 1] + substitution_score(a[i - 1], b[j - 1]),
                         prev[j] + kGapPenalty, cur[j - 1] + kGapPenalty});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double mir_seq(const PhonemeSeq& a, const PhonemeSeq& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const double self =
      static_cast<double>(std::max(a.size(), b.size()));
  const double raw = alignment_score(a, b) / self;
  return std::clamp(raw, 0.0, 1.0);
}

int syllable_count(const PhonemeSeq& p) {
  int n = 0;
  for (int id : p) n += is_vowel(id) ? 1 : 0;
  return n;
}

bool is_legal_onset(const PhonemeSeq& cluster) {
  if (cluster.empty()) return true;
  for (int id : cluster)
    if (is_vowel(id)) return false;
  if (cluster.size() == 1) return cluster[0] != phoneme_id("NG");
  return onset_clusters().count(cluster) > 0;
}

PhonemeSeq clip_phoneme_seq(const PhonemeSeq& p, int l, ClipDirection dir) {
  if (l < 1) throw ArgumentError("clip: l must be >= 1");
  std::vector<std::size_t> vowels;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (is_vowel(p[i])) vowels.push_back(i);
  if (static_cast<std::size_t>(l) >= vowels.size()) return p;

  if (dir == ClipDirection::Back) {
    const std::size_t cut = vowels[static_cast<std::size_t>(l)];
    return PhonemeSeq(p.begin(), p.begin() + static_cast<long>(cut));
  }

  const std::size_t nucleus = vowels[vowels.size() - static_cast<std::size_t>(l)];
  std::size_t start = nucleus;
  for (std::size_t j = nucleus; j-- > 0;) {
    if (is_vowel(p[j])) break;
    PhonemeSeq cluster(p.begin() + static_cast<long>(j),
                       p.begin() + static_cast<long>(nucleus));
    if (!is_legal_onset(cluster)) break;
    start = j;
  }
  return PhonemeSeq(p.begin() + static_cast<long>(start), p.end());
}

PronLexicon PronLexicon::load(const std::string& path) {
  PronLexicon lex;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    if (line.empty() || line.rfind(";;;", 0) == 0) continue;
    std::vector<std::string> tokens;
    for (const auto& tok : split(line, ' '))
      if (!tok.empty()) tokens.push_back(tok);
    if (tokens.size() < 2)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected word and phonemes");
    std::string word = lowercase(tokens[0]);
    if (auto paren = word.find('('); paren != std::string::npos)
      word.resize(paren);
    PhonemeSeq seq;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto id = try_phoneme_id(tokens[i]);
      if (!id)
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": unknown phoneme '" + tokens[i] + "'");
      seq.push_back(*id);
    }
    lex.entries_[word].push_back(std::move(seq));
  }
  return lex;
}

const PhonemeSeq* PronLexicon::lookup(const std::string& word) const {
  const auto* all = lookup_all(word);
  return all ? &all->front() : nullptr;
}

const std::vector<PhonemeSeq>* PronLexicon::lookup_all(
    const std::string& word) const {
  auto it = entries_.find(lowercase(word));
  if (it == entries_.end()) return nullptr;
  return &it->second;
}

std::vector<std::string> PronLexicon::words() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [word, _] : entries_) out.push_back(word);
  return out;
}

}  // namespace morpho::phon
