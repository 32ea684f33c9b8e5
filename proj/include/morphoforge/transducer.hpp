#pragma once

#include <cstdint>
#include <json.hpp>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "morphoforge/ngram.hpp"
#include "morphoforge/phonology.hpp"

namespace morpho::phon {

enum class Direction { G2P, P2G };

const char* direction_name(Direction d);
Direction direction_from_name(const std::string& name);

// a-z -> 0..25; anything else dropped.
std::vector<int> letters_to_ids(const std::string& word);
std::string ids_to_letters(const std::vector<int>& ids);

struct TransducerConfig {
  int order = 6;
  int beam = 10;
  int em_iters = 15;
  double heldout_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct TransducerStats {
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped = 0;
  double heldout_mean_edit = 0.0;
  std::size_t heldout_size = 0;
};

// Monotone many-to-many transducer: EM-aligned (input chunk, output chunk)
// units scored by a joint Witten-Bell n-gram, decoded with a fixed beam.
// Deterministic given input and configuration.
class Transducer {
 public:
  static Transducer train(const PronLexicon& lexicon, Direction dir,
                          const TransducerConfig& config);

  std::vector<int> apply(const std::vector<int>& input) const;

  Direction direction() const { return dir_; }
  const TransducerStats& stats() const { return stats_; }
  const TransducerConfig& config() const { return config_; }

  nlohmann::ordered_json to_json() const;
  static Transducer from_json(const nlohmann::ordered_json& j);

 private:
  using Chunk = std::vector<int>;
  using Unit = std::pair<Chunk, Chunk>;

  Transducer(Direction dir, TransducerConfig config)
      : dir_(dir), config_(std::move(config)), model_(1, 1) {}

  void index_units();

  Direction dir_;
  TransducerConfig config_;
  TransducerStats stats_;
  std::vector<Unit> units_;              // id -> unit; EOS id == units_.size()
  std::map<Chunk, std::vector<int>> by_input_;
  NgramModel model_;
};

// Lexicon-first pronunciation and spelling front end.
class Phonologizer {
 public:
  Phonologizer(PronLexicon lexicon, Transducer g2p, Transducer p2g);

  // Lexicon first variant when present, transducer otherwise.
  PhonemeSeq pronounce(const std::string& word) const;
  std::string spell(const PhonemeSeq& pron) const;
  double mir(const std::string& a, const std::string& b) const;

  const PronLexicon& lexicon() const { return lexicon_; }
  const Transducer& g2p_transducer() const { return g2p_; }
  const Transducer& p2g_transducer() const { return p2g_; }

 private:
  PronLexicon lexicon_;
  Transducer g2p_;
  Transducer p2g_;
};

}  // namespace morpho::phon
