#pragma once

#include <json.hpp>
#include <map>
#include <vector>

namespace morpho {

// Interpolated Witten-Bell n-gram model over integer symbols 0..vocab-1.
// Symbol id `vocab` is reserved as the begin-of-sequence padding and never
// appears as a prediction target. Every context distribution sums to 1 and
// assigns positive probability to every in-vocabulary symbol.
class NgramModel {
 public:
  NgramModel(int vocab_size, int order);

  void add_sequence(const std::vector<int>& symbols);

  // context is the full history; only its last order-1 symbols matter.
  double prob(const std::vector<int>& context, int symbol) const;
  double log_prob(const std::vector<int>& context, int symbol) const;

  // Mean per-symbol log probability of the whole sequence.
  double sequence_log_prob_mean(const std::vector<int>& symbols) const;

  int vocab_size() const { return vocab_; }
  int order() const { return order_; }
  int bos_symbol() const { return vocab_; }
  long long total_events() const { return total_events_; }

  nlohmann::ordered_json to_json() const;
  static NgramModel from_json(const nlohmann::ordered_json& j);

 private:
  struct ContextStats {
    std::map<int, long long> counts;
    long long total = 0;
  };
  using Table = std::map<std::vector<int>, ContextStats>;

  std::vector<int> padded_context(const std::vector<int>& context) const;

  int vocab_;
  int order_;
  long long total_events_ = 0;
  std::vector<Table> tables_;  // tables_[k]: contexts of length k
};

}  // namespace morpho
