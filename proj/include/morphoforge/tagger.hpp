#pragma once

#include <array>
#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "morphoforge/editops.hpp"
#include "morphoforge/nn.hpp"

namespace morpho::tagger {

// Embedding vocabulary: a-z, the separator '#', and UNK.
constexpr int kEmbVocab = 28;
constexpr int kSeparatorRow = 26;
constexpr int kUnkRow = 27;

int char_row(char c);

struct EmbeddingTable {
  nn::Mat table;  // kEmbVocab x dim
  std::uint64_t seed = 0;
  double heldout_ppl_init = 0.0;
  double heldout_ppl_final = 0.0;

  int dim() const { return static_cast<int>(table.cols()); }
  nn::Vec embed(char c) const { return table.row(char_row(c)).transpose(); }
  std::uint64_t hash() const;

  static EmbeddingTable random(int dim, std::uint64_t seed);
  nlohmann::ordered_json to_json() const;
  static EmbeddingTable from_json(const nlohmann::ordered_json& j);
};

// Character LM pretraining for the frozen embeddings: an LSTM language
// model over the word list; the learned input embeddings are returned.
EmbeddingTable train_char_embeddings(const std::vector<std::string>& words,
                                     int dim, std::uint64_t seed,
                                     int epochs = 10);

struct TaggerConfig {
  int hidden = 50;
  double dropout = 0.5;
  double learning_rate = 0.001;
  int max_epochs = 500;
  int patience = 10;
  bool bidirectional = true;
  std::uint64_t seed = 0;
};

struct TaggedInstance {
  std::string joined;
  editops::LabelSeq labels;
};

struct TrainMeta {
  int epochs_run = 0;
  double best_val_loss = 0.0;
};

class TaggerModel {
 public:
  static TaggerModel train(const std::vector<TaggedInstance>& train_set,
                           const std::vector<TaggedInstance>& val_set,
                           const TaggerConfig& config,
                           const EmbeddingTable& emb);

  // One (Copy, Delete) distribution per character; inference path, no
  // dropout.
  std::vector<std::array<double, 2>> label_distributions(
      const std::string& joined) const;

  // Mean per-position log-probability of a label sequence.
  double sequence_score(const std::string& joined,
                        const editops::LabelSeq& labels) const;

  // Mean per-position cross entropy against the instance labels.
  double loss(const TaggedInstance& inst) const;

  const TaggerConfig& config() const { return config_; }
  const TrainMeta& meta() const { return meta_; }
  const EmbeddingTable& embeddings() const { return emb_; }

  nlohmann::ordered_json to_json() const;
  static TaggerModel from_json(const nlohmann::ordered_json& j);

  // Untrained randomly initialized model; used by the gradient checker.
  static TaggerModel random(const TaggerConfig& config,
                            const EmbeddingTable& emb);

  friend double gradient_check(TaggerModel& model,
                               const TaggedInstance& inst, double epsilon);

 private:
  TaggerModel() = default;
  void init_weights(std::mt19937_64& rng);
  std::vector<nn::Param*> params();
  std::vector<nn::Vec> hidden_states(const std::string& joined) const;
  double train_step(const TaggedInstance& inst, std::mt19937_64& drop_rng,
                    long long adam_t);

  EmbeddingTable emb_;
  TaggerConfig config_;
  TrainMeta meta_;
  nn::LstmWeights fwd_;
  nn::LstmWeights bwd_;  // unused when unidirectional
  nn::Param out_w;       // [2 x (2H or H)]
  nn::Param out_b;       // [2 x 1]
};

// Max relative error between analytic and central finite-difference
// gradients of the loss on one instance, over every trainable parameter.
double gradient_check(TaggerModel& model, const TaggedInstance& inst,
                      double epsilon);

}  // namespace morpho::tagger
