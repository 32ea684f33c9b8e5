#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "morphoforge/clippings.hpp"
#include "morphoforge/corpus.hpp"
#include "morphoforge/rankers.hpp"
#include "morphoforge/redup.hpp"
#include "morphoforge/tagger.hpp"
#include "morphoforge/transducer.hpp"

namespace morpho::evalharness {

struct ModeResult {
  std::string mode;
  double mu = 0.0;
  std::vector<double> per_item;
};

// Per-mode metric table plus everything needed to rerun the evaluation.
struct EvalReport {
  std::string task;
  std::vector<ModeResult> modes;
  nlohmann::ordered_json metadata;

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

enum class BlendProtocol { Cv10, Blind };

std::string blend_protocol_name(BlendProtocol p);
BlendProtocol blend_protocol_from_name(const std::string& name);

struct BlendEvalOptions {
  tagger::TaggerConfig config;
  int k = 5;
  int lm_order = 5;
  std::size_t ensemble_size = 1;
  int folds = 10;
  int runs = 10;  // blind protocol
  std::uint64_t seed = 0;
};

// One prediction head per train/val split; the harness asks it for every
// held-out instance and mode.
using BlendPredictFn =
    std::function<std::string(const corpus::BlendInstance&, rankers::Mode)>;
using BlendTrainFn = std::function<BlendPredictFn(
    const std::vector<corpus::BlendInstance>& train,
    const std::vector<corpus::BlendInstance>& val, std::uint64_t seed)>;

// Real pipeline: tagger ensemble, char LM over `lm_corpus`, ridge length
// model on the split's training instances.
BlendTrainFn default_blend_trainer(const BlendEvalOptions& options,
                                   const tagger::EmbeddingTable& emb,
                                   std::vector<std::string> lm_corpus);

// cv10 pools each fold's held-out distances; blind trains `runs` models on
// seeded 90/10 splits of `dataset` and averages per blind item. `blind`
// is ignored under cv10.
EvalReport eval_blends(const std::vector<corpus::BlendInstance>& dataset,
                       const std::vector<corpus::BlendInstance>& blind,
                       BlendProtocol protocol,
                       const std::vector<rankers::Mode>& modes,
                       const BlendEvalOptions& options,
                       const BlendTrainFn& trainer);

struct ClipEvalOptions {
  int runs = 10;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
};

// item_seed is derive_seed(options.seed, run, original item index), so a
// per-item value never depends on evaluation order.
using ClipPredictFn = std::function<std::string(
    const corpus::ClippingRecord&, clippings::ClipMode, std::uint64_t)>;
using ClipSystemFn = std::function<ClipPredictFn(
    const std::vector<corpus::ClippingRecord>& train, std::uint64_t)>;

ClipSystemFn default_clip_system(const phon::Phonologizer& phonologizer);

EvalReport eval_clippings(const std::vector<corpus::ClippingRecord>& records,
                          const std::vector<clippings::ClipMode>& modes,
                          const ClipEvalOptions& options,
                          const ClipSystemFn& system);

struct RedupEvalOptions {
  int runs = 10;
  std::size_t test_size = 50;
  std::uint64_t seed = 0;
};

inline const std::vector<std::string>& redup_eval_modes() {
  static const std::vector<std::string> modes = {"Model", "Model(NoDup)",
                                                 "Let", "LetCond"};
  return modes;
}

using RedupGenFn = std::function<std::string(const corpus::ReduplicativePair&,
                                             const std::string& mode,
                                             std::uint64_t)>;
using RedupSystemFn = std::function<RedupGenFn(
    const std::vector<corpus::ReduplicativePair>& train, std::uint64_t)>;

RedupSystemFn default_redup_system();

// Scores phonological similarity between the generated and gold
// reduplicant; higher is better.
EvalReport eval_redups(const std::vector<corpus::ReduplicativePair>& pairs,
                       const std::vector<std::string>& modes,
                       const phon::Phonologizer& phonologizer,
                       const RedupEvalOptions& options,
                       const RedupSystemFn& system);

}  // namespace morpho::evalharness
