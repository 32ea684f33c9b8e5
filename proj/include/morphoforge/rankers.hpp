#pragma once

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "morphoforge/corpus.hpp"
#include "morphoforge/ngram.hpp"
#include "morphoforge/tagger.hpp"

namespace morpho::rankers {

// Character language model over a-z with an end-of-word symbol, backed by
// the Witten-Bell n-gram.
class CharLM {
 public:
  static constexpr int kEos = 26;

  CharLM() : model_(kEos + 1, 5) {}

  static CharLM train(const std::vector<std::string>& words, int order = 5);

  // Mean per-character log-probability including the end symbol.
  double logprob(const std::string& s) const;

  // p(next | context suffix); next may be kEos. Exposed for direct
  // normalization checks.
  double next_prob(const std::string& context, int next) const;

  int order() const { return model_.order(); }
  nlohmann::ordered_json to_json() const;
  static CharLM from_json(const nlohmann::ordered_json& j);

 private:
  explicit CharLM(NgramModel model) : model_(std::move(model)) {}
  NgramModel model_;
};

// Ridge regression of blend length on summed component length, with a
// Gaussian predictive density from the training residuals.
struct LengthModel {
  double intercept = 0.0;
  double slope = 0.0;
  double variance = 1.0;
  double lambda = 1.0;

  static LengthModel fit(const std::vector<corpus::BlendInstance>& instances,
                         double lambda = 1.0);
  static LengthModel fit_xy(const std::vector<std::pair<double, double>>& xy,
                            double lambda = 1.0);

  double predict(int component_len) const;
  double logprob(int component_len, int blend_len) const;

  nlohmann::ordered_json to_json() const;
  static LengthModel from_json(const nlohmann::ordered_json& j);
};

enum class Mode { Lstm, LstmLm, LstmLmLen };

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);  // throws ArgumentError

struct CandidateScore {
  std::string blend;
  double tagger = 0.0;  // ensemble-averaged mean per-position log-prob
  double lm = 0.0;      // mean per-character log-prob
  double len = 0.0;     // Gaussian log-density of the candidate length
  double combined = 0.0;
  bool has_lm = false;
  bool has_len = false;
};

// Best achievable mean per-position log-prob over label sequences that
// produce blend from joined, separator forced to Delete. -inf if blend is
// not reachable.
double best_labeling_score(const tagger::TaggerModel& model,
                           const std::string& joined,
                           const std::string& blend);

// Union of per-member candidate sets rescored with the enabled terms,
// sorted by combined score descending with lexicographic tie-break.
std::vector<CandidateScore> score_candidates(
    const std::vector<tagger::TaggerModel>& members, const CharLM* lm,
    const LengthModel* lenmodel, const std::string& joined, Mode mode,
    int k = 5);

std::string predict_blend(const std::vector<tagger::TaggerModel>& members,
                          const CharLM* lm, const LengthModel* lenmodel,
                          const std::string& joined, Mode mode, int k = 5);

// E tagger members, each trained on a seeded 80% subsample of train with a
// member-specific initialization seed; all share the validation set.
std::vector<tagger::TaggerModel> train_ensemble(
    const std::vector<tagger::TaggedInstance>& train,
    const std::vector<tagger::TaggedInstance>& val,
    const tagger::TaggerConfig& config, const tagger::EmbeddingTable& emb,
    int ensemble_size = 5);

// Everything needed to predict blends, in one serializable container.
struct BlendBundle {
  std::vector<tagger::TaggerModel> members;
  CharLM lm;
  LengthModel length;

  nlohmann::ordered_json to_json() const;
  static BlendBundle from_json(const nlohmann::ordered_json& j);
};

}  // namespace morpho::rankers
