#include "morphoforge/rankers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "morphoforge/decoder.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/util.hpp"

namespace morpho::rankers {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<int> char_ids(const std::string& s) {
  std::vector<int> ids;
  ids.reserve(s.size());
  for (char c : s) {
    if (c < 'a' || c > 'z')
      throw ArgumentError("character out of the a-z alphabet: '" +
                          std::string(1, c) + "'");
    ids.push_back(c - 'a');
  }
  return ids;
}

}  // namespace

CharLM CharLM::train(const std::vector<std::string>& words, int order) {
  if (order < 2) throw ArgumentError("char LM order must be at least 2");
  NgramModel model(kEos + 1, order);
  long long added = 0;
  for (const auto& w : words) {
    std::string clean;
    for (char c : lowercase(w))
      if (c >= 'a' && c <= 'z') clean.push_back(c);
    if (clean.empty()) continue;
    auto ids = char_ids(clean);
    ids.push_back(kEos);
    model.add_sequence(ids);
    ++added;
  }
  if (added == 0) throw ArgumentError("empty char LM corpus");
  return CharLM(std::move(model));
}

double CharLM::logprob(const std::string& s) const {
  if (s.empty()) throw ArgumentError("empty string scored by char LM");
  auto ids = char_ids(s);
  ids.push_back(kEos);
  return model_.sequence_log_prob_mean(ids);
}

double CharLM::next_prob(const std::string& context, int next) const {
  return model_.prob(char_ids(context), next);
}

nlohmann::ordered_json CharLM::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = "char_lm";
  j["format_version"] = 1;
  j["model"] = model_.to_json();
  return j;
}

CharLM CharLM::from_json(const nlohmann::ordered_json& j) {
  if (j.at("kind").get<std::string>() != "char_lm")
    throw ValidationError("not a char_lm payload");
  return CharLM(NgramModel::from_json(j.at("model")));
}

LengthModel LengthModel::fit_xy(
    const std::vector<std::pair<double, double>>& xy, double lambda) {
  if (xy.size() < 3)
    throw ArgumentError("length model needs at least 3 instances");
  if (lambda < 0.0) throw ArgumentError("lambda must be nonnegative");

  const double n = static_cast<double>(xy.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;

  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0)
    throw FitError("degenerate length fit: all component lengths equal");

  LengthModel m;
  m.lambda = lambda;
  m.slope = sxy / (sxx + lambda);
  m.intercept = my - m.slope * mx;

  double ss = 0.0;
  for (const auto& [x, y] : xy) {
    double r = y - (m.intercept + m.slope * x);
    ss += r * r;
  }
  m.variance = std::max(ss / n, 1e-6);
  return m;
}

LengthModel LengthModel::fit(
    const std::vector<corpus::BlendInstance>& instances, double lambda) {
  std::vector<std::pair<double, double>> xy;
  xy.reserve(instances.size());
  for (const auto& inst : instances) {
    xy.emplace_back(static_cast<double>(inst.component1.size() +
                                        inst.component2.size()),
                    static_cast<double>(inst.blend.size()));
  }
  return fit_xy(xy, lambda);
}

double LengthModel::predict(int component_len) const {
  return intercept + slope * static_cast<double>(component_len);
}

double LengthModel::logprob(int component_len, int blend_len) const {
  if (component_len < 1 || blend_len < 1)
    throw ArgumentError("lengths must be positive");
  double mu = predict(component_len);
  double d = static_cast<double>(blend_len) - mu;
  return -0.5 * std::log(2.0 * M_PI * variance) - d * d / (2.0 * variance);
}

nlohmann::ordered_json LengthModel::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = "length_model";
  j["format_version"] = 1;
  j["intercept"] = intercept;
  j["slope"] = slope;
  j["variance"] = variance;
  j["lambda"] = lambda;
  return j;
}

LengthModel LengthModel::from_json(const nlohmann::ordered_json& j) {
  if (j.at("kind").get<std::string>() != "length_model")
    throw ValidationError("not a length_model payload");
  LengthModel m;
  m.intercept = j.at("intercept").get<double>();
  m.slope = j.at("slope").get<double>();
  m.variance = j.at("variance").get<double>();
  m.lambda = j.at("lambda").get<double>();
  return m;
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Lstm:
      return "lstm";
    case Mode::LstmLm:
      return "lstm+lm";
    case Mode::LstmLmLen:
      return "lstm+lm+len";
  }
  throw ArgumentError("unknown mode");
}

Mode mode_from_name(const std::string& name) {
  if (name == "lstm") return Mode::Lstm;
  if (name == "lstm+lm") return Mode::LstmLm;
  if (name == "lstm+lm+len") return Mode::LstmLmLen;
  throw ArgumentError("unknown mode name: " + name);
}

double best_labeling_score(const tagger::TaggerModel& model,
                           const std::string& joined,
                           const std::string& blend) {
  auto dists = model.label_distributions(joined);
  const std::size_t n = joined.size();
  const std::size_t m = blend.size();

  std::vector<double> dp(m + 1, kNegInf);
  dp[0] = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double lc = std::log(std::max(dists[t][0], 1e-300));
    double ld = std::log(std::max(dists[t][1], 1e-300));
    std::vector<double> next(m + 1, kNegInf);
    for (std::size_t j = 0; j <= m; ++j) {
      if (dp[j] == kNegInf) continue;
      // Delete is always available; at the separator it is forced.
      next[j] = std::max(next[j], dp[j] + ld);
      if (joined[t] != '#' && j < m && joined[t] == blend[j])
        next[j + 1] = std::max(next[j + 1], dp[j] + lc);
    }
    dp = std::move(next);
  }
  if (dp[m] == kNegInf) return kNegInf;
  return dp[m] / static_cast<double>(n);
}

std::vector<CandidateScore> score_candidates(
    const std::vector<tagger::TaggerModel>& members, const CharLM* lm,
    const LengthModel* lenmodel, const std::string& joined, Mode mode,
    int k) {
  if (members.empty()) throw ArgumentError("empty tagger ensemble");
  bool use_lm = mode == Mode::LstmLm || mode == Mode::LstmLmLen;
  bool use_len = mode == Mode::LstmLmLen;
  if (use_lm && lm == nullptr)
    throw ArgumentError("mode requires a char LM");
  if (use_len && lenmodel == nullptr)
    throw ArgumentError("mode requires a length model");

  std::set<std::string> pool;
  for (const auto& member : members) {
    auto set = decoder::generate_candidates(member, joined, k);
    for (const auto& e : set.entries) pool.insert(e.blend);
  }
  if (pool.empty())
    throw PredictionError("no candidates for input: " + joined);

  int component_len = 0;
  for (char c : joined)
    if (c != '#') ++component_len;

  std::vector<CandidateScore> scored;
  for (const auto& blend : pool) {
    CandidateScore cs;
    cs.blend = blend;
    double total = 0.0;
    for (const auto& member : members)
      total += best_labeling_score(member, joined, blend);
    cs.tagger = total / static_cast<double>(members.size());
    cs.combined = cs.tagger;
    if (use_lm) {
      cs.has_lm = true;
      cs.lm = lm->logprob(blend);
      cs.combined += cs.lm;
    }
    if (use_len) {
      cs.has_len = true;
      cs.len = lenmodel->logprob(component_len,
                                 static_cast<int>(blend.size()));
      cs.combined += cs.len;
    }
    scored.push_back(std::move(cs));
  }

  std::sort(scored.begin(), scored.end(),
            [](const CandidateScore& a, const CandidateScore& b) {
              if (a.combined != b.combined) return a.combined > b.combined;
              return a.blend < b.blend;
            });
  return scored;
}

std::string predict_blend(const std::vector<tagger::TaggerModel>& members,
                          const CharLM* lm, const LengthModel* lenmodel,
                          const std::string& joined, Mode mode, int k) {
  return score_candidates(members, lm, lenmodel, joined, mode, k)
      .front()
      .blend;
}

std::vector<tagger::TaggerModel> train_ensemble(
    const std::vector<tagger::TaggedInstance>& train,
    const std::vector<tagger::TaggedInstance>& val,
    const tagger::TaggerConfig& config, const tagger::EmbeddingTable& emb,
    int ensemble_size) {
  if (ensemble_size < 1) throw ArgumentError("ensemble size must be positive");
  if (train.empty()) throw ArgumentError("empty ensemble training set");

  std::vector<tagger::TaggerModel> members;
  for (int e = 0; e < ensemble_size; ++e) {
    std::vector<int> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      order[i] = static_cast<int>(i);
    auto rng = make_rng(derive_seed(config.seed, 0x5e6b, e));
    shuffle_vec(order, rng);
    auto take = static_cast<std::size_t>(std::max<long long>(
        1, std::llround(0.8 * static_cast<double>(train.size()))));
    take = std::min(take, train.size());

    std::vector<tagger::TaggedInstance> subset;
    subset.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
      subset.push_back(train[static_cast<std::size_t>(order[i])]);

    tagger::TaggerConfig member_cfg = config;
    member_cfg.seed = derive_seed(config.seed, 0xeb5e, e);
    members.push_back(
        tagger::TaggerModel::train(subset, val, member_cfg, emb));
  }
  return members;
}

nlohmann::ordered_json BlendBundle::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = "blend_bundle";
  j["format_version"] = 1;
  nlohmann::ordered_json ms = nlohmann::ordered_json::array();
  for (const auto& m : members) ms.push_back(m.to_json());
  j["members"] = std::move(ms);
  j["char_lm"] = lm.to_json();
  j["length_model"] = length.to_json();
  return j;
}

BlendBundle BlendBundle::from_json(const nlohmann::ordered_json& j) {
  if (j.at("kind").get<std::string>() != "blend_bundle")
    throw ValidationError("not a blend_bundle payload");
  BlendBundle b;
  for (const auto& mj : j.at("members"))
    b.members.push_back(tagger::TaggerModel::from_json(mj));
  b.lm = CharLM::from_json(j.at("char_lm"));
  b.length = LengthModel::from_json(j.at("length_model"));
  return b;
}

}  // namespace morpho::rankers
