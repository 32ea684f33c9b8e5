#include "morphoforge/clippings.hpp"

#include <algorithm>
#include <cmath>

#include "morphoforge/errors.hpp"
#include "morphoforge/util.hpp"

namespace morpho::clippings {

namespace {

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (c != ' ') out.push_back(c);
  return out;
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::vector<std::string> toks;
  for (const auto& t : split(s, ' '))
    if (!t.empty()) toks.push_back(t);
  return toks;
}

phon::PhonemeSeq pronounce_tokens(const phon::Phonologizer& ph,
                                  const std::string& text) {
  phon::PhonemeSeq pron;
  for (const auto& tok : tokens_of(text)) {
    auto p = ph.pronounce(tok);
    pron.insert(pron.end(), p.begin(), p.end());
  }
  if (pron.empty()) throw ArgumentError("no pronounceable tokens in: " + text);
  return pron;
}

template <typename K>
K sample_categorical(const std::map<K, double>& dist, std::mt19937_64& rng) {
  if (dist.empty()) throw FitError("empty categorical distribution");
  double u = uniform_real01(rng);
  double acc = 0.0;
  for (const auto& [k, p] : dist) {
    acc += p;
    if (u < acc) return k;
  }
  return dist.rbegin()->first;
}

corpus::ClipType sample_type(const ClipModel& model, std::mt19937_64& rng) {
  auto t = sample_categorical(model.theta, rng);
  // A Compound draw on a single-word input degrades to Back.
  if (t == corpus::ClipType::Compound) t = corpus::ClipType::Back;
  return t;
}

int graph_len(const ClipModel& model, std::size_t word_len) {
  long l = std::llround(model.length.predict(static_cast<int>(word_len)));
  l = std::clamp(l, 1L, static_cast<long>(word_len));
  return static_cast<int>(l);
}

std::string clip_phone_word(const phon::Phonologizer& ph,
                            const std::string& word, corpus::ClipType t,
                            int l) {
  auto dir = t == corpus::ClipType::Fore ? phon::ClipDirection::Fore
                                         : phon::ClipDirection::Back;
  auto clipped = phon::clip_phoneme_seq(ph.pronounce(word), l, dir);
  return ph.spell(clipped);
}

std::string clip_graph_word(const std::string& word, corpus::ClipType t,
                            int l) {
  if (t == corpus::ClipType::Fore) return word.substr(word.size() - l);
  return word.substr(0, l);
}

}  // namespace

std::string clip_mode_name(ClipMode mode) {
  switch (mode) {
    case ClipMode::Naive: return "Naive";
    case ClipMode::Phone: return "Phone";
    case ClipMode::Phone1Syl: return "Phone1Syl";
    case ClipMode::Phone2Syl: return "Phone2Syl";
    case ClipMode::PhoneOracle: return "PhoneOracle";
    case ClipMode::Graph: return "Graph";
    case ClipMode::G2PGold: return "G2PGold";
  }
  throw ArgumentError("unknown clip mode");
}

ClipMode clip_mode_from_name(const std::string& name) {
  for (auto m : {ClipMode::Naive, ClipMode::Phone, ClipMode::Phone1Syl,
                 ClipMode::Phone2Syl, ClipMode::PhoneOracle, ClipMode::Graph,
                 ClipMode::G2PGold}) {
    if (name == clip_mode_name(m)) return m;
  }
  throw ArgumentError("unknown clip mode: " + name);
}

ClipModel fit_clip_model(const std::vector<corpus::ClippingRecord>& records,
                         const phon::Phonologizer& phonologizer) {
  std::vector<const corpus::ClippingRecord*> regular;
  for (const auto& r : records)
    if (r.inferred_type != corpus::ClipType::Irregular) regular.push_back(&r);
  if (regular.empty())
    throw FitError("clip model needs at least one regular record");

  ClipModel model;

  std::map<corpus::ClipType, std::size_t> type_counts;
  std::map<int, std::size_t> syl_counts;
  std::vector<std::pair<double, double>> xy;
  for (const auto* r : regular) {
    ++type_counts[r->inferred_type];
    int syl = phon::syllable_count(pronounce_tokens(phonologizer, r->gold));
    ++syl_counts[std::max(syl, 1)];
    xy.emplace_back(static_cast<double>(strip_spaces(r->source).size()),
                    static_cast<double>(strip_spaces(r->gold).size()));
  }

  const double n = static_cast<double>(regular.size());
  for (const auto& [t, c] : type_counts)
    model.theta[t] = static_cast<double>(c) / n;
  for (const auto& [s, c] : syl_counts)
    model.pi[s] = static_cast<double>(c) / n;

  try {
    model.length = rankers::LengthModel::fit_xy(xy);
  } catch (const Error&) {
    // Too few or degenerate pairs: intercept-only model at the mean length.
    double my = 0.0;
    for (const auto& [x, y] : xy) my += y;
    my /= n;
    double ss = 0.0;
    for (const auto& [x, y] : xy) ss += (y - my) * (y - my);
    model.length.slope = 0.0;
    model.length.intercept = my;
    model.length.variance = std::max(ss / n, 1e-6);
  }
  return model;
}

std::string predict_clipping(const ClipModel& model,
                             const phon::Phonologizer& phonologizer,
                             const std::string& word, ClipMode mode,
                             const std::optional<std::string>& gold,
                             std::uint64_t seed) {
  std::string w = lowercase(word);
  auto toks = tokens_of(w);
  if (toks.empty()) throw ArgumentError("empty clipping input");
  w = join(toks, " ");

  if ((mode == ClipMode::PhoneOracle || mode == ClipMode::G2PGold) &&
      !gold.has_value())
    throw ArgumentError(clip_mode_name(mode) + " requires a gold clipping");

  auto rng = make_rng(seed);

  switch (mode) {
    case ClipMode::Naive: {
      if (w.size() <= 1) return w;
      auto len = 1 + uniform_below(rng, w.size() - 1);
      bool prefix = uniform_below(rng, 2) == 0;
      return prefix ? w.substr(0, len) : w.substr(w.size() - len);
    }
    case ClipMode::G2PGold:
      return phonologizer.spell(pronounce_tokens(phonologizer, *gold));
    case ClipMode::Graph: {
      if (toks.size() > 1) {
        std::string out;
        for (const auto& tok : toks)
          out += clip_graph_word(tok, corpus::ClipType::Back,
                                 graph_len(model, tok.size()));
        return out;
      }
      auto t = sample_type(model, rng);
      return clip_graph_word(w, t, graph_len(model, w.size()));
    }
    case ClipMode::Phone:
    case ClipMode::Phone1Syl:
    case ClipMode::Phone2Syl:
    case ClipMode::PhoneOracle: {
      if (toks.size() > 1) {
        std::string out;
        for (const auto& tok : toks)
          out += clip_phone_word(phonologizer, tok, corpus::ClipType::Back, 1);
        return out;
      }
      auto t = sample_type(model, rng);
      int l = 1;
      if (mode == ClipMode::Phone) {
        l = sample_categorical(model.pi, rng);
      } else if (mode == ClipMode::Phone2Syl) {
        l = 2;
      } else if (mode == ClipMode::PhoneOracle) {
        l = std::max(
            phon::syllable_count(pronounce_tokens(phonologizer, *gold)), 1);
      }
      return clip_phone_word(phonologizer, w, t, l);
    }
  }
  throw ArgumentError("unknown clip mode");
}

nlohmann::ordered_json ClipModel::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = "clip_model";
  j["format_version"] = 1;
  auto th = nlohmann::ordered_json::object();
  for (const auto& [t, p] : theta) th[corpus::clip_type_name(t)] = p;
  j["theta"] = th;
  auto pj = nlohmann::ordered_json::object();
  for (const auto& [s, p] : pi) pj[std::to_string(s)] = p;
  j["pi"] = pj;
  j["length_model"] = length.to_json();
  return j;
}

ClipModel ClipModel::from_json(const nlohmann::ordered_json& j) {
  if (j.at("kind").get<std::string>() != "clip_model")
    throw ValidationError("not a clip_model payload");
  ClipModel m;
  for (const auto& [name, p] : j.at("theta").items())
    m.theta[corpus::clip_type_from_name(name)] = p.get<double>();
  for (const auto& [s, p] : j.at("pi").items())
    m.pi[std::stoi(s)] = p.get<double>();
  m.length = rankers::LengthModel::from_json(j.at("length_model"));
  return m;
}

}  // namespace morpho::clippings
