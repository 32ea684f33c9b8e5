#include "morphoforge/transducer.hpp"

#include <algorithm>
#include <cmath>

#include "morphoforge/errors.hpp"
#include "morphoforge/util.hpp"

namespace morpho::phon {

namespace {

constexpr int kMaxIn = 2;
constexpr int kMaxOut = 2;

using Chunk = std::vector<int>;
using Unit = std::pair<Chunk, Chunk>;
using SeqPair = std::pair<std::vector<int>, std::vector<int>>;

int seq_edit_distance(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[m];
}

// Reachability masks for the monotone chunk lattice.
void reach_masks(std::size_t n, std::size_t m,
                 std::vector<std::vector<char>>& fwd,
                 std::vector<std::vector<char>>& bwd) {
  fwd.assign(n + 1, std::vector<char>(m + 1, 0));
  bwd.assign(n + 1, std::vector<char>(m + 1, 0));
  fwd[0][0] = 1;
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= m; ++j) {
      if (!fwd[i][j]) continue;
      for (int di = 1; di <= kMaxIn; ++di)
        for (int dj = 0; dj <= kMaxOut; ++dj)
          if (i + di <= n && j + dj <= m) fwd[i + di][j + dj] = 1;
    }
  bwd[n][m] = 1;
  for (std::size_t i = n + 1; i-- > 0;)
    for (std::size_t j = m + 1; j-- > 0;) {
      if (i == n && j == m) continue;
      for (int di = 1; di <= kMaxIn; ++di)
        for (int dj = 0; dj <= kMaxOut; ++dj)
          if (i + di <= n && j + dj <= m && bwd[i + di][j + dj]) {
            bwd[i][j] = 1;
            di = kMaxIn + 1;
            break;
          }
    }
}

std::map<Unit, double> em_align(const std::vector<SeqPair>& pairs,
                                int iters) {
  std::map<Unit, double> prob;
  // Initial pass: every edge on a complete path counts once.
  for (const auto& [in, out] : pairs) {
    const std::size_t n = in.size(), m = out.size();
    std::vector<std::vector<char>> fwd, bwd;
    reach_masks(n, m, fwd, bwd);
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j <= m; ++j) {
        if (!fwd[i][j]) continue;
        for (int di = 1; di <= kMaxIn; ++di)
          for (int dj = 0; dj <= kMaxOut; ++dj) {
            if (i + di > n || j + dj > m || !bwd[i + di][j + dj]) continue;
            Unit u{Chunk(in.begin() + static_cast<long>(i),
                         in.begin() + static_cast<long>(i + di)),
                   Chunk(out.begin() + static_cast<long>(j),
                         out.begin() + static_cast<long>(j + dj))};
            prob[u] += 1.0;
          }
      }
  }
  double total = 0.0;
  for (auto& [u, c] : prob) total += c;
  for (auto& [u, c] : prob) c /= total;

  for (int it = 0; it < iters; ++it) {
    std::map<Unit, double> counts;
    for (const auto& [in, out] : pairs) {
      const std::size_t n = in.size(), m = out.size();
      std::vector<std::vector<double>> alpha(
          n + 1, std::vector<double>(m + 1, 0.0));
      std::vector<std::vector<double>> beta(
          n + 1, std::vector<double>(m + 1, 0.0));
      alpha[0][0] = 1.0;
      auto unit_at = [&](std::size_t i, std::size_t j, int di, int dj) {
        return Unit{Chunk(in.begin() + static_cast<long>(i),
                          in.begin() + static_cast<long>(i + di)),
                    Chunk(out.begin() + static_cast<long>(j),
                          out.begin() + static_cast<long>(j + dj))};
      };
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= m; ++j) {
          if (alpha[i][j] == 0.0) continue;
          for (int di = 1; di <= kMaxIn; ++di)
            for (int dj = 0; dj <= kMaxOut; ++dj) {
              if (i + di > n || j + dj > m) continue;
              auto it2 = prob.find(unit_at(i, j, di, dj));
              if (it2 == prob.end()) continue;
              alpha[i + di][j + dj] += alpha[i][j] * it2->second;
            }
        }
      const double z = alpha[n][m];
      if (z <= 0.0) continue;
      beta[n][m] = 1.0;
      for (std::size_t i = n + 1; i-- > 0;)
        for (std::size_t j = m + 1; j-- > 0;) {
          if (i == n && j == m) continue;
          double acc = 0.0;
          for (int di = 1; di <= kMaxIn; ++di)
            for (int dj = 0; dj <= kMaxOut; ++dj) {
              if (i + di > n || j + dj > m) continue;
              auto it2 = prob.find(unit_at(i, j, di, dj));
              if (it2 == prob.end()) continue;
              acc += it2->second * beta[i + di][j + dj];
            }
          beta[i][j] = acc;
        }
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= m; ++j) {
          if (alpha[i][j] == 0.0) continue;
          for (int di = 1; di <= kMaxIn; ++di)
            for (int dj = 0; dj <= kMaxOut; ++dj) {
              if (i + di > n || j + dj > m) continue;
              Unit u = unit_at(i, j, di, dj);
              auto it2 = prob.find(u);
              if (it2 == prob.end()) continue;
              const double post =
                  alpha[i][j] * it2->second * beta[i + di][j + dj] / z;
              if (post > 0.0) counts[u] += post;
            }
        }
    }
    double ctotal = 0.0;
    for (auto& [u, c] : counts) ctotal += c;
    if (ctotal <= 0.0) break;
    for (auto& [u, c] : counts) c /= ctotal;
    prob = std::move(counts);
  }
  return prob;
}

std::vector<Unit> viterbi_units(const SeqPair& pair,
                                const std::map<Unit, double>& prob) {
  const auto& [in, out] = pair;
  const std::size_t n = in.size(), m = out.size();
  constexpr double kNegInf = -1e300;
  std::vector<std::vector<double>> best(n + 1,
                                        std::vector<double>(m + 1, kNegInf));
  struct Back {
    int di = 0, dj = 0;
  };
  std::vector<std::vector<Back>> back(n + 1, std::vector<Back>(m + 1));
  best[0][0] = 0.0;
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= m; ++j) {
      if (best[i][j] == kNegInf) continue;
      for (int di = 1; di <= kMaxIn; ++di)
        for (int dj = 0; dj <= kMaxOut; ++dj) {
          if (i + di > n || j + dj > m) continue;
          Unit u{Chunk(in.begin() + static_cast<long>(i),
                       in.begin() + static_cast<long>(i + di)),
                 Chunk(out.begin() + static_cast<long>(j),
                       out.begin() + static_cast<long>(j + dj))};
          auto it = prob.find(u);
          if (it == prob.end() || it->second <= 0.0) continue;
          const double cand = best[i][j] + std::log(it->second);
          if (cand > best[i + di][j + dj]) {
            best[i + di][j + dj] = cand;
            back[i + di][j + dj] = {di, dj};
          }
        }
    }
  std::vector<Unit> unitseq;
  if (best[n][m] == kNegInf) return unitseq;  // caller treats as skip
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const Back b = back[i][j];
    i -= static_cast<std::size_t>(b.di);
    j -= static_cast<std::size_t>(b.dj);
    unitseq.push_back({Chunk(pair.first.begin() + static_cast<long>(i),
                             pair.first.begin() +
                                 static_cast<long>(i + b.di)),
                       Chunk(pair.second.begin() + static_cast<long>(j),
                             pair.second.begin() +
                                 static_cast<long>(j + b.dj))});
  }
  std::reverse(unitseq.begin(), unitseq.end());
  return unitseq;
}

}  // namespace

const char* direction_name(Direction d) {
  return d == Direction::G2P ? "g2p" : "p2g";
}

Direction direction_from_name(const std::string& name) {
  if (name == "g2p") return Direction::G2P;
  if (name == "p2g") return Direction::P2G;
  throw ArgumentError("unknown transducer direction: " + name);
}

std::vector<int> letters_to_ids(const std::string& word) {
  std::vector<int> out;
  for (char c : lowercase(word))
    if (c >= 'a' && c <= 'z') out.push_back(c - 'a');
  return out;
}

std::string ids_to_letters(const std::vector<int>& ids) {
  std::string out;
  for (int id : ids) {
    if (id < 0 || id >= 26) throw ArgumentError("letter id out of range");
    out.push_back(static_cast<char>('a' + id));
  }
  return out;
}

void Transducer::index_units() {
  by_input_.clear();
  for (std::size_t id = 0; id < units_.size(); ++id)
    by_input_[units_[id].first].push_back(static_cast<int>(id));
}

Transducer Transducer::train(const PronLexicon& lexicon, Direction dir,
                             const TransducerConfig& config) {
  if (lexicon.size() == 0)
    throw ArgumentError("transducer: empty lexicon");

  std::vector<SeqPair> pairs;
  std::size_t skipped = 0;
  for (const auto& [word, prons] : lexicon.entries()) {
    const std::vector<int> letters = letters_to_ids(word);
    const std::vector<int>& phones = prons.front();
    if (letters.empty() || phones.empty()) {
      ++skipped;
      continue;
    }
    SeqPair p = dir == Direction::G2P ? SeqPair{letters, phones}
                                      : SeqPair{phones, letters};
    if (p.second.size() > 2 * p.first.size()) {
      ++skipped;
      continue;
    }
    pairs.push_back(std::move(p));
  }
  if (pairs.empty()) throw TrainingError("transducer: no alignable pairs");

  const int n_in_symbols = dir == Direction::G2P ? 26 : kNumPhonemes;

  auto fit = [&](const std::vector<SeqPair>& data)
      -> std::pair<std::vector<Unit>, NgramModel> {
    auto prob = em_align(data, config.em_iters);
    std::vector<std::vector<Unit>> unit_seqs;
    std::map<Unit, long long> unit_counts;
    for (const auto& p : data) {
      auto seq = viterbi_units(p, prob);
      if (seq.empty() && !p.first.empty()) continue;
      for (const auto& u : seq) ++unit_counts[u];
      unit_seqs.push_back(std::move(seq));
    }
    // Fallback coverage: every input symbol gets a single-symbol unit so
    // decoding is total. Output is the most common first symbol among
    // trained units containing that input symbol, empty if none.
    std::vector<Unit> units;
    for (const auto& [u, c] : unit_counts) units.push_back(u);
    for (int s = 0; s < n_in_symbols; ++s) {
      const Chunk single{s};
      bool covered = false;
      for (const auto& u : units)
        if (u.first == single) {
          covered = true;
          break;
        }
      if (covered) continue;
      std::map<int, long long> first_out;
      for (const auto& [u, c] : unit_counts) {
        if (std::find(u.first.begin(), u.first.end(), s) == u.first.end())
          continue;
        if (!u.second.empty()) first_out[u.second.front()] += c;
      }
      Chunk out;
      long long best = 0;
      for (const auto& [sym, c] : first_out)
        if (c > best) {
          best = c;
          out = {sym};
        }
      units.push_back({single, out});
    }
    std::sort(units.begin(), units.end());
    units.erase(std::unique(units.begin(), units.end()), units.end());

    std::map<Unit, int> unit_id;
    for (std::size_t i = 0; i < units.size(); ++i)
      unit_id[units[i]] = static_cast<int>(i);
    const int eos = static_cast<int>(units.size());
    NgramModel model(eos + 1, config.order);
    for (const auto& seq : unit_seqs) {
      std::vector<int> ids;
      ids.reserve(seq.size() + 1);
      for (const auto& u : seq) ids.push_back(unit_id.at(u));
      ids.push_back(eos);
      model.add_sequence(ids);
    }
    return {std::move(units), std::move(model)};
  };

  Transducer t(dir, config);
  t.stats_.pairs_used = pairs.size();
  t.stats_.pairs_skipped = skipped;

  // Held-out report: train on the remainder, score, then refit on all.
  if (config.heldout_fraction > 0.0 && pairs.size() >= 10) {
    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto rng = make_rng(derive_seed(config.seed, 0x9d2c));
    shuffle_vec(order, rng);
    const std::size_t n_held = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(
               config.heldout_fraction * static_cast<double>(pairs.size()))));
    std::vector<SeqPair> train_part, held_part;
    for (std::size_t i = 0; i < order.size(); ++i)
      (i < n_held ? held_part : train_part).push_back(pairs[order[i]]);
    auto [units, model] = fit(train_part);
    t.units_ = std::move(units);
    t.model_ = std::move(model);
    t.index_units();
    double dist = 0.0;
    for (const auto& [in, out] : held_part)
      dist += seq_edit_distance(t.apply(in), out);
    t.stats_.heldout_mean_edit = dist / static_cast<double>(held_part.size());
    t.stats_.heldout_size = held_part.size();
  }

  auto [units, model] = fit(pairs);
  t.units_ = std::move(units);
  t.model_ = std::move(model);
  t.index_units();
  return t;
}

std::vector<int> Transducer::apply(const std::vector<int>& input) const {
  if (input.empty()) return {};
  struct Hyp {
    std::vector<int> hist;
    std::vector<int> out;
    double score = 0.0;
  };
  auto better = [](const Hyp& a, const Hyp& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.out != b.out) return a.out < b.out;
    return a.hist < b.hist;
  };
  const std::size_t n = input.size();
  std::vector<std::vector<Hyp>> at(n + 1);
  at[0].push_back({});
  const int eos = static_cast<int>(units_.size());
  for (std::size_t pos = 0; pos < n; ++pos) {
    auto& layer = at[pos];
    if (layer.empty()) continue;
    std::sort(layer.begin(), layer.end(), better);
    if (layer.size() > static_cast<std::size_t>(config_.beam))
      layer.resize(static_cast<std::size_t>(config_.beam));
    for (const auto& hyp : layer) {
      for (int len = 1; len <= kMaxIn; ++len) {
        if (pos + static_cast<std::size_t>(len) > n) continue;
        Chunk chunk(input.begin() + static_cast<long>(pos),
                    input.begin() + static_cast<long>(pos) + len);
        auto it = by_input_.find(chunk);
        if (it == by_input_.end()) continue;
        for (int uid : it->second) {
          Hyp next = hyp;
          next.score += model_.log_prob(hyp.hist, uid);
          next.hist.push_back(uid);
          const auto& out = units_[static_cast<std::size_t>(uid)].second;
          next.out.insert(next.out.end(), out.begin(), out.end());
          at[pos + static_cast<std::size_t>(len)].push_back(std::move(next));
        }
      }
    }
  }
  auto& final_layer = at[n];
  if (final_layer.empty()) return {};
  for (auto& hyp : final_layer) hyp.score += model_.log_prob(hyp.hist, eos);
  std::sort(final_layer.begin(), final_layer.end(), better);
  const auto& best = final_layer.front();
  if (!best.out.empty()) return best.out;
  // Degenerate all-silent decode: fall back to per-symbol defaults.
  std::vector<int> out;
  for (int s : input) {
    auto it = by_input_.find(Chunk{s});
    if (it == by_input_.end()) continue;
    for (int uid : it->second) {
      const auto& u = units_[static_cast<std::size_t>(uid)];
      if (!u.second.empty()) {
        out.push_back(u.second.front());
        break;
      }
    }
  }
  return out;
}

nlohmann::ordered_json Transducer::to_json() const {
  nlohmann::ordered_json j;
  j["direction"] = direction_name(dir_);
  j["order"] = config_.order;
  j["beam"] = config_.beam;
  j["em_iters"] = config_.em_iters;
  j["heldout_fraction"] = config_.heldout_fraction;
  j["seed"] = config_.seed;
  j["stats"] = {{"pairs_used", stats_.pairs_used},
                {"pairs_skipped", stats_.pairs_skipped},
                {"heldout_mean_edit", stats_.heldout_mean_edit},
                {"heldout_size", stats_.heldout_size}};
  nlohmann::ordered_json units = nlohmann::ordered_json::array();
  for (const auto& [in, out] : units_) units.push_back({in, out});
  j["units"] = std::move(units);
  j["model"] = model_.to_json();
  return j;
}

Transducer Transducer::from_json(const nlohmann::ordered_json& j) {
  TransducerConfig config;
  config.order = j.at("order").get<int>();
  config.beam = j.at("beam").get<int>();
  config.em_iters = j.at("em_iters").get<int>();
  config.heldout_fraction = j.at("heldout_fraction").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  Transducer t(direction_from_name(j.at("direction").get<std::string>()),
               config);
  const auto& stats = j.at("stats");
  t.stats_.pairs_used = stats.at("pairs_used").get<std::size_t>();
  t.stats_.pairs_skipped = stats.at("pairs_skipped").get<std::size_t>();
  t.stats_.heldout_mean_edit = stats.at("heldout_mean_edit").get<double>();
  t.stats_.heldout_size = stats.at("heldout_size").get<std::size_t>();
  for (const auto& u : j.at("units"))
    t.units_.push_back(
        {u.at(0).get<std::vector<int>>(), u.at(1).get<std::vector<int>>()});
  t.model_ = NgramModel::from_json(j.at("model"));
  t.index_units();
  return t;
}

Phonologizer::Phonologizer(PronLexicon lexicon, Transducer g2p,
                           Transducer p2g)
    : lexicon_(std::move(lexicon)),
      g2p_(std::move(g2p)),
      p2g_(std::move(p2g)) {
  if (g2p_.direction() != Direction::G2P ||
      p2g_.direction() != Direction::P2G)
    throw ArgumentError("phonologizer: transducer directions mismatched");
}

PhonemeSeq Phonologizer::pronounce(const std::string& word) const {
  if (const PhonemeSeq* entry = lexicon_.lookup(word)) return *entry;
  const std::vector<int> letters = letters_to_ids(word);
  if (letters.empty())
    throw ArgumentError("pronounce: no letters in input '" + word + "'");
  return g2p_.apply(letters);
}

std::string Phonologizer::spell(const PhonemeSeq& pron) const {
  return ids_to_letters(p2g_.apply(pron));
}

double Phonologizer::mir(const std::string& a, const std::string& b) const {
  return mir_seq(pronounce(a), pronounce(b));
}

}  // namespace morpho::phon
