#include "morphoforge/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>

#include "morphoforge/errors.hpp"
#include "morphoforge/util.hpp"

namespace morpho::tagger {

namespace {

using nn::Mat;
using nn::Vec;

std::uint64_t hash_doubles(std::uint64_t h, const Mat& m) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      double d = m(r, c);
      std::uint64_t bits = 0;
      std::memcpy(&bits, &d, sizeof(bits));
      for (int k = 0; k < 8; ++k) {
        h ^= (bits >> (8 * k)) & 0xff;
        h *= 0x100000001b3ull;
      }
    }
  }
  return h;
}

void param_from_value(nn::Param& p, const Mat& value) {
  p.init(static_cast<int>(value.rows()), static_cast<int>(value.cols()));
  p.value = value;
}

}  // namespace

int char_row(char c) {
  if (c >= 'a' && c <= 'z') return c - 'a';
  if (c == '#') return kSeparatorRow;
  return kUnkRow;
}

std::uint64_t EmbeddingTable::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = hash_doubles(h, table);
  return h;
}

EmbeddingTable EmbeddingTable::random(int dim, std::uint64_t seed) {
  if (dim < 1) throw ArgumentError("embedding dim must be positive");
  EmbeddingTable t;
  t.seed = seed;
  t.table = Mat::Zero(kEmbVocab, dim);
  auto rng = make_rng(derive_seed(seed, 0x51ee));
  nn::xavier_init(t.table, rng);
  return t;
}

nlohmann::ordered_json EmbeddingTable::to_json() const {
  nlohmann::ordered_json j;
  j["dim"] = dim();
  j["seed"] = seed;
  j["heldout_ppl_init"] = heldout_ppl_init;
  j["heldout_ppl_final"] = heldout_ppl_final;
  j["table"] = nn::mat_to_json(table);
  return j;
}

EmbeddingTable EmbeddingTable::from_json(const nlohmann::ordered_json& j) {
  EmbeddingTable t;
  t.seed = j.at("seed").get<std::uint64_t>();
  t.heldout_ppl_init = j.at("heldout_ppl_init").get<double>();
  t.heldout_ppl_final = j.at("heldout_ppl_final").get<double>();
  t.table = nn::mat_from_json(j.at("table"));
  if (t.table.rows() != kEmbVocab)
    throw ValidationError("embedding table must have " +
                          std::to_string(kEmbVocab) + " rows");
  return t;
}

EmbeddingTable train_char_embeddings(const std::vector<std::string>& words,
                                     int dim, std::uint64_t seed,
                                     int epochs) {
  if (dim < 1) throw ArgumentError("embedding dim must be positive");
  if (epochs < 0) throw ArgumentError("epochs must be nonnegative");

  std::set<std::string> uniq;
  for (const auto& w : words) {
    std::string clean;
    for (char c : lowercase(w))
      if (c >= 'a' && c <= 'z') clean.push_back(c);
    if (!clean.empty()) uniq.insert(clean);
  }
  std::vector<std::string> vocab(uniq.begin(), uniq.end());
  if (vocab.empty()) throw ArgumentError("no usable words for embeddings");

  // The LM predicts a-z plus the boundary '#'; UNK is input-only and its
  // row is never touched by training.
  constexpr int kTargets = kEmbVocab - 1;

  nn::Param emb;
  emb.init(kEmbVocab, dim);
  auto init_rng = make_rng(derive_seed(seed, 0x5e17));
  nn::xavier_init(emb.value, init_rng);
  const Mat initial_table = emb.value;

  nn::LstmWeights lstm;
  lstm.init(dim, dim, init_rng);
  nn::Param out_w, out_b;
  out_w.init(kTargets, dim);
  nn::xavier_init(out_w.value, init_rng);
  out_b.init(kTargets, 1);

  std::vector<nn::Param*> params = {&emb, &lstm.wx, &lstm.wh, &lstm.b,
                                    &out_w, &out_b};

  auto split_rng = make_rng(derive_seed(seed, 0xe3b0));
  std::vector<int> order(vocab.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<int>(i);
  shuffle_vec(order, split_rng);
  std::size_t heldout_n = vocab.size() >= 20 ? vocab.size() / 10 : 0;
  std::vector<int> heldout(order.begin(), order.begin() + heldout_n);
  std::vector<int> train(order.begin() + heldout_n, order.end());
  if (train.empty()) {
    train = order;
    heldout.clear();
  }

  // Inputs are '#' + word, targets are word + '#'.
  auto rows_for = [](const std::string& w) {
    std::vector<int> rows;
    rows.push_back(kSeparatorRow);
    for (char c : w) rows.push_back(char_row(c));
    return rows;
  };

  auto word_pass = [&](const std::string& w, bool update,
                       long long adam_t) -> std::pair<double, int> {
    auto rows = rows_for(w);
    int steps = static_cast<int>(rows.size());
    std::vector<Vec> xs(steps);
    for (int t = 0; t < steps; ++t) xs[t] = emb.value.row(rows[t]).transpose();
    nn::LstmTrace trace;
    nn::lstm_forward(lstm, xs, trace);

    std::vector<int> targets;
    for (char c : w) targets.push_back(char_row(c));
    targets.push_back(kSeparatorRow);

    double total = 0.0;
    std::vector<Vec> dh(steps, Vec::Zero(dim));
    for (int t = 0; t < steps; ++t) {
      Vec logits = out_w.value * trace.h[t] + out_b.value.col(0);
      Vec p = nn::softmax(logits);
      total += -std::log(std::max(p[targets[t]], 1e-300));
      if (update) {
        Vec dlogits = p;
        dlogits[targets[t]] -= 1.0;
        dlogits /= static_cast<double>(steps);
        out_w.grad += dlogits * trace.h[t].transpose();
        out_b.grad.col(0) += dlogits;
        dh[t] = out_w.value.transpose() * dlogits;
      }
    }
    if (update) {
      auto dx = nn::lstm_backward(lstm, trace, dh);
      for (int t = 0; t < steps; ++t)
        emb.grad.row(rows[t]) += dx[t].transpose();
      nn::adam_step(params, 0.001, adam_t);
      for (auto* p : params) p->zero_grad();
    }
    return {total, steps};
  };

  auto heldout_ppl = [&]() {
    if (heldout.empty()) return 0.0;
    double total = 0.0;
    long long count = 0;
    for (int i : heldout) {
      auto [nll, steps] = word_pass(vocab[i], false, 0);
      total += nll;
      count += steps;
    }
    return std::exp(total / static_cast<double>(count));
  };

  double ppl_init = heldout_ppl();

  long long adam_t = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    auto epoch_rng =
        make_rng(derive_seed(seed, 0x0e90c, epoch));
    shuffle_vec(train, epoch_rng);
    for (int i : train) {
      auto [nll, steps] = word_pass(vocab[i], true, ++adam_t);
      if (!std::isfinite(nll))
        throw TrainingError("embedding training diverged at epoch " +
                            std::to_string(epoch + 1));
      (void)steps;
    }
  }

  EmbeddingTable result;
  result.seed = seed;
  result.table = emb.value;
  result.heldout_ppl_init = ppl_init;
  result.heldout_ppl_final = heldout_ppl();
  // The UNK row takes no gradient; keep the bit pattern as initialized.
  result.table.row(kUnkRow) = initial_table.row(kUnkRow);
  return result;
}

void TaggerModel::init_weights(std::mt19937_64& rng) {
  int h = config_.hidden;
  int d = emb_.dim();
  fwd_.init(h, d, rng);
  if (config_.bidirectional) bwd_.init(h, d, rng);
  int od = config_.bidirectional ? 2 * h : h;
  out_w.init(2, od);
  nn::xavier_init(out_w.value, rng);
  out_b.init(2, 1);
}

std::vector<nn::Param*> TaggerModel::params() {
  std::vector<nn::Param*> ps = fwd_.params();
  if (config_.bidirectional)
    for (auto* p : bwd_.params()) ps.push_back(p);
  ps.push_back(&out_w);
  ps.push_back(&out_b);
  return ps;
}

std::vector<Vec> TaggerModel::hidden_states(const std::string& joined) const {
  int n = static_cast<int>(joined.size());
  std::vector<Vec> xs(n);
  for (int t = 0; t < n; ++t) xs[t] = emb_.embed(joined[t]);

  nn::LstmTrace ftr;
  nn::lstm_forward(fwd_, xs, ftr);
  if (!config_.bidirectional) return ftr.h;

  std::vector<Vec> rev(xs.rbegin(), xs.rend());
  nn::LstmTrace btr;
  nn::lstm_forward(bwd_, rev, btr);

  int h = config_.hidden;
  std::vector<Vec> states(n);
  for (int t = 0; t < n; ++t) {
    Vec s(2 * h);
    s.head(h) = ftr.h[t];
    s.tail(h) = btr.h[n - 1 - t];
    states[t] = s;
  }
  return states;
}

std::vector<std::array<double, 2>> TaggerModel::label_distributions(
    const std::string& joined) const {
  if (joined.empty()) throw ArgumentError("empty input to tagger");
  auto states = hidden_states(joined);
  std::vector<std::array<double, 2>> dists(states.size());
  for (std::size_t t = 0; t < states.size(); ++t) {
    Vec p = nn::softmax(out_w.value * states[t] + out_b.value.col(0));
    dists[t] = {p[0], p[1]};
  }
  return dists;
}

double TaggerModel::sequence_score(const std::string& joined,
                                   const editops::LabelSeq& labels) const {
  if (labels.size() != joined.size())
    throw ArgumentError("label sequence length mismatch");
  auto dists = label_distributions(joined);
  double total = 0.0;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    int k = labels[t] == editops::Label::Copy ? 0 : 1;
    total += std::log(std::max(dists[t][k], 1e-300));
  }
  return total / static_cast<double>(labels.size());
}

double TaggerModel::loss(const TaggedInstance& inst) const {
  return -sequence_score(inst.joined, inst.labels);
}

double TaggerModel::train_step(const TaggedInstance& inst,
                               std::mt19937_64& drop_rng, long long adam_t) {
  if (inst.labels.size() != inst.joined.size())
    throw ArgumentError("label sequence length mismatch");
  int n = static_cast<int>(inst.joined.size());
  int h = config_.hidden;
  int od = config_.bidirectional ? 2 * h : h;

  std::vector<Vec> xs(n);
  for (int t = 0; t < n; ++t) xs[t] = emb_.embed(inst.joined[t]);

  nn::LstmTrace ftr, btr;
  nn::lstm_forward(fwd_, xs, ftr);
  if (config_.bidirectional) {
    std::vector<Vec> rev(xs.rbegin(), xs.rend());
    nn::lstm_forward(bwd_, rev, btr);
  }

  double keep = 1.0 - config_.dropout;
  std::vector<Vec> masks(n);
  std::vector<Vec> states(n), dropped(n);
  for (int t = 0; t < n; ++t) {
    Vec s(od);
    if (config_.bidirectional) {
      s.head(h) = ftr.h[t];
      s.tail(h) = btr.h[n - 1 - t];
    } else {
      s = ftr.h[t];
    }
    states[t] = s;
    Vec mask = Vec::Ones(od);
    if (config_.dropout > 0.0) {
      for (int k = 0; k < od; ++k)
        mask[k] = uniform_real01(drop_rng) < keep ? 1.0 / keep : 0.0;
    }
    masks[t] = mask;
    dropped[t] = s.cwiseProduct(mask);
  }

  double total = 0.0;
  std::vector<Vec> dh_fwd(n, Vec::Zero(h));
  std::vector<Vec> dh_bwd;
  if (config_.bidirectional) dh_bwd.assign(n, Vec::Zero(h));

  for (auto* p : params()) p->zero_grad();
  for (int t = 0; t < n; ++t) {
    Vec p = nn::softmax(out_w.value * dropped[t] + out_b.value.col(0));
    int target = inst.labels[t] == editops::Label::Copy ? 0 : 1;
    total += -std::log(std::max(p[target], 1e-300));
    Vec dlogits = p;
    dlogits[target] -= 1.0;
    dlogits /= static_cast<double>(n);
    out_w.grad += dlogits * dropped[t].transpose();
    out_b.grad.col(0) += dlogits;
    Vec ds = (out_w.value.transpose() * dlogits).cwiseProduct(masks[t]);
    if (config_.bidirectional) {
      dh_fwd[t] = ds.head(h);
      dh_bwd[n - 1 - t] = ds.tail(h);
    } else {
      dh_fwd[t] = ds;
    }
  }

  nn::lstm_backward(fwd_, ftr, dh_fwd);
  if (config_.bidirectional) nn::lstm_backward(bwd_, btr, dh_bwd);
  nn::adam_step(params(), config_.learning_rate, adam_t);
  return total / static_cast<double>(n);
}

TaggerModel TaggerModel::train(const std::vector<TaggedInstance>& train_set,
                               const std::vector<TaggedInstance>& val_set,
                               const TaggerConfig& config,
                               const EmbeddingTable& emb) {
  if (train_set.empty()) throw ArgumentError("empty tagger training set");
  if (val_set.empty()) throw ArgumentError("empty tagger validation set");
  if (config.hidden < 1) throw ArgumentError("hidden size must be positive");
  if (config.dropout < 0.0 || config.dropout >= 1.0)
    throw ArgumentError("dropout must be in [0, 1)");

  TaggerModel model;
  model.emb_ = emb;
  model.config_ = config;
  auto rng = make_rng(derive_seed(config.seed, 0x7a99));
  model.init_weights(rng);

  auto val_loss = [&]() {
    double total = 0.0;
    for (const auto& inst : val_set) total += model.loss(inst);
    return total / static_cast<double>(val_set.size());
  };

  std::vector<int> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<int>(i);

  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  std::vector<Mat> best_values;
  auto snapshot = [&]() {
    best_values.clear();
    for (auto* p : model.params()) best_values.push_back(p->value);
  };
  snapshot();

  long long adam_t = 0;
  int epochs_run = 0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    epochs_run = epoch;
    auto epoch_rng =
        make_rng(derive_seed(config.seed, 0x0e90c, epoch));
    shuffle_vec(order, epoch_rng);
    auto drop_rng =
        make_rng(derive_seed(config.seed, 0xd309, epoch));
    for (int i : order) {
      double l = model.train_step(train_set[i], drop_rng, ++adam_t);
      if (!std::isfinite(l))
        throw TrainingError("tagger training diverged at epoch " +
                            std::to_string(epoch));
    }
    double vl = val_loss();
    if (!std::isfinite(vl))
      throw TrainingError("tagger training diverged at epoch " +
                          std::to_string(epoch));
    if (vl < best_val) {
      best_val = vl;
      best_epoch = epoch;
      snapshot();
    } else if (epoch - best_epoch >= config.patience) {
      break;
    }
  }

  auto ps = model.params();
  for (std::size_t i = 0; i < ps.size(); ++i) ps[i]->value = best_values[i];
  model.meta_.epochs_run = epochs_run;
  model.meta_.best_val_loss = best_val;
  return model;
}

TaggerModel TaggerModel::random(const TaggerConfig& config,
                                const EmbeddingTable& emb) {
  if (config.hidden < 1) throw ArgumentError("hidden size must be positive");
  TaggerModel model;
  model.emb_ = emb;
  model.config_ = config;
  auto rng = make_rng(derive_seed(config.seed, 0x7a99));
  model.init_weights(rng);
  return model;
}

nlohmann::ordered_json TaggerModel::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = {{"hidden", config_.hidden},
                 {"dropout", config_.dropout},
                 {"learning_rate", config_.learning_rate},
                 {"max_epochs", config_.max_epochs},
                 {"patience", config_.patience},
                 {"bidirectional", config_.bidirectional},
                 {"seed", config_.seed}};
  j["meta"] = {{"epochs_run", meta_.epochs_run},
               {"best_val_loss", meta_.best_val_loss}};
  j["embeddings"] = emb_.to_json();
  j["fwd"] = {{"wx", nn::mat_to_json(fwd_.wx.value)},
              {"wh", nn::mat_to_json(fwd_.wh.value)},
              {"b", nn::mat_to_json(fwd_.b.value)}};
  if (config_.bidirectional)
    j["bwd"] = {{"wx", nn::mat_to_json(bwd_.wx.value)},
                {"wh", nn::mat_to_json(bwd_.wh.value)},
                {"b", nn::mat_to_json(bwd_.b.value)}};
  j["out_w"] = nn::mat_to_json(out_w.value);
  j["out_b"] = nn::mat_to_json(out_b.value);
  return j;
}

TaggerModel TaggerModel::from_json(const nlohmann::ordered_json& j) {
  TaggerModel model;
  const auto& c = j.at("config");
  model.config_.hidden = c.at("hidden").get<int>();
  model.config_.dropout = c.at("dropout").get<double>();
  model.config_.learning_rate = c.at("learning_rate").get<double>();
  model.config_.max_epochs = c.at("max_epochs").get<int>();
  model.config_.patience = c.at("patience").get<int>();
  model.config_.bidirectional = c.at("bidirectional").get<bool>();
  model.config_.seed = c.at("seed").get<std::uint64_t>();
  const auto& m = j.at("meta");
  model.meta_.epochs_run = m.at("epochs_run").get<int>();
  model.meta_.best_val_loss = m.at("best_val_loss").get<double>();
  model.emb_ = EmbeddingTable::from_json(j.at("embeddings"));

  param_from_value(model.fwd_.wx, nn::mat_from_json(j.at("fwd").at("wx")));
  param_from_value(model.fwd_.wh, nn::mat_from_json(j.at("fwd").at("wh")));
  param_from_value(model.fwd_.b, nn::mat_from_json(j.at("fwd").at("b")));
  if (model.config_.bidirectional) {
    param_from_value(model.bwd_.wx, nn::mat_from_json(j.at("bwd").at("wx")));
    param_from_value(model.bwd_.wh, nn::mat_from_json(j.at("bwd").at("wh")));
    param_from_value(model.bwd_.b, nn::mat_from_json(j.at("bwd").at("b")));
  }
  param_from_value(model.out_w, nn::mat_from_json(j.at("out_w")));
  param_from_value(model.out_b, nn::mat_from_json(j.at("out_b")));
  return model;
}

double gradient_check(TaggerModel& model, const TaggedInstance& inst,
                      double epsilon) {
  if (inst.labels.size() != inst.joined.size())
    throw ArgumentError("label sequence length mismatch");

  // Analytic pass with dropout off: reuse the training step machinery by
  // temporarily zeroing dropout and skipping the optimizer.
  double saved_dropout = model.config_.dropout;
  double saved_lr = model.config_.learning_rate;
  model.config_.dropout = 0.0;
  model.config_.learning_rate = 0.0;
  auto dummy_rng = make_rng(0);
  model.train_step(inst, dummy_rng, 1);
  // Undo the zero-lr Adam step's moment updates so numeric probing sees
  // clean state.
  for (auto* p : model.params()) {
    p->m.setZero();
    p->v.setZero();
  }
  model.config_.dropout = saved_dropout;
  model.config_.learning_rate = saved_lr;

  std::vector<Mat> grads;
  for (auto* p : model.params()) grads.push_back(p->grad);

  double max_rel = 0.0;
  auto ps = model.params();
  for (std::size_t pi = 0; pi < ps.size(); ++pi) {
    Mat& value = ps[pi]->value;
    for (int r = 0; r < value.rows(); ++r) {
      for (int c = 0; c < value.cols(); ++c) {
        double old = value(r, c);
        value(r, c) = old + epsilon;
        double lp = model.loss(inst);
        value(r, c) = old - epsilon;
        double lm = model.loss(inst);
        value(r, c) = old;
        double numeric = (lp - lm) / (2.0 * epsilon);
        double analytic = grads[pi](r, c);
        // Floor on the denominator: entries below finite-difference
        // resolution are held to an absolute tolerance instead, and the
        // zero-gradient direction cannot divide by zero.
        double denom =
            std::max({std::abs(numeric), std::abs(analytic), 1e-5});
        max_rel = std::max(max_rel, std::abs(numeric - analytic) / denom);
      }
    }
  }
  return max_rel;
}

}  // namespace morpho::tagger
