#include "morphoforge/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <sstream>

#include "morphoforge/editops.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/util.hpp"

namespace morpho::evalharness {

namespace {

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

std::string hash_rows(const std::vector<std::string>& rows) {
  std::string all;
  for (const auto& r : rows) {
    all += r;
    all.push_back('\n');
  }
  return to_hex(fnv1a64(all));
}

std::string blends_hash(const std::vector<corpus::BlendInstance>& xs) {
  std::vector<std::string> rows;
  rows.reserve(xs.size());
  for (const auto& x : xs) rows.push_back(x.joined() + "\t" + x.blend);
  return hash_rows(rows);
}

std::string clips_hash(const std::vector<corpus::ClippingRecord>& xs) {
  std::vector<std::string> rows;
  rows.reserve(xs.size());
  for (const auto& x : xs)
    rows.push_back(x.source + "\t" + x.gold + "\t" +
                   corpus::clip_type_name(x.inferred_type));
  return hash_rows(rows);
}

std::string redups_hash(const std::vector<corpus::ReduplicativePair>& xs) {
  std::vector<std::string> rows;
  rows.reserve(xs.size());
  for (const auto& x : xs) rows.push_back(x.base + "\t" + x.reduplicant);
  return hash_rows(rows);
}

nlohmann::ordered_json tagger_config_json(const tagger::TaggerConfig& c) {
  nlohmann::ordered_json j;
  j["hidden"] = c.hidden;
  j["dropout"] = c.dropout;
  j["learning_rate"] = c.learning_rate;
  j["max_epochs"] = c.max_epochs;
  j["patience"] = c.patience;
  j["bidirectional"] = c.bidirectional;
  return j;
}

std::vector<tagger::TaggedInstance> to_tagged(
    const std::vector<corpus::BlendInstance>& insts) {
  std::vector<tagger::TaggedInstance> out;
  out.reserve(insts.size());
  for (const auto& inst : insts)
    out.push_back({inst.joined(),
                   editops::encode_labels(inst.joined(), inst.blend)});
  return out;
}

std::vector<corpus::BlendInstance> gather(
    const std::vector<corpus::BlendInstance>& all,
    const std::vector<std::size_t>& idx) {
  std::vector<corpus::BlendInstance> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(all[i]);
  return out;
}

}  // namespace

nlohmann::ordered_json EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = "eval_report";
  j["format_version"] = 1;
  j["task"] = task;
  j["metadata"] = metadata;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& m : modes) {
    nlohmann::ordered_json row;
    row["mode"] = m.mode;
    row["mu"] = m.mu;
    row["per_item"] = m.per_item;
    rows.push_back(row);
  }
  j["modes"] = rows;
  return j;
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << "task: " << task << "\n";
  for (const auto& [key, value] : metadata.items()) {
    if (value.is_string())
      out << key << ": " << value.get<std::string>() << "\n";
    else
      out << key << ": " << value.dump() << "\n";
  }
  std::size_t width = 4;
  for (const auto& m : modes) width = std::max(width, m.mode.size());
  out << "\n"
      << std::left << std::setw(static_cast<int>(width) + 2) << "mode"
      << std::right << std::setw(8) << "mu" << std::setw(8) << "items"
      << "\n";
  for (const auto& m : modes) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << m.mode
        << std::right << std::setw(8) << std::fixed << std::setprecision(2)
        << m.mu << std::setw(8) << m.per_item.size() << "\n";
  }
  return out.str();
}

std::string blend_protocol_name(BlendProtocol p) {
  return p == BlendProtocol::Cv10 ? "cv10" : "blind";
}

BlendProtocol blend_protocol_from_name(const std::string& name) {
  if (name == "cv10") return BlendProtocol::Cv10;
  if (name == "blind") return BlendProtocol::Blind;
  throw ArgumentError("unknown blend protocol: " + name);
}

BlendTrainFn default_blend_trainer(const BlendEvalOptions& options,
                                   const tagger::EmbeddingTable& emb,
                                   std::vector<std::string> lm_corpus) {
  auto lm = std::make_shared<rankers::CharLM>(
      rankers::CharLM::train(lm_corpus, options.lm_order));
  auto emb_copy = std::make_shared<tagger::EmbeddingTable>(emb);
  auto opts = options;
  return [lm, emb_copy, opts](const std::vector<corpus::BlendInstance>& train,
                              const std::vector<corpus::BlendInstance>& val,
                              std::uint64_t seed) -> BlendPredictFn {
    auto config = opts.config;
    config.seed = seed;
    auto members = std::make_shared<std::vector<tagger::TaggerModel>>(
        rankers::train_ensemble(to_tagged(train), to_tagged(val), config,
                                *emb_copy,
                                static_cast<int>(opts.ensemble_size)));
    auto length = std::make_shared<rankers::LengthModel>(
        rankers::LengthModel::fit(train));
    int k = opts.k;
    return [members, lm, length, k](const corpus::BlendInstance& inst,
                                    rankers::Mode mode) {
      return rankers::predict_blend(*members, lm.get(), length.get(),
                                    inst.joined(), mode, k);
    };
  };
}

EvalReport eval_blends(const std::vector<corpus::BlendInstance>& dataset,
                       const std::vector<corpus::BlendInstance>& blind,
                       BlendProtocol protocol,
                       const std::vector<rankers::Mode>& modes,
                       const BlendEvalOptions& options,
                       const BlendTrainFn& trainer) {
  if (modes.empty()) throw ArgumentError("no blend modes requested");

  EvalReport report;
  report.task = "blends";
  report.metadata["protocol"] = blend_protocol_name(protocol);
  report.metadata["seed"] = options.seed;
  report.metadata["n"] = dataset.size();
  report.metadata["dataset_hash"] = blends_hash(dataset);
  report.metadata["k"] = options.k;
  report.metadata["lm_order"] = options.lm_order;
  report.metadata["ensemble_size"] = options.ensemble_size;
  report.metadata["tagger"] = tagger_config_json(options.config);

  std::vector<std::string> mode_names;
  for (auto m : modes) mode_names.push_back(rankers::mode_name(m));

  if (protocol == BlendProtocol::Cv10) {
    if (dataset.size() < static_cast<std::size_t>(options.folds) * 2)
      throw ArgumentError("dataset too small for cross-validation");
    report.metadata["folds"] = options.folds;

    std::vector<std::vector<double>> per_item(
        modes.size(), std::vector<double>(dataset.size(), 0.0));
    auto splits = corpus::make_kfold_splits(dataset.size(), options.folds,
                                            derive_seed(options.seed, 0xcf10));
    for (std::size_t f = 0; f < splits.size(); ++f) {
      auto [train_idx, val_idx] = corpus::split_train_val(
          splits[f].train, 0.1, derive_seed(options.seed, 0xca1e, f));
      auto predictor = trainer(gather(dataset, train_idx),
                               gather(dataset, val_idx),
                               derive_seed(options.seed, 0x5eed, f));
      for (auto i : splits[f].test) {
        for (std::size_t m = 0; m < modes.size(); ++m) {
          auto pred = predictor(dataset[i], modes[m]);
          per_item[m][i] = static_cast<double>(
              editops::levenshtein(pred, dataset[i].blend));
        }
      }
    }
    for (std::size_t m = 0; m < modes.size(); ++m) {
      report.modes.push_back(
          {mode_names[m], mean_of(per_item[m]), std::move(per_item[m])});
    }
    return report;
  }

  if (dataset.size() < 2) throw ArgumentError("dataset too small for blind");
  if (blind.empty()) throw ArgumentError("blind evaluation set is empty");
  report.metadata["runs"] = options.runs;
  report.metadata["n_blind"] = blind.size();
  report.metadata["blind_hash"] = blends_hash(blind);

  std::vector<std::size_t> all(dataset.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  std::vector<std::vector<double>> per_item(
      modes.size(), std::vector<double>(blind.size(), 0.0));
  for (int r = 0; r < options.runs; ++r) {
    auto [train_idx, val_idx] = corpus::split_train_val(
        all, 0.1, derive_seed(options.seed, 0xb11d, r));
    auto predictor =
        trainer(gather(dataset, train_idx), gather(dataset, val_idx),
                derive_seed(options.seed, 0x5eed, r));
    for (std::size_t i = 0; i < blind.size(); ++i) {
      for (std::size_t m = 0; m < modes.size(); ++m) {
        auto pred = predictor(blind[i], modes[m]);
        per_item[m][i] += static_cast<double>(
            editops::levenshtein(pred, blind[i].blend));
      }
    }
  }
  for (std::size_t m = 0; m < modes.size(); ++m) {
    for (auto& v : per_item[m]) v /= static_cast<double>(options.runs);
    report.modes.push_back(
        {mode_names[m], mean_of(per_item[m]), std::move(per_item[m])});
  }
  return report;
}

ClipSystemFn default_clip_system(const phon::Phonologizer& phonologizer) {
  const auto* ph = &phonologizer;
  return [ph](const std::vector<corpus::ClippingRecord>& train,
              std::uint64_t) -> ClipPredictFn {
    auto model = std::make_shared<clippings::ClipModel>(
        clippings::fit_clip_model(train, *ph));
    return [model, ph](const corpus::ClippingRecord& rec,
                       clippings::ClipMode mode, std::uint64_t item_seed) {
      return clippings::predict_clipping(*model, *ph, rec.source, mode,
                                         rec.gold, item_seed);
    };
  };
}

EvalReport eval_clippings(const std::vector<corpus::ClippingRecord>& records,
                          const std::vector<clippings::ClipMode>& modes,
                          const ClipEvalOptions& options,
                          const ClipSystemFn& system) {
  if (modes.empty()) throw ArgumentError("no clipping modes requested");
  if (options.runs < 1) throw ArgumentError("runs must be positive");
  const std::size_t n = records.size();
  auto train_size = static_cast<std::size_t>(
      std::llround(options.train_fraction * static_cast<double>(n)));
  if (train_size == 0 || train_size >= n)
    throw ArgumentError("dataset too small for the clipping split");
  const std::size_t test_size = n - train_size;

  EvalReport report;
  report.task = "clippings";
  report.metadata["metric"] = "edit_distance";
  report.metadata["seed"] = options.seed;
  report.metadata["runs"] = options.runs;
  report.metadata["n"] = n;
  report.metadata["train_size"] = train_size;
  report.metadata["test_size"] = test_size;
  report.metadata["dataset_hash"] = clips_hash(records);

  std::vector<std::vector<double>> per_item(modes.size());
  for (int r = 0; r < options.runs; ++r) {
    auto split = corpus::make_holdout_split(
        n, test_size, derive_seed(options.seed, 0xc11b, r));
    std::vector<corpus::ClippingRecord> train;
    train.reserve(split.train.size());
    for (auto i : split.train) train.push_back(records[i]);
    auto predictor = system(train, derive_seed(options.seed, 0x5eed, r));
    for (auto i : split.test) {
      auto item_seed = derive_seed(options.seed, r, i);
      for (std::size_t m = 0; m < modes.size(); ++m) {
        auto pred = predictor(records[i], modes[m], item_seed);
        per_item[m].push_back(static_cast<double>(
            editops::levenshtein(pred, records[i].gold)));
      }
    }
  }
  for (std::size_t m = 0; m < modes.size(); ++m) {
    report.modes.push_back({clippings::clip_mode_name(modes[m]),
                            mean_of(per_item[m]), std::move(per_item[m])});
  }
  return report;
}

RedupSystemFn default_redup_system() {
  return [](const std::vector<corpus::ReduplicativePair>& train,
            std::uint64_t) -> RedupGenFn {
    auto model = std::make_shared<redup::RedupModel>(
        redup::fit_redup_model(train));
    return [model](const corpus::ReduplicativePair& pair,
                   const std::string& mode, std::uint64_t item_seed) {
      if (mode == "Model")
        return redup::generate_redup(*model, pair.base, true,
                                     redup::RedupMode::Model, item_seed)
            .word;
      if (mode == "Model(NoDup)")
        return redup::generate_redup(*model, pair.base, false,
                                     redup::RedupMode::Model, item_seed)
            .word;
      if (mode == "Let")
        return redup::generate_redup(*model, pair.base, true,
                                     redup::RedupMode::Let, item_seed)
            .word;
      if (mode == "LetCond")
        return redup::generate_redup(*model, pair.base, true,
                                     redup::RedupMode::LetCond, item_seed)
            .word;
      throw ArgumentError("unknown reduplication eval mode: " + mode);
    };
  };
}

EvalReport eval_redups(const std::vector<corpus::ReduplicativePair>& pairs,
                       const std::vector<std::string>& modes,
                       const phon::Phonologizer& phonologizer,
                       const RedupEvalOptions& options,
                       const RedupSystemFn& system) {
  if (modes.empty()) throw ArgumentError("no reduplication modes requested");
  if (options.runs < 1) throw ArgumentError("runs must be positive");

  EvalReport report;
  report.task = "reduplicatives";
  report.metadata["metric"] = "mir";
  report.metadata["seed"] = options.seed;
  report.metadata["runs"] = options.runs;
  report.metadata["n"] = pairs.size();
  report.metadata["test_size"] = options.test_size;
  report.metadata["dataset_hash"] = redups_hash(pairs);

  std::vector<std::vector<double>> per_item(modes.size());
  for (int r = 0; r < options.runs; ++r) {
    auto split = corpus::make_holdout_split(
        pairs.size(), options.test_size,
        derive_seed(options.seed, 0xed0b, r));
    std::vector<corpus::ReduplicativePair> train;
    train.reserve(split.train.size());
    for (auto i : split.train) train.push_back(pairs[i]);
    auto generator = system(train, derive_seed(options.seed, 0x5eed, r));
    for (auto i : split.test) {
      auto item_seed = derive_seed(options.seed, r, i);
      for (std::size_t m = 0; m < modes.size(); ++m) {
        auto generated = generator(pairs[i], modes[m], item_seed);
        per_item[m].push_back(
            phonologizer.mir(generated, pairs[i].reduplicant));
      }
    }
  }
  for (std::size_t m = 0; m < modes.size(); ++m) {
    report.modes.push_back(
        {modes[m], mean_of(per_item[m]), std::move(per_item[m])});
  }
  return report;
}

}  // namespace morpho::evalharness
