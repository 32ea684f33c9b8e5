#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "morphoforge/clippings.hpp"
#include "morphoforge/corpus.hpp"
#include "morphoforge/editops.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/evalharness.hpp"
#include "morphoforge/fixtures.hpp"
#include "morphoforge/phonology.hpp"
#include "morphoforge/rankers.hpp"
#include "morphoforge/redup.hpp"
#include "morphoforge/tagger.hpp"
#include "morphoforge/transducer.hpp"
#include "morphoforge/util.hpp"

namespace {

using namespace morpho;

struct RunConfig {
  std::string data;
  std::string blind_data;
  std::string model;
  std::string out;
  std::string out_dir = "data/fixtures";
  std::string mode;
  std::string input;
  std::string gold;
  std::string lexicon;
  std::string a, b;
  std::string joined, blend;
  std::string protocol = "cv10";
  int k = 5;
  int runs = 10;
  std::uint64_t seed = 0;
  int ensemble = 5;
  int folds = 10;
  int hidden = 50;
  double dropout = 0.5;
  double learning_rate = 0.001;
  int max_epochs = 500;
  int patience = 10;
  bool unidirectional = false;
  int emb_dim = 50;
  int emb_epochs = 10;
  int lm_order = 5;
  double train_fraction = 0.7;
  std::size_t test_size = 50;
  bool no_dup = false;
  bool candidates = false;
};

std::string require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ArgumentError("missing required " + what + " path");
  if (!file_exists(path)) throw IoError("no such file: " + path);
  return path;
}

std::string resolve_lexicon(const RunConfig& cfg) {
  if (!cfg.lexicon.empty()) return require_file(cfg.lexicon, "lexicon");
  if (const char* env = std::getenv("MORPHOFORGE_LEXICON"))
    return require_file(env, "lexicon");
  throw ArgumentError(
      "no lexicon given; pass --lexicon or set MORPHOFORGE_LEXICON");
}

// Deterministic: lexicon contents plus a fixed transducer seed.
phon::Phonologizer build_phonologizer(const std::string& lexicon_path) {
  auto lexicon = phon::PronLexicon::load(lexicon_path);
  phon::TransducerConfig config;
  config.seed = 7;
  auto g2p = phon::Transducer::train(lexicon, phon::Direction::G2P, config);
  auto p2g = phon::Transducer::train(lexicon, phon::Direction::P2G, config);
  return phon::Phonologizer(std::move(lexicon), std::move(g2p),
                            std::move(p2g));
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::string blob = cfg.data + "|" + cfg.blind_data + "|" + cfg.model + "|" +
                     cfg.mode + "|" + cfg.protocol + "|" +
                     std::to_string(cfg.k) + "|" + std::to_string(cfg.runs) +
                     "|" + std::to_string(cfg.seed) + "|" +
                     std::to_string(cfg.ensemble) + "|" +
                     std::to_string(cfg.hidden) + "|" +
                     std::to_string(cfg.dropout) + "|" +
                     std::to_string(cfg.learning_rate) + "|" +
                     std::to_string(cfg.max_epochs) + "|" +
                     std::to_string(cfg.patience) + "|" +
                     std::to_string(cfg.unidirectional) + "|" +
                     std::to_string(cfg.emb_dim) + "|" +
                     std::to_string(cfg.emb_epochs) + "|" +
                     std::to_string(cfg.lm_order);
  return fnv1a64(blob);
}

void stamp_artifact(nlohmann::ordered_json& j, const RunConfig& cfg) {
  j["seed"] = cfg.seed;
  j["config_hash"] = to_hex(config_hash(cfg));
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  write_file(path, j.dump(2) + "\n");
}

nlohmann::ordered_json read_json(const std::string& path) {
  auto text = read_file(require_file(path, "model"));
  return nlohmann::ordered_json::parse(text);
}

tagger::TaggerConfig tagger_config(const RunConfig& cfg) {
  tagger::TaggerConfig config;
  config.hidden = cfg.hidden;
  config.dropout = cfg.dropout;
  config.learning_rate = cfg.learning_rate;
  config.max_epochs = cfg.max_epochs;
  config.patience = cfg.patience;
  config.bidirectional = !cfg.unidirectional;
  config.seed = cfg.seed;
  return config;
}

std::vector<rankers::Mode> parse_blend_modes(const std::string& text) {
  if (text.empty() || text == "all")
    return {rankers::Mode::Lstm, rankers::Mode::LstmLm,
            rankers::Mode::LstmLmLen};
  std::vector<rankers::Mode> modes;
  for (const auto& part : split(text, ','))
    modes.push_back(rankers::mode_from_name(part));
  return modes;
}

std::vector<clippings::ClipMode> parse_clip_modes(const std::string& text) {
  if (text.empty() || text == "all")
    return {clippings::ClipMode::Naive,       clippings::ClipMode::Phone,
            clippings::ClipMode::Phone1Syl,   clippings::ClipMode::Phone2Syl,
            clippings::ClipMode::PhoneOracle, clippings::ClipMode::Graph,
            clippings::ClipMode::G2PGold};
  std::vector<clippings::ClipMode> modes;
  for (const auto& part : split(text, ','))
    modes.push_back(clippings::clip_mode_from_name(part));
  return modes;
}

std::string out_stem(const std::string& path) {
  auto dot = path.rfind('.');
  auto slash = path.rfind('/');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash))
    return path;
  return path.substr(0, dot);
}

int run_train_blend(const RunConfig& cfg) {
  auto instances = corpus::load_blends(require_file(cfg.data, "data"));
  auto [derivable, dropped] = corpus::filter_derivable(instances);
  std::cerr << "loaded " << instances.size() << " blends, " << dropped.size()
            << " not derivable\n";
  if (derivable.size() < 2)
    throw FitError("not enough derivable blends to train on");

  auto lexicon = phon::PronLexicon::load(resolve_lexicon(cfg));
  auto words = lexicon.words();

  auto emb = tagger::train_char_embeddings(
      words, cfg.emb_dim, derive_seed(cfg.seed, 0xe313), cfg.emb_epochs);
  std::cerr << "char embeddings: heldout ppl " << emb.heldout_ppl_init
            << " -> " << emb.heldout_ppl_final << "\n";

  std::vector<std::size_t> all(derivable.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto [train_idx, val_idx] =
      corpus::split_train_val(all, 0.1, derive_seed(cfg.seed, 0x7a11));

  std::vector<tagger::TaggedInstance> train_set, val_set;
  std::vector<corpus::BlendInstance> train_insts;
  for (auto i : train_idx) {
    const auto& inst = derivable[i];
    train_insts.push_back(inst);
    train_set.push_back(
        {inst.joined(), editops::encode_labels(inst.joined(), inst.blend)});
  }
  for (auto i : val_idx) {
    const auto& inst = derivable[i];
    val_set.push_back(
        {inst.joined(), editops::encode_labels(inst.joined(), inst.blend)});
  }

  rankers::BlendBundle bundle;
  bundle.members = rankers::train_ensemble(train_set, val_set,
                                           tagger_config(cfg), emb,
                                           cfg.ensemble);
  bundle.lm = rankers::CharLM::train(words, cfg.lm_order);
  bundle.length = rankers::LengthModel::fit(train_insts);

  auto j = bundle.to_json();
  stamp_artifact(j, cfg);
  write_json(cfg.out.empty() ? "blend_bundle.json" : cfg.out, j);
  for (std::size_t m = 0; m < bundle.members.size(); ++m) {
    std::cerr << "member " << m << ": best val loss "
              << bundle.members[m].meta().best_val_loss << " after "
              << bundle.members[m].meta().epochs_run << " epochs\n";
  }
  return 0;
}

int run_train_clip(const RunConfig& cfg) {
  auto records = corpus::load_clippings(require_file(cfg.data, "data"));
  auto phonologizer = build_phonologizer(resolve_lexicon(cfg));
  auto model = clippings::fit_clip_model(records, phonologizer);
  auto j = model.to_json();
  stamp_artifact(j, cfg);
  write_json(cfg.out.empty() ? "clip_model.json" : cfg.out, j);
  std::cerr << "fitted clip model on " << records.size() << " records\n";
  return 0;
}

int run_train_redup(const RunConfig& cfg) {
  auto pairs = corpus::load_redups(require_file(cfg.data, "data"));
  auto model = redup::fit_redup_model(pairs);
  auto j = model.to_json();
  stamp_artifact(j, cfg);
  write_json(cfg.out.empty() ? "redup_model.json" : cfg.out, j);
  std::cerr << "fitted redup model on " << pairs.size() << " pairs ("
            << model.unmodeled_count << " unmodeled)\n";
  return 0;
}

int run_generate_blend(const RunConfig& cfg) {
  if (cfg.input.empty())
    throw ArgumentError("generate blend needs --input c1#c2");
  auto bundle = rankers::BlendBundle::from_json(read_json(cfg.model));
  auto mode = rankers::mode_from_name(cfg.mode.empty() ? "lstm+lm+len"
                                                       : cfg.mode);
  if (cfg.candidates) {
    auto scored = rankers::score_candidates(bundle.members, &bundle.lm,
                                            &bundle.length, cfg.input, mode,
                                            cfg.k);
    std::cout << std::fixed << std::setprecision(6);
    for (const auto& c : scored) {
      std::cout << c.blend << "\t" << c.combined << "\t" << c.tagger;
      if (c.has_lm) std::cout << "\t" << c.lm;
      if (c.has_len) std::cout << "\t" << c.len;
      std::cout << "\n";
    }
    return 0;
  }
  std::cout << rankers::predict_blend(bundle.members, &bundle.lm,
                                      &bundle.length, cfg.input, mode, cfg.k)
            << "\n";
  return 0;
}

int run_generate_clip(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ArgumentError("generate clip needs --input");
  auto model = clippings::ClipModel::from_json(read_json(cfg.model));
  auto phonologizer = build_phonologizer(resolve_lexicon(cfg));
  auto mode = clippings::clip_mode_from_name(cfg.mode.empty() ? "Phone"
                                                              : cfg.mode);
  std::optional<std::string> gold;
  if (!cfg.gold.empty()) gold = cfg.gold;
  std::cout << clippings::predict_clipping(model, phonologizer, cfg.input,
                                           mode, gold, cfg.seed)
            << "\n";
  return 0;
}

int run_generate_redup(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ArgumentError("generate redup needs --input");
  auto model = redup::RedupModel::from_json(read_json(cfg.model));
  auto mode = redup::redup_mode_from_name(cfg.mode.empty() ? "Model"
                                                           : cfg.mode);
  auto sample = redup::generate_redup(model, cfg.input, !cfg.no_dup, mode,
                                      cfg.seed);
  std::cout << cfg.input << "\t" << sample.word << "\t"
            << redup::redup_type_name(sample.type) << "\n";
  return 0;
}

int run_eval_blend(const RunConfig& cfg) {
  auto instances = corpus::load_blends(require_file(cfg.data, "data"));
  auto [dataset, dropped] = corpus::filter_derivable(instances);
  std::cerr << "derivable: " << dataset.size() << "/" << instances.size()
            << "\n";

  auto protocol = evalharness::blend_protocol_from_name(cfg.protocol);
  std::vector<corpus::BlendInstance> blind;
  if (protocol == evalharness::BlendProtocol::Blind) {
    auto blind_all =
        corpus::load_blends(require_file(cfg.blind_data, "blind data"));
    blind = corpus::filter_derivable(blind_all).first;
    std::cerr << "blind derivable: " << blind.size() << "/"
              << blind_all.size() << "\n";
  }

  auto lexicon = phon::PronLexicon::load(resolve_lexicon(cfg));
  auto words = lexicon.words();
  auto emb = tagger::train_char_embeddings(
      words, cfg.emb_dim, derive_seed(cfg.seed, 0xe313), cfg.emb_epochs);

  evalharness::BlendEvalOptions options;
  options.config = tagger_config(cfg);
  options.k = cfg.k;
  options.lm_order = cfg.lm_order;
  options.ensemble_size = static_cast<std::size_t>(cfg.ensemble);
  options.folds = cfg.folds;
  options.runs = cfg.runs;
  options.seed = cfg.seed;

  auto report = evalharness::eval_blends(
      dataset, blind, protocol, parse_blend_modes(cfg.mode), options,
      evalharness::default_blend_trainer(options, emb, words));
  auto j = report.to_json();
  stamp_artifact(j, cfg);
  if (!cfg.out.empty()) write_json(cfg.out, j);
  std::cout << report.to_text();
  return 0;
}

int run_eval_clip(const RunConfig& cfg) {
  auto records = corpus::load_clippings(require_file(cfg.data, "data"));
  auto phonologizer = build_phonologizer(resolve_lexicon(cfg));

  evalharness::ClipEvalOptions options;
  options.runs = cfg.runs;
  options.train_fraction = cfg.train_fraction;
  options.seed = cfg.seed;

  auto modes = parse_clip_modes(cfg.mode);
  auto report = evalharness::eval_clippings(
      records, modes, options,
      evalharness::default_clip_system(phonologizer));
  auto j = report.to_json();
  stamp_artifact(j, cfg);
  if (!cfg.out.empty()) {
    write_json(cfg.out, j);
    // One predictions file per mode, pooled over runs in report order.
    auto n = records.size();
    auto test_size = report.metadata.at("test_size").get<std::size_t>();
    for (std::size_t m = 0; m < modes.size(); ++m) {
      std::string body;
      std::size_t cursor = 0;
      for (int r = 0; r < options.runs; ++r) {
        auto split = corpus::make_holdout_split(
            n, test_size, derive_seed(options.seed, 0xc11b, r));
        std::vector<corpus::ClippingRecord> train;
        for (auto i : split.train) train.push_back(records[i]);
        auto model = clippings::fit_clip_model(train, phonologizer);
        for (auto i : split.test) {
          auto pred = clippings::predict_clipping(
              model, phonologizer, records[i].source, modes[m],
              records[i].gold, derive_seed(options.seed, r, i));
          auto dist = static_cast<long>(
              std::llround(report.modes[m].per_item[cursor]));
          body += records[i].source + "\t" + pred + "\t" + records[i].gold +
                  "\t" + std::to_string(dist) + "\n";
          ++cursor;
        }
      }
      write_file(out_stem(cfg.out) + "_predictions_" +
                     clippings::clip_mode_name(modes[m]) + ".tsv",
                 body);
    }
  }
  std::cout << report.to_text();
  return 0;
}

int run_eval_redup(const RunConfig& cfg) {
  auto pairs = corpus::load_redups(require_file(cfg.data, "data"));
  auto phonologizer = build_phonologizer(resolve_lexicon(cfg));

  evalharness::RedupEvalOptions options;
  options.runs = cfg.runs;
  options.test_size = cfg.test_size;
  options.seed = cfg.seed;

  auto report = evalharness::eval_redups(
      pairs, evalharness::redup_eval_modes(), phonologizer, options,
      evalharness::default_redup_system());
  auto j = report.to_json();
  stamp_artifact(j, cfg);
  if (!cfg.out.empty()) write_json(cfg.out, j);
  std::cout << report.to_text();
  return 0;
}

int run_phon(const RunConfig& cfg, const std::string& which) {
  auto phonologizer = build_phonologizer(resolve_lexicon(cfg));
  if (which == "g2p") {
    if (cfg.input.empty()) throw ArgumentError("phon g2p needs --input");
    std::cout << phon::phoneme_seq_to_string(
                     phonologizer.pronounce(cfg.input))
              << "\n";
    return 0;
  }
  if (which == "p2g") {
    if (cfg.input.empty()) throw ArgumentError("phon p2g needs --input");
    std::cout << phonologizer.spell(phon::parse_phoneme_seq(cfg.input))
              << "\n";
    return 0;
  }
  if (cfg.a.empty() || cfg.b.empty())
    throw ArgumentError("phon mir needs --a and --b");
  std::cout << std::fixed << std::setprecision(6)
            << phonologizer.mir(cfg.a, cfg.b) << "\n";
  return 0;
}

int run_encode(const RunConfig& cfg) {
  if (cfg.joined.empty() || cfg.blend.empty())
    throw ArgumentError("encode needs --joined and --blend");
  auto labels = editops::encode_labels(cfg.joined, cfg.blend);
  std::cout << editops::labels_to_string(labels) << "\n";
  return 0;
}

int run_fixtures(const RunConfig& cfg) {
  auto lexicon = phon::PronLexicon::load(resolve_lexicon(cfg));
  auto set = fixtures::make_fixtures(lexicon.words(), cfg.seed);
  fixtures::write_fixtures(set, cfg.out_dir);
  std::cerr << "wrote " << set.knight.size() << " knight blends, "
            << set.blind.size() << " blind blends, "
            << set.clippings.size() << " clippings, " << set.redups.size()
            << " reduplicative pairs to " << cfg.out_dir << "\n";
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "Seed for all stochastic behavior");
  cmd->add_option("--lexicon", cfg.lexicon,
                  "Pronunciation lexicon (or MORPHOFORGE_LEXICON)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morphoforge: generative models of slang word formation"};
  app.set_config("--config", "",
                 "Flat key=value config file; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  int rc = 0;

  auto* train = app.add_subcommand("train", "Fit a model and write JSON");
  train->require_subcommand(1);
  auto* train_blend = train->add_subcommand("blend", "Train a blend bundle");
  train_blend->add_option("--data", cfg.data, "Blend TSV")->required();
  train_blend->add_option("--out", cfg.out, "Output model path");
  train_blend->add_option("--ensemble", cfg.ensemble, "Ensemble size");
  train_blend->add_option("--hidden", cfg.hidden, "LSTM hidden size");
  train_blend->add_option("--dropout", cfg.dropout, "Dropout rate");
  train_blend->add_option("--lr", cfg.learning_rate, "Adam learning rate");
  train_blend->add_option("--max-epochs", cfg.max_epochs, "Epoch cap");
  train_blend->add_option("--patience", cfg.patience, "Early stop patience");
  train_blend->add_flag("--unidirectional", cfg.unidirectional,
                        "Disable the backward LSTM");
  train_blend->add_option("--emb-dim", cfg.emb_dim, "Char embedding size");
  train_blend->add_option("--emb-epochs", cfg.emb_epochs,
                          "Char embedding pretraining epochs");
  train_blend->add_option("--lm-order", cfg.lm_order, "Char LM order");
  add_common(train_blend, cfg);
  train_blend->callback([&] { rc = run_train_blend(cfg); });

  auto* train_clip = train->add_subcommand("clip", "Fit a clipping model");
  train_clip->add_option("--data", cfg.data, "Clippings TSV")->required();
  train_clip->add_option("--out", cfg.out, "Output model path");
  add_common(train_clip, cfg);
  train_clip->callback([&] { rc = run_train_clip(cfg); });

  auto* train_redup =
      train->add_subcommand("redup", "Fit a reduplication model");
  train_redup->add_option("--data", cfg.data, "Reduplicatives TSV")
      ->required();
  train_redup->add_option("--out", cfg.out, "Output model path");
  add_common(train_redup, cfg);
  train_redup->callback([&] { rc = run_train_redup(cfg); });

  auto* gen = app.add_subcommand("generate", "Run a trained model");
  gen->require_subcommand(1);
  auto* gen_blend = gen->add_subcommand("blend", "Predict a blend");
  gen_blend->add_option("--model", cfg.model, "Bundle JSON")->required();
  gen_blend->add_option("--input", cfg.input, "Joined input c1#c2")
      ->required();
  gen_blend->add_option("--mode", cfg.mode,
                        "lstm | lstm+lm | lstm+lm+len (default)");
  gen_blend->add_option("--k", cfg.k, "Candidates per member");
  gen_blend->add_flag("--candidates", cfg.candidates,
                      "Print scored candidates instead of the best");
  add_common(gen_blend, cfg);
  gen_blend->callback([&] { rc = run_generate_blend(cfg); });

  auto* gen_clip = gen->add_subcommand("clip", "Predict a clipping");
  gen_clip->add_option("--model", cfg.model, "Clip model JSON")->required();
  gen_clip->add_option("--input", cfg.input, "Source word or phrase")
      ->required();
  gen_clip->add_option("--mode", cfg.mode, "Clip mode (default Phone)");
  gen_clip->add_option("--gold", cfg.gold, "Gold clipping (oracle modes)");
  add_common(gen_clip, cfg);
  gen_clip->callback([&] { rc = run_generate_clip(cfg); });

  auto* gen_redup = gen->add_subcommand("redup", "Generate a reduplicant");
  gen_redup->add_option("--model", cfg.model, "Redup model JSON")
      ->required();
  gen_redup->add_option("--input", cfg.input, "Base word")->required();
  gen_redup->add_option("--mode", cfg.mode,
                        "Model (default) | Let | LetCond");
  gen_redup->add_flag("--no-dup", cfg.no_dup, "Disallow pure duplication");
  add_common(gen_redup, cfg);
  gen_redup->callback([&] { rc = run_generate_redup(cfg); });

  auto* eval = app.add_subcommand("eval", "Run an evaluation protocol");
  eval->require_subcommand(1);
  auto* eval_blend = eval->add_subcommand("blend", "Blend protocols");
  eval_blend->add_option("--data", cfg.data, "Training/CV TSV")->required();
  eval_blend->add_option("--blind-data", cfg.blind_data,
                         "Held-out TSV (blind protocol)");
  eval_blend->add_option("--protocol", cfg.protocol, "cv10 | blind");
  eval_blend->add_option("--mode", cfg.mode, "Comma list or 'all'");
  eval_blend->add_option("--k", cfg.k, "Candidates per member");
  eval_blend->add_option("--runs", cfg.runs, "Blind protocol runs");
  eval_blend->add_option("--folds", cfg.folds, "CV folds");
  eval_blend->add_option("--ensemble", cfg.ensemble, "Ensemble size");
  eval_blend->add_option("--out", cfg.out, "Report JSON path");
  eval_blend->add_option("--hidden", cfg.hidden, "LSTM hidden size");
  eval_blend->add_option("--dropout", cfg.dropout, "Dropout rate");
  eval_blend->add_option("--lr", cfg.learning_rate, "Adam learning rate");
  eval_blend->add_option("--max-epochs", cfg.max_epochs, "Epoch cap");
  eval_blend->add_option("--patience", cfg.patience, "Early stop patience");
  eval_blend->add_flag("--unidirectional", cfg.unidirectional,
                       "Disable the backward LSTM");
  eval_blend->add_option("--emb-dim", cfg.emb_dim, "Char embedding size");
  eval_blend->add_option("--emb-epochs", cfg.emb_epochs,
                         "Char embedding pretraining epochs");
  eval_blend->add_option("--lm-order", cfg.lm_order, "Char LM order");
  add_common(eval_blend, cfg);
  eval_blend->callback([&] { rc = run_eval_blend(cfg); });

  auto* eval_clip = eval->add_subcommand("clip", "Clipping evaluation");
  eval_clip->add_option("--data", cfg.data, "Clippings TSV")->required();
  eval_clip->add_option("--runs", cfg.runs, "Seeded split count");
  eval_clip->add_option("--mode", cfg.mode, "Comma list or 'all'");
  eval_clip->add_option("--train-fraction", cfg.train_fraction,
                        "Training split fraction");
  eval_clip->add_option("--out", cfg.out, "Report JSON path");
  add_common(eval_clip, cfg);
  eval_clip->callback([&] { rc = run_eval_clip(cfg); });

  auto* eval_redup = eval->add_subcommand("redup", "Reduplication eval");
  eval_redup->add_option("--data", cfg.data, "Reduplicatives TSV")
      ->required();
  eval_redup->add_option("--runs", cfg.runs, "Seeded run count");
  eval_redup->add_option("--test-size", cfg.test_size, "Held-out set size");
  eval_redup->add_option("--out", cfg.out, "Report JSON path");
  add_common(eval_redup, cfg);
  eval_redup->callback([&] { rc = run_eval_redup(cfg); });

  auto* phon_cmd = app.add_subcommand("phon", "Phonology utilities");
  phon_cmd->require_subcommand(1);
  auto* g2p = phon_cmd->add_subcommand("g2p", "Word to phonemes");
  g2p->add_option("--input", cfg.input, "Word")->required();
  add_common(g2p, cfg);
  g2p->callback([&] { rc = run_phon(cfg, "g2p"); });
  auto* p2g = phon_cmd->add_subcommand("p2g", "Phonemes to spelling");
  p2g->add_option("--input", cfg.input, "Phoneme string, e.g. 'K AE T'")
      ->required();
  add_common(p2g, cfg);
  p2g->callback([&] { rc = run_phon(cfg, "p2g"); });
  auto* mir = phon_cmd->add_subcommand("mir", "Pronunciation similarity");
  mir->add_option("--a", cfg.a, "First word")->required();
  mir->add_option("--b", cfg.b, "Second word")->required();
  add_common(mir, cfg);
  mir->callback([&] { rc = run_phon(cfg, "mir"); });

  auto* encode = app.add_subcommand("encode", "Copy/delete label debug");
  encode->add_option("--joined", cfg.joined, "Joined input c1#c2")
      ->required();
  encode->add_option("--blend", cfg.blend, "Target blend")->required();
  encode->callback([&] { rc = run_encode(cfg); });

  auto* fixtures_cmd =
      app.add_subcommand("fixtures", "Write the bundled datasets");
  fixtures_cmd->add_option("--out-dir", cfg.out_dir, "Output directory");
  add_common(fixtures_cmd, cfg);
  fixtures_cmd->callback([&] { rc = run_fixtures(cfg); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
