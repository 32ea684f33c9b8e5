// Acceptance gate: one line per criterion, nonzero exit on any FAIL.
// Criteria 1-5 need the released study datasets; without them they are
// SKIPPED and 6-12 must pass on the bundled data.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "morphoforge/clippings.hpp"
#include "morphoforge/corpus.hpp"
#include "morphoforge/decoder.hpp"
#include "morphoforge/editops.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/evalharness.hpp"
#include "morphoforge/phonology.hpp"
#include "morphoforge/rankers.hpp"
#include "morphoforge/redup.hpp"
#include "morphoforge/tagger.hpp"
#include "morphoforge/transducer.hpp"
#include "morphoforge/util.hpp"

using namespace morpho;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << " - "
            << detail << "\n";
  if (!pass) ++g_failures;
}

void skipped(int id, const std::string& why) {
  std::cout << "criterion " << id << ": SKIPPED - " << why << "\n";
}

std::string fmt(double v, int places = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(places);
  os << v;
  return os.str();
}

double mode_mu(const evalharness::EvalReport& r, const std::string& mode) {
  for (const auto& m : r.modes)
    if (m.mode == mode) return m.mu;
  throw ArgumentError("mode missing from report: " + mode);
}

struct RealData {
  std::string knight, blind, clippings, redups;
  bool has_blends = false, has_clips = false, has_redups = false;
};

RealData find_real_data(const std::string& override_dir) {
  RealData rd;
  std::string dir = override_dir;
  if (dir.empty())
    if (const char* env = std::getenv("MORPHOFORGE_REAL_DATA")) dir = env;
  if (dir.empty() || !std::filesystem::is_directory(dir)) return rd;
  rd.knight = dir + "/d_knight.tsv";
  rd.blind = dir + "/d_blind.tsv";
  rd.clippings = dir + "/clippings.tsv";
  rd.redups = dir + "/reduplicatives.tsv";
  rd.has_blends = file_exists(rd.knight) && file_exists(rd.blind);
  rd.has_clips = file_exists(rd.clippings);
  rd.has_redups = file_exists(rd.redups);
  return rd;
}

// Reference decoder: enumerate every label sequence, score with the same
// sorted-term sum, order by (score desc, labels lexicographic).
std::vector<decoder::ScoredLabels> brute_force_topk(const decoder::Dists& d,
                                                    int k) {
  std::size_t n = d.size();
  std::vector<decoder::ScoredLabels> all;
  for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
    editops::LabelSeq labels(n);
    std::vector<double> terms(n);
    for (std::size_t t = 0; t < n; ++t) {
      labels[t] =
          (bits >> t) & 1 ? editops::Label::Delete : editops::Label::Copy;
      terms[t] = std::log(
          std::max(d[t][labels[t] == editops::Label::Copy ? 0 : 1], 1e-300));
    }
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double v : terms) s += v;
    all.push_back({labels, s});
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
    return std::lexicographical_compare(
        a.labels.begin(), a.labels.end(), b.labels.begin(), b.labels.end(),
        [](editops::Label x, editops::Label y) {
          return static_cast<int>(x) < static_cast<int>(y);
        });
  });
  if (static_cast<int>(all.size()) > k)
    all.resize(static_cast<std::size_t>(k));
  return all;
}

std::string random_word(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  auto len = lo + uniform_below(rng, hi - lo + 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i)
    s.push_back(static_cast<char>('a' + uniform_below(rng, 26)));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  std::string data_dir = "data";
  std::string real_dir;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--data-dir" && i + 1 < argc)
      data_dir = argv[++i];
    else if (arg == "--real-data" && i + 1 < argc)
      real_dir = argv[++i];
    else {
      std::cerr << "usage: morphoforge_acceptance [--data-dir DIR] "
                   "[--real-data DIR]\n";
      return 1;
    }
  }

  try {
    auto lexicon = phon::PronLexicon::load(data_dir +
                                           "/lexicon/morpho_lexicon.dict");
    auto words = lexicon.words();
    phon::TransducerConfig tconfig;
    tconfig.seed = 7;
    phon::Phonologizer phonologizer(
        lexicon, phon::Transducer::train(lexicon, phon::Direction::G2P,
                                         tconfig),
        phon::Transducer::train(lexicon, phon::Direction::P2G, tconfig));

    auto fixture_knight =
        corpus::load_blends(data_dir + "/fixtures/d_knight.tsv");
    auto fixture_blind =
        corpus::load_blends(data_dir + "/fixtures/d_blind.tsv");
    auto fixture_clips =
        corpus::load_clippings(data_dir + "/fixtures/clippings.tsv");
    auto fixture_redups =
        corpus::load_redups(data_dir + "/fixtures/reduplicatives.tsv");

    auto real = find_real_data(real_dir);
    const std::string no_real =
        "released datasets not present (set MORPHOFORGE_REAL_DATA or pass "
        "--real-data)";

    // Criteria 1-3: blend protocols on the released data.
    if (!real.has_blends) {
      skipped(1, no_real);
      skipped(2, no_real);
      skipped(3, no_real);
    } else {
      auto knight =
          corpus::filter_derivable(corpus::load_blends(real.knight)).first;
      auto blind =
          corpus::filter_derivable(corpus::load_blends(real.blind)).first;
      auto emb =
          tagger::train_char_embeddings(words, 50, derive_seed(0, 0xe313), 10);

      evalharness::BlendEvalOptions single;
      single.ensemble_size = 1;
      auto modes = {rankers::Mode::Lstm, rankers::Mode::LstmLm,
                    rankers::Mode::LstmLmLen};
      auto cv_single = evalharness::eval_blends(
          knight, {}, evalharness::BlendProtocol::Cv10, modes, single,
          evalharness::default_blend_trainer(single, emb, words));
      double mu_lstm = mode_mu(cv_single, "lstm");
      double mu_lm = mode_mu(cv_single, "lstm+lm");
      double mu_full = mode_mu(cv_single, "lstm+lm+len");
      report(1, mu_full <= 1.60 && mu_lstm <= 2.00,
             "cv10 lstm+lm+len mu=" + fmt(mu_full) + " (<=1.60), lstm mu=" +
                 fmt(mu_lstm) + " (<=2.00)");

      evalharness::BlendEvalOptions ens;
      ens.ensemble_size = 5;
      auto cv_ens = evalharness::eval_blends(
          knight, {}, evalharness::BlendProtocol::Cv10,
          {rankers::Mode::LstmLmLen}, ens,
          evalharness::default_blend_trainer(ens, emb, words));
      double mu_ens = mode_mu(cv_ens, "lstm+lm+len");
      report(2,
             mu_lstm >= mu_lm && mu_lm >= mu_full &&
                 mu_ens <= mu_full + 0.05,
             "mode means " + fmt(mu_lstm) + " >= " + fmt(mu_lm) +
                 " >= " + fmt(mu_full) + "; E=5 mu=" + fmt(mu_ens) +
                 " (<= single + 0.05)");

      auto blind_report = evalharness::eval_blends(
          knight, blind, evalharness::BlendProtocol::Blind,
          {rankers::Mode::LstmLmLen}, ens,
          evalharness::default_blend_trainer(ens, emb, words));
      double mu_blind = mode_mu(blind_report, "lstm+lm+len");
      report(3, mu_blind <= 2.20,
             "blind ensemble lstm+lm+len mu=" + fmt(mu_blind) + " (<=2.20)");
    }

    // Criterion 4: clipping mode comparison on the released data.
    if (!real.has_clips) {
      skipped(4, no_real);
    } else {
      auto records = corpus::load_clippings(real.clippings);
      evalharness::ClipEvalOptions copts;
      auto rep = evalharness::eval_clippings(
          records,
          {clippings::ClipMode::Naive, clippings::ClipMode::Phone,
           clippings::ClipMode::PhoneOracle, clippings::ClipMode::Graph,
           clippings::ClipMode::G2PGold},
          copts, evalharness::default_clip_system(phonologizer));
      double naive = mode_mu(rep, "Naive");
      double phone = mode_mu(rep, "Phone");
      double oracle = mode_mu(rep, "PhoneOracle");
      double graph = mode_mu(rep, "Graph");
      double gold = mode_mu(rep, "G2PGold");
      double min_mu = std::min({naive, phone, oracle, graph});
      report(4,
             naive >= 4.0 && graph <= 3.2 && naive - graph >= 1.0 &&
                 oracle <= phone && gold <= 1.3 && gold < min_mu,
             "Naive=" + fmt(naive) + " Graph=" + fmt(graph) +
                 " PhoneOracle=" + fmt(oracle) + " Phone=" + fmt(phone) +
                 " G2PGold=" + fmt(gold));
    }

    // Criterion 5: reduplication MIR gap on the released data.
    if (!real.has_redups) {
      skipped(5, no_real);
    } else {
      auto pairs = corpus::load_redups(real.redups);
      evalharness::RedupEvalOptions ropts;
      auto rep = evalharness::eval_redups(
          pairs, evalharness::redup_eval_modes(), phonologizer, ropts,
          evalharness::default_redup_system());
      double model = mode_mu(rep, "Model");
      double let = mode_mu(rep, "Let");
      double letcond = mode_mu(rep, "LetCond");
      report(5, model >= let + 0.04 && model >= letcond + 0.04,
             "Model=" + fmt(model) + " Let=" + fmt(let) + " LetCond=" +
                 fmt(letcond) + " (gap >= 0.04)");
    }

    // Criterion 6: encode/apply round trip and derivable fractions.
    {
      std::size_t checked = 0, ok = 0;
      for (const auto* set : {&fixture_knight, &fixture_blind}) {
        for (const auto& inst : *set) {
          auto labels = editops::try_encode_labels(inst.joined(), inst.blend);
          if (!labels) continue;
          ++checked;
          if (editops::apply_labels(inst.joined(), *labels) == inst.blend)
            ++ok;
        }
      }
      double knight_frac =
          100.0 * corpus::filter_derivable(fixture_knight).first.size() /
          fixture_knight.size();
      double blind_frac =
          100.0 * corpus::filter_derivable(fixture_blind).first.size() /
          fixture_blind.size();
      bool pass = checked > 0 && ok == checked &&
                  std::abs(knight_frac - 99.0) <= 1.0 &&
                  std::abs(blind_frac - 92.4) <= 2.0;
      report(6, pass,
             "round trip " + std::to_string(ok) + "/" +
                 std::to_string(checked) + "; derivable " + fmt(knight_frac, 2) +
                 "% (99.0+-1.0), " + fmt(blind_frac, 2) + "% (92.4+-2.0)");
    }

    // Criterion 7: top-k decoder against brute-force enumeration.
    {
      auto rng = make_rng(derive_seed(41, 7));
      int mismatches = 0;
      for (int trial = 0; trial < 200; ++trial) {
        auto n = 1 + uniform_below(rng, 10);
        decoder::Dists dists(n);
        for (auto& d : dists) {
          double p = uniform_real01(rng);
          if (uniform_below(rng, 8) == 0) p = uniform_below(rng, 2) ? 1.0 : 0.0;
          d = {p, 1.0 - p};
        }
        int k = 1 + static_cast<int>(uniform_below(rng, 8));
        auto fast = decoder::topk_label_sequences(dists, k);
        auto ref = brute_force_topk(dists, k);
        bool same = fast.size() == ref.size();
        for (std::size_t i = 0; same && i < fast.size(); ++i)
          same = fast[i].labels == ref[i].labels &&
                 std::abs(fast[i].log_prob - ref[i].log_prob) < 1e-9;
        if (!same) ++mismatches;
      }
      report(7, mismatches == 0,
             std::to_string(200 - mismatches) +
                 "/200 random instances match brute force (len<=10, k<=8)");
    }

    // Criterion 8: analytic tagger gradients against finite differences.
    {
      auto rng = make_rng(derive_seed(41, 8));
      double worst = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        tagger::TaggerConfig config;
        config.hidden = 2 + static_cast<int>(uniform_below(rng, 5));
        config.bidirectional = uniform_below(rng, 2) == 0;
        config.seed = derive_seed(41, 8, trial);
        int dim = 2 + static_cast<int>(uniform_below(rng, 4));
        auto emb = tagger::EmbeddingTable::random(
            dim, derive_seed(41, 80, trial));
        auto model = tagger::TaggerModel::random(config, emb);
        auto joined = random_word(rng, 2, 4) + "#" + random_word(rng, 2, 4);
        editops::LabelSeq labels(joined.size());
        for (std::size_t t = 0; t < joined.size(); ++t)
          labels[t] = uniform_below(rng, 2) ? editops::Label::Delete
                                            : editops::Label::Copy;
        worst = std::max(worst,
                         tagger::gradient_check(model, {joined, labels}, 1e-5));
      }
      report(8, worst <= 1e-4,
             "max relative gradient error " + fmt(worst, 8) +
                 " over 20 configurations (<=1e-4)");
    }

    // Criterion 9: normalization sums and the ridge closed form.
    {
      bool pass = true;
      std::string why;

      auto lm = rankers::CharLM::train(words, 5);
      auto rng = make_rng(derive_seed(41, 9));
      for (int trial = 0; trial < 60 && pass; ++trial) {
        auto context = random_word(rng, 0, 6);
        double total = 0.0;
        for (int next = 0; next <= rankers::CharLM::kEos; ++next)
          total += lm.next_prob(context, next);
        if (std::abs(total - 1.0) > 1e-9) {
          pass = false;
          why = "char LM context '" + context + "' sums to " + fmt(total, 12);
        }
      }

      auto clip_model =
          clippings::fit_clip_model(fixture_clips, phonologizer);
      auto redup_model = redup::fit_redup_model(fixture_redups);
      auto check_sum = [&](double total, const std::string& name) {
        if (std::abs(total - 1.0) > 1e-9) {
          pass = false;
          why = name + " sums to " + fmt(total, 12);
        }
      };
      double t = 0.0;
      for (auto& [k, v] : clip_model.theta) t += v;
      check_sum(t, "theta");
      t = 0.0;
      for (auto& [k, v] : clip_model.pi) t += v;
      check_sum(t, "pi");
      t = 0.0;
      for (auto& [k, v] : redup_model.theta) t += v;
      check_sum(t, "redup theta");
      for (auto& [vowel, dist] : redup_model.phi) {
        t = 0.0;
        for (auto& [k, v] : dist) t += v;
        check_sum(t, std::string("phi_") + vowel);
      }
      for (auto& [cons, dist] : redup_model.psi) {
        t = 0.0;
        for (auto& [k, v] : dist) t += v;
        check_sum(t, std::string("psi_") + cons);
      }

      // Noiseless line y = 3 + 2x over x = 1..9: the ridge solution follows
      // from sxx = n(n^2-1)/12 = 60 and sxy = 2*sxx.
      std::vector<std::pair<double, double>> xy;
      for (int x = 1; x <= 9; ++x) xy.push_back({x, 3.0 + 2.0 * x});
      auto fitted = rankers::LengthModel::fit_xy(xy, 1.0);
      double sxx = 60.0;
      double slope = 2.0 * sxx / (sxx + 1.0);
      double intercept = 13.0 - slope * 5.0;
      double ss = 0.0;
      for (auto& [x, y] : xy) {
        double r = y - (intercept + slope * x);
        ss += r * r;
      }
      double variance = std::max(ss / xy.size(), 1e-6);
      if (std::abs(fitted.slope - slope) > 1e-8 ||
          std::abs(fitted.intercept - intercept) > 1e-8 ||
          std::abs(fitted.variance - variance) > 1e-8) {
        pass = false;
        why = "ridge fit differs from the closed form";
      }

      report(9, pass,
             pass ? "char LM, theta, pi, phi, psi all sum to 1 +- 1e-9; "
                    "ridge matches the closed form to 1e-8"
                  : why);
    }

    // Criterion 10: MIR axioms and the flip/flop ordering.
    {
      auto rng = make_rng(derive_seed(41, 10));
      bool pass = true;
      std::string why;
      for (int trial = 0; trial < 40 && pass; ++trial) {
        auto a = random_word(rng, 1, 8);
        auto b = random_word(rng, 1, 8);
        double self = phonologizer.mir(a, a);
        double ab = phonologizer.mir(a, b);
        double ba = phonologizer.mir(b, a);
        if (std::abs(self - 1.0) > 1e-9) {
          pass = false;
          why = "mir(" + a + "," + a + ")=" + fmt(self, 6);
        } else if (std::abs(ab - ba) > 1e-9) {
          pass = false;
          why = "asymmetry on (" + a + "," + b + ")";
        } else if (ab < 0.0 || ab > 1.0) {
          pass = false;
          why = "range violation on (" + a + "," + b + ")=" + fmt(ab, 6);
        }
      }
      double close = phonologizer.mir("flip", "flop");
      double far = phonologizer.mir("flip", "flsp");
      if (pass && close <= far) {
        pass = false;
        why = "mir(flip,flop)=" + fmt(close, 4) + " <= mir(flip,flsp)=" +
              fmt(far, 4);
      }
      report(10, pass,
             pass ? "identity, symmetry, range hold on fuzzed inputs; "
                    "mir(flip,flop)=" +
                        fmt(close, 4) + " > mir(flip,flsp)=" + fmt(far, 4)
                  : why);
    }

    // Criterion 11: clipping structural properties.
    {
      auto clip_model =
          clippings::fit_clip_model(fixture_clips, phonologizer);
      bool pass = true;
      std::string why;
      std::vector<std::string> probes = {"laboratory", "hamburger",
                                         "telephone",  "advertisement",
                                         "photograph", "captain"};
      for (std::size_t w = 0; w < probes.size() && pass; ++w) {
        for (std::uint64_t s = 0; s < 5 && pass; ++s) {
          auto one = clippings::predict_clipping(
              clip_model, phonologizer, probes[w],
              clippings::ClipMode::Phone1Syl, std::nullopt,
              derive_seed(41, 11, w * 16 + s));
          int vowels = 0;
          for (int ph : phonologizer.pronounce(one))
            if (phon::is_vowel(ph)) ++vowels;
          if (vowels != 1) {
            pass = false;
            why = "Phone1Syl(" + probes[w] + ")=" + one + " has " +
                  std::to_string(vowels) + " vowels";
          }
          auto graph = clippings::predict_clipping(
              clip_model, phonologizer, probes[w], clippings::ClipMode::Graph,
              std::nullopt, derive_seed(41, 12, w * 16 + s));
          if (graph != probes[w].substr(0, graph.size()) &&
              graph != probes[w].substr(probes[w].size() - graph.size())) {
            pass = false;
            why = "Graph(" + probes[w] + ")=" + graph +
                  " is neither prefix nor suffix";
          }
        }
      }
      std::string kidvid;
      if (pass) {
        kidvid = clippings::predict_clipping(clip_model, phonologizer,
                                             "kid video",
                                             clippings::ClipMode::Phone,
                                             std::nullopt, derive_seed(41, 13));
        if (kidvid != "kidvid") {
          pass = false;
          why = "Phone(kid video)=" + kidvid;
        }
      }
      report(11, pass,
             pass ? "Phone1Syl keeps one vowel, Graph stays a prefix/suffix, "
                    "kid video -> kidvid"
                  : why);
    }

    // Criterion 12: byte-identical reruns under one seed.
    {
      bool pass = true;
      std::string why;

      auto clip_a = clippings::fit_clip_model(fixture_clips, phonologizer);
      auto clip_b = clippings::fit_clip_model(fixture_clips, phonologizer);
      if (clip_a.to_json().dump() != clip_b.to_json().dump()) {
        pass = false;
        why = "clip model refit differs";
      }

      auto redup_a = redup::fit_redup_model(fixture_redups);
      auto redup_b = redup::fit_redup_model(fixture_redups);
      if (pass && redup_a.to_json().dump() != redup_b.to_json().dump()) {
        pass = false;
        why = "redup model refit differs";
      }

      auto lm_a = rankers::CharLM::train(words, 5).to_json().dump();
      auto lm_b = rankers::CharLM::train(words, 5).to_json().dump();
      if (pass && lm_a != lm_b) {
        pass = false;
        why = "char LM retrain differs";
      }

      if (pass) {
        tagger::TaggerConfig config;
        config.hidden = 4;
        config.max_epochs = 3;
        config.seed = 41;
        auto emb = tagger::EmbeddingTable::random(4, 41);
        std::vector<tagger::TaggedInstance> train_set;
        for (std::size_t i = 0; i < 12 && i < fixture_knight.size(); ++i) {
          const auto& inst = fixture_knight[i];
          auto labels = editops::try_encode_labels(inst.joined(), inst.blend);
          if (labels) train_set.push_back({inst.joined(), *labels});
        }
        auto val_set = train_set;
        auto t1 = tagger::TaggerModel::train(train_set, val_set, config, emb)
                      .to_json()
                      .dump();
        auto t2 = tagger::TaggerModel::train(train_set, val_set, config, emb)
                      .to_json()
                      .dump();
        if (t1 != t2) {
          pass = false;
          why = "tagger retrain differs";
        }
      }

      if (pass) {
        evalharness::ClipEvalOptions copts;
        copts.runs = 2;
        copts.seed = 41;
        auto r1 = evalharness::eval_clippings(
            fixture_clips, {clippings::ClipMode::Graph}, copts,
            evalharness::default_clip_system(phonologizer));
        auto r2 = evalharness::eval_clippings(
            fixture_clips, {clippings::ClipMode::Graph}, copts,
            evalharness::default_clip_system(phonologizer));
        if (r1.to_json().dump(2) != r2.to_json().dump(2) ||
            r1.to_text() != r2.to_text()) {
          pass = false;
          why = "evaluation report rerun differs";
        }
      }

      report(12, pass,
             pass ? "models and reports are byte-identical across reruns"
                  : why);
    }
  } catch (const Error& e) {
    std::cerr << "acceptance run aborted: " << e.what() << "\n";
    return 99;
  }

  return g_failures == 0 ? 0 : 10 + g_failures;
}
