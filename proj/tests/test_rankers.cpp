#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "morphoforge/corpus.hpp"
#include "morphoforge/decoder.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/rankers.hpp"
#include "morphoforge/util.hpp"
#include "test_support.hpp"

using namespace morpho;
using rankers::CharLM;
using rankers::LengthModel;
using rankers::Mode;

namespace {

corpus::BlendInstance lengths_instance(int c1, int c2, int b) {
  return {std::string(static_cast<std::size_t>(c1), 'a'),
          std::string(static_cast<std::size_t>(c2), 'b'),
          std::string(static_cast<std::size_t>(b), 'c')};
}

std::vector<tagger::TaggerModel> random_members(int count,
                                                std::uint64_t seed) {
  auto emb = tagger::EmbeddingTable::random(5, seed);
  std::vector<tagger::TaggerModel> members;
  for (int e = 0; e < count; ++e) {
    tagger::TaggerConfig cfg;
    cfg.hidden = 4;
    cfg.seed = seed + static_cast<std::uint64_t>(e) * 101;
    members.push_back(tagger::TaggerModel::random(cfg, emb));
  }
  return members;
}

}  // namespace

TEST_CASE("char LM on the single word ab matches the analytic counts") {
  auto lm = CharLM::train({"ab"}, 2);

  // Unigram events a, b, eos: p_uni(x) = (c + 3/27) / 6.
  // Context 'a' saw only 'b': p(b|a) = (1 + p_uni(b)) / 2 = 16/27, and
  // every other continuation interpolates from below.
  CHECK(lm.next_prob("a", 'b' - 'a') ==
        doctest::Approx(16.0 / 27.0).epsilon(1e-12));
  CHECK(lm.next_prob("a", 'a' - 'a') ==
        doctest::Approx(5.0 / 54.0).epsilon(1e-12));
  CHECK(lm.next_prob("a", CharLM::kEos) ==
        doctest::Approx(5.0 / 54.0).epsilon(1e-12));
  CHECK(lm.next_prob("a", 'q' - 'a') ==
        doctest::Approx(1.0 / 108.0).epsilon(1e-12));
  for (int x = 0; x <= CharLM::kEos; ++x) {
    if (x == 'b' - 'a') continue;
    CHECK(lm.next_prob("a", 'b' - 'a') > lm.next_prob("a", x));
  }

  // p(a|BOS) = p(b|a) = p(eos|b) = 16/27, so the mean log is log(16/27).
  CHECK(lm.logprob("ab") ==
        doctest::Approx(std::log(16.0 / 27.0)).epsilon(1e-12));

  // "abab": the unseen bigram (b -> a) interpolates to p_uni(a)/2 = 5/54.
  double expected =
      (4.0 * std::log(16.0 / 27.0) + std::log(5.0 / 54.0)) / 5.0;
  CHECK(lm.logprob("abab") == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("char LM distributions normalize in arbitrary contexts") {
  auto lm = CharLM::train({"ab", "banana", "cabal", "zest"}, 5);
  for (const std::string& ctx :
       {std::string(""), std::string("a"), std::string("ban"),
        std::string("zzzz"), std::string("qxjw")}) {
    double total = 0.0;
    for (int x = 0; x <= CharLM::kEos; ++x) total += lm.next_prob(ctx, x);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("char LM basic contracts") {
  CHECK_THROWS_AS(CharLM::train({}, 5), ArgumentError);
  CHECK_THROWS_AS(CharLM::train({"123", "..."}, 5), ArgumentError);
  CHECK_THROWS_AS(CharLM::train({"ab"}, 1), ArgumentError);

  auto lm = CharLM::train({"abc", "abd"}, 3);
  CHECK_THROWS_AS(lm.logprob(""), ArgumentError);
  CHECK_THROWS_AS(lm.logprob("ab#c"), ArgumentError);
  CHECK(lm.logprob("abc") <= 0.0);
  CHECK(std::isfinite(lm.logprob("zzzzqq")));

  auto j = lm.to_json();
  auto back = CharLM::from_json(j);
  CHECK(back.to_json().dump() == j.dump());
  CHECK(back.logprob("abc") == lm.logprob("abc"));
}

TEST_CASE("lexicon char LM prefers attested-looking strings") {
  auto lm = CharLM::train(testsupport::lexicon().words(), 5);
  CHECK(lm.logprob("brangelina") > lm.logprob("brngelina"));
  CHECK(lm.logprob("banana") > lm.logprob("bnnnaa"));
}

TEST_CASE("length model recovers a noiseless slope") {
  std::vector<corpus::BlendInstance> data = {
      lengths_instance(5, 5, 7),   lengths_instance(10, 10, 14),
      lengths_instance(15, 15, 21), lengths_instance(5, 15, 14),
      lengths_instance(20, 20, 28),
  };
  auto m = LengthModel::fit(data, 1e-6);
  CHECK(m.slope > 0.69);
  CHECK(m.slope < 0.71);
  CHECK(std::abs(m.intercept) < 0.1);
  CHECK(m.variance > 0.0);
  CHECK(m.predict(10) == doctest::Approx(7.0).epsilon(1e-3));
}

TEST_CASE("length model matches the closed-form ridge solution") {
  auto rng = make_rng(88);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<corpus::BlendInstance> data;
    std::vector<double> xs, ys;
    int n = 5 + static_cast<int>(uniform_below(rng, 10));
    for (int i = 0; i < n; ++i) {
      int c1 = 2 + static_cast<int>(uniform_below(rng, 8));
      int c2 = 2 + static_cast<int>(uniform_below(rng, 8));
      int b = 2 + static_cast<int>(uniform_below(rng, 12));
      data.push_back(lengths_instance(c1, c2, b));
      xs.push_back(c1 + c2);
      ys.push_back(b);
    }
    double lambda = 1.0;
    auto m = LengthModel::fit(data, lambda);

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) continue;
    double slope = sxy / (sxx + lambda);
    double intercept = my - slope * mx;
    CAPTURE(trial);
    CHECK(std::abs(m.slope - slope) < 1e-8);
    CHECK(std::abs(m.intercept - intercept) < 1e-8);
  }
}

TEST_CASE("length model error paths") {
  CHECK_THROWS_AS(
      LengthModel::fit({lengths_instance(3, 3, 4)}, 1.0),
      ArgumentError);
  std::vector<corpus::BlendInstance> degenerate = {
      lengths_instance(5, 5, 7), lengths_instance(4, 6, 8),
      lengths_instance(6, 4, 9)};
  CHECK_THROWS_AS(LengthModel::fit(degenerate, 1.0), FitError);
}

TEST_CASE("length log density is a symmetric Gaussian in blend length") {
  LengthModel m;
  m.intercept = 0.0;
  m.slope = 1.0;
  m.variance = 2.0;
  CHECK(m.logprob(10, 8) == doctest::Approx(m.logprob(10, 12)).epsilon(1e-12));
  CHECK(m.logprob(10, 10) > m.logprob(10, 11));
  CHECK(m.logprob(10, 10) > m.logprob(10, 9));
  double expected = -0.5 * std::log(2.0 * M_PI * 2.0) - 4.0 / 4.0;
  CHECK(m.logprob(10, 12) == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(m.logprob(0, 5), ArgumentError);

  auto j = m.to_json();
  auto back = LengthModel::from_json(j);
  CHECK(back.to_json().dump() == j.dump());
}

TEST_CASE("mode names round trip") {
  for (Mode m : {Mode::Lstm, Mode::LstmLm, Mode::LstmLmLen})
    CHECK(rankers::mode_from_name(rankers::mode_name(m)) == m);
  CHECK_THROWS_AS(rankers::mode_from_name("bogus"), ArgumentError);
}

TEST_CASE("best labeling score agrees with exhaustive maximization") {
  auto members = random_members(1, 33);
  const auto& model = members[0];
  for (const std::string joined : {"ab#cd", "aa#a", "cat#dog"}) {
    auto dists = model.label_distributions(joined);
    decoder::Forced forced(joined.size());
    for (std::size_t t = 0; t < joined.size(); ++t)
      if (joined[t] == '#') forced[t] = editops::Label::Delete;
    auto seqs = decoder::topk_label_sequences(
        dists, 1 << 10, forced);
    std::set<std::string> strings;
    for (const auto& sl : seqs)
      strings.insert(editops::apply_labels(joined, sl.labels));
    for (const auto& s : strings) {
      if (s.empty()) continue;
      double best = -1e300;
      for (const auto& sl : seqs)
        if (editops::apply_labels(joined, sl.labels) == s) {
          double total = 0.0;
          for (std::size_t t = 0; t < joined.size(); ++t)
            total += std::log(std::max(
                dists[t][sl.labels[t] == editops::Label::Copy ? 0 : 1],
                1e-300));
          best = std::max(best, total / static_cast<double>(joined.size()));
        }
      CHECK(rankers::best_labeling_score(model, joined, s) ==
            doctest::Approx(best).epsilon(1e-12));
    }
    CHECK(rankers::best_labeling_score(model, joined, "zzz") ==
          -std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("E=1 lstm mode reduces to the top candidate") {
  for (int trial = 0; trial < 20; ++trial) {
    auto members = random_members(1, 500 + static_cast<std::uint64_t>(trial));
    auto set = decoder::generate_candidates(members[0], "brad#angelina", 5);
    auto predicted = rankers::predict_blend(members, nullptr, nullptr,
                                            "brad#angelina", Mode::Lstm, 5);
    CAPTURE(trial);
    CHECK(predicted == set.entries.front().blend);
  }
}

TEST_CASE("combined score is the sum of its parts") {
  auto members = random_members(3, 7);
  auto lm = CharLM::train({"banana", "cabana", "bandana"}, 4);
  std::vector<corpus::BlendInstance> ldata = {
      lengths_instance(4, 6, 7), lengths_instance(5, 8, 9),
      lengths_instance(3, 9, 8), lengths_instance(6, 6, 8)};
  auto lenm = LengthModel::fit(ldata, 1.0);

  for (Mode mode : {Mode::Lstm, Mode::LstmLm, Mode::LstmLmLen}) {
    auto scored =
        rankers::score_candidates(members, &lm, &lenm, "ban#ana", mode, 5);
    REQUIRE(!scored.empty());
    for (const auto& cs : scored) {
      double expect = cs.tagger;
      CHECK(cs.has_lm == (mode != Mode::Lstm));
      CHECK(cs.has_len == (mode == Mode::LstmLmLen));
      if (cs.has_lm) expect += cs.lm;
      if (cs.has_len) expect += cs.len;
      CHECK(std::abs(cs.combined - expect) < 1e-9);
    }
    for (std::size_t i = 1; i < scored.size(); ++i)
      CHECK(scored[i - 1].combined >= scored[i].combined);
  }
}

TEST_CASE("reranking stays inside the candidate union") {
  auto members = random_members(2, 64);
  auto lm = CharLM::train({"zebra", "quartz", "banana"}, 3);
  std::set<std::string> pool;
  for (const auto& m : members)
    for (const auto& e : decoder::generate_candidates(m, "zeb#ra", 5).entries)
      pool.insert(e.blend);
  auto scored =
      rankers::score_candidates(members, &lm, nullptr, "zeb#ra", Mode::LstmLm, 5);
  CHECK(scored.size() == pool.size());
  for (const auto& cs : scored) CHECK(pool.count(cs.blend) == 1);
}

TEST_CASE("exact ties break lexicographically") {
  // Zeroing the output layer makes every label sequence equally likely, so
  // every candidate ties and the prediction must be the smallest string.
  auto emb = tagger::EmbeddingTable::random(5, 12);
  tagger::TaggerConfig cfg;
  cfg.hidden = 4;
  cfg.seed = 12;
  auto j = tagger::TaggerModel::random(cfg, emb).to_json();
  for (auto& v : j["out_w"]["data"]) v = 0.0;
  for (auto& v : j["out_b"]["data"]) v = 0.0;
  std::vector<tagger::TaggerModel> members;
  members.push_back(tagger::TaggerModel::from_json(j));

  auto scored = rankers::score_candidates(members, nullptr, nullptr,
                                          "ab#cd", Mode::Lstm, 5);
  std::vector<std::string> blends;
  for (const auto& cs : scored) blends.push_back(cs.blend);
  auto sorted = blends;
  std::sort(sorted.begin(), sorted.end());
  CHECK(blends == sorted);
  CHECK(rankers::predict_blend(members, nullptr, nullptr, "ab#cd",
                               Mode::Lstm, 5) == blends.front());
}

TEST_CASE("ranker argument validation") {
  auto members = random_members(1, 5);
  auto lm = CharLM::train({"ab"}, 2);
  CHECK_THROWS_AS(rankers::predict_blend({}, &lm, nullptr, "a#b",
                                         Mode::Lstm, 5),
                  ArgumentError);
  CHECK_THROWS_AS(rankers::predict_blend(members, nullptr, nullptr, "a#b",
                                         Mode::LstmLm, 5),
                  ArgumentError);
  CHECK_THROWS_AS(rankers::predict_blend(members, &lm, nullptr, "a#b",
                                         Mode::LstmLmLen, 5),
                  ArgumentError);
  CHECK_THROWS_AS(rankers::predict_blend(members, nullptr, nullptr, "#",
                                         Mode::Lstm, 5),
                  PredictionError);
}

TEST_CASE("ensemble training is seeded and diverse") {
  std::vector<tagger::TaggedInstance> train, val;
  for (const char* row : {"ab#cd CCDDD", "ba#dc CDDCD", "foo#ba CCCDDD",
                          "xy#zw CDDDD", "pq#rs CCDDD", "mn#op CDDCD"}) {
    std::string s(row);
    auto sp = s.find(' ');
    train.push_back({s.substr(0, sp),
                     editops::labels_from_string(s.substr(sp + 1))});
  }
  val = {train[0], train[1]};

  auto emb = tagger::EmbeddingTable::random(5, 31);
  tagger::TaggerConfig cfg;
  cfg.hidden = 4;
  cfg.max_epochs = 2;
  cfg.patience = 2;
  cfg.seed = 31;

  auto a = rankers::train_ensemble(train, val, cfg, emb, 3);
  auto b = rankers::train_ensemble(train, val, cfg, emb, 3);
  REQUIRE(a.size() == 3);
  for (std::size_t e = 0; e < 3; ++e)
    CHECK(a[e].to_json().dump() == b[e].to_json().dump());
  CHECK(a[0].to_json().dump() != a[1].to_json().dump());
  CHECK(a[1].to_json().dump() != a[2].to_json().dump());

  CHECK_THROWS_AS(rankers::train_ensemble(train, val, cfg, emb, 0),
                  ArgumentError);
}

TEST_CASE("blend bundle serializes completely") {
  std::vector<tagger::TaggedInstance> data = {
      {"ab#cd", editops::labels_from_string("CCDDD")},
      {"ba#dc", editops::labels_from_string("CDDCD")},
  };
  auto emb = tagger::EmbeddingTable::random(4, 9);
  tagger::TaggerConfig cfg;
  cfg.hidden = 3;
  cfg.max_epochs = 2;
  cfg.patience = 2;
  cfg.seed = 9;

  rankers::BlendBundle bundle;
  bundle.members = rankers::train_ensemble(data, data, cfg, emb, 2);
  bundle.lm = CharLM::train({"abcd", "badc"}, 3);
  bundle.length = LengthModel::fit(
      {lengths_instance(2, 2, 2), lengths_instance(3, 3, 4),
       lengths_instance(4, 4, 5)},
      1.0);

  auto j = bundle.to_json();
  auto back = rankers::BlendBundle::from_json(j);
  CHECK(back.to_json().dump() == j.dump());
  REQUIRE(back.members.size() == 2);
  auto p1 = rankers::predict_blend(bundle.members, &bundle.lm,
                                   &bundle.length, "ab#cd",
                                   Mode::LstmLmLen, 5);
  auto p2 = rankers::predict_blend(back.members, &back.lm, &back.length,
                                   "ab#cd", Mode::LstmLmLen, 5);
  CHECK(p1 == p2);
}
