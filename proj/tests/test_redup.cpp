#include "morphoforge/redup.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "morphoforge/errors.hpp"

using namespace morpho;
using corpus::ReduplicativePair;
using redup::RedupMode;
using redup::RedupType;

namespace {

ReduplicativePair rp(const std::string& b, const std::string& r) {
  return ReduplicativePair{b, r};
}

redup::RedupModel mixed_model() {
  // 2 Duplicate, 2 VowelEx, 1 ConEx.
  std::vector<ReduplicativePair> pairs = {
      rp("boo", "boo"),       rp("wee", "wee"),   rp("bing", "bong"),
      rp("flip", "flap"),     rp("teenie", "weenie"),
  };
  return redup::fit_redup_model(pairs);
}

}  // namespace

TEST_CASE("redup names round trip") {
  for (auto t : {RedupType::Duplicate, RedupType::VowelEx, RedupType::ConEx,
                 RedupType::Unmodeled}) {
    CHECK(redup::redup_type_from_name(redup::redup_type_name(t)) == t);
  }
  for (auto m : {RedupMode::Model, RedupMode::Let, RedupMode::LetCond}) {
    CHECK(redup::redup_mode_from_name(redup::redup_mode_name(m)) == m);
  }
  CHECK_THROWS_AS(redup::redup_type_from_name("Vowel"), ArgumentError);
  CHECK_THROWS_AS(redup::redup_mode_from_name("model"), ArgumentError);
}

TEST_CASE("vowel set is a e i o u with y a consonant") {
  for (char c : std::string("aeiou")) CHECK(redup::is_redup_vowel(c));
  for (char c : std::string("ybcdz")) CHECK(!redup::is_redup_vowel(c));
}

TEST_CASE("classify_pair covers the documented cases") {
  CHECK(redup::classify_pair("boo", "boo") == RedupType::Duplicate);
  CHECK(redup::classify_pair("teenie", "weenie") == RedupType::ConEx);
  CHECK(redup::classify_pair("moodle", "schmoodle") == RedupType::Unmodeled);
  CHECK(redup::classify_pair("bing", "bong") == RedupType::VowelEx);
  CHECK(redup::classify_pair("flip", "flap") == RedupType::VowelEx);
  CHECK(redup::classify_pair("yo", "wo") == RedupType::ConEx);

  // Two differing positions.
  CHECK(redup::classify_pair("boo", "bia") == RedupType::Unmodeled);
  // Difference at a vowel that is not the first vowel.
  CHECK(redup::classify_pair("radio", "radeo") == RedupType::Unmodeled);
  // Difference at a consonant that is not the first consonant.
  CHECK(redup::classify_pair("tent", "tenk") == RedupType::Unmodeled);
  // Length mismatch.
  CHECK(redup::classify_pair("okey", "dokey") == RedupType::Unmodeled);
}

TEST_CASE("theta and phi are the MLE over classified pairs") {
  std::vector<ReduplicativePair> pairs = {rp("boo", "boo"),
                                          rp("bing", "bong")};
  auto model = redup::fit_redup_model(pairs);
  CHECK(model.theta.at(RedupType::Duplicate) == doctest::Approx(0.5));
  CHECK(model.theta.at(RedupType::VowelEx) == doctest::Approx(0.5));
  CHECK(model.theta.count(RedupType::ConEx) == 0);
  REQUIRE(model.phi.count('i') == 1);
  CHECK(model.phi.at('i').at('o') == doctest::Approx(1.0));
  CHECK(model.phi.at('i').count('i') == 0);
  CHECK(model.psi.empty());
}

TEST_CASE("unmodeled pairs are counted and excluded") {
  std::vector<ReduplicativePair> pairs = {
      rp("boo", "boo"), rp("moodle", "schmoodle"), rp("teenie", "weenie")};
  auto model = redup::fit_redup_model(pairs);
  CHECK(model.unmodeled_count == 1);
  CHECK(model.theta.at(RedupType::Duplicate) == doctest::Approx(0.5));
  CHECK(model.theta.at(RedupType::ConEx) == doctest::Approx(0.5));
  REQUIRE(model.psi.count('t') == 1);
  CHECK(model.psi.at('t').at('w') == doctest::Approx(1.0));

  double total = 0.0;
  for (const auto& [t, p] : model.theta) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fit requires at least one modeled pair") {
  std::vector<ReduplicativePair> empty;
  CHECK_THROWS_AS(redup::fit_redup_model(empty), FitError);
  std::vector<ReduplicativePair> unmodeled = {rp("moodle", "schmoodle")};
  CHECK_THROWS_AS(redup::fit_redup_model(unmodeled), FitError);
}

TEST_CASE("model mode applies a learned vowel exchange") {
  auto model = redup::fit_redup_model({rp("bing", "bong")});
  auto out = redup::generate_redup(model, "flip", true, RedupMode::Model, 0);
  CHECK(out.word == "flop");
  CHECK(out.type == RedupType::VowelEx);
}

TEST_CASE("duplicate-only model duplicates or falls back") {
  auto model = redup::fit_redup_model({rp("boo", "boo")});
  auto dup = redup::generate_redup(model, "thud", true, RedupMode::Model, 4);
  CHECK(dup.word == "thud");
  CHECK(dup.type == RedupType::Duplicate);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto out =
        redup::generate_redup(model, "thud", false, RedupMode::Model, seed);
    CHECK(out.word != "thud");
    CHECK(out.word.size() == 4);
    CHECK(redup::classify_pair("thud", out.word) != RedupType::Unmodeled);
  }
}

TEST_CASE("ineligible sampled type falls back to duplicate") {
  // VowelEx-only model whose phi lacks the base's first vowel.
  auto model = redup::fit_redup_model({rp("bing", "bong")});
  auto out = redup::generate_redup(model, "thud", true, RedupMode::Model, 3);
  CHECK(out.word == "thud");
  CHECK(out.type == RedupType::Duplicate);

  // With duplication off it still produces a modeled exchange.
  auto forced =
      redup::generate_redup(model, "thud", false, RedupMode::Model, 3);
  CHECK(forced.word != "thud");
  CHECK(redup::classify_pair("thud", forced.word) != RedupType::Unmodeled);
}

TEST_CASE("model outputs always classify as modeled") {
  auto model = mixed_model();
  std::vector<std::string> bases = {"boo", "bing",  "teenie", "hodge",
                                    "flip", "thud", "zig",    "art",
                                    "a",   "b",     "strength"};
  for (const auto& base : bases) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      for (bool allow_dup : {true, false}) {
        auto out = redup::generate_redup(model, base, allow_dup,
                                         RedupMode::Model, seed);
        auto type = redup::classify_pair(base, out.word);
        CHECK(type != RedupType::Unmodeled);
        CHECK(out.type == type);
        if (!allow_dup && base.size() > 0) {
          // Exchange outputs keep the length and differ in one position.
          CHECK(out.word.size() == base.size());
          if (out.word != base) {
            int diffs = 0;
            for (std::size_t i = 0; i < base.size(); ++i)
              if (base[i] != out.word[i]) ++diffs;
            CHECK(diffs == 1);
          }
        }
      }
    }
  }
}

TEST_CASE("let baseline changes exactly one letter") {
  auto model = mixed_model();
  std::set<std::size_t> positions;
  std::set<char> letters;
  const std::string base = "booger";
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto out = redup::generate_redup(model, base, true, RedupMode::Let, seed);
    REQUIRE(out.word.size() == base.size());
    int diffs = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (base[i] != out.word[i]) {
        ++diffs;
        at = i;
      }
    }
    CHECK(diffs == 1);
    positions.insert(at);
    letters.insert(out.word[at]);
  }
  CHECK(positions.size() > 3);
  CHECK(letters.size() > 10);
}

TEST_CASE("letcond baseline preserves the letter class") {
  auto model = mixed_model();
  const std::string base = "flip";
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto out =
        redup::generate_redup(model, base, true, RedupMode::LetCond, seed);
    REQUIRE(out.word.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (base[i] != out.word[i]) {
        CHECK(redup::is_redup_vowel(base[i]) ==
              redup::is_redup_vowel(out.word[i]));
      }
    }
  }
}

TEST_CASE("generation is deterministic in the seed") {
  auto model = mixed_model();
  for (auto mode : {RedupMode::Model, RedupMode::Let, RedupMode::LetCond}) {
    for (std::uint64_t seed : {0ull, 9ull, 77ull}) {
      auto a = redup::generate_redup(model, "teenie", true, mode, seed);
      auto b = redup::generate_redup(model, "teenie", true, mode, seed);
      CHECK(a.word == b.word);
      CHECK(a.type == b.type);
    }
  }
}

TEST_CASE("refit on generated samples recovers theta") {
  auto model = mixed_model();
  // First vowel i has phi mass, first consonant t has psi mass.
  const std::string base = "timid";
  std::vector<ReduplicativePair> generated;
  generated.reserve(10000);
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    auto out = redup::generate_redup(model, base, true, RedupMode::Model,
                                     seed);
    generated.push_back(rp(base, out.word));
  }
  auto refit = redup::fit_redup_model(generated);
  CHECK(refit.unmodeled_count == 0);

  double tv = 0.0;
  for (auto t : {RedupType::Duplicate, RedupType::VowelEx, RedupType::ConEx}) {
    double a = model.theta.count(t) ? model.theta.at(t) : 0.0;
    double b = refit.theta.count(t) ? refit.theta.at(t) : 0.0;
    tv += std::abs(a - b);
  }
  tv *= 0.5;
  CHECK(tv < 0.05);
}

TEST_CASE("redup model json round trip") {
  auto model = mixed_model();
  auto j = model.to_json();
  auto back = redup::RedupModel::from_json(j);
  CHECK(back.theta == model.theta);
  CHECK(back.phi == model.phi);
  CHECK(back.psi == model.psi);
  CHECK(back.unmodeled_count == model.unmodeled_count);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto a = redup::generate_redup(model, "flip", false, RedupMode::Model,
                                   seed);
    auto b = redup::generate_redup(back, "flip", false, RedupMode::Model,
                                   seed);
    CHECK(a.word == b.word);
  }

  auto bad = j;
  bad["kind"] = "clip_model";
  CHECK_THROWS_AS(redup::RedupModel::from_json(bad), ValidationError);
}

TEST_CASE("generate rejects bad bases") {
  auto model = mixed_model();
  CHECK_THROWS_AS(redup::generate_redup(model, "", true, RedupMode::Model, 0),
                  ArgumentError);
  CHECK_THROWS_AS(
      redup::generate_redup(model, "ba na", true, RedupMode::Model, 0),
      ArgumentError);
}
