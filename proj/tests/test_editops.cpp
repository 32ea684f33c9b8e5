#include <doctest.h>

#include <functional>
#include <random>
#include <string>

#include "morphoforge/editops.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/util.hpp"

using namespace morpho;
using namespace morpho::editops;

namespace {

// Plain recursive definition, used as an oracle for the DP implementation.
int lev_oracle(const std::string& a, const std::string& b) {
  std::vector<std::vector<int>> memo(a.size() + 1,
                                     std::vector<int>(b.size() + 1, -1));
  std::function<int(size_t, size_t)> go = [&](size_t i, size_t j) -> int {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    int& m = memo[i][j];
    if (m >= 0) return m;
    int best = 1 + std::min(go(i + 1, j), go(i, j + 1));
    best = std::min(best, (a[i] == b[j] ? 0 : 1) + go(i + 1, j + 1));
    return m = best;
  };
  return go(0, 0);
}

}  // namespace

TEST_CASE("levenshtein basics") {
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("keniana", "kentuckiana") == 4);
  CHECK(levenshtein("a", "b") == 1);
}

TEST_CASE("levenshtein agrees with recursive oracle on a small alphabet") {
  std::vector<std::string> words;
  std::function<void(std::string)> gen = [&](std::string w) {
    words.push_back(w);
    if (w.size() == 4) return;
    for (char c : {'a', 'b', 'c'}) gen(w + c);
  };
  gen("");
  auto rng = make_rng(derive_seed(11, 0));
  std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
  for (int t = 0; t < 400; ++t) {
    const auto& a = words[pick(rng)];
    const auto& b = words[pick(rng)];
    CHECK(levenshtein(a, b) == lev_oracle(a, b));
  }
}

TEST_CASE("label string conversions") {
  LabelSeq seq{Label::Copy, Label::Delete, Label::Copy};
  CHECK(labels_to_string(seq) == "CDC");
  CHECK(labels_from_string("CDC") == seq);
  CHECK_THROWS_AS(labels_from_string("CXD"), ArgumentError);
}

TEST_CASE("encode_labels canonical examples") {
  CHECK(labels_to_string(encode_labels("brad#angelina", "brangelina")) ==
        "CCCDDDCCCCCCC");
  CHECK(labels_to_string(encode_labels("scum#fuzz", "scuzz")) == "CCCDDDDCC");
  CHECK(labels_to_string(encode_labels("a#b", "ab")) == "CDC");
  SUBCASE("ties resolve to the leftmost copy") {
    CHECK(labels_to_string(encode_labels("aa#a", "aa")) == "CCDD");
    CHECK(labels_to_string(encode_labels("ab#ab", "ab")) == "CCDDD");
  }
}

TEST_CASE("encode_labels rejects non-derivable and malformed input") {
  CHECK_FALSE(try_encode_labels("ab#cd", "axd").has_value());
  CHECK_THROWS_AS(encode_labels("ab#cd", "axd"), NotDerivableError);
  CHECK_THROWS_AS(encode_labels("ab#cd", "dc"), NotDerivableError);
  CHECK_THROWS_AS(encode_labels("ab#cd", ""), ArgumentError);
  CHECK_THROWS_AS(encode_labels("ab#cd", "a#d"), ArgumentError);
}

TEST_CASE("apply_labels inverts encode_labels") {
  auto check_roundtrip = [](const std::string& joined,
                            const std::string& blend) {
    auto labels = encode_labels(joined, blend);
    CHECK(apply_labels(joined, labels) == blend);
  };
  check_roundtrip("brad#angelina", "brangelina");
  check_roundtrip("spanish#english", "spanglish");
  check_roundtrip("a#b", "ab");

  SUBCASE("random subsequences always round trip") {
    auto rng = make_rng(derive_seed(12, 0));
    std::uniform_int_distribution<int> len(1, 8);
    std::uniform_int_distribution<int> ch(0, 2);
    std::bernoulli_distribution keep(0.6);
    for (int t = 0; t < 300; ++t) {
      std::string c1, c2;
      for (int i = len(rng); i > 0; --i) c1.push_back('a' + ch(rng));
      for (int i = len(rng); i > 0; --i) c2.push_back('a' + ch(rng));
      std::string joined = c1 + "#" + c2;
      std::string blend;
      for (char c : joined)
        if (c != '#' && keep(rng)) blend.push_back(c);
      if (blend.empty()) continue;
      check_roundtrip(joined, blend);
    }
  }
}

TEST_CASE("apply_labels validates length") {
  CHECK_THROWS_AS(apply_labels("abc", labels_from_string("CC")), ArgumentError);
}
