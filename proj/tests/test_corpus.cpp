#include <doctest.h>

#include <cstdio>
#include <set>

#include "morphoforge/corpus.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/util.hpp"

using namespace morpho;
using namespace morpho::corpus;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(std::string p, std::string_view content)
      : path(std::move(p)) {
    write_file(path, content);
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_blends parses, lowercases and strips punctuation") {
  TempFile f("corpus_blends_tmp.tsv",
             "brad\tangelina\tbrangelina\n"
             "Spanish\tEnglish\tSpanglish\n"
             "o'brien\tx-ray\tobrienray\n"
             "\n");
  auto rows = load_blends(f.path);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == BlendInstance{"brad", "angelina", "brangelina"});
  CHECK(rows[0].joined() == "brad#angelina");
  CHECK(rows[1].blend == "spanglish");
  CHECK(rows[2].component1 == "obrien");
  CHECK(rows[2].component2 == "xray");
}

TEST_CASE("load_blends error paths") {
  SUBCASE("wrong column count with line number") {
    TempFile f("corpus_badcols_tmp.tsv", "a\tb\tc\nx\ty\n");
    try {
      load_blends(f.path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
  }
  SUBCASE("field empty after normalization") {
    TempFile f("corpus_badfield_tmp.tsv", "a\t123\tb\n");
    CHECK_THROWS_AS(load_blends(f.path), ValidationError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_blends("no_such_file.tsv"), IoError);
  }
  SUBCASE("empty file gives empty list") {
    TempFile f("corpus_empty_tmp.tsv", "");
    CHECK(load_blends(f.path).empty());
  }
}

TEST_CASE("clipping type inference") {
  CHECK(infer_clip_type("advertisement", "ad") == ClipType::Back);
  CHECK(infer_clip_type("alfred", "fred") == ClipType::Fore);
  CHECK(infer_clip_type("science fiction", "scifi") == ClipType::Compound);
  CHECK(infer_clip_type("microphone", "mike") == ClipType::Irregular);
  SUBCASE("identity is not a proper clipping") {
    CHECK(infer_clip_type("kid", "kid") == ClipType::Irregular);
  }
  SUBCASE("compound wins even when the gold is a prefix") {
    CHECK(infer_clip_type("ab cd", "ab") == ClipType::Compound);
  }
  SUBCASE("prefix beats suffix when both hold") {
    CHECK(infer_clip_type("aba", "a") == ClipType::Back);
  }
}

TEST_CASE("load_clippings infers types and validates spaces") {
  TempFile f("corpus_clip_tmp.tsv",
             "advertisement\tad\n"
             "Alfred\tFred\n"
             "science fiction\tscifi\n");
  auto rows = load_clippings(f.path);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].inferred_type == ClipType::Back);
  CHECK(rows[1].inferred_type == ClipType::Fore);
  CHECK(rows[2].inferred_type == ClipType::Compound);

  TempFile bad("corpus_clip_bad_tmp.tsv", "a b c\tx\n");
  CHECK_THROWS_AS(load_clippings(bad.path), ValidationError);
}

TEST_CASE("dataset save/load round trip") {
  std::vector<BlendInstance> blends{{"brad", "angelina", "brangelina"},
                                    {"spanish", "english", "spanglish"}};
  save_blends("corpus_rt_blends_tmp.tsv", blends);
  CHECK(load_blends("corpus_rt_blends_tmp.tsv") == blends);
  std::remove("corpus_rt_blends_tmp.tsv");

  std::vector<ClippingRecord> clips{
      {"science fiction", "scifi", ClipType::Compound},
      {"advertisement", "ad", ClipType::Back}};
  save_clippings("corpus_rt_clips_tmp.tsv", clips);
  CHECK(load_clippings("corpus_rt_clips_tmp.tsv") == clips);
  std::remove("corpus_rt_clips_tmp.tsv");

  std::vector<ReduplicativePair> redups{{"flip", "flop"}, {"easy", "peasy"}};
  save_redups("corpus_rt_redups_tmp.tsv", redups);
  CHECK(load_redups("corpus_rt_redups_tmp.tsv") == redups);
  std::remove("corpus_rt_redups_tmp.tsv");
}

TEST_CASE("filter_derivable keeps copy/delete-derivable instances") {
  std::vector<BlendInstance> rows{
      {"brad", "angelina", "brangelina"},
      {"ab", "cd", "axd"},
      {"foo", "bar", "foo"},  // pure deletion of '#'+C2
  };
  auto [kept, discarded] = filter_derivable(rows);
  REQUIRE(kept.size() == 2);
  REQUIRE(discarded.size() == 1);
  CHECK(discarded[0].blend == "axd");
  CHECK(kept[1].blend == "foo");
  SUBCASE("idempotent on the kept set") {
    auto [kept2, discarded2] = filter_derivable(kept);
    CHECK(kept2 == kept);
    CHECK(discarded2.empty());
  }
}

TEST_CASE("kfold splits are balanced, disjoint, exhaustive, deterministic") {
  auto splits = make_kfold_splits(400, 10, 7);
  REQUIRE(splits.size() == 10);
  std::set<std::size_t> all_test;
  for (const auto& s : splits) {
    CHECK(s.test.size() == 40);
    CHECK(s.train.size() == 360);
    std::set<std::size_t> train(s.train.begin(), s.train.end());
    for (auto i : s.test) {
      CHECK(!train.count(i));
      all_test.insert(i);
    }
  }
  CHECK(all_test.size() == 400);
  CHECK(make_kfold_splits(400, 10, 7)[3].test == splits[3].test);
  CHECK(make_kfold_splits(400, 10, 8)[3].test != splits[3].test);

  SUBCASE("uneven sizes differ by at most one") {
    auto s2 = make_kfold_splits(403, 10, 1);
    std::size_t total = 0;
    for (const auto& s : s2) {
      CHECK(s.test.size() >= 40);
      CHECK(s.test.size() <= 41);
      total += s.test.size();
    }
    CHECK(total == 403);
  }
}

TEST_CASE("holdout split") {
  auto s = make_holdout_split(337, 50, 7);
  CHECK(s.test.size() == 50);
  CHECK(s.train.size() == 287);
  auto s2 = make_holdout_split(576, 173, 7);
  CHECK(s2.train.size() == 403);
  CHECK_THROWS_AS(make_holdout_split(10, 10, 7), ArgumentError);
}

TEST_CASE("split_train_val carves a seeded fraction") {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < 360; ++i) idx.push_back(i * 2);
  auto [train, val] = split_train_val(idx, 0.1, 99);
  CHECK(val.size() == 36);
  CHECK(train.size() == 324);
  std::set<std::size_t> both(train.begin(), train.end());
  both.insert(val.begin(), val.end());
  CHECK(both.size() == 360);
  auto [train2, val2] = split_train_val(idx, 0.1, 99);
  CHECK(val2 == val);
}
