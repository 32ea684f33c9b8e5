#include "morphoforge/fixtures.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "morphoforge/corpus.hpp"
#include "morphoforge/editops.hpp"
#include "morphoforge/redup.hpp"
#include "morphoforge/util.hpp"
#include "test_support.hpp"

using namespace morpho;

namespace {

const fixtures::FixtureSet& bundled() {
  static const fixtures::FixtureSet set =
      fixtures::make_fixtures(testsupport::lexicon().words(), 0);
  return set;
}

bool has_blend(const std::vector<corpus::BlendInstance>& v,
               const std::string& c1, const std::string& c2,
               const std::string& blend) {
  for (const auto& inst : v)
    if (inst.component1 == c1 && inst.component2 == c2 && inst.blend == blend)
      return true;
  return false;
}

bool has_clip(const std::vector<corpus::ClippingRecord>& v,
              const std::string& source, const std::string& gold) {
  for (const auto& rec : v)
    if (rec.source == source && rec.gold == gold) return true;
  return false;
}

bool has_pair(const std::vector<corpus::ReduplicativePair>& v,
              const std::string& base, const std::string& reduplicant) {
  for (const auto& p : v)
    if (p.base == base && p.reduplicant == reduplicant) return true;
  return false;
}

}  // namespace

TEST_CASE("fixture sizes and derivable fractions") {
  const auto& set = bundled();
  CHECK(set.knight.size() == 400);
  CHECK(set.blind.size() == 1224);
  CHECK(set.clippings.size() == 576);
  CHECK(set.redups.size() == 337);

  auto [knight_ok, knight_bad] = corpus::filter_derivable(set.knight);
  CHECK(knight_ok.size() == 396);
  CHECK(knight_bad.size() == 4);

  auto [blind_ok, blind_bad] = corpus::filter_derivable(set.blind);
  CHECK(blind_ok.size() == 1131);
  CHECK(blind_bad.size() == 93);
}

TEST_CASE("clipping type proportions") {
  std::map<corpus::ClipType, int> counts;
  for (const auto& rec : bundled().clippings) ++counts[rec.inferred_type];
  CHECK(counts[corpus::ClipType::Back] == 392);
  CHECK(counts[corpus::ClipType::Fore] == 69);
  CHECK(counts[corpus::ClipType::Compound] == 69);
  CHECK(counts[corpus::ClipType::Irregular] == 46);
}

TEST_CASE("reduplicative class proportions and replacement skew") {
  std::map<redup::RedupType, int> counts;
  for (const auto& p : bundled().redups)
    ++counts[redup::classify_pair(p.base, p.reduplicant)];
  CHECK(counts[redup::RedupType::Duplicate] == 150);
  CHECK(counts[redup::RedupType::VowelEx] == 110);
  CHECK(counts[redup::RedupType::ConEx] == 60);
  CHECK(counts[redup::RedupType::Unmodeled] == 17);

  auto model = redup::fit_redup_model(bundled().redups);
  CHECK(model.theta.at(redup::RedupType::Duplicate) >=
        model.theta.at(redup::RedupType::VowelEx));
  CHECK(model.theta.at(redup::RedupType::VowelEx) >=
        model.theta.at(redup::RedupType::ConEx));
  CHECK(model.unmodeled_count == 17);

  const auto& phi_i = model.phi.at('i');
  REQUIRE(phi_i.count('a'));
  REQUIRE(phi_i.count('o'));
  double pa = phi_i.at('a'), po = phi_i.at('o');
  for (const auto& [letter, mass] : phi_i) {
    if (letter == 'a' || letter == 'o') continue;
    CHECK(mass <= po);
  }
  CHECK(pa > po);
}

TEST_CASE("named examples are embedded") {
  const auto& set = bundled();
  CHECK(has_blend(set.knight, "brad", "angelina", "brangelina"));
  CHECK(has_blend(set.knight, "jizz", "disney", "jizzney"));
  CHECK(has_blend(set.knight, "scum", "fuzz", "scuzz"));
  CHECK(has_blend(set.knight, "dramatic", "drastic", "dramastic"));
  CHECK(has_blend(set.knight, "kentucky", "indiana", "kentuckiana"));

  for (const auto& inst : set.knight) {
    if (inst.blend == "brangelina" || inst.blend == "jizzney" ||
        inst.blend == "scuzz" || inst.blend == "dramastic" ||
        inst.blend == "kentuckiana")
      CHECK(editops::try_encode_labels(inst.joined(), inst.blend).has_value());
  }

  CHECK(has_clip(set.clippings, "kid video", "kidvid"));
  CHECK(has_clip(set.clippings, "cocaine", "coke"));
  CHECK(has_clip(set.clippings, "alfred", "fred"));
  CHECK(has_clip(set.clippings, "laboratory", "lab"));

  CHECK(has_pair(set.redups, "flip", "flop"));
  CHECK(has_pair(set.redups, "teenie", "weenie"));
  CHECK(has_pair(set.redups, "boo", "boo"));
}

TEST_CASE("clipping sources are unique and rows are well formed") {
  std::set<std::string> sources;
  for (const auto& rec : bundled().clippings) {
    CHECK(sources.insert(rec.source).second);
    CHECK(!rec.gold.empty());
    CHECK(rec.inferred_type == corpus::infer_clip_type(rec.source, rec.gold));
  }
}

TEST_CASE("same seed reproduces the set, different seed does not") {
  auto words = testsupport::lexicon().words();
  auto again = fixtures::make_fixtures(words, 0);
  CHECK(again.knight == bundled().knight);
  CHECK(again.blind == bundled().blind);
  CHECK(again.clippings == bundled().clippings);
  CHECK(again.redups == bundled().redups);

  auto other = fixtures::make_fixtures(words, 1);
  CHECK(other.knight != bundled().knight);
}

TEST_CASE("bundled data files match a fresh generation byte for byte") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "morphoforge_fixture_regen";
  fs::remove_all(dir);
  fixtures::write_fixtures(bundled(), dir.string());

  std::string data_dir = std::string(MORPHOFORGE_TEST_DATA_DIR) + "/fixtures";
  for (const char* name :
       {"d_knight.tsv", "d_blind.tsv", "clippings.tsv",
        "reduplicatives.tsv"}) {
    CAPTURE(name);
    CHECK(read_file(data_dir + "/" + name) ==
          read_file((dir / name).string()));
  }
  fs::remove_all(dir);
}

TEST_CASE("write_fixtures round trips through the loaders") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "morphoforge_fixture_rt";
  fs::remove_all(dir);
  fixtures::write_fixtures(bundled(), dir.string());

  CHECK(corpus::load_blends((dir / "d_knight.tsv").string()) ==
        bundled().knight);
  CHECK(corpus::load_blends((dir / "d_blind.tsv").string()) ==
        bundled().blind);
  CHECK(corpus::load_clippings((dir / "clippings.tsv").string()) ==
        bundled().clippings);
  CHECK(corpus::load_redups((dir / "reduplicatives.tsv").string()) ==
        bundled().redups);
  fs::remove_all(dir);
}
