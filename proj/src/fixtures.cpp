#include "morphoforge/fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>

#include "morphoforge/editops.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/redup.hpp"
#include "morphoforge/util.hpp"

namespace morpho::fixtures {

namespace {

using corpus::BlendInstance;
using corpus::ClippingRecord;
using corpus::ClipType;
using corpus::ReduplicativePair;

std::vector<std::string> usable_words(const std::vector<std::string>& words,
                                      std::size_t min_len,
                                      std::size_t max_len) {
  std::vector<std::string> pool;
  for (const auto& w : words) {
    if (w.size() < min_len || w.size() > max_len) continue;
    bool ok = true;
    for (char c : w)
      if (c < 'a' || c > 'z') ok = false;
    if (ok) pool.push_back(w);
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (pool.size() < 50)
    throw ArgumentError("fixture generation needs a larger word list");
  return pool;
}

const std::string& pick(const std::vector<std::string>& pool,
                        std::mt19937_64& rng) {
  return pool[uniform_below(rng, pool.size())];
}

// Prefix of one component plus suffix of the other: derivable by
// construction.
BlendInstance synth_blend(const std::vector<std::string>& pool,
                          std::mt19937_64& rng) {
  while (true) {
    const auto& c1 = pick(pool, rng);
    const auto& c2 = pick(pool, rng);
    if (c1 == c2) continue;
    // Most blends keep nearly all of both components; long pairs sometimes
    // clip hard instead. The spread keeps the length fit from collapsing
    // onto a single split rule.
    std::size_t i, j;
    if (uniform_below(rng, 10) < 7 || c1.size() + c2.size() < 14) {
      i = c1.size() -
          uniform_below(rng, std::min<std::size_t>(3, c1.size() - 1));
      j = 1 + uniform_below(rng, std::max<std::size_t>(c2.size() / 4, 1));
    } else {
      i = 2 + uniform_below(rng, std::max<std::size_t>(c1.size() / 2 - 1, 1));
      auto j_lo = std::max<std::size_t>(c2.size() / 3, 1);
      auto j_hi = std::max<std::size_t>(c2.size() / 2, j_lo);
      j = j_lo + uniform_below(rng, j_hi - j_lo + 1);
    }
    auto blend = c1.substr(0, i) + c2.substr(j);
    if (blend == c1 || blend == c2) continue;
    return {c1, c2, blend};
  }
}

BlendInstance synth_nonderivable(const std::vector<std::string>& pool,
                                 std::mt19937_64& rng) {
  while (true) {
    const auto& c1 = pick(pool, rng);
    const auto& c2 = pick(pool, rng);
    if (c1 == c2) continue;
    std::string joined = c1 + "#" + c2;
    char missing = 0;
    for (char c = 'a'; c <= 'z'; ++c) {
      if (joined.find(c) == std::string::npos) {
        missing = c;
        break;
      }
    }
    if (missing == 0) continue;
    auto blend = c1.substr(0, 2) + std::string(1, missing) + c2.substr(2);
    if (editops::try_encode_labels(joined, blend)) continue;
    return {c1, c2, blend};
  }
}

std::vector<BlendInstance> make_blends(const std::vector<std::string>& pool,
                                       std::vector<BlendInstance> seeded,
                                       std::size_t total,
                                       std::size_t nonderivable,
                                       std::mt19937_64& rng) {
  std::set<std::pair<std::string, std::string>> used;
  for (const auto& b : seeded) used.insert({b.component1, b.component2});

  std::vector<BlendInstance> out = std::move(seeded);
  while (out.size() < total - nonderivable) {
    auto b = synth_blend(pool, rng);
    if (!used.insert({b.component1, b.component2}).second) continue;
    out.push_back(std::move(b));
  }
  while (out.size() < total) {
    auto b = synth_nonderivable(pool, rng);
    if (!used.insert({b.component1, b.component2}).second) continue;
    out.push_back(std::move(b));
  }
  shuffle_vec(out, rng);
  return out;
}

std::vector<ClippingRecord> make_clippings(
    const std::vector<std::string>& pool, std::mt19937_64& rng) {
  std::set<std::string> used_sources;
  std::vector<ClippingRecord> out;

  auto add = [&](const std::string& source, const std::string& gold,
                 ClipType want) {
    if (corpus::infer_clip_type(source, gold) != want) return false;
    if (!used_sources.insert(source).second) return false;
    out.push_back({source, gold, want});
    return true;
  };

  // Named records keep the documented examples inside the dataset.
  add("laboratory", "lab", ClipType::Back);
  add("advertisement", "ad", ClipType::Back);
  add("photograph", "photo", ClipType::Back);
  add("alfred", "fred", ClipType::Fore);
  add("hamburger", "burger", ClipType::Fore);
  add("telephone", "phone", ClipType::Fore);
  add("airplane", "plane", ClipType::Fore);
  add("kid video", "kidvid", ClipType::Compound);
  add("cocaine", "coke", ClipType::Irregular);

  std::size_t n_back = 392, n_fore = 69, n_compound = 69, n_irregular = 46;
  auto count_of = [&](ClipType t) {
    std::size_t c = 0;
    for (const auto& r : out)
      if (r.inferred_type == t) ++c;
    return c;
  };

  while (count_of(ClipType::Back) < n_back) {
    const auto& w = pick(pool, rng);
    auto len = std::min<std::size_t>(3 + uniform_below(rng, 2), w.size() - 1);
    add(w, w.substr(0, len), ClipType::Back);
  }
  while (count_of(ClipType::Fore) < n_fore) {
    const auto& w = pick(pool, rng);
    auto len = std::min<std::size_t>(3 + uniform_below(rng, 2), w.size() - 1);
    add(w, w.substr(w.size() - len), ClipType::Fore);
  }
  while (count_of(ClipType::Compound) < n_compound) {
    const auto& w1 = pick(pool, rng);
    const auto& w2 = pick(pool, rng);
    if (w1 == w2 || w1.size() < 4 || w2.size() < 4) continue;
    auto gold = w1.substr(0, 3) + w2.substr(0, 3);
    add(w1 + " " + w2, gold, ClipType::Compound);
  }
  while (count_of(ClipType::Irregular) < n_irregular) {
    const auto& w = pick(pool, rng);
    if (w.size() < 6) continue;
    auto gold = w.substr(0, 2) + w.substr(w.size() - 2);
    add(w, gold, ClipType::Irregular);
  }

  shuffle_vec(out, rng);
  return out;
}

const std::vector<std::string>& redup_onsets() {
  static const std::vector<std::string> v = {
      "b", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r",
      "s", "t", "w", "z", "bl", "br", "ch", "cl", "cr", "dr", "fl",
      "fr", "gl", "gr", "pl", "pr", "sh", "sk", "sl", "sm", "sn",
      "sp", "st", "sw", "th", "tr", "tw"};
  return v;
}

const std::vector<std::string>& redup_codas() {
  static const std::vector<std::string> v = {
      "b", "ck", "d", "ff", "g", "ll", "m", "mp", "n", "ng",
      "nk", "p", "rt", "sh", "ss", "t", "tch", "zz"};
  return v;
}

std::vector<ReduplicativePair> make_redups(std::mt19937_64& rng) {
  std::set<std::pair<std::string, std::string>> used;
  std::vector<ReduplicativePair> out;
  auto add = [&](const std::string& base, const std::string& w) {
    if (!used.insert({base, w}).second) return false;
    out.push_back({base, w});
    return true;
  };

  // Named pairs.
  add("boo", "boo");
  add("wee", "wee");
  add("zig", "zag");
  add("flip", "flop");
  add("bing", "bong");
  add("chit", "chat");
  add("mish", "mash");
  add("wishy", "washy");
  add("teenie", "weenie");
  add("hodge", "podge");
  add("humpty", "dumpty");
  add("boogie", "woogie");
  add("moodle", "schmoodle");

  const auto& onsets = redup_onsets();
  const auto& codas = redup_codas();
  const std::string single_onsets = "bdfghjklmnprstwz";
  const std::string nuclei = "aeiou";

  auto count_type = [&](redup::RedupType t) {
    std::size_t c = 0;
    for (const auto& p : out)
      if (redup::classify_pair(p.base, p.reduplicant) == t) ++c;
    return c;
  };

  auto synth_base = [&](char nucleus) {
    return onsets[uniform_below(rng, onsets.size())] +
           std::string(1, nucleus) + codas[uniform_below(rng, codas.size())];
  };

  while (count_type(redup::RedupType::Duplicate) < 150) {
    auto w = synth_base(nuclei[uniform_below(rng, nuclei.size())]);
    add(w, w);
  }
  // Vowel exchanges: i -> a dominates, then i -> o, a few i -> e.
  auto add_vowelex = [&](char repl, std::size_t upto) {
    while (count_type(redup::RedupType::VowelEx) < upto) {
      auto base = synth_base('i');
      auto w = base;
      w[w.find('i')] = repl;
      add(base, w);
    }
  };
  add_vowelex('a', 60);
  add_vowelex('o', 100);
  add_vowelex('e', 110);

  while (count_type(redup::RedupType::ConEx) < 60) {
    char on = single_onsets[uniform_below(rng, single_onsets.size())];
    char sub = single_onsets[uniform_below(rng, single_onsets.size())];
    if (on == sub) continue;
    auto base = std::string(1, on) +
                std::string(1, nuclei[uniform_below(rng, nuclei.size())]) +
                codas[uniform_below(rng, codas.size())];
    auto w = base;
    w[0] = sub;
    add(base, w);
  }
  while (count_type(redup::RedupType::Unmodeled) < 17) {
    auto base = synth_base(nuclei[uniform_below(rng, nuclei.size())]);
    add(base, "schm" + base);
  }

  shuffle_vec(out, rng);
  return out;
}

}  // namespace

FixtureSet make_fixtures(const std::vector<std::string>& words,
                         std::uint64_t seed) {
  auto pool = usable_words(words, 4, 9);

  FixtureSet set;
  std::vector<BlendInstance> paper_blends = {
      {"brad", "angelina", "brangelina"},
      {"jizz", "disney", "jizzney"},
      {"scum", "fuzz", "scuzz"},
      {"dramatic", "drastic", "dramastic"},
      {"kentucky", "indiana", "kentuckiana"},
  };
  auto rng_knight = make_rng(derive_seed(seed, 0x0401));
  set.knight = make_blends(pool, paper_blends, 400, 4, rng_knight);

  auto rng_blind = make_rng(derive_seed(seed, 0x0402));
  set.blind = make_blends(pool, {}, 1224, 93, rng_blind);

  auto rng_clip = make_rng(derive_seed(seed, 0x0403));
  set.clippings = make_clippings(pool, rng_clip);

  auto rng_redup = make_rng(derive_seed(seed, 0x0404));
  set.redups = make_redups(rng_redup);
  return set;
}

void write_fixtures(const FixtureSet& set, const std::string& dir) {
  std::filesystem::create_directories(dir);
  corpus::save_blends(dir + "/d_knight.tsv", set.knight);
  corpus::save_blends(dir + "/d_blind.tsv", set.blind);
  corpus::save_clippings(dir + "/clippings.tsv", set.clippings);
  corpus::save_redups(dir + "/reduplicatives.tsv", set.redups);
}

}  // namespace morpho::fixtures
