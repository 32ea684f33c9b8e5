#include "morphoforge/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "morphoforge/editops.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/util.hpp"

namespace morpho::corpus {

namespace {

// Lowercases and keeps only a-z (plus internal spaces when allowed);
// apostrophes, hyphens and other punctuation are dropped at load.
std::string normalize_field(const std::string& raw, bool allow_space) {
  std::string lowered = lowercase(raw);
  std::string out;
  for (char c : lowered) {
    if (c >= 'a' && c <= 'z')
      out.push_back(c);
    else if (c == ' ' && allow_space && !out.empty() && out.back() != ' ')
      out.push_back(' ');
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

[[noreturn]] void bad_row(const std::string& path, size_t lineno,
                          const std::string& what) {
  throw ParseError(path + ":" + std::to_string(lineno) + ": " + what);
}

[[noreturn]] void bad_field(const std::string& path, size_t lineno,
                            const std::string& what) {
  throw ValidationError(path + ":" + std::to_string(lineno) + ": " + what);
}

std::vector<std::vector<std::string>> read_tsv(const std::string& path,
                                               size_t columns) {
  std::vector<std::vector<std::string>> rows;
  size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != columns)
      bad_row(path, lineno,
              "expected " + std::to_string(columns) + " columns, got " +
                  std::to_string(fields.size()));
    fields.push_back(std::to_string(lineno));
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

const char* clip_type_name(ClipType t) {
  switch (t) {
    case ClipType::Back: return "Back";
    case ClipType::Fore: return "Fore";
    case ClipType::Compound: return "Compound";
    case ClipType::Irregular: return "Irregular";
  }
  return "Irregular";
}

ClipType clip_type_from_name(const std::string& name) {
  if (name == "Back") return ClipType::Back;
  if (name == "Fore") return ClipType::Fore;
  if (name == "Compound") return ClipType::Compound;
  if (name == "Irregular") return ClipType::Irregular;
  throw ArgumentError("unknown clipping type: " + name);
}

ClipType infer_clip_type(const std::string& source, const std::string& gold) {
  if (source.find(' ') != std::string::npos) return ClipType::Compound;
  if (gold.size() < source.size()) {
    if (source.compare(0, gold.size(), gold) == 0) return ClipType::Back;
    if (source.compare(source.size() - gold.size(), gold.size(), gold) == 0)
      return ClipType::Fore;
  }
  return ClipType::Irregular;
}

std::vector<BlendInstance> load_blends(const std::string& path) {
  std::vector<BlendInstance> out;
  for (const auto& row : read_tsv(path, 3)) {
    const size_t lineno = std::stoul(row[3]);
    BlendInstance inst{normalize_field(row[0], false),
                       normalize_field(row[1], false),
                       normalize_field(row[2], false)};
    if (inst.component1.empty() || inst.component2.empty() ||
        inst.blend.empty())
      bad_field(path, lineno, "empty field after normalization");
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<ClippingRecord> load_clippings(const std::string& path) {
  std::vector<ClippingRecord> out;
  for (const auto& row : read_tsv(path, 2)) {
    const size_t lineno = std::stoul(row[2]);
    std::string source = normalize_field(row[0], true);
    std::string gold = normalize_field(row[1], false);
    if (source.empty() || gold.empty())
      bad_field(path, lineno, "empty field after normalization");
    if (std::count(source.begin(), source.end(), ' ') > 1)
      bad_field(path, lineno, "source has more than one space");
    ClipType t = infer_clip_type(source, gold);
    out.push_back({std::move(source), std::move(gold), t});
  }
  return out;
}

std::vector<ReduplicativePair> load_redups(const std::string& path) {
  std::vector<ReduplicativePair> out;
  for (const auto& row : read_tsv(path, 2)) {
    const size_t lineno = std::stoul(row[2]);
    ReduplicativePair pair{normalize_field(row[0], false),
                           normalize_field(row[1], false)};
    if (pair.base.empty() || pair.reduplicant.empty())
      bad_field(path, lineno, "empty field after normalization");
    out.push_back(std::move(pair));
  }
  return out;
}

void save_blends(const std::string& path,
                 const std::vector<BlendInstance>& rows) {
  std::string body;
  for (const auto& r : rows)
    body += r.component1 + "\t" + r.component2 + "\t" + r.blend + "\n";
  write_file(path, body);
}

void save_clippings(const std::string& path,
                    const std::vector<ClippingRecord>& rows) {
  std::string body;
  for (const auto& r : rows) body += r.source + "\t" + r.gold + "\n";
  write_file(path, body);
}

void save_redups(const std::string& path,
                 const std::vector<ReduplicativePair>& rows) {
  std::string body;
  for (const auto& r : rows) body += r.base + "\t" + r.reduplicant + "\n";
  write_file(path, body);
}

std::pair<std::vector<BlendInstance>, std::vector<BlendInstance>>
filter_derivable(const std::vector<BlendInstance>& instances) {
  std::vector<BlendInstance> kept, discarded;
  for (const auto& inst : instances) {
    if (editops::try_encode_labels(inst.joined(), inst.blend))
      kept.push_back(inst);
    else
      discarded.push_back(inst);
  }
  return {std::move(kept), std::move(discarded)};
}

std::vector<DatasetSplit> make_kfold_splits(std::size_t n, int k,
                                            std::uint64_t seed) {
  if (k < 2) throw ArgumentError("kfold: k must be >= 2");
  if (n < static_cast<std::size_t>(k))
    throw ArgumentError("kfold: need at least k items");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto rng = make_rng(derive_seed(seed, 0xf01d));
  shuffle_vec(order, rng);

  std::vector<DatasetSplit> splits;
  std::size_t start = 0;
  for (int f = 0; f < k; ++f) {
    std::size_t size = n / k + (static_cast<std::size_t>(f) < n % k ? 1 : 0);
    DatasetSplit s;
    s.seed = seed;
    s.test.assign(order.begin() + start, order.begin() + start + size);
    s.train.reserve(n - size);
    for (std::size_t i = 0; i < n; ++i) {
      if (i < start || i >= start + size) s.train.push_back(order[i]);
    }
    std::sort(s.test.begin(), s.test.end());
    std::sort(s.train.begin(), s.train.end());
    splits.push_back(std::move(s));
    start += size;
  }
  return splits;
}

DatasetSplit make_holdout_split(std::size_t n, std::size_t test_size,
                                std::uint64_t seed) {
  if (test_size == 0 || test_size >= n)
    throw ArgumentError("holdout: test_size must be in (0, n)");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto rng = make_rng(derive_seed(seed, 0x401d));
  shuffle_vec(order, rng);
  DatasetSplit s;
  s.seed = seed;
  s.test.assign(order.begin(), order.begin() + test_size);
  s.train.assign(order.begin() + test_size, order.end());
  std::sort(s.test.begin(), s.test.end());
  std::sort(s.train.begin(), s.train.end());
  return s;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_train_val(
    const std::vector<std::size_t>& indices, double val_fraction,
    std::uint64_t seed) {
  if (indices.size() < 2)
    throw ArgumentError("split_train_val: need at least two items");
  if (val_fraction <= 0.0 || val_fraction >= 1.0)
    throw ArgumentError("split_train_val: fraction must be in (0, 1)");
  std::vector<std::size_t> order = indices;
  auto rng = make_rng(derive_seed(seed, 0x7a1d));
  shuffle_vec(order, rng);
  std::size_t n_val = static_cast<std::size_t>(
      std::llround(val_fraction * static_cast<double>(order.size())));
  n_val = std::clamp<std::size_t>(n_val, 1, order.size() - 1);
  std::vector<std::size_t> val(order.begin(), order.begin() + n_val);
  std::vector<std::size_t> train(order.begin() + n_val, order.end());
  std::sort(val.begin(), val.end());
  std::sort(train.begin(), train.end());
  return {std::move(train), std::move(val)};
}

}  // namespace morpho::corpus
