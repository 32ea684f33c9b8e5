#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace morpho::corpus {

struct BlendInstance {
  std::string component1;
  std::string component2;
  std::string blend;

  std::string joined() const { return component1 + "#" + component2; }
  bool operator==(const BlendInstance&) const = default;
};

enum class ClipType { Back, Fore, Compound, Irregular };

const char* clip_type_name(ClipType t);
ClipType clip_type_from_name(const std::string& name);

// Compound wins when the source contains a space; otherwise a gold that is
// a proper prefix is Back, a proper suffix is Fore, anything else Irregular.
ClipType infer_clip_type(const std::string& source, const std::string& gold);

struct ClippingRecord {
  std::string source;
  std::string gold;
  ClipType inferred_type;
  bool operator==(const ClippingRecord&) const = default;
};

struct ReduplicativePair {
  std::string base;
  std::string reduplicant;
  bool operator==(const ReduplicativePair&) const = default;
};

std::vector<BlendInstance> load_blends(const std::string& path);
std::vector<ClippingRecord> load_clippings(const std::string& path);
std::vector<ReduplicativePair> load_redups(const std::string& path);

void save_blends(const std::string& path,
                 const std::vector<BlendInstance>& rows);
void save_clippings(const std::string& path,
                    const std::vector<ClippingRecord>& rows);
void save_redups(const std::string& path,
                 const std::vector<ReduplicativePair>& rows);

// Splits instances into (derivable by copy/delete, rest).
std::pair<std::vector<BlendInstance>, std::vector<BlendInstance>>
filter_derivable(const std::vector<BlendInstance>& instances);

struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

std::vector<DatasetSplit> make_kfold_splits(std::size_t n, int k,
                                            std::uint64_t seed);
DatasetSplit make_holdout_split(std::size_t n, std::size_t test_size,
                                std::uint64_t seed);

// Moves a seeded fraction of `indices` into a validation list; at least one
// element lands on each side.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_train_val(
    const std::vector<std::size_t>& indices, double val_fraction,
    std::uint64_t seed);

}  // namespace morpho::corpus
