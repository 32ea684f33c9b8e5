#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morphoforge/editops.hpp"
#include "morphoforge/tagger.hpp"

namespace morpho::decoder {

using Dists = std::vector<std::array<double, 2>>;
using Forced = std::vector<std::optional<editops::Label>>;

struct ScoredLabels {
  editops::LabelSeq labels;
  double log_prob;
};

// Exactly the k most probable label sequences under per-position
// independence, descending score, ties broken lexicographically with
// Copy < Delete. Fewer are returned when the lattice is smaller than k.
// forced may be empty or one optional label per position.
std::vector<ScoredLabels> topk_label_sequences(const Dists& dists, int k,
                                               const Forced& forced = {});

struct CandidateEntry {
  std::string blend;
  double score;  // tagger log-probability of the best label sequence
};

struct CandidateSet {
  std::string joined;
  int k = 0;
  std::vector<CandidateEntry> entries;
};

// Applies the tagger to joined, forces Delete on separator positions, and
// collects the k best unique non-empty candidate strings. Duplicate strings
// keep their best-scoring label sequence.
CandidateSet generate_candidates(const tagger::TaggerModel& model,
                                 const std::string& joined, int k = 5);

}  // namespace morpho::decoder
