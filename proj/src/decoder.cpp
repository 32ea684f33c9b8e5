#include "morphoforge/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "morphoforge/errors.hpp"

namespace morpho::decoder {

namespace {

using editops::Label;
using editops::LabelSeq;

double label_logp(const Dists& dists, std::size_t t, Label l) {
  double p = dists[t][l == Label::Copy ? 0 : 1];
  return std::log(std::max(p, 1e-300));
}

// Canonical score: per-position log terms sorted ascending before
// summation, so sequences whose term multisets are equal (mathematical
// ties) get bitwise-equal scores regardless of which positions contribute
// them. Without this, left-to-right sums of permuted equal terms can
// differ by an ulp and break exact tie handling.
double canonical_score(const Dists& dists, const LabelSeq& labels) {
  std::vector<double> terms(labels.size());
  for (std::size_t t = 0; t < labels.size(); ++t)
    terms[t] = label_logp(dists, t, labels[t]);
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double v : terms) s += v;
  return s;
}

bool labels_less(const LabelSeq& a, const LabelSeq& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [](Label x, Label y) { return static_cast<int>(x) < static_cast<int>(y); });
}

struct Node {
  LabelSeq labels;
  double score;
  int last_flip;  // index into the free-position order, -1 for the argmax

  bool operator<(const Node& other) const {
    // std::priority_queue is a max-heap; rank by score desc then labels asc.
    if (score != other.score) return score < other.score;
    return labels_less(other.labels, labels);
  }
};

}  // namespace

std::vector<ScoredLabels> topk_label_sequences(const Dists& dists, int k,
                                               const Forced& forced) {
  if (k < 1) throw ArgumentError("k must be positive");
  if (!forced.empty() && forced.size() != dists.size())
    throw ArgumentError("forced labels length mismatch");
  for (const auto& d : dists) {
    if (!(d[0] >= 0.0) || !(d[1] >= 0.0) ||
        std::abs(d[0] + d[1] - 1.0) > 1e-6)
      throw ArgumentError("invalid label distribution");
  }

  const std::size_t n = dists.size();

  // Argmax sequence; Copy preferred on exact ties for the lexicographic
  // contract.
  LabelSeq argmax(n);
  std::vector<std::size_t> free_pos;
  for (std::size_t t = 0; t < n; ++t) {
    if (!forced.empty() && forced[t].has_value()) {
      argmax[t] = *forced[t];
    } else {
      argmax[t] = dists[t][0] >= dists[t][1] ? Label::Copy : Label::Delete;
      free_pos.push_back(t);
    }
  }

  // Free positions ordered by the cost of flipping away from the argmax;
  // the extend/shift enumeration over this order is monotone, so a
  // best-first queue yields exact global order. Within an equal-cost group
  // the order is chosen so that a tying child is always lexicographically
  // greater than its parent (flips away from Delete-argmax positions lower
  // the sequence, flips away from Copy-argmax positions raise it), which
  // keeps pop order identical to full enumeration plus sort under ties.
  std::vector<std::size_t> order = free_pos;
  auto delta = [&](std::size_t t) {
    return std::abs(label_logp(dists, t, Label::Copy) -
                    label_logp(dists, t, Label::Delete));
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double da = delta(a), db = delta(b);
    if (da != db) return da < db;
    bool a_del = argmax[a] == Label::Delete;
    bool b_del = argmax[b] == Label::Delete;
    if (a_del != b_del) return a_del;
    return a_del ? a < b : a > b;
  });

  auto flipped = [](Label l) {
    return l == Label::Copy ? Label::Delete : Label::Copy;
  };

  std::priority_queue<Node> queue;
  queue.push({argmax, canonical_score(dists, argmax), -1});

  std::vector<ScoredLabels> out;
  while (!queue.empty() && static_cast<int>(out.size()) < k) {
    Node node = queue.top();
    queue.pop();
    out.push_back({node.labels, node.score});

    int next = node.last_flip + 1;
    if (next < static_cast<int>(order.size())) {
      // Extend: additionally flip the next free position.
      Node ext = node;
      std::size_t pe = order[static_cast<std::size_t>(next)];
      ext.labels[pe] = flipped(ext.labels[pe]);
      ext.score = canonical_score(dists, ext.labels);
      ext.last_flip = next;
      queue.push(std::move(ext));

      if (node.last_flip >= 0) {
        // Shift: move the most recent flip one free position onward.
        Node sh = node;
        std::size_t pl = order[static_cast<std::size_t>(node.last_flip)];
        sh.labels[pl] = flipped(sh.labels[pl]);  // undo
        sh.labels[pe] = flipped(sh.labels[pe]);
        sh.score = canonical_score(dists, sh.labels);
        sh.last_flip = next;
        queue.push(std::move(sh));
      }
    }
  }
  return out;
}

CandidateSet generate_candidates(const tagger::TaggerModel& model,
                                 const std::string& joined, int k) {
  if (k < 1) throw ArgumentError("k must be positive");
  auto dists = model.label_distributions(joined);

  Forced forced(joined.size());
  for (std::size_t t = 0; t < joined.size(); ++t)
    if (joined[t] == '#') forced[t] = editops::Label::Delete;

  CandidateSet set;
  set.joined = joined;
  set.k = k;

  // Pull progressively deeper into the lattice until k unique non-empty
  // strings are found or it is exhausted.
  int request = k;
  while (true) {
    auto seqs = topk_label_sequences(dists, request, forced);
    set.entries.clear();
    for (const auto& sl : seqs) {
      std::string blend = editops::apply_labels(joined, sl.labels);
      if (blend.empty()) continue;
      bool seen = false;
      for (const auto& e : set.entries)
        if (e.blend == blend) {
          seen = true;
          break;
        }
      if (!seen) set.entries.push_back({blend, sl.log_prob});
      if (static_cast<int>(set.entries.size()) == k) break;
    }
    bool exhausted = static_cast<int>(seqs.size()) < request;
    if (static_cast<int>(set.entries.size()) == k || exhausted ||
        request >= 1000000)
      break;
    request *= 2;
  }
  return set;
}

}  // namespace morpho::decoder
